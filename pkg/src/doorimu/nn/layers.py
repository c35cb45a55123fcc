"""Sequence-regression layers with exact analytic backward passes.

All arrays are numpy, batch-first: sequences are (B, T, F), flat features
(B, F). Forward methods are pure: they return (output, cache) and touch no
layer state, so evaluating distinct inputs is safe to parallelize; backward
takes the cache and the output gradient and returns (input gradient, dict of
parameter gradients keyed like params()).

GRU gate equations, per hidden unit:

    r = sigmoid(W_r x + U_r h_prev + b_r)
    z = sigmoid(W_z x + U_z h_prev + b_z)
    c = tanh(W x + U (r * h_prev) + b)
    h = z * h_prev + (1 - z) * c

Initial hidden states are zero. A bidirectional layer runs one GRU forward in
time and an independent GRU backward in time and concatenates the two hidden
states per timestep; stacked layers feed the full concatenated sequence
onward. Biases exist but are zero-initialized, so a freshly built layer
reproduces the bias-free textbook equations exactly.
"""

from __future__ import annotations

import numpy as np


def _sigmoid(x):
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


class GruLayerParams:
    """Parameters of one GRU direction: input (W), recurrent (U), bias (b)
    per gate r/z and for the candidate."""

    def __init__(self, input_size, hidden_size, dtype=np.float64):
        self.input_size = int(input_size)
        self.hidden_size = int(hidden_size)
        h, i = self.hidden_size, self.input_size
        self.w_r = np.zeros((h, i), dtype=dtype)
        self.w_z = np.zeros((h, i), dtype=dtype)
        self.w = np.zeros((h, i), dtype=dtype)
        self.u_r = np.zeros((h, h), dtype=dtype)
        self.u_z = np.zeros((h, h), dtype=dtype)
        self.u = np.zeros((h, h), dtype=dtype)
        self.b_r = np.zeros(h, dtype=dtype)
        self.b_z = np.zeros(h, dtype=dtype)
        self.b = np.zeros(h, dtype=dtype)

    def params(self):
        return {
            "w_r": self.w_r, "w_z": self.w_z, "w": self.w,
            "u_r": self.u_r, "u_z": self.u_z, "u": self.u,
            "b_r": self.b_r, "b_z": self.b_z, "b": self.b,
        }


def gru_cell(params, x, h_prev):
    """Single GRU step on one vector (or a (B, In) batch)."""
    x = np.asarray(x)
    h_prev = np.asarray(h_prev)
    r = _sigmoid(x @ params.w_r.T + h_prev @ params.u_r.T + params.b_r)
    z = _sigmoid(x @ params.w_z.T + h_prev @ params.u_z.T + params.b_z)
    c = np.tanh(x @ params.w.T + (r * h_prev) @ params.u.T + params.b)
    return z * h_prev + (1.0 - z) * c


def gru_sequence_forward(params, x):
    """Run one direction over (B, T, In); returns ((B, T, H), cache)."""
    b, t, _ = x.shape
    h = params.hidden_size
    w_all = np.concatenate([params.w_r, params.w_z, params.w], axis=0)
    b_all = np.concatenate([params.b_r, params.b_z, params.b])
    xin = (x.reshape(b * t, -1) @ w_all.T + b_all).reshape(b, t, 3 * h)
    u_rz = np.concatenate([params.u_r, params.u_z], axis=0)

    hs = np.empty((b, t, h), dtype=x.dtype)
    rs = np.empty_like(hs)
    zs = np.empty_like(hs)
    cs = np.empty_like(hs)
    h_prev = np.zeros((b, h), dtype=x.dtype)
    for k in range(t):
        rz = _sigmoid(xin[:, k, : 2 * h] + h_prev @ u_rz.T)
        r, z = rz[:, :h], rz[:, h:]
        c = np.tanh(xin[:, k, 2 * h :] + (r * h_prev) @ params.u.T)
        hs[:, k] = z * h_prev + (1.0 - z) * c
        rs[:, k], zs[:, k], cs[:, k] = r, z, c
        h_prev = hs[:, k]
    return hs, (x, rs, zs, cs, hs)


def gru_sequence_backward(params, cache, dh_seq):
    """Exact gradients for gru_sequence_forward.

    dh_seq: (B, T, H) gradient w.r.t. every timestep's output. Returns
    (dx (B, T, In), grads dict keyed like params())."""
    x, rs, zs, cs, hs = cache
    b, t, _ = x.shape
    h = params.hidden_size

    da_all = np.empty((b, t, 3 * h), dtype=x.dtype)
    du_r = np.zeros_like(params.u_r)
    du_z = np.zeros_like(params.u_z)
    du = np.zeros_like(params.u)
    dh_carry = np.zeros((b, h), dtype=x.dtype)
    for k in range(t - 1, -1, -1):
        dh = dh_seq[:, k] + dh_carry
        r, z, c = rs[:, k], zs[:, k], cs[:, k]
        h_prev = hs[:, k - 1] if k > 0 else np.zeros((b, h), dtype=x.dtype)

        dz = dh * (h_prev - c)
        dc = dh * (1.0 - z)
        da_c = dc * (1.0 - c * c)
        da_z = dz * z * (1.0 - z)

        drh = da_c @ params.u          # gradient w.r.t. (r * h_prev)
        dr = drh * h_prev
        da_r = dr * r * (1.0 - r)

        dh_prev = dh * z + drh * r + da_r @ params.u_r + da_z @ params.u_z

        du += da_c.T @ (r * h_prev)
        du_r += da_r.T @ h_prev
        du_z += da_z.T @ h_prev

        da_all[:, k, :h] = da_r
        da_all[:, k, h : 2 * h] = da_z
        da_all[:, k, 2 * h :] = da_c
        dh_carry = dh_prev

    flat = da_all.reshape(b * t, 3 * h)
    xf = x.reshape(b * t, -1)
    dw_all = flat.T @ xf
    db_all = flat.sum(axis=0)
    w_all = np.concatenate([params.w_r, params.w_z, params.w], axis=0)
    dx = (flat @ w_all).reshape(x.shape)
    grads = {
        "w_r": dw_all[:h], "w_z": dw_all[h : 2 * h], "w": dw_all[2 * h :],
        "u_r": du_r, "u_z": du_z, "u": du,
        "b_r": db_all[:h], "b_z": db_all[h : 2 * h], "b": db_all[2 * h :],
    }
    return dx, grads


class BiGruLayer:
    """One bidirectional layer: forward-time GRU + backward-time GRU,
    outputs concatenated per timestep to width 2 * hidden_size."""

    def __init__(self, input_size, hidden_size, dtype=np.float64):
        self.fwd = GruLayerParams(input_size, hidden_size, dtype)
        self.bwd = GruLayerParams(input_size, hidden_size, dtype)
        self.input_size = input_size
        self.hidden_size = hidden_size
        self.output_size = 2 * hidden_size

    def params(self):
        out = {}
        for tag, p in (("fwd", self.fwd), ("bwd", self.bwd)):
            for name, arr in p.params().items():
                out[f"{tag}.{name}"] = arr
        return out

    def forward(self, x):
        hf, cache_f = gru_sequence_forward(self.fwd, x)
        hb_rev, cache_b = gru_sequence_forward(self.bwd, x[:, ::-1])
        y = np.concatenate([hf, hb_rev[:, ::-1]], axis=2)
        return y, (cache_f, cache_b)

    def backward(self, cache, dy):
        cache_f, cache_b = cache
        h = self.hidden_size
        dxf, gf = gru_sequence_backward(self.fwd, cache_f, dy[:, :, :h])
        dxb_rev, gb = gru_sequence_backward(self.bwd, cache_b, dy[:, ::-1, h:])
        dx = dxf + dxb_rev[:, ::-1]
        grads = {f"fwd.{k}": v for k, v in gf.items()}
        grads.update({f"bwd.{k}": v for k, v in gb.items()})
        return dx, grads


class BiGruStack:
    """Stacked bidirectional layers; layer k feeds its full per-timestep
    concatenated sequence into layer k+1."""

    def __init__(self, input_size, hidden_sizes, dtype=np.float64):
        self.layers = []
        size = input_size
        for h in hidden_sizes:
            layer = BiGruLayer(size, h, dtype)
            self.layers.append(layer)
            size = layer.output_size
        self.output_size = size

    def params(self):
        out = {}
        for i, layer in enumerate(self.layers):
            for name, arr in layer.params().items():
                out[f"{i}.{name}"] = arr
        return out

    def forward(self, x):
        caches = []
        for layer in self.layers:
            x, cache = layer.forward(x)
            caches.append(cache)
        return x, caches

    def backward(self, caches, dy):
        grads = {}
        for i in range(len(self.layers) - 1, -1, -1):
            dy, g = self.layers[i].backward(caches[i], dy)
            for name, arr in g.items():
                grads[f"{i}.{name}"] = arr
        return dy, grads


def bigru_forward(stack, xs):
    """Evaluate a (stacked) bidirectional GRU on one unbatched sequence.

    xs: (T, In) -> (T, 2 * top hidden size)."""
    xs = np.asarray(xs)
    y, _ = stack.forward(xs[None, :, :])
    return y[0]


class Linear:
    def __init__(self, input_size, output_size, dtype=np.float64):
        self.w = np.zeros((output_size, input_size), dtype=dtype)
        self.b = np.zeros(output_size, dtype=dtype)
        self.input_size = input_size
        self.output_size = output_size

    def params(self):
        return {"w": self.w, "b": self.b}

    def forward(self, x):
        return x @ self.w.T + self.b, x

    def backward(self, cache, dy):
        x = cache
        return dy @ self.w, {"w": dy.T @ x, "b": dy.sum(axis=0)}


def fc_forward(w, b, x):
    """Plain affine map y = W x + b for one vector or a (B, In) batch."""
    return np.asarray(x) @ np.asarray(w).T + np.asarray(b)


class Tanh:
    def params(self):
        return {}

    def forward(self, x):
        y = np.tanh(x)
        return y, y

    def backward(self, cache, dy):
        y = cache
        return dy * (1.0 - y * y), {}


class Dropout:
    """Inverted dropout: active only when a generator is supplied (training);
    keep probability 1-p, survivors scaled by 1/(1-p)."""

    def __init__(self, p):
        if not 0.0 <= p < 1.0:
            raise ValueError("dropout probability must be in [0, 1)")
        self.p = p

    def params(self):
        return {}

    def forward(self, x, rng=None):
        if rng is None or self.p == 0.0:
            return x, None
        keep = 1.0 - self.p
        mask = (rng.random(x.shape) < keep).astype(x.dtype) / keep
        return x * mask, mask

    def backward(self, cache, dy):
        if cache is None:
            return dy, {}
        return dy * cache, {}


class Flatten:
    """(B, T, F) -> (B, T*F), timestep-major (C order)."""

    def params(self):
        return {}

    def forward(self, x):
        return np.ascontiguousarray(x).reshape(x.shape[0], -1), x.shape

    def backward(self, cache, dy):
        return dy.reshape(cache), {}
