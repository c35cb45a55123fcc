"""Window-to-increment regression models.

Two fixed topologies over 20-sample IMU windows:

  gyro-only ("g"):       BiGRU(3 -> 64) -> BiGRU(128 -> 128) -> flatten ->
                         FC 2560 (dropout, tanh) -> 512 -> 128 -> 32 -> 16 ->
                         8 -> 4 -> 1, tanh between FCs, none after the last.

  accel + gyro ("ag"):   two 3-layer BiGRU(3 -> 64) heads, one per sensor,
                         concatenated per timestep (256 wide), into a 2-layer
                         BiGRU(256 -> 256), flatten, FC 2560 (dropout, tanh)
                         -> 512 (dropout, tanh) -> 128 -> ... -> 1.

Hidden sizes are per direction; bidirectional concatenation doubles the
sequence width. Constructors take explicit size tuples so shrunken variants
(fast training runs, finite-difference checks) use the same code path; the
build_* helpers apply a single width_scale to the GRU hidden sizes and the
two wide FC layers, keeping the narrow FC tail fixed. The model output is
the heading increment over the window, in degrees.
"""

from __future__ import annotations

import numpy as np

from .init import init_model_params
from .layers import BiGruStack, Dropout, Flatten, Linear, Tanh


class _FcStack:
    """Linear pyramid with tanh between layers and optional dropout slots
    directly after selected linear layers (before the tanh)."""

    def __init__(self, sizes, dropout_p, dropout_after, dtype):
        self.linears = [
            Linear(sizes[i], sizes[i + 1], dtype) for i in range(len(sizes) - 1)
        ]
        self.dropouts = {
            i: Dropout(dropout_p) for i in dropout_after if dropout_p > 0.0
        }
        self.tanh = Tanh()

    def params(self):
        out = {}
        for i, lin in enumerate(self.linears):
            for name, arr in lin.params().items():
                out[f"{i}.{name}"] = arr
        return out

    def forward(self, x, rng=None):
        caches = []
        last = len(self.linears) - 1
        for i, lin in enumerate(self.linears):
            x, c_lin = lin.forward(x)
            c_drop = None
            if i in self.dropouts:
                x, c_drop = self.dropouts[i].forward(x, rng)
            c_tanh = None
            if i != last:
                x, c_tanh = self.tanh.forward(x)
            caches.append((c_lin, c_drop, c_tanh))
        return x, caches

    def backward(self, caches, dy):
        grads = {}
        for i in range(len(self.linears) - 1, -1, -1):
            c_lin, c_drop, c_tanh = caches[i]
            if c_tanh is not None:
                dy, _ = self.tanh.backward(c_tanh, dy)
            if i in self.dropouts:
                dy, _ = self.dropouts[i].backward(c_drop, dy)
            dy, g = self.linears[i].backward(c_lin, dy)
            for name, arr in g.items():
                grads[f"{i}.{name}"] = arr
        return dy, grads


class GyroModel:
    """Gyro-window regressor ("g")."""

    arch = "g"

    def __init__(self, window=20, gru_hidden=(64, 128),
                 fc_widths=(2560, 512, 128, 32, 16, 8, 4),
                 dropout_p=0.2, dtype=np.float64):
        self.window = int(window)
        self.gru = BiGruStack(3, list(gru_hidden), dtype)
        flat = self.window * self.gru.output_size
        sizes = [flat, *fc_widths, 1]
        self.fc = _FcStack(sizes, dropout_p, dropout_after=(0,), dtype=dtype)
        self.flatten = Flatten()
        self.dtype = dtype
        self.config = {
            "window": self.window,
            "gru_hidden": list(gru_hidden),
            "fc_widths": list(fc_widths),
            "dropout_p": dropout_p,
        }

    def params(self):
        out = {}
        for name, arr in self.gru.params().items():
            out[f"gru.{name}"] = arr
        for name, arr in self.fc.params().items():
            out[f"fc.{name}"] = arr
        return out

    def forward(self, inputs, train=False, rng=None):
        x = np.asarray(inputs, dtype=self.dtype)
        seq, c_gru = self.gru.forward(x)
        flat, c_shape = self.flatten.forward(seq)
        y, c_fc = self.fc.forward(flat, rng if train else None)
        return y[:, 0], (c_gru, c_shape, c_fc)

    def backward(self, cache, dy):
        c_gru, c_shape, c_fc = cache
        dflat, g_fc = self.fc.backward(c_fc, np.asarray(dy)[:, None])
        dseq, _ = self.flatten.backward(c_shape, dflat)
        _, g_gru = self.gru.backward(c_gru, dseq)
        grads = {f"gru.{k}": v for k, v in g_gru.items()}
        grads.update({f"fc.{k}": v for k, v in g_fc.items()})
        return grads


class AccelGyroModel:
    """Two-head accel + gyro window regressor ("ag")."""

    arch = "ag"

    def __init__(self, window=20, head_hidden=64, head_layers=3,
                 trunk_hidden=256, trunk_layers=2,
                 fc_widths=(2560, 512, 128, 32, 16, 8, 4),
                 dropout_p=0.2, dtype=np.float64):
        self.window = int(window)
        self.accel_head = BiGruStack(3, [head_hidden] * head_layers, dtype)
        self.gyro_head = BiGruStack(3, [head_hidden] * head_layers, dtype)
        trunk_in = self.accel_head.output_size + self.gyro_head.output_size
        self.trunk = BiGruStack(trunk_in, [trunk_hidden] * trunk_layers, dtype)
        flat = self.window * self.trunk.output_size
        sizes = [flat, *fc_widths, 1]
        self.fc = _FcStack(sizes, dropout_p, dropout_after=(0, 1), dtype=dtype)
        self.flatten = Flatten()
        self.dtype = dtype
        self.config = {
            "window": self.window,
            "head_hidden": head_hidden,
            "head_layers": head_layers,
            "trunk_hidden": trunk_hidden,
            "trunk_layers": trunk_layers,
            "fc_widths": list(fc_widths),
            "dropout_p": dropout_p,
        }

    def params(self):
        out = {}
        for prefix, part in (
            ("accel", self.accel_head),
            ("gyro", self.gyro_head),
            ("trunk", self.trunk),
        ):
            for name, arr in part.params().items():
                out[f"{prefix}.{name}"] = arr
        for name, arr in self.fc.params().items():
            out[f"fc.{name}"] = arr
        return out

    def forward(self, inputs, train=False, rng=None):
        accel, gyro = inputs
        a = np.asarray(accel, dtype=self.dtype)
        g = np.asarray(gyro, dtype=self.dtype)
        seq_a, c_a = self.accel_head.forward(a)
        seq_g, c_g = self.gyro_head.forward(g)
        merged = np.concatenate([seq_a, seq_g], axis=2)
        seq, c_t = self.trunk.forward(merged)
        flat, c_shape = self.flatten.forward(seq)
        y, c_fc = self.fc.forward(flat, rng if train else None)
        return y[:, 0], (c_a, c_g, c_t, c_shape, c_fc, seq_a.shape[2])

    def backward(self, cache, dy):
        c_a, c_g, c_t, c_shape, c_fc, split = cache
        dflat, g_fc = self.fc.backward(c_fc, np.asarray(dy)[:, None])
        dseq, _ = self.flatten.backward(c_shape, dflat)
        dmerged, g_t = self.trunk.backward(c_t, dseq)
        _, g_a = self.accel_head.backward(c_a, dmerged[:, :, :split])
        _, g_g = self.gyro_head.backward(c_g, dmerged[:, :, split:])
        grads = {f"accel.{k}": v for k, v in g_a.items()}
        grads.update({f"gyro.{k}": v for k, v in g_g.items()})
        grads.update({f"trunk.{k}": v for k, v in g_t.items()})
        grads.update({f"fc.{k}": v for k, v in g_fc.items()})
        return grads


def _scaled(size, scale):
    return max(int(round(size * scale)), 1)


def build_gyro_model(seed=0, window=20, width_scale=1.0, dropout_p=0.2,
                     dtype=np.float64):
    model = GyroModel(
        window=window,
        gru_hidden=(_scaled(64, width_scale), _scaled(128, width_scale)),
        fc_widths=(_scaled(2560, width_scale), _scaled(512, width_scale),
                   128, 32, 16, 8, 4),
        dropout_p=dropout_p,
        dtype=dtype,
    )
    init_model_params(model.params(), np.random.default_rng(seed))
    return model


def build_accel_gyro_model(seed=0, window=20, width_scale=1.0, dropout_p=0.2,
                           dtype=np.float64):
    model = AccelGyroModel(
        window=window,
        head_hidden=_scaled(64, width_scale),
        trunk_hidden=_scaled(256, width_scale),
        fc_widths=(_scaled(2560, width_scale), _scaled(512, width_scale),
                   128, 32, 16, 8, 4),
        dropout_p=dropout_p,
        dtype=dtype,
    )
    init_model_params(model.params(), np.random.default_rng(seed))
    return model


BUILDERS = {"g": build_gyro_model, "ag": build_accel_gyro_model}

MODEL_CLASSES = {"g": GyroModel, "ag": AccelGyroModel}


def param_count(model) -> int:
    return sum(arr.size for arr in model.params().values())
