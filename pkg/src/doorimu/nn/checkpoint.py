"""Self-describing single-file checkpoint container.

Layout, documented for external readers:

    bytes 0..7    magic b"DRIMUCK1"
    bytes 8..15   unsigned 64-bit little-endian header length L
    bytes 16..16+L-1 UTF-8 JSON header (sorted keys)
    remainder     raw array data, float64 little-endian, concatenated in
                  the order header["params"] lists them; if
                  header["optimizer"] is non-null, the AdamW first-moment
                  arrays follow in the same order, then the second-moment
                  arrays.

Header fields: format_version (1), arch ("g" | "ag"), model_config (builder
kwargs for the architecture), params (list of {name, shape}), seed (training
seed), epoch (epochs completed), train_config (dict or null), optimizer
({step_count} or null), dtype (in-memory dtype of the model; storage is
always float64, which widens float32 exactly and restores it bitwise).

The byte stream is a pure function of the model, config, and counters: no
timestamps, no environment data, so identical runs write identical files.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .models import MODEL_CLASSES

MAGIC = b"DRIMUCK1"


def save_checkpoint(path, model, seed=0, epoch=0, train_config=None, optimizer=None):
    params = model.params()
    header = {
        "format_version": 1,
        "arch": model.arch,
        "model_config": model.config,
        "dtype": np.dtype(model.dtype).name,
        "params": [{"name": k, "shape": list(v.shape)} for k, v in params.items()],
        "seed": int(seed),
        "epoch": int(epoch),
        "train_config": train_config,
        "optimizer": None if optimizer is None else {"step_count": optimizer.step_count},
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode()
    chunks = [MAGIC, struct.pack("<Q", len(blob)), blob]
    for arr in params.values():
        chunks.append(np.ascontiguousarray(arr, dtype="<f8").tobytes())
    if optimizer is not None:
        for slot in (optimizer.m, optimizer.v):
            for name in params:
                chunks.append(np.ascontiguousarray(slot[name], dtype="<f8").tobytes())
    Path(path).write_bytes(b"".join(chunks))


def load_checkpoint(path):
    """Rebuild the model (and optimizer state, if stored).

    Returns (model, header, opt_state) where opt_state is None or a dict
    {"step_count": int, "m": {...}, "v": {...}} ready to hand to resume()."""
    raw = Path(path).read_bytes()
    if raw[:8] != MAGIC:
        raise ValueError(f"{path}: not a checkpoint file (bad magic)")
    (hlen,) = struct.unpack("<Q", raw[8:16])
    header = json.loads(raw[16 : 16 + hlen].decode())
    if header.get("format_version") != 1:
        raise ValueError(f"{path}: unsupported checkpoint version {header.get('format_version')!r}")
    arch = header["arch"]
    if arch not in MODEL_CLASSES:
        raise ValueError(f"{path}: unknown architecture tag {arch!r}")
    dtype = np.dtype(header.get("dtype", "float64"))
    model = MODEL_CLASSES[arch](**header["model_config"], dtype=dtype)
    params = model.params()
    declared = [(p["name"], tuple(p["shape"])) for p in header["params"]]
    if [(k, v.shape) for k, v in params.items()] != declared:
        raise ValueError(f"{path}: parameter table does not match the {arch!r} architecture")

    offset = 16 + hlen
    def take(shape):
        nonlocal offset
        n = int(np.prod(shape)) if shape else 1
        arr = np.frombuffer(raw, dtype="<f8", count=n, offset=offset).reshape(shape)
        offset += n * 8
        return arr

    for name, arr in params.items():
        arr[...] = take(arr.shape).astype(dtype)
    opt_state = None
    if header.get("optimizer") is not None:
        m = {name: take(arr.shape).astype(dtype).copy() for name, arr in params.items()}
        v = {name: take(arr.shape).astype(dtype).copy() for name, arr in params.items()}
        opt_state = {"step_count": int(header["optimizer"]["step_count"]), "m": m, "v": v}
    if offset != len(raw):
        raise ValueError(f"{path}: trailing or missing data ({len(raw) - offset:+d} bytes)")
    return model, header, opt_state
