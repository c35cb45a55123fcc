"""Deterministic parameter initialization."""

from __future__ import annotations

import numpy as np


def xavier_uniform(shape, rng, dtype=np.float64):
    """U(-a, a) with a = sqrt(6 / (fan_in + fan_out)).

    For a 2-D weight (out, in): fan_in = in, fan_out = out. For a 1-D shape
    the two fans coincide with its length."""
    if len(shape) == 2:
        fan_out, fan_in = shape
    elif len(shape) == 1:
        fan_out = fan_in = shape[0]
    else:
        raise ValueError("xavier_uniform expects a 1-D or 2-D shape")
    a = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-a, a, size=shape).astype(dtype)


def init_model_params(params, rng):
    """Xavier-initialize every weight matrix in a params dict, in key order.

    Biases (1-D arrays) are left at zero so a fresh model evaluates the
    bias-free textbook equations. Mutates the arrays in place."""
    for name, arr in params.items():
        if arr.ndim == 2:
            arr[...] = xavier_uniform(arr.shape, rng, arr.dtype)
