"""Regression loss."""

from __future__ import annotations

import numpy as np


def huber_loss(pred, target):
    """Mean Huber loss with unit transition point, and its gradient.

    Per element, with d = target - pred:
        0.5 * d^2     if |d| < 1
        |d| - 0.5     otherwise

    Returns (loss, dloss/dpred); the gradient already carries the 1/n of the
    mean. Both branches meet at |d| = 1 with matching value and slope.
    """
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape:
        raise ValueError("pred and target shapes differ")
    d = target - pred
    absd = np.abs(d)
    quad = absd < 1.0
    per_elem = np.where(quad, 0.5 * d * d, absd - 0.5)
    n = max(pred.size, 1)
    loss = float(np.sum(per_elem) / n)
    grad = np.where(quad, -d, -np.sign(d)) / n
    return loss, grad
