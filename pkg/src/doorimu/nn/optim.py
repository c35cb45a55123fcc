"""AdamW with decoupled weight decay, and a reduce-on-plateau schedule."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class AdamW:
    """Bias-corrected Adam with weight decay applied directly to the
    parameters (decoupled from the gradient moments):

        m <- b1 m + (1 - b1) g         m_hat = m / (1 - b1^t)
        v <- b2 v + (1 - b2) g^2       v_hat = v / (1 - b2^t)
        p <- p - lr * (m_hat / (sqrt(v_hat) + eps) + wd * p)
    """

    def __init__(self, params, lr=1e-3, betas=(0.9, 0.999), eps=1e-8, weight_decay=1e-2):
        self.params = params  # dict name -> ndarray, updated in place
        self.lr = float(lr)
        self.beta1, self.beta2 = betas
        self.eps = float(eps)
        self.weight_decay = float(weight_decay)
        self.step_count = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, grads):
        self.step_count += 1
        t = self.step_count
        c1 = 1.0 - self.beta1**t
        c2 = 1.0 - self.beta2**t
        for name, p in self.params.items():
            g = grads[name]
            m = self.m[name]
            v = self.v[name]
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            update = (m / c1) / (np.sqrt(v / c2) + self.eps)
            if self.weight_decay != 0.0:
                update = update + self.weight_decay * p
            p -= self.lr * update


def adamw_step(optimizer, grads):
    """Functional alias for one optimizer step."""
    optimizer.step(grads)


@dataclass
class PlateauConfig:
    factor: float = 0.5
    patience: int = 3
    threshold: float = 0.01  # absolute improvement that resets the counter

    def __post_init__(self):
        if not 0.0 < self.factor < 1.0:
            raise ValueError("factor must be in (0, 1)")
        if self.patience < 1:
            raise ValueError("patience must be >= 1")
        if self.threshold < 0.0:
            raise ValueError("threshold must be non-negative")


class PlateauScheduler:
    """Halve (by `factor`) the optimizer's learning rate after `patience`
    consecutive epochs whose monitored loss failed to improve on the best
    seen by at least `threshold`."""

    def __init__(self, optimizer, config: PlateauConfig | None = None):
        self.optimizer = optimizer
        self.config = config or PlateauConfig()
        self.best = None
        self.bad_epochs = 0

    def step(self, loss) -> float:
        loss = float(loss)
        if self.best is None or loss < self.best - self.config.threshold:
            self.best = loss
            self.bad_epochs = 0
        else:
            self.best = min(self.best, loss)
            self.bad_epochs += 1
            if self.bad_epochs >= self.config.patience:
                self.optimizer.lr *= self.config.factor
                self.bad_epochs = 0
        return self.optimizer.lr


def plateau_lr(losses, initial_lr, config: PlateauConfig | None = None) -> float:
    """Learning rate after feeding an epoch-loss history through the plateau
    rule. Pure function of the history; used as the schedule's oracle."""

    class _Opt:
        lr = float(initial_lr)

    sched = PlateauScheduler(_Opt(), config)
    lr = _Opt.lr
    for value in losses:
        lr = sched.step(value)
    return lr
