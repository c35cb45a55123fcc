"""Training loop: seeded, full-batch-deterministic, checkpoint-friendly.

One numpy Generator seeded from TrainConfig.seed drives everything random,
in a fixed order: per epoch one shuffle permutation, then per batch the
dropout masks. Two runs with equal data, config and seed therefore produce
bit-identical parameters, histories and checkpoints.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .losses import huber_loss
from .optim import AdamW, PlateauConfig, PlateauScheduler


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 150
    batch_size: int = 64
    lr: float = 1e-3
    weight_decay: float = 1e-2
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    plateau_factor: float = 0.5
    plateau_patience: int = 3
    plateau_threshold: float = 0.01
    seed: int = 0
    shuffle: bool = True

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be positive")
        if self.lr <= 0.0:
            raise ValueError("lr must be positive")


def _length(inputs):
    if isinstance(inputs, tuple):
        return inputs[0].shape[0]
    return inputs.shape[0]


def _take(inputs, idx):
    if isinstance(inputs, tuple):
        return tuple(part[idx] for part in inputs)
    return inputs[idx]


def loss_and_grads(model, inputs, targets, train=False, rng=None):
    """Forward + Huber + full backward; returns (loss, grads, predictions)."""
    y, cache = model.forward(inputs, train=train, rng=rng)
    loss, dy = huber_loss(y, targets)
    grads = model.backward(cache, dy.astype(model.dtype))
    return loss, grads, y


def predict(model, inputs, batch_size=512):
    """Evaluation-mode predictions, batched to bound memory."""
    n = _length(inputs)
    out = np.empty(n, dtype=np.float64)
    for lo in range(0, n, batch_size):
        sl = slice(lo, min(lo + batch_size, n))
        y, _ = model.forward(_take(inputs, sl), train=False)
        out[sl] = y
    return out


def eval_loss(model, inputs, targets, batch_size=512):
    loss, _ = huber_loss(predict(model, inputs, batch_size), targets)
    return loss


@dataclass
class TrainResult:
    train_loss: list
    val_loss: list
    lr: list
    epochs_run: int

    def history(self):
        return {
            "train_loss": self.train_loss,
            "val_loss": self.val_loss,
            "lr": self.lr,
            "epochs_run": self.epochs_run,
        }


def train(model, train_inputs, train_targets, val_inputs, val_targets,
          config: TrainConfig, optimizer=None, start_epoch=0, log=None):
    """Train in place. The plateau schedule monitors the validation loss.

    Pass the optimizer back in (with start_epoch) to resume a run; a fresh
    AdamW is built otherwise. Returns a TrainResult for the epochs run here.
    """
    n = _length(train_inputs)
    if n == 0 or _length(val_inputs) == 0:
        raise ValueError("need non-empty train and validation sets")
    targets = np.asarray(train_targets, dtype=np.float64)
    if targets.shape != (n,):
        raise ValueError("train targets must be (N,) matching the inputs")

    rng = np.random.default_rng(config.seed)
    if optimizer is None:
        optimizer = AdamW(
            model.params(), lr=config.lr, betas=(config.beta1, config.beta2),
            eps=config.eps, weight_decay=config.weight_decay,
        )
    scheduler = PlateauScheduler(
        optimizer,
        PlateauConfig(config.plateau_factor, config.plateau_patience,
                      config.plateau_threshold),
    )

    result = TrainResult([], [], [], 0)
    for epoch in range(start_epoch, config.epochs):
        order = rng.permutation(n) if config.shuffle else np.arange(n)
        total = 0.0
        for lo in range(0, n, config.batch_size):
            idx = order[lo : lo + config.batch_size]
            loss, grads, _ = loss_and_grads(
                model, _take(train_inputs, idx), targets[idx], train=True, rng=rng
            )
            optimizer.step(grads)
            total += loss * idx.size
        train_loss = total / n
        val_loss = eval_loss(model, val_inputs, np.asarray(val_targets, dtype=np.float64),
                             config.batch_size)
        lr = scheduler.step(val_loss)
        result.train_loss.append(train_loss)
        result.val_loss.append(val_loss)
        result.lr.append(lr)
        result.epochs_run += 1
        if log is not None:
            log(epoch, train_loss, val_loss, lr)
    return result, optimizer


def resume_optimizer(model, config: TrainConfig, opt_state):
    """Rebuild an AdamW from checkpointed state (see checkpoint module)."""
    optimizer = AdamW(
        model.params(), lr=config.lr, betas=(config.beta1, config.beta2),
        eps=config.eps, weight_decay=config.weight_decay,
    )
    optimizer.step_count = opt_state["step_count"]
    for name in optimizer.m:
        optimizer.m[name][...] = opt_state["m"][name]
        optimizer.v[name][...] = opt_state["v"][name]
    return optimizer


def train_config_dict(config: TrainConfig) -> dict:
    return asdict(config)
