"""Self-contained numpy engine for the window regressors: layers with exact
analytic backward passes, Xavier init, Huber loss, AdamW, plateau scheduling,
training loop, and a deterministic checkpoint container."""

from .checkpoint import load_checkpoint, save_checkpoint
from .init import xavier_uniform
from .layers import (
    BiGruLayer,
    BiGruStack,
    Dropout,
    Flatten,
    GruLayerParams,
    Linear,
    Tanh,
    bigru_forward,
    fc_forward,
    gru_cell,
    gru_sequence_backward,
    gru_sequence_forward,
)
from .losses import huber_loss
from .models import (
    BUILDERS,
    AccelGyroModel,
    GyroModel,
    build_accel_gyro_model,
    build_gyro_model,
    param_count,
)
from .optim import AdamW, PlateauConfig, PlateauScheduler, adamw_step, plateau_lr
from .train import (
    TrainConfig,
    TrainResult,
    eval_loss,
    loss_and_grads,
    predict,
    resume_optimizer,
    train,
    train_config_dict,
)

__all__ = [
    "AccelGyroModel", "AdamW", "BUILDERS", "BiGruLayer", "BiGruStack",
    "Dropout", "Flatten", "GruLayerParams", "GyroModel", "Linear",
    "PlateauConfig", "PlateauScheduler", "Tanh", "TrainConfig", "TrainResult",
    "adamw_step", "bigru_forward", "build_accel_gyro_model",
    "build_gyro_model", "eval_loss", "fc_forward", "gru_cell",
    "gru_sequence_backward", "gru_sequence_forward", "huber_loss",
    "load_checkpoint", "loss_and_grads", "param_count", "plateau_lr",
    "predict", "resume_optimizer", "save_checkpoint", "train",
    "train_config_dict",
    "xavier_uniform",
]
