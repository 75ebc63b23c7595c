"""Minimal neural-network core: dense layers, an LSTM, losses, Adadelta,
finite-difference gradient checking, and checkpoint serialization.

Everything operates on 2-D float64 numpy arrays; bias vectors are stored as
1 x h rows so that every trainable tensor is a matrix.
"""

from pparg.nn.checkpoint import CheckpointFormatError, load_checkpoint, save_checkpoint
from pparg.nn.gradcheck import grad_check
from pparg.nn.layers import (
    Activation,
    activation_backward,
    activation_forward,
    affine_backward,
    affine_forward,
    max_pool_time,
    max_pool_time_backward,
    smooth_l1,
    softmax,
    softmax_xent,
)
from pparg.nn.lstm import (
    Direction,
    LstmCellParams,
    bilstm_backward,
    bilstm_encode,
    lstm_backward,
    lstm_forward,
)
from pparg.nn.optim import (
    NonFiniteGradientError,
    OptimizerConfig,
    Parameter,
    adadelta_step,
    glorot_uniform,
    restore_values,
    snapshot_values,
)

__all__ = [
    "Activation",
    "CheckpointFormatError",
    "Direction",
    "LstmCellParams",
    "NonFiniteGradientError",
    "OptimizerConfig",
    "Parameter",
    "activation_backward",
    "activation_forward",
    "adadelta_step",
    "affine_backward",
    "affine_forward",
    "bilstm_backward",
    "bilstm_encode",
    "glorot_uniform",
    "grad_check",
    "load_checkpoint",
    "lstm_backward",
    "lstm_forward",
    "max_pool_time",
    "max_pool_time_backward",
    "restore_values",
    "save_checkpoint",
    "smooth_l1",
    "snapshot_values",
    "softmax",
    "softmax_xent",
]
