"""Multi-IRS downlink simulator with per-BS DDPG agents."""

from irsnet._core import (
    MLP,
    Config,
    NetworkDims,
    __version__,
    action_dim,
    evaluate,
    observation_dim,
    path_loss_gain,
    sample_rayleigh,
    train,
)

__all__ = [
    "MLP",
    "Config",
    "NetworkDims",
    "__version__",
    "action_dim",
    "evaluate",
    "observation_dim",
    "path_loss_gain",
    "sample_rayleigh",
    "train",
]
