"""Probabilistic multi-step forecasting of discourse-state series."""

from .config import ModelConfig
from .studentt import StudentTParams
from .windows import WindowDataset, make_training_windows

__all__ = [
    "Forecaster",
    "ForecastResult",
    "ModelConfig",
    "StudentTParams",
    "TrainReport",
    "WindowDataset",
    "make_training_windows",
    "train",
]

_TRAINING_EXPORTS = {"Forecaster", "ForecastResult", "TrainReport", "train"}


def __getattr__(name):
    # Lazy: the training module pulls in torch, which pipeline stages that
    # only ingest or featurize never need.
    if name in _TRAINING_EXPORTS:
        from . import training

        return getattr(training, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
