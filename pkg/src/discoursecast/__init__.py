"""discoursecast: discourse-state features and probabilistic direction forecasts.

The package turns a timestamped document corpus about a social movement
into daily discourse-state vectors (volume, emotion, theme, and key-event
features), trains a small encoder-decoder transformer with a Student-t
output head on them, and evaluates directional increase/stable/decrease
calls against rolling-statistics ground truth. An HTTP service exposes
series browsing, forecasting, and what-if key-event injection.
"""

__version__ = "0.1.0"

from .corpus import Corpus, Document, KeywordStats, LayerAssignment

__all__ = [
    "Corpus",
    "Document",
    "Forecaster",
    "ForecastResult",
    "KeywordStats",
    "LayerAssignment",
    "ModelConfig",
    "StudentTParams",
    "__version__",
]

_FORECASTING_EXPORTS = {"Forecaster", "ForecastResult", "ModelConfig", "StudentTParams"}


def __getattr__(name):
    # Lazy: keeps torch out of stages that never touch the forecaster.
    if name in _FORECASTING_EXPORTS:
        from . import forecasting

        return getattr(forecasting, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
