"""Per-day discourse feature computation."""

from . import emotions, events, state, themes, volume

__all__ = ["emotions", "events", "state", "themes", "volume"]
