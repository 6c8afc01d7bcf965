"""Forecaster configuration."""

from __future__ import annotations

from dataclasses import dataclass, field, asdict


@dataclass
class ModelConfig:
    context_len: int = 28
    horizon: int = 7
    lags: tuple[int, ...] = (1, 2, 3)
    d_model: int = 64
    encoder_layers: int = 2
    decoder_layers: int = 2
    heads: int = 4
    ff_dim: int = 128
    dropout: float = 0.3
    batch_size: int = 2
    learning_rate: float = 3e-4
    weight_decay: float = 1e-5
    epochs: int = 15
    patience: int = 10
    seed: int = 0
    selected_feature_count: int = 64
    targets: tuple[str, ...] = ()
    validation_fraction: float = 0.2

    def __post_init__(self):
        self.lags = tuple(int(x) for x in self.lags)
        self.targets = tuple(self.targets)
        if self.context_len < max(self.lags) + 1:
            raise ValueError("context_len must be at least max(lags) + 1")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if not (0.0 <= self.dropout < 1.0):
            raise ValueError("dropout must be in [0, 1)")
        if self.d_model % self.heads != 0:
            raise ValueError("d_model must be divisible by heads")
        if not self.targets:
            raise ValueError("at least one target is required")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lags"] = list(self.lags)
        d["targets"] = list(self.targets)
        return d

    @classmethod
    def from_dict(cls, payload: dict) -> "ModelConfig":
        known = {f for f in cls.__dataclass_fields__}
        kwargs = {k: v for k, v in payload.items() if k in known}
        if "lags" in kwargs:
            kwargs["lags"] = tuple(kwargs["lags"])
        if "targets" in kwargs:
            kwargs["targets"] = tuple(kwargs["targets"])
        return cls(**kwargs)
