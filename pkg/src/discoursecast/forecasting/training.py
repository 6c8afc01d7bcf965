"""Training loop, forecast generation, and the train report.

Optimization minimizes the mean Student-t negative log-likelihood over all
targets and horizon steps with AdamW (decoupled weight decay). Runs are
bit-reproducible for a fixed seed on the same platform: seeding covers
parameter init, batch order, and dropout, and training pins torch to one
thread. Early stopping watches validation NLL and restores the best
weights. Inference disables dropout and is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date

import numpy as np
import torch

from .config import ModelConfig
from .model import DiscourseTransformer
from .studentt import StudentTParams, QUANTILE_LEVELS, ppf, torch_nll
from .windows import WindowDataset, WindowError, context_window, covariates_for_days, future_days


class TrainingDivergedError(Exception):
    pass


@dataclass
class EpochStats:
    """Per-epoch curve: running-mean training NLL, end-of-epoch validation
    NLL (drives early stopping), and the step-1 location MSE over the
    training windows in eval mode (standardized units)."""

    epoch: int
    train_nll: float
    validation_nll: float
    mse_at_1: float


@dataclass
class TrainReport:
    epochs: list[EpochStats]
    selected_features: list[str]
    seed: int
    best_epoch: int

    def to_dict(self) -> dict:
        return {
            "epochs": [
                {
                    "epoch": e.epoch,
                    "train_nll": e.train_nll,
                    "validation_nll": e.validation_nll,
                    "mse_at_1": e.mse_at_1,
                }
                for e in self.epochs
            ],
            "selected_features": self.selected_features,
            "seed": self.seed,
            "best_epoch": self.best_epoch,
        }


@dataclass
class TargetForecast:
    params: list[StudentTParams]
    quantiles: dict[str, list[float]]


@dataclass
class ForecastResult:
    anchor: date
    horizon: int
    targets: dict[str, TargetForecast]
    manifest_hash: str
    model_hash: str


@dataclass
class Forecaster:
    """A trained model plus everything needed to reproduce its inputs.

    Feature columns are addressed by name, so a store permuted together
    with its manifest feeds the model identically; the manifest hash is
    kept for strict integrity gates (the service refuses on mismatch).
    """

    config: ModelConfig
    module: DiscourseTransformer
    manifest_hash: str
    selected_names: list[str]
    target_indices: list[int]
    covariate_indices: list[int]
    feature_mean: np.ndarray
    feature_std: np.ndarray
    target_mean: np.ndarray
    target_std: np.ndarray
    model_hash: str = ""
    report: TrainReport | None = None

    def predict_arrays(self, ctx: np.ndarray, fut_cov: np.ndarray):
        """Distribution parameters in original target units.

        ctx: (L, enc_in) or (B, L, enc_in); fut_cov likewise. Returns
        (loc, scale, df) shaped (B, horizon, n_targets).
        """
        if ctx.ndim == 2:
            ctx = ctx[None]
            fut_cov = fut_cov[None]
        self.module.eval()
        with torch.no_grad():
            loc, scale, df = self.module(
                torch.from_numpy(np.ascontiguousarray(ctx, dtype=np.float64)),
                torch.from_numpy(np.ascontiguousarray(fut_cov, dtype=np.float64)),
            )
        loc = loc.numpy() * self.target_std + self.target_mean
        scale = scale.numpy() * self.target_std
        return loc, scale, df.numpy()

    def predict(self, series, anchor: date, events) -> ForecastResult:
        """Forecast ``horizon`` days past ``anchor`` with the given event table.

        The series must carry every feature the model was trained on
        (resolved by name); a manifest missing any of them is a mismatch.
        """
        ctx = context_window(series, self, anchor)
        days = future_days(anchor, self.config.horizon)
        fut_cov = covariates_for_days(days, events, series.manifest)
        loc, scale, df = self.predict_arrays(ctx, fut_cov)
        targets: dict[str, TargetForecast] = {}
        for j, name in enumerate(self.config.targets):
            params = [
                StudentTParams(float(loc[0, s, j]), float(scale[0, s, j]), float(df[0, s, j]))
                for s in range(self.config.horizon)
            ]
            quantiles = {
                f"{q:.2f}": [float(ppf(q, p.loc, p.scale, p.df)) for p in params]
                for q in QUANTILE_LEVELS
            }
            targets[name] = TargetForecast(params, quantiles)
        return ForecastResult(
            anchor=anchor,
            horizon=self.config.horizon,
            targets=targets,
            manifest_hash=self.manifest_hash,
            model_hash=self.model_hash,
        )


def _mean_nll(module, ctx, fut_cov, fut_y) -> torch.Tensor:
    loc, scale, df = module(ctx, fut_cov)
    return torch_nll(fut_y, loc, scale, df).mean()


def train(dataset: WindowDataset) -> Forecaster:
    """Fit the transformer on a window set; returns the trained forecaster."""
    config = dataset.config
    if dataset.n_train < 10:
        raise WindowError(f"need at least 10 training windows, have {dataset.n_train}")

    torch.set_num_threads(1)
    torch.manual_seed(config.seed)
    module = DiscourseTransformer(
        enc_in=dataset.ctx.shape[2],
        cov_in=dataset.fut_cov.shape[2],
        n_targets=dataset.fut_y.shape[2],
        d_model=config.d_model,
        heads=config.heads,
        encoder_layers=config.encoder_layers,
        decoder_layers=config.decoder_layers,
        ff_dim=config.ff_dim,
        dropout=config.dropout,
        max_len=config.context_len + config.horizon + 8,
    )
    optimizer = torch.optim.AdamW(
        module.parameters(), lr=config.learning_rate, weight_decay=config.weight_decay
    )

    ctx = torch.from_numpy(np.ascontiguousarray(dataset.ctx, dtype=np.float64))
    fut_cov = torch.from_numpy(np.ascontiguousarray(dataset.fut_cov, dtype=np.float64))
    fut_y = torch.from_numpy(np.ascontiguousarray(dataset.fut_y, dtype=np.float64))
    train_idx = np.arange(dataset.n_train)
    val_slice = dataset.validation_slice()
    has_val = val_slice.stop > val_slice.start

    rng = np.random.default_rng(config.seed)
    epochs: list[EpochStats] = []
    best_val = np.inf
    best_epoch = 0
    best_state = {k: v.clone() for k, v in module.state_dict().items()}

    for epoch in range(1, config.epochs + 1):
        module.train()
        order = rng.permutation(train_idx)
        total, count = 0.0, 0
        for start in range(0, len(order), config.batch_size):
            batch = torch.from_numpy(order[start : start + config.batch_size]).long()
            optimizer.zero_grad()
            loss = _mean_nll(module, ctx[batch], fut_cov[batch], fut_y[batch])
            if not torch.isfinite(loss):
                raise TrainingDivergedError(
                    f"non-finite NLL at epoch {epoch}, batch starting {start}"
                )
            loss.backward()
            optimizer.step()
            total += loss.detach().item() * len(batch)
            count += len(batch)
        train_nll = total / count

        module.eval()
        with torch.no_grad():
            eval_slice = val_slice if has_val else slice(0, dataset.n_train)
            loc, scale, df = module(ctx[eval_slice], fut_cov[eval_slice])
            val_nll = float(torch_nll(fut_y[eval_slice], loc, scale, df).mean())
            train_loc, _, _ = module(ctx[: dataset.n_train], fut_cov[: dataset.n_train])
            mse1 = float(((train_loc[:, 0, :] - fut_y[: dataset.n_train][:, 0, :]) ** 2).mean())
        epochs.append(EpochStats(epoch, train_nll, val_nll, mse1))

        if val_nll < best_val:
            best_val = val_nll
            best_epoch = epoch
            best_state = {k: v.clone() for k, v in module.state_dict().items()}
        elif epoch - best_epoch >= config.patience:
            break

    module.load_state_dict(best_state)
    module.eval()

    report = TrainReport(
        epochs=epochs,
        selected_features=list(dataset.selected_names),
        seed=config.seed,
        best_epoch=best_epoch,
    )
    return Forecaster(
        config=config,
        module=module,
        manifest_hash=dataset.manifest_hash,
        selected_names=list(dataset.selected_names),
        target_indices=list(dataset.target_indices),
        covariate_indices=list(dataset.covariate_indices),
        feature_mean=dataset.feature_mean,
        feature_std=dataset.feature_std,
        target_mean=dataset.target_mean,
        target_std=dataset.target_std,
        report=report,
    )
