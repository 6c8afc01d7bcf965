"""Training loop behavior, inference determinism, and checkpoint round-trips."""

from datetime import timedelta

import numpy as np
import pytest
import torch

from discoursecast.forecasting import checkpoint as ckpt
from discoursecast.forecasting.config import ModelConfig
from discoursecast.forecasting.studentt import torch_nll
from discoursecast.forecasting.training import TrainingDivergedError, train
from discoursecast.forecasting.windows import make_training_windows

from test_mi_windows import synthetic_series


def micro_config(**kwargs):
    defaults = dict(
        context_len=10,
        horizon=3,
        lags=(1, 2),
        d_model=16,
        encoder_layers=1,
        decoder_layers=1,
        heads=2,
        ff_dim=32,
        dropout=0.1,
        batch_size=4,
        epochs=3,
        seed=11,
        selected_feature_count=8,
        targets=("volume_raw[p0]", "emotion_mean[anger]"),
    )
    defaults.update(kwargs)
    return ModelConfig(**defaults)


@pytest.fixture(scope="module")
def micro_dataset():
    series = synthetic_series(90, seed=5)
    return series, make_training_windows(series, micro_config(), min_history_days=1)


class TestTrainLoop:
    def test_same_seed_identical_final_loss(self, micro_dataset):
        _, dataset = micro_dataset
        a = train(dataset)
        b = train(dataset)
        assert a.report.epochs[-1].train_nll == b.report.epochs[-1].train_nll
        for ka, kb in zip(a.module.state_dict().values(), b.module.state_dict().values()):
            assert torch.equal(ka, kb)

    def test_zero_learning_rate_is_a_noop(self, micro_dataset):
        series, _ = micro_dataset
        config = micro_config(learning_rate=0.0, weight_decay=0.0, epochs=3, dropout=0.0)
        dataset = make_training_windows(series, config, min_history_days=1)
        forecaster = train(dataset)
        nlls = [e.train_nll for e in forecaster.report.epochs]
        assert nlls[0] == pytest.approx(nlls[-1], abs=1e-12)
        torch.manual_seed(config.seed)
        from discoursecast.forecasting.model import DiscourseTransformer

        fresh = DiscourseTransformer(
            enc_in=dataset.ctx.shape[2], cov_in=dataset.fut_cov.shape[2],
            n_targets=2, d_model=config.d_model, heads=config.heads,
            encoder_layers=1, decoder_layers=1, ff_dim=config.ff_dim,
            dropout=config.dropout, max_len=config.context_len + config.horizon + 8,
        )
        for trained, init in zip(forecaster.module.parameters(), fresh.parameters()):
            assert torch.equal(trained, init)

    def test_loss_decreases_on_learnable_signal(self, micro_dataset):
        series, _ = micro_dataset
        config = micro_config(epochs=8, dropout=0.0, learning_rate=1e-3)
        dataset = make_training_windows(series, config, min_history_days=1)
        forecaster = train(dataset)
        nlls = [e.train_nll for e in forecaster.report.epochs]
        assert nlls[-1] < nlls[0]

    def test_too_few_windows_raises(self):
        series = synthetic_series(45, seed=6)
        config = micro_config()
        with pytest.raises(Exception, match="10"):
            dataset = make_training_windows(series, config, min_history_days=1)
            dataset.n_train = 5  # force the floor
            train(dataset)

    def test_divergence_aborts_with_diagnostics(self, micro_dataset):
        series, _ = micro_dataset
        config = micro_config(learning_rate=1e6, epochs=4, dropout=0.0)
        dataset = make_training_windows(series, config, min_history_days=1)
        with pytest.raises(TrainingDivergedError, match="epoch"):
            train(dataset)

    def test_report_metrics_finite(self, micro_dataset):
        _, dataset = micro_dataset
        report = train(dataset).report
        for e in report.epochs:
            assert np.isfinite(e.train_nll)
            assert np.isfinite(e.validation_nll)
            assert np.isfinite(e.mse_at_1)
        assert report.seed == dataset.config.seed
        assert len(report.selected_features) == len(dataset.selected)


class TestPrediction:
    def test_identical_inputs_identical_results(self, micro_dataset):
        series, dataset = micro_dataset
        forecaster = train(dataset)
        anchor = series.dates[60]
        r1 = forecaster.predict(series, anchor, [])
        r2 = forecaster.predict(series, anchor, [])
        assert r1 == r2

    def test_quantiles_non_decreasing(self, micro_dataset):
        series, dataset = micro_dataset
        forecaster = train(dataset)
        result = forecaster.predict(series, series.dates[60], [])
        for tf in result.targets.values():
            per_level = [tf.quantiles[q] for q in sorted(tf.quantiles)]
            for step in range(len(per_level[0])):
                column = [lvl[step] for lvl in per_level]
                assert column == sorted(column)

    def test_median_quantile_equals_location(self, micro_dataset):
        series, dataset = micro_dataset
        forecaster = train(dataset)
        result = forecaster.predict(series, series.dates[60], [])
        for tf in result.targets.values():
            for step, params in enumerate(tf.params):
                assert tf.quantiles["0.50"][step] == pytest.approx(params.loc, abs=1e-9)

    def test_causality_truncation_has_no_effect(self, micro_dataset):
        """Values before the context window must not influence the forecast."""
        series, dataset = micro_dataset
        forecaster = train(dataset)
        anchor = series.dates[60]
        baseline = forecaster.predict(series, anchor, [])
        tampered_values = series.values.copy()
        tampered_values[: 60 - dataset.config.context_len + 1] += 123.0
        from discoursecast.features.state import FeatureSeries

        tampered = FeatureSeries(series.manifest, series.dates, tampered_values, series.missing)
        assert forecaster.predict(tampered, anchor, []) == baseline

    def test_permuted_store_with_matching_manifest_predicts_identically(self, micro_dataset):
        """Feature columns are looked up by name: permuting the store
        together with its manifest leaves predictions unchanged."""
        from discoursecast.features.state import FeatureManifest, FeatureSeries, ManifestEntry

        series, dataset = micro_dataset
        forecaster = train(dataset)
        anchor = series.dates[60]
        baseline = forecaster.predict(series, anchor, [])

        rng = np.random.default_rng(3)
        perm = rng.permutation(series.manifest.size)
        entries = tuple(
            ManifestEntry(series.manifest.entries[src].name, series.manifest.entries[src].block, i)
            for i, src in enumerate(perm)
        )
        permuted_manifest = FeatureManifest(
            series.manifest.platforms, series.manifest.topics, series.manifest.extended, entries
        )
        permuted = FeatureSeries(
            permuted_manifest, series.dates, series.values[:, perm], series.missing
        )
        assert permuted_manifest.hash() != series.manifest.hash()
        assert forecaster.predict(permuted, anchor, []) == baseline

    def test_manifest_missing_trained_feature_is_a_mismatch(self, micro_dataset):
        from discoursecast.features.state import FeatureManifest, FeatureSeries, ManifestEntry
        from discoursecast.forecasting.windows import WindowError

        series, dataset = micro_dataset
        forecaster = train(dataset)
        dropped = forecaster.selected_names[0]
        entries = tuple(
            ManifestEntry(e.name if e.name != dropped else "renamed", e.block, e.offset)
            for e in series.manifest.entries
        )
        broken_manifest = FeatureManifest(
            series.manifest.platforms, series.manifest.topics, series.manifest.extended, entries
        )
        broken = FeatureSeries(broken_manifest, series.dates, series.values, series.missing)
        with pytest.raises(WindowError, match="mismatch"):
            forecaster.predict(broken, series.dates[60], [])

    def test_whatif_event_changes_forecast_only(self, micro_dataset):
        from discoursecast.features.events import KeyEvent

        series, dataset = micro_dataset
        forecaster = train(dataset)
        anchor = series.dates[60]
        baseline = forecaster.predict(series, anchor, [])
        event = KeyEvent(series.manifest.topics[0], anchor + timedelta(days=2), impact=1)
        whatif = forecaster.predict(series, anchor, [event])
        assert whatif != baseline  # decoder covariates differ
        # historical series untouched
        assert forecaster.predict(series, anchor, []) == baseline

    def test_gradients_flow_to_every_parameter(self, micro_dataset):
        """Every trainable parameter receives gradient from the mean NLL."""
        _, dataset = micro_dataset
        forecaster = train(dataset)
        module = forecaster.module
        module.train()
        ctx = torch.from_numpy(dataset.ctx[:4])
        cov = torch.from_numpy(dataset.fut_cov[:4])
        y = torch.from_numpy(dataset.fut_y[:4])
        module.zero_grad()
        loc, scale, df = module(ctx, cov)
        torch_nll(y, loc, scale, df).mean().backward()
        for name, p in module.named_parameters():
            assert p.grad is not None, name

    def test_model_parameter_gradcheck_on_micro_head(self, micro_dataset):
        """Autograd vs central differences through the full network for a
        sample of parameters."""
        _, dataset = micro_dataset
        forecaster = train(dataset)
        module = forecaster.module.eval()
        ctx = torch.from_numpy(dataset.ctx[:2])
        cov = torch.from_numpy(dataset.fut_cov[:2])
        y = torch.from_numpy(dataset.fut_y[:2])

        def loss_value():
            loc, scale, df = module(ctx, cov)
            return torch_nll(y, loc, scale, df).mean()

        loss = loss_value()
        grads = torch.autograd.grad(loss, list(module.parameters()))
        rng = np.random.default_rng(0)
        params = list(module.parameters())
        for _ in range(20):
            pi = int(rng.integers(len(params)))
            flat = params[pi].data.view(-1)
            gi = int(rng.integers(flat.numel()))
            h = 1e-5
            original = flat[gi].item()
            flat[gi] = original + h
            up = loss_value().item()
            flat[gi] = original - h
            down = loss_value().item()
            flat[gi] = original
            fd = (up - down) / (2 * h)
            analytic = grads[pi].view(-1)[gi].item()
            assert abs(analytic - fd) / max(abs(fd), 1e-6) <= 1e-4


class TestCheckpoint:
    def test_round_trip_bitexact_predictions(self, micro_dataset, tmp_path):
        series, dataset = micro_dataset
        forecaster = train(dataset)
        path = tmp_path / "model.ckpt"
        digest = ckpt.save(str(path), forecaster)
        loaded = ckpt.load(str(path))
        assert loaded.model_hash == digest
        anchor = series.dates[60]
        a = forecaster.predict(series, anchor, [])
        b = loaded.predict(series, anchor, [])
        assert a.targets == b.targets

    def test_serialize_deterministic(self, micro_dataset):
        _, dataset = micro_dataset
        forecaster = train(dataset)
        assert ckpt.serialize(forecaster) == ckpt.serialize(forecaster)

    def test_corrupt_magic_rejected(self, micro_dataset, tmp_path):
        _, dataset = micro_dataset
        forecaster = train(dataset)
        blob = bytearray(ckpt.serialize(forecaster))
        blob[0] ^= 0xFF
        with pytest.raises(ckpt.CheckpointError, match="magic"):
            ckpt.deserialize(bytes(blob))

    def test_truncated_blob_names_offset(self, micro_dataset):
        _, dataset = micro_dataset
        forecaster = train(dataset)
        blob = ckpt.serialize(forecaster)
        with pytest.raises(ckpt.CheckpointError, match="offset"):
            ckpt.deserialize(blob[: len(blob) - 100])
