"""Unit tests for the training loop."""
import importlib

import numpy as np
import pytest

from fppnet.config import ModelConfig, TrainSpec
from fppnet.errors import ConfigError, NumericalError
from fppnet.experiments import LossCurves, held_out_set, split_dataset, train, train_test_sets
from fppnet.simulation import generate_dataset, save_dataset


class TestSplit:
    """Test split_dataset."""

    def test_partitions(self):
        """Test fit, validation and test rows are disjoint and cover all rows."""
        split = split_dataset(100, 0.8, 0.1, seed=3)
        assert len(split.test) == 20
        assert len(split.val) == 8
        assert len(split.fit) == 72
        rows = np.concatenate([split.fit, split.val, split.test])
        np.testing.assert_array_equal(np.sort(rows), np.arange(100))
        np.testing.assert_array_equal(split.train, np.sort(np.concatenate([split.fit, split.val])))

    def test_deterministic(self):
        """Test the seed fixes the split."""
        a = split_dataset(50, 0.7, 0.0, seed=1)
        b = split_dataset(50, 0.7, 0.0, seed=1)
        c = split_dataset(50, 0.7, 0.0, seed=2)
        np.testing.assert_array_equal(a.test, b.test)
        assert not np.array_equal(a.test, c.test)
        assert len(a.val) == 0

    @pytest.mark.parametrize("n_rows,split_fraction,val_fraction", [(1, 0.8, 0.0), (10, 0.05, 0.0), (3, 0.5, 0.9)])
    def test_empty_partition(self, n_rows, split_fraction, val_fraction):
        """Test splits leaving a partition empty raise ConfigError."""
        with pytest.raises(ConfigError):
            split_dataset(n_rows, split_fraction, val_fraction, seed=0)


class TestLossCurves:
    """Test LossCurves."""

    def test_best_epoch(self):
        """Test the best epoch is 1-based and the first minimum wins."""
        curves = LossCurves(train_loss=[3.0, 2.0, 1.0, 0.5], val_loss=[3.0, 1.0, 1.0, 2.0])
        assert curves.epochs == 4
        assert curves.best_epoch == 2
        assert curves.best_val_loss == 1.0


class TestTrain:
    """Test train."""

    @pytest.fixture
    def spec(self):
        return TrainSpec(epochs=3, batch_size=32, lr=5e-3, shuffle_seed=4, val_fraction=0.1)

    def test_curves_and_split(self, small_dataset, tiny_config, spec):
        """Test one curve entry per epoch and a held-out test split."""
        result = train(spec, tiny_config, small_dataset)
        assert result.curves.epochs == 3
        assert len(result.curves.val_loss) == 3
        assert 1 <= result.curves.best_epoch <= 3
        assert result.optimizer.step_count == 3 * int(np.ceil(len(result.split.fit) / 32))
        assert len(held_out_set(small_dataset, result)) == 256 - 204
        assert result.wall_clock_train >= 0.0

    def test_deterministic(self, small_dataset, tiny_config, spec):
        """Test identical seeds give identical weights."""
        a = train(spec, tiny_config, small_dataset)
        b = train(spec, tiny_config, small_dataset)
        np.testing.assert_array_equal(a.model.weights.W_hg, b.model.weights.W_hg)
        assert a.curves.train_loss == b.curves.train_loss

    def test_threads(self, small_dataset, tiny_config, spec):
        """Test sharded gradients track the serial run closely."""
        serial = train(spec, tiny_config, small_dataset)
        threaded = train(spec.model_copy(update={"threads": 3}), tiny_config, small_dataset)
        np.testing.assert_allclose(threaded.curves.train_loss, serial.curves.train_loss, rtol=1e-6)

    def test_best_model_tracks_validation(self, small_dataset, tiny_config):
        """Test best_model predicts with the weights of the best epoch."""
        spec = TrainSpec(epochs=4, batch_size=64, lr=1e-2, val_fraction=0.2)
        result = train(spec, tiny_config, small_dataset)
        val_x = small_dataset.windows[result.split.val]
        val_y = small_dataset.labels[result.split.val]
        best_mse = float(np.mean((result.best_model.predict(val_x) - val_y) ** 2))
        assert best_mse == pytest.approx(result.curves.best_val_loss, rel=1e-12)

    def test_no_validation_rows(self, small_dataset, tiny_config):
        """Test val_loss falls back to the training loss."""
        result = train(TrainSpec(epochs=2, val_fraction=0.0), tiny_config, small_dataset)
        assert result.curves.val_loss == result.curves.train_loss

    def test_dataset_from_spec(self, small_dataset, tiny_config, tmp_path):
        """Test spec.dataset is loaded when no dataset is passed."""
        save_dataset(small_dataset, tmp_path / "dataset")
        result = train(TrainSpec(dataset=tmp_path / "dataset.bin", epochs=1), tiny_config)
        assert result.curves.epochs == 1

    def test_requires_dataset(self, tiny_config):
        """Test training without any dataset raises ConfigError."""
        with pytest.raises(ConfigError):
            train(TrainSpec(epochs=1), tiny_config)

    def test_divergence(self, small_dataset, tiny_config, monkeypatch):
        """Test a non-finite loss stops training with diagnostics."""
        module = importlib.import_module("fppnet.experiments.training")
        original = module.loss_and_grads

        def exploding(*args, **kwargs):
            _, grads = original(*args, **kwargs)
            return float("nan"), grads

        monkeypatch.setattr(module, "loss_and_grads", exploding)
        with pytest.raises(NumericalError) as exc_info:
            train(TrainSpec(epochs=2), tiny_config, small_dataset)
        assert exc_info.value.diagnostics["epoch"] == 1
        assert exc_info.value.diagnostics["batch"] == 0

    def test_train_test_sets(self, small_dataset, tiny_config):
        """Test the train subset includes validation rows and excludes test rows."""
        result = train(TrainSpec(epochs=1), tiny_config, small_dataset)
        train_set, test_set = train_test_sets(small_dataset, result.split)
        assert len(train_set) + len(test_set) == 256

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
    def test_loss_decreases(self, seed):
        """Test 200 full-batch Adam steps at least halve the training loss."""
        # Adam moves a weight by at most lr per step, so lr = 1e-3 caps travel at 0.2
        dataset = generate_dataset(n_samples=512, seq_len=20, rng_seed=seed)
        spec = TrainSpec(epochs=200, batch_size=512, lr=1e-2, val_fraction=0.0, shuffle_seed=seed)
        result = train(spec, ModelConfig(seed=seed), dataset)
        assert result.curves.train_loss[-1] < 0.5 * result.curves.train_loss[0]
