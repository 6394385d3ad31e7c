"""Gradient audit: analytic BPTT against central finite differences."""
import importlib

import numpy as np
import pytest

from fppnet.config import InputActivation, ModelConfig
from fppnet.neural import PARAM_NAMES, GradCheckReport, LstmWeights, gradient_check, init_weights
from fppnet.utils.rng import make_generator


def _case(seed):
    """Random small architecture, inputs and targets."""
    rng = make_generator(seed)
    config = ModelConfig(
        hidden_dim=int(rng.integers(2, 5)),
        fc_dim=int(rng.integers(2, 6)),
        input_activation=InputActivation.NONE,
        log_inputs=bool(rng.integers(0, 2)),
        seed=seed,
    )
    batch = int(rng.integers(1, 4))
    windows = rng.exponential(size=(batch, 5))
    labels = np.column_stack([rng.uniform(0.3, 1.5, batch), rng.uniform(0.1, 0.9, batch)])
    return config, windows, labels


class TestGradientCheck:
    """Test gradient_check."""

    @pytest.mark.parametrize("seed", range(20))
    def test_random_configurations(self, seed):
        """Test every coordinate agrees to 1e-4 relative error."""
        config, windows, labels = _case(seed)
        report = gradient_check(
            init_weights(config), config, windows, labels, coords_per_param=None, abs_floor=1e-5
        )
        assert isinstance(report, GradCheckReport)
        assert report.n_checked > 0
        assert report.passed, report.per_param
        assert report.max_rel_error < 1e-4

    def test_relu_input_activation(self, rng):
        """Test the default ReLU input path on positive data."""
        config = ModelConfig(hidden_dim=3, fc_dim=4, seed=2)
        windows = rng.exponential(size=(2, 6))
        labels = np.array([[1.0, 0.4], [1.2, 0.7]])
        report = gradient_check(init_weights(config), config, windows, labels, coords_per_param=4, abs_floor=1e-5)
        assert report.passed

    def test_long_sequence_fixed_point(self):
        """Test gradients through 15 steps at a fixed hidden_dim = 2 point."""
        config = ModelConfig(hidden_dim=2, fc_dim=3, input_activation=InputActivation.NONE, log_inputs=True, seed=7)
        gen = make_generator(41)
        windows = gen.exponential(size=(3, 15))
        labels = np.array([[0.8, 0.3], [1.4, 0.6], [2.0, 0.9]])
        report = gradient_check(
            init_weights(config), config, windows, labels, coords_per_param=None, abs_floor=1e-5
        )
        assert report.n_checked + report.n_skipped == init_weights(config).n_params
        assert report.passed, report.per_param

    def test_sampled_coordinates(self, rng):
        """Test coords_per_param bounds the work per tensor."""
        config = ModelConfig(hidden_dim=3, fc_dim=4, input_activation=InputActivation.NONE)
        windows = rng.exponential(size=(2, 5))
        labels = np.array([[1.0, 0.4], [3.0, 0.7]])
        report = gradient_check(init_weights(config), config, windows, labels, coords_per_param=2)
        assert report.n_checked + report.n_skipped == 2 * len(PARAM_NAMES)
        assert set(report.per_param) == set(PARAM_NAMES)

    def test_detects_wrong_gradient(self, monkeypatch, rng):
        """Test a corrupted backward pass fails the audit."""
        module = importlib.import_module("fppnet.neural.gradcheck")
        original = module.backward

        def skewed(*args, **kwargs):
            grads = original(*args, **kwargs)
            return LstmWeights.from_dict({n: 1.1 * getattr(grads, n) for n in PARAM_NAMES}, validate=False)

        monkeypatch.setattr(module, "backward", skewed)
        config = ModelConfig(hidden_dim=3, fc_dim=4, input_activation=InputActivation.NONE)
        windows = rng.exponential(size=(2, 5))
        labels = np.array([[1.0, 0.4], [3.0, 0.7]])
        report = gradient_check(init_weights(config), config, windows, labels, coords_per_param=None)
        assert not report.passed
        assert report.max_rel_error > 0.05
