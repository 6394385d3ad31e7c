"""Unit tests for the sampling-distribution study and window tracking."""
import numpy as np
import pytest

from fppnet.config import FppParams, SamplerKind
from fppnet.experiments import (
    SamplingStudy,
    Trajectory,
    sampling_distribution_study,
    simulate_windows,
    summarise,
    track_windows,
)
from fppnet.simulation import LabeledDataset


class ConstantPredictor:
    """Predicts the same (mu, beta) for every window."""

    def __init__(self, mu=2.0, beta=0.5):
        self.value = np.array([mu, beta])

    def predict(self, windows):
        return np.tile(self.value, (len(windows), 1))


class TestSummarise:
    """Test summarise."""

    def test_statistics(self):
        """Test mean, sd (ddof=1) and median per column."""
        s = summarise(np.array([[1.0, 0.2], [2.0, 0.4], [6.0, 0.9]]))
        assert s.n_used == 3
        assert s.mean_mu == pytest.approx(3.0)
        assert s.median_beta == pytest.approx(0.4)
        assert s.sd_mu == pytest.approx(np.std([1.0, 2.0, 6.0], ddof=1))

    def test_small_inputs(self):
        """Test one row has no sd and no rows has no statistics."""
        one = summarise(np.array([[1.0, 0.5]]))
        assert one.sd_mu is None and one.mean_mu == 1.0
        assert summarise(np.empty((0, 2))).mean_beta is None


class TestSamplingStudy:
    """Test sampling_distribution_study."""

    def test_simulate_windows(self):
        """Test path i depends only on the seed and its index."""
        params = FppParams(mu=1.0, beta=0.6)
        a = simulate_windows(params, 5, 8, rng_seed=2)
        b = simulate_windows(params, 9, 8, rng_seed=2)
        assert a.shape == (5, 8)
        np.testing.assert_array_equal(a, b[:5])

    def test_reproduces_dispersion(self):
        """Test MOM at (mu=2.622, beta=0.520) over 1000 windows of 30.

        The Kanter sampler centres beta_hat near the true 0.52 with a
        dispersion of about 0.086.
        """
        study = sampling_distribution_study(FppParams(mu=2.622, beta=0.520), n_paths=1000, seq_len=30, rng_seed=0)
        assert isinstance(study, SamplingStudy)
        assert study.mom.n_used + sum(study.mom_invalid.values()) == 1000
        assert abs(study.mom.mean_beta - 0.52) < 0.04
        assert 0.05 <= study.mom.sd_beta <= 0.13
        assert 2.0 <= study.mom.median_mu <= 3.4
        assert study.lstm is None

    def test_with_model(self):
        """Test a predictor gets its own summary on the same windows."""
        study = sampling_distribution_study(
            FppParams(mu=1.0, beta=0.5), n_paths=50, seq_len=10, model=ConstantPredictor(3.0, 0.4)
        )
        assert study.lstm.mean_mu == pytest.approx(3.0)
        assert study.lstm.sd_beta == pytest.approx(0.0)

    def test_sampler_recorded(self):
        """Test the sampler variant is part of the result."""
        study = sampling_distribution_study(
            FppParams(mu=1.0, beta=0.5), n_paths=20, seq_len=10, sampler=SamplerKind.PRINTED_EXPONENT
        )
        assert study.sampler == "printed_exponent"


class TestTrackWindows:
    """Test track_windows."""

    @pytest.fixture
    def labeled(self, rng):
        labels = np.column_stack([rng.uniform(1.0, 3.0, 40), rng.uniform(0.3, 0.7, 40)])
        return LabeledDataset(windows=rng.exponential(size=(40, 6)), labels=labels, seq_len=6)

    def test_frame(self, labeled):
        """Test one row per window with labels and predictions."""
        traj = track_windows(ConstantPredictor(), labeled)
        assert isinstance(traj, Trajectory)
        assert list(traj.frame.columns) == Trajectory.COLUMNS
        assert len(traj.frame) == 40
        np.testing.assert_array_equal(traj.frame["mu_mom"], labeled.labels[:, 0])
        assert (traj.frame["beta_lstm"] == 0.5).all()

    def test_summary_passes_at_median(self, labeled):
        """Test predicting the label medians passes the IQR criterion."""
        med = np.median(labeled.labels, axis=0)
        traj = track_windows(ConstantPredictor(*med), labeled)
        assert traj.summary.passed
        assert traj.summary.mad_mu < traj.summary.iqr_mu

    def test_summary_fails_far_off(self, labeled):
        """Test predictions far from the labels fail."""
        traj = track_windows(ConstantPredictor(50.0, 0.99), labeled)
        assert not traj.summary.passed
