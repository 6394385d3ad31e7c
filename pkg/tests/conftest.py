"""Shared pytest configuration and fixtures."""
import os
from pathlib import Path

import numpy as np
import pytest
from dotenv import load_dotenv

from fppnet.config import ModelConfig
from fppnet.simulation import generate_dataset


# Load .env file
env_path = Path(__file__).parent.parent / ".env"
load_dotenv(env_path)

RUN_SLOW = os.getenv("FPPNET_RUN_SLOW", "").strip().lower() in ("1", "true", "yes")


@pytest.fixture(scope="session")
def run_slow():
    """Whether full-size statistical tests are enabled."""
    return RUN_SLOW


@pytest.fixture(scope="session")
def small_dataset():
    """Fixture: 256 simulated windows of length 20."""
    return generate_dataset(n_samples=256, seq_len=20, rng_seed=11)


@pytest.fixture
def tiny_config():
    """Fixture: a small LSTM configuration."""
    return ModelConfig(hidden_dim=4, fc_dim=6, seed=3)


@pytest.fixture
def rng():
    """Fixture: a seeded generator."""
    return np.random.default_rng(1234)


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "slow: full-size Monte Carlo or training run; set FPPNET_RUN_SLOW=1 to enable"
    )


@pytest.fixture(autouse=True)
def skip_if_not_slow(request, run_slow):
    """Auto-skip tests marked slow unless FPPNET_RUN_SLOW is set."""
    if request.node.get_closest_marker("slow"):
        if not run_slow:
            pytest.skip("slow test; set FPPNET_RUN_SLOW=1 to run")
