"""Unit tests for seeding, file and logging helpers."""
import json
import logging

import numpy as np
import pytest

from fppnet.utils import (
    configure_logging,
    default_level,
    derive_seed,
    get_logger,
    make_generator,
    read_json,
    row_generators,
    set_log_level,
    write_json_atomic,
)


class TestSeeds:
    """Test seed derivation."""

    def test_derive_seed(self):
        """Test keyed children are stable and distinct."""
        assert derive_seed(7, "split") == derive_seed(7, "split")
        assert derive_seed(7, "split") != derive_seed(7, "init")
        assert derive_seed(7, "epoch", 1) != derive_seed(7, "epoch", 2)
        assert derive_seed(7, "split") != derive_seed(8, "split")

    def test_row_generators(self):
        """Test row i has the same stream whatever the row count."""
        few = [g.random() for g in row_generators(3, 2)]
        many = [g.random() for g in row_generators(3, 5)]
        assert few == many[:2]
        assert len(set(many)) == 5

    def test_make_generator(self):
        """Test int and SeedSequence seeds give PCG64 streams."""
        a = make_generator(5).random(3)
        b = make_generator(np.random.SeedSequence(5)).random(3)
        np.testing.assert_array_equal(a, b)


class TestJsonFiles:
    """Test JSON helpers."""

    def test_round_trip(self, tmp_path):
        """Test atomic writes create parents and leave no temp files."""
        path = write_json_atomic(tmp_path / "a" / "b.json", {"x": 1.5, "name": "μ"})
        assert read_json(path) == {"x": 1.5, "name": "μ"}
        assert path.read_text(encoding="utf-8").endswith("\n")
        assert [p.name for p in path.parent.iterdir()] == ["b.json"]

    def test_missing(self, tmp_path):
        """Test reading a missing file."""
        with pytest.raises(FileNotFoundError):
            read_json(tmp_path / "none.json")


class TestLogging:
    """Test logging configuration."""

    @pytest.fixture(autouse=True)
    def reset(self):
        yield
        configure_logging(level="WARNING")

    def test_default_level(self, monkeypatch):
        """Test the level comes from FPPNET_LOG_LEVEL when valid."""
        monkeypatch.setenv("FPPNET_LOG_LEVEL", "debug")
        assert default_level() == "DEBUG"
        monkeypatch.setenv("FPPNET_LOG_LEVEL", "chatty")
        assert default_level() == "WARNING"

    def test_file_gets_json_lines(self, tmp_path):
        """Test events land in the file as JSON with their context."""
        path = tmp_path / "run.log"
        configure_logging(level="INFO", output_file=str(path))
        get_logger("fppnet.test").info("dataset_generated", n_samples=3)
        record = json.loads(path.read_text(encoding="utf-8").strip().splitlines()[-1])
        assert record["event"] == "dataset_generated"
        assert record["n_samples"] == 3
        assert record["level"] == "info"

    def test_set_log_level(self, tmp_path):
        """Test the level can be raised at runtime."""
        path = tmp_path / "run.log"
        configure_logging(level="INFO", output_file=str(path))
        set_log_level("ERROR")
        assert logging.getLogger().level == logging.ERROR
        get_logger("fppnet.test").warning("ignored_event")
        assert "ignored_event" not in path.read_text(encoding="utf-8")
