"""Utility modules for fppnet."""

from .io import read_json, write_json_atomic
from .logging import configure_logging, default_level, get_logger, set_log_level
from .rng import derive_seed, make_generator, open_uniform, row_generators

__all__ = [
    "get_logger",
    "configure_logging",
    "default_level",
    "set_log_level",
    "derive_seed",
    "make_generator",
    "open_uniform",
    "row_generators",
    "read_json",
    "write_json_atomic",
]
