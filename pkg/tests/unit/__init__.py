"""Unit tests for fppnet."""
