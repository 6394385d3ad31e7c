"""Integration tests for fppnet."""
