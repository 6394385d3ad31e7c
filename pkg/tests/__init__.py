"""Tests for fppnet."""
