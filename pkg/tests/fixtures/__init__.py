"""Test fixtures and sample timestamp files."""
