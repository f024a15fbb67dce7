"""Integration tests for park-sim."""
