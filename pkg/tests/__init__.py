"""Test narmabench."""
