"""Utility functions for hawkes-mml."""
