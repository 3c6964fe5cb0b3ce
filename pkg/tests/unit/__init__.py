"""Unit tests for hawkes-mml."""
