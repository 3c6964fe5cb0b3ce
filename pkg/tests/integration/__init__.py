"""Integration tests for hawkes-mml."""
