"""Numerical core of hawkes-mml."""
