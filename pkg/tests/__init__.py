"""hawkes-mml test suite."""
