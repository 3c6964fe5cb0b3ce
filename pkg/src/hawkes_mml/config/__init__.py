"""Configuration module for hawkes-mml."""
