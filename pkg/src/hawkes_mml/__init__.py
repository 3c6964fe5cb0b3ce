"""hawkes-mml - Granger causal inference in exp-kernel Hawkes processes by MML."""

__version__ = "0.1.0"
