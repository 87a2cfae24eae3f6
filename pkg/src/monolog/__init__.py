"""Natural language inference by monotonicity-guided beam search over sentence rewrites."""

__version__ = "0.1.0"
