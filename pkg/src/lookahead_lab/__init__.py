"""k-lookahead outcomes for congestion games, solved in exact arithmetic."""

__version__ = "0.1.0"
