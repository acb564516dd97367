"""Interference-aware radar scan scheduling for two-cell ISAC networks."""

__version__ = "0.1.0"
