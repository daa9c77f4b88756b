"""Capture numbers of linear/quadratic form pairs in finite fields."""

__version__ = "0.1.0"
