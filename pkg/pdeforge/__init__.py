"""Exact algebra for partial differential encodings of Boolean functions."""

__version__ = "1.0.0"
