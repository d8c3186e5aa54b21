"""Exact calculus and certified construction plans for prioritary bundles on ruled surfaces."""

__version__ = "0.1.0"
