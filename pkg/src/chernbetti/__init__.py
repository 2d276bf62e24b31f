"""Exact Chern-number, Hodge/Betti and Hilbert-scheme computations."""

__version__ = "0.1.0"
