"""Heisenberg -> Hubbard -> Gaussian-basis electronic structure, checked numerically."""

__version__ = "0.1.0"
