"""Exact verification of left-symmetric superalgebra structures on Lie superalgebras."""

__version__ = "0.1.0"
