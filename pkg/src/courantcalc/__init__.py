"""Exact symbolic calculus for Courant algebroids over polynomial base rings.

Everything is computed over the rationals; every check in the package is an
identical-polynomial identity, never a numerical approximation.
"""

__version__ = "0.1.0"
