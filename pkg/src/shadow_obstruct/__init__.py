"""Exact positivity certificates for sparse polynomials with rational exponents."""

__version__ = "0.1.0"
