"""Certificates of maximal adelic and l-adic Galois images for elliptic curves over cubic fields."""

__version__ = "0.1.0"
