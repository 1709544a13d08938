"""Zero-dimensional Abelian integrals of polynomials."""

__version__ = "0.1.0"
