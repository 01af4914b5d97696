"""Numerical toolkit for polar-map domains of pseudo-Riemannian symmetric spaces."""

__version__ = "0.1.0"
