"""Numerical checks for locality of form factor families in integrable models."""

__version__ = "0.1.0"
