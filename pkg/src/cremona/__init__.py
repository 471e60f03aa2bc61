"""Birational maps of projective space over exact, float and p-adic fields."""

__version__ = "0.1.0"
