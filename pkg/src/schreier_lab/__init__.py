"""Schreier families, combinatorial norms and Szlenk index bounds in exact arithmetic."""

__version__ = "0.1.0"
