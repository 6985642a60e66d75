"""Calabi-Yau links from weight systems: Groebner engine, invariants, surrogates."""

__version__ = "0.1.0"
