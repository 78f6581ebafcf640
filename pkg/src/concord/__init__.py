"""Configurable graph code representations from a small DSL."""

__version__ = "0.1.0"
