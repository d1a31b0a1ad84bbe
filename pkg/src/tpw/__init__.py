"""Twisted Poisson structures, their cotangent algebroid and its path-space integration."""

__version__ = "0.1.0"
