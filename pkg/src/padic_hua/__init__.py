"""Exact laws, samplers and verification experiments for the singular
numbers of random p-adic matrices."""

__version__ = "0.1.0"
