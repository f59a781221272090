"""Probabilistic models of the distribution of primes, checked against exact counts."""

__version__ = "0.1.0"
