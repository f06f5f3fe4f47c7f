"""Exact-arithmetic construction and verification of two orbit-space
Hamiltonians built on the F4 root system."""

__version__ = "0.1.0"
