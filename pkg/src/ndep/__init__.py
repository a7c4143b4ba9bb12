"""Executable checks for n-dependence: Artin-Schreier isomorphisms, valuations, finite combinatorics."""

__version__ = "0.1.0"
