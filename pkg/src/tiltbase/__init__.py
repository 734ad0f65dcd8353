"""Exact verification of tilting-module base change over finite-rank integer algebras."""

__version__ = "0.1.0"
