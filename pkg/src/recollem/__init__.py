"""Exact verification of recollements of functor categories over finite linear categories."""

__version__ = "0.1.0"
