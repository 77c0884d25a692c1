"""Exact toolkit for clique numbers of Paley graphs over F_{p^r}."""

__version__ = "0.1.0"
