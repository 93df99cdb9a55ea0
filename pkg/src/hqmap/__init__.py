"""Hierarchical mapping of modular quantum programs onto a bus architecture."""

__version__ = "0.1.0"
