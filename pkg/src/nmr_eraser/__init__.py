"""Desk-scale simulation of a three-spin NMR disentanglement eraser."""

__version__ = "0.1.0"
