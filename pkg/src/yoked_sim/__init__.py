"""Simulation and planning toolkit for yoked surface-code memories."""

__version__ = "0.1.0"
