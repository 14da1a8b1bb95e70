"""Verification workbench for enhanced ADHM representations of type (1, c, 1)."""

__version__ = "0.1.0"
