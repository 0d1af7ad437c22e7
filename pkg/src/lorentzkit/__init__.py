"""Verification toolkit for isometric Lie group actions on model Lorentz spaces."""

__version__ = "0.1.0"
