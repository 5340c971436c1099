"""Dimensional reduction of dilute trapped Bose gases to the Lieb-Liniger model."""

__version__ = "0.1.0"
