"""Argument calculus: argument databases, argument networks and their applications."""

__version__ = "0.1.0"
