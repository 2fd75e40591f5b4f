"""Exact computations around differential operators on the circle."""

__version__ = "0.1.0"
