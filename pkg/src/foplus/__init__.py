"""Monotone regular languages, positive first-order logic, and EF+ games."""

__version__ = "0.1.0"
