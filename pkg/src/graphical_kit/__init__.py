"""Combinatorics of the graphical category: elementary maps, relations,
normal forms, and Segal / inner Kan checks for finite graphical sets."""

__version__ = "0.1.0"
