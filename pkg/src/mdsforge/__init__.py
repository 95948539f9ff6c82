"""Exact small-field tools for MDS codes, arcs, code extension, Rédei sets and nets."""

__version__ = "0.1.0"
