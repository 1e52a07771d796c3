"""Constraint-ordering toolkit for truth-table invariant CAD built by constraint."""

__version__ = "0.1.0"
