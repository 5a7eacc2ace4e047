"""Thermodynamic Pauli problem: truncated tropical and subtropical solvers,
fluctuation statistics and abstract thermodynamic systems."""

__version__ = "0.1.0"
