"""Numerical laboratory for nonlinear quantum dynamics and the linearity of state maps."""

__version__ = "0.1.0"
