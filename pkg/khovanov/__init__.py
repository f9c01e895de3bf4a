"""Generalized Khovanov homology: even, odd and unified specializations from PD codes."""

__version__ = "0.3.0"
