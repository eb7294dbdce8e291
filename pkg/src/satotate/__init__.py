"""Desk-scale Sato-Tate experiments: Frobenius data of curves over Q, Haar
statistics of the compact groups that should govern them, and the
diagnostics, Euler products and density scans that compare the two."""

__version__ = "0.1.0"
