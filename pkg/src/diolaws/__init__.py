"""Limit laws for Diophantine and cotangent sums over n*alpha."""

__version__ = "0.1.0"
