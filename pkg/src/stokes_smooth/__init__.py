"""Hyperterminants, the Gaussian-convolved erfc, and smoothed Stokes phenomena."""

from .precision import CTX_DOUBLE, CTX_EXTENDED, Context, get_context

__all__ = ["CTX_DOUBLE", "CTX_EXTENDED", "Context", "get_context"]
__version__ = "0.1.0"
