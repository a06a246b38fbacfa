"""Exact and numerical verification tools for quantized flag manifolds."""

from .rootsys import ConfigurationError, build_root_system
from .uqmod import DomainError

__all__ = ["ConfigurationError", "DomainError", "build_root_system"]
