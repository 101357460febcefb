"""Fair connected districting: data model, solvers, generators, oracle, CLI."""

from .core import (ColorVector, ColoredGraph, Districting, Instance,
                   VerificationResult, color_vector, connected_components,
                   mov, verify_districting)
from .budget import Budget, BudgetExceededError

__all__ = [
    "ColorVector", "ColoredGraph", "Districting", "Instance",
    "VerificationResult", "color_vector", "connected_components", "mov",
    "verify_districting", "Budget", "BudgetExceededError",
]

__version__ = "0.1.0"
