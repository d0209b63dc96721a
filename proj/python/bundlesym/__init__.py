"""Gauge automorphisms of principal bundles and the canonical forms they induce on T*P."""

from ._core import (
    BundlesymError,
    adjoint_matrix,
    bracket,
    check,
    exp,
    group_dim,
    info,
    log,
    reduce,
    simulate,
    structure_constant,
    suite_names,
    trajectory,
)

__all__ = [
    "BundlesymError",
    "adjoint_matrix",
    "bracket",
    "check",
    "exp",
    "group_dim",
    "info",
    "log",
    "reduce",
    "simulate",
    "structure_constant",
    "suite_names",
    "trajectory",
]
