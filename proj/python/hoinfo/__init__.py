"""Higher-order information analysis on a Gaussian copula."""

import json

from ._hoinfo import (
    HoinfoError,
    conditional_correlation,
    copula_scores,
    omega_analytic,
    partial_correlations,
    solve_ecov,
    triplet_omega,
)
from ._hoinfo import analyze as _analyze
from ._hoinfo import generate as _generate

__all__ = [
    "HoinfoError",
    "analyze",
    "conditional_correlation",
    "copula_scores",
    "generate",
    "omega_analytic",
    "partial_correlations",
    "solve_ecov",
    "triplet_omega",
]


def analyze(values, names=None, **options):
    """Scan, bootstrap and prune. Hypergraphs come back as parsed JSON."""
    out = _analyze(values, names, **options)
    out["redundancy"] = json.loads(out["redundancy"])
    out["synergy"] = json.loads(out["synergy"])
    return out


def generate(preset, omega, n=5000, seed=0):
    """Sample a preset layout. Returns (values, names, truth)."""
    values, names, truth = _generate(preset, omega, n, seed)
    return values, names, json.loads(truth)
