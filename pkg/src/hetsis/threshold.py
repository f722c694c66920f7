"""Critical-threshold characterization for heterogeneous SIS spreading.

The endemic/extinct boundary is the surface where the spectral radius of
diag(sqrt tau) A diag(sqrt tau) equals one.  This module classifies
configurations against that surface, scales rate vectors onto it, checks
a ledger of spectral bounds, and solves the complete-graph case through
its secular equation instead of a dense eigendecomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NumericalError
from .graphs import Graph, RateConfig, walk_counts
from .spectral import dominant_eigenpair, effective_adjacency

__all__ = [
    "ThresholdReport",
    "classify",
    "critical_scaling",
    "verify_bounds",
    "complete_graph_lambda_max",
    "complete_graph_critical_sum",
    "critical_perturbation",
]

CRITICAL_BAND = 1e-9


@dataclass(frozen=True)
class ThresholdReport:
    lambda_max_R: float
    regime: str
    tau_min: float
    tau_max: float
    bound_ledger: dict = field(repr=False)


def _regime(lam: float) -> str:
    if abs(lam - 1.0) <= CRITICAL_BAND:
        return "critical"
    return "infected" if lam > 1.0 else "not_infected"


def classify(g: Graph, rates: RateConfig) -> ThresholdReport:
    """Place a rate configuration relative to the critical surface."""
    lam, _ = dominant_eigenpair(effective_adjacency(g, rates.tau))
    return ThresholdReport(
        lambda_max_R=lam,
        regime=_regime(lam),
        tau_min=float(rates.tau.min()),
        tau_max=float(rates.tau.max()),
        bound_ledger=_ledger(g, rates.tau, lam),
    )


def critical_scaling(g: Graph, tau_direction: np.ndarray, tol: float = 1e-10) -> float:
    """Scale factor s* putting s * tau_direction exactly on the surface.

    Found by bisection on the spectral radius of the scaled coupling; the
    radius is linear in a global scaling, so the result must agree with
    1 / radius(direction), which is asserted before returning.
    """
    tau0 = np.asarray(tau_direction, dtype=float)
    if tau0.shape != (g.n,):
        raise InputError(f"direction must have length {g.n}", code="length-mismatch")
    if np.any(tau0 <= 0) or not np.all(np.isfinite(tau0)):
        raise InputError("direction must be strictly positive and finite", code="invalid-rates")

    lam0, _ = dominant_eigenpair(effective_adjacency(g, tau0))

    def excess(s: float) -> float:
        lam, _ = dominant_eigenpair(effective_adjacency(g, s * tau0))
        return lam - 1.0

    lo, hi = 0.5 / lam0, 2.0 / lam0
    f_lo, f_hi = excess(lo), excess(hi)
    if f_lo > 0 or f_hi < 0:
        raise NumericalError("critical scaling bracket failed", code="no-convergence")
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if excess(mid) < 0:
            lo = mid
        else:
            hi = mid
    s_star = 0.5 * (lo + hi)
    if abs(s_star - 1.0 / lam0) > 1e-8 * max(1.0, 1.0 / lam0):
        raise NumericalError("bisection disagrees with scale linearity", code="no-convergence")
    return s_star


def _ledger(g: Graph, tau: np.ndarray, lam: float) -> dict:
    """Bound ledger: every entry states lhs <= rhs with both sides computed
    through routes independent of the eigensolver where possible."""
    d = g.degrees.astype(float)
    n3_total, n3_closed = walk_counts(g)
    lam_adj, _ = dominant_eigenpair(g.adjacency)
    tau_min, tau_max = float(tau.min()), float(tau.max())

    entries = {
        "spectral_lower": (lam_adj * tau_min, lam),
        "spectral_upper": (lam, lam_adj * tau_max),
        "harmonic_walk_lower": (2.0 * g.link_count / float(np.sum(1.0 / tau)), lam),
        "degree_walk_lower": (n3_total / float(np.sum(d * d / tau)), lam),
        "closed_walk_lower": (n3_closed / float(np.sum(d / tau)), lam),
    }
    if abs(lam - 1.0) <= CRITICAL_BAND:
        entries.update(
            {
                "critical_tau_lower": (tau_min, 1.0 / lam_adj),
                "critical_tau_upper": (1.0 / lam_adj, tau_max),
                "critical_degree_walk": (n3_total, float(np.sum(d * d / tau))),
                "critical_closed_walk": (n3_closed, float(np.sum(d / tau))),
                "critical_inverse_tau_mean": (2.0 * g.link_count / g.n, float(np.mean(1.0 / tau))),
            }
        )
    ledger = {}
    for name, (lhs, rhs) in entries.items():
        slack = 1e-9 * max(1.0, abs(lhs), abs(rhs))
        ledger[name] = {"lhs": lhs, "rhs": rhs, "satisfied": bool(lhs <= rhs + slack)}
    return ledger


def verify_bounds(g: Graph, rates: RateConfig) -> dict:
    """Standalone bound ledger for a rate configuration."""
    lam, _ = dominant_eigenpair(effective_adjacency(g, rates.tau))
    return _ledger(g, rates.tau, lam)


def _check_tau_vector(tau) -> np.ndarray:
    tau = np.asarray(tau, dtype=float)
    if tau.ndim != 1 or tau.size < 2:
        raise InputError("tau must be a vector with at least two entries", code="length-mismatch")
    if np.any(tau <= 0) or not np.all(np.isfinite(tau)):
        raise InputError("tau must be strictly positive and finite", code="invalid-rates")
    return tau


def complete_graph_lambda_max(tau, tol: float = 1e-12) -> float:
    """Spectral radius of the complete-graph coupling matrix from its
    secular equation sum_j 1/(tau_j + x) = (n-1)/x.

    The root is bracketed in (0, sum tau - tau_min]; the upper end is
    attained exactly in the homogeneous case.
    """
    tau = _check_tau_vector(tau)
    n = tau.size

    def g_fn(x: float) -> float:
        return x * float(np.sum(1.0 / (tau + x))) - (n - 1.0)

    hi = float(tau.sum() - tau.min())
    if g_fn(hi) <= 0.0:
        return hi
    lo = 0.0
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if g_fn(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def complete_graph_critical_sum(tau) -> tuple[float, bool]:
    """Critical-surface functional sum_j 1/(tau_j + 1) and whether the
    configuration sits on the surface (value n-1 within 1e-9)."""
    tau = _check_tau_vector(tau)
    total = float(np.sum(1.0 / (tau + 1.0)))
    return total, bool(abs(total - (tau.size - 1.0)) <= 1e-9)


def critical_perturbation(h2: float, n: int) -> float:
    """Companion perturbation h1 keeping an (h1, h2, 0, ...) disturbed
    homogeneous complete-graph configuration on the critical surface:
    h1 = -h2 / (1 + 2 ((n-1)/n) h2)."""
    if n < 2:
        raise InputError("n must be at least 2", code="invalid-argument")
    if not np.isfinite(h2):
        raise InputError("h2 must be finite", code="invalid-argument")
    denom = 1.0 + 2.0 * ((n - 1.0) / n) * h2
    if abs(denom) < 1e-12:
        raise InputError("perturbation pole", code="perturbation-pole")
    return -h2 / denom
