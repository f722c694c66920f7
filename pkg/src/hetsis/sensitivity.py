"""Sensitivity of the endemic steady state to curing rates.

Differentiating the fixed-point equations in the curing rate delta_i
yields linear systems in the matrix

    S = diag(delta_j / (1 - v_j)^2) - A diag(beta_j),

which is similar to a symmetric positive definite matrix at every
endemic state.  First and second derivative solves, a Schur-complement
route to the own-rate derivative through the node-deleted graph, a
curvature diagnostic matrix, convexity verdicts over curing-rate sweeps,
and an optimal protection-cost trade-off all live here, together with a
ledger of identities and inequalities satisfied by S^{-1}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NumericalError
from .graphs import Graph, RateConfig
from .spectral import full_spectrum, generalized_laplacian
from .steady_state import SteadyState, solve

__all__ = [
    "SensitivityReport",
    "sensitivity_matrix",
    "first_derivatives",
    "second_derivatives",
    "curvature_matrix",
    "schur_derivative",
    "optimal_curing_rate",
    "convexity_verdicts",
    "inverse_checks",
    "full_report",
]

_COND_LIMIT = 1e12
_DEADBAND = 1e-8


def _require_endemic(ss: SteadyState) -> None:
    if ss.regime != "endemic":
        raise InputError("sensitivity requires an endemic steady state", code="requires-endemic")


def _require_tied(rates: RateConfig) -> None:
    d = rates.delta
    if float(np.abs(d - d[0]).max()) > 1e-12 * float(d.max()):
        raise InputError("tied mode requires homogeneous curing rates", code="tied-requires-homogeneous-delta")


def sensitivity_matrix(g: Graph, rates: RateConfig, ss: SteadyState) -> np.ndarray:
    """Build S and validate its structure at an endemic state.

    Checks the factorization S = (diag(q) - A) diag(beta) with
    q_j = 1/(tau_j (1 - v_j)^2), and that the similar symmetric form
    diag(sqrt beta) (diag(q) - A) diag(sqrt beta) is positive definite.
    """
    _require_endemic(ss)
    v = ss.v_inf
    s = np.diag(rates.delta / (1.0 - v) ** 2) - g.adjacency * rates.beta[None, :]

    q = 1.0 / (rates.tau * (1.0 - v) ** 2)
    lap = generalized_laplacian(g, q).matrix
    factored = lap * rates.beta[None, :]
    if float(np.abs(s - factored).max()) > 1e-10 * max(1.0, float(np.abs(s).max())):
        raise NumericalError("sensitivity matrix factorization mismatch", code="factorization-mismatch")

    root = np.sqrt(rates.beta)
    sym = root[:, None] * lap * root[None, :]
    smallest = float(full_spectrum(sym, vectors=False).eigenvalues[0])
    if smallest <= 1e-10:
        raise NumericalError(
            f"sensitivity matrix not positive definite (smallest eigenvalue {smallest:.3e}); "
            "near critical threshold",
            code="near-critical",
        )
    return s


def _inverse(s: np.ndarray) -> np.ndarray:
    try:
        inv = np.linalg.inv(s)
    except np.linalg.LinAlgError:
        raise NumericalError("sensitivity system singular; near critical threshold", code="near-critical") from None
    cond = float(np.linalg.norm(s, 1) * np.linalg.norm(inv, 1))
    if cond > _COND_LIMIT:
        raise NumericalError(
            f"sensitivity system ill-conditioned (condition {cond:.3e}); near critical threshold",
            code="near-critical",
        )
    return inv


def first_derivatives(g: Graph, rates: RateConfig, ss: SteadyState, mode: str = "independent"):
    """Derivatives of the steady state in the curing rates.

    mode "independent": matrix D with D[k, i] = dv_k / d delta_i, from one
    linear solve per node.  mode "tied": all curing rates move together
    (they must be equal), giving the vector dv_k / d delta from a single
    solve with right-hand side -diag(v/(1-v)) applied to the ones vector.
    """
    s = sensitivity_matrix(g, rates, ss)
    v = ss.v_inf
    if mode == "independent":
        inv = _inverse(s)
        d1 = -inv * (v / (1.0 - v))[None, :]
        if float(d1.max()) > 1e-10:
            raise NumericalError("positive curing-rate derivative detected", code="sign-violation")
        return d1
    if mode == "tied":
        _require_tied(rates)
        rhs = -(v / (1.0 - v))
        return _solve_system(s, rhs)
    raise InputError(f"unknown mode {mode!r}", code="invalid-argument")


def _solve_system(s: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.solve(s, rhs)
    except np.linalg.LinAlgError:
        raise NumericalError("sensitivity system singular; near critical threshold", code="near-critical") from None


def second_derivatives(g: Graph, rates: RateConfig, ss: SteadyState, mode: str = "independent"):
    """Second derivatives d^2 v_k / d delta_i^2 (matrix) or the tied-mode
    vector d^2 v_k / d delta^2.

    Each column solves S x = -w where w collects the quadratic first-order
    terms 2 delta_j (dv_j)^2 / (1 - v_j)^3 plus the cross term
    2 (dv_i) / (1 - v_i)^2 on the differentiated coordinate(s).
    """
    s = sensitivity_matrix(g, rates, ss)
    v = ss.v_inf
    delta = rates.delta
    if mode == "independent":
        d1 = first_derivatives(g, rates, ss, mode="independent")
        w = 2.0 * (delta / (1.0 - v) ** 3)[:, None] * d1**2
        w[np.diag_indices_from(w)] += 2.0 * np.diag(d1) / (1.0 - v) ** 2
        return -_solve_system(s, w)
    if mode == "tied":
        _require_tied(rates)
        d1 = first_derivatives(g, rates, ss, mode="tied")
        w = 2.0 * delta * d1**2 / (1.0 - v) ** 3 + 2.0 * d1 / (1.0 - v) ** 2
        return -_solve_system(s, w)
    raise InputError(f"unknown mode {mode!r}", code="invalid-argument")


def curvature_matrix(g: Graph, rates: RateConfig, ss: SteadyState) -> tuple[np.ndarray, float]:
    """Curvature diagnostic M with
    M[k, i] = Sinv_ki Sinv_ii / (1 - v_i)
              - v_i sum_j Sinv_kj delta_j Sinv_ji^2 / (1 - v_j)^3,
    which must equal (1 - v_i)^2 / (2 v_i) * d2[k, i].

    Returns (M, worst relative deviation from that identity).  Signs of M
    are data, not assertions: mixed signs flag non-convex response.
    """
    s = sensitivity_matrix(g, rates, ss)
    inv = _inverse(s)
    v = ss.v_inf
    weights = rates.delta / (1.0 - v) ** 3
    m = inv * (np.diag(inv) / (1.0 - v))[None, :] - (inv * weights[None, :]) @ (inv**2) * v[None, :]
    d2 = second_derivatives(g, rates, ss, mode="independent")
    scaled = ((1.0 - v) ** 2 / (2.0 * v))[None, :] * d2
    dev = np.abs(scaled - m) / np.maximum(1.0, np.maximum(np.abs(scaled), np.abs(m)))
    return m, float(dev.max())


def schur_derivative(g: Graph, rates: RateConfig, ss: SteadyState, i: int) -> tuple[float, float]:
    """Own-rate derivative dv_i / d delta_i through the node-deleted graph.

    Eliminating all other coordinates leaves
        dv_i/d delta_i = -(1 - v_i) v_i / (delta_i - beta_i (1 - v_i)^2 f),
    where f is the quadratic form of node i's adjacency column in the
    inverse weighted Laplacian of the graph without node i.  f is
    positive and satisfies tau_i (1 - v_i)^2 f < 1 at every endemic
    state (strict positive definiteness of the deleted-node operator);
    both are checked before returning (f, derivative).
    """
    _require_endemic(ss)
    if not 0 <= i < g.n:
        raise InputError(f"node index {i} out of range", code="invalid-argument")
    v, tau = ss.v_inf, rates.tau
    rest = np.arange(g.n) != i
    q = 1.0 / (tau * (1.0 - v) ** 2)
    lap_rest = np.diag(q[rest]) - g.adjacency[np.ix_(rest, rest)]
    a_col = g.adjacency[rest, i]
    f = float(a_col @ _solve_system(lap_rest, a_col))
    if f <= 0:
        raise NumericalError(f"deleted-graph quadratic form f = {f:.3e} not positive", code="sign-violation")
    damped = tau[i] * (1.0 - v[i]) ** 2 * f
    if damped > 1.0 + 1e-9:
        raise NumericalError(
            f"damped quadratic form bound violated: tau_i (1-v_i)^2 f = {damped:.6g} > 1",
            code="sign-violation",
        )
    derivative = -(1.0 - v[i]) * v[i] / (rates.delta[i] - rates.beta[i] * (1.0 - v[i]) ** 2 * f)
    return f, derivative


def _own_rate_derivative(g: Graph, rates: RateConfig, i: int, delta_i: float, tol: float) -> float | None:
    """dv_i/d delta_i with node i's curing rate replaced; None if the
    configuration is not endemic (or sits on the surface)."""
    delta = rates.delta.copy()
    delta[i] = delta_i
    trial = RateConfig.for_graph(g, rates.beta, delta)
    try:
        ss = solve(g, trial, tol=tol)
    except NumericalError:
        return None
    if ss.regime != "endemic":
        return None
    _, derivative = schur_derivative(g, trial, ss, i)
    return derivative


def optimal_curing_rate(
    g: Graph,
    rates: RateConfig,
    i: int,
    price: float,
    tol: float = 1e-8,
    solver_tol: float = 1e-12,
) -> float:
    """Curing rate minimizing price * delta_i + v_i at fixed other rates.

    Stationarity means price = -dv_i/d delta_i.  The optimality residual
    is scanned over a geometric grid of candidate rates inside the
    endemic regime, then bisected to ``tol``.  The optimum always exceeds
    (1 - v_i) v_i / price, which is asserted on the result.
    """
    if not 0 <= i < g.n:
        raise InputError(f"node index {i} out of range", code="invalid-argument")
    if not np.isfinite(price) or price <= 0:
        raise InputError("price must be strictly positive and finite", code="invalid-argument")

    def residual(delta_i: float) -> float | None:
        derivative = _own_rate_derivative(g, rates, i, delta_i, solver_tol)
        return None if derivative is None else price + derivative

    base = float(rates.delta[i])
    grid = base * np.geomspace(1e-3, 1e3, 49)
    values = [(x, residual(float(x))) for x in grid]
    bracket = None
    previous = None
    for x, r in values:
        if r is None:
            previous = None
            continue
        if previous is not None and previous[1] * r <= 0.0:
            bracket = (previous[0], x)
            break
        previous = (x, r)
    if bracket is None:
        raise NumericalError("no interior optimum", code="no-interior-optimum")

    lo, hi = bracket
    r_lo = residual(lo)
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        r_mid = residual(mid)
        if r_mid is None:
            raise NumericalError("no interior optimum", code="no-interior-optimum")
        if (r_lo <= 0.0) == (r_mid <= 0.0):
            lo, r_lo = mid, r_mid
        else:
            hi = mid
    best = 0.5 * (lo + hi)

    delta = rates.delta.copy()
    delta[i] = best
    ss = solve(g, RateConfig.for_graph(g, rates.beta, delta), tol=solver_tol)
    floor = (1.0 - ss.v_inf[i]) * ss.v_inf[i] / price
    if best <= floor - 1e-9 * max(1.0, floor):
        raise NumericalError("optimum below its structural floor", code="sign-violation")
    return best


def convexity_verdicts(
    g: Graph,
    rates: RateConfig,
    scales=(0.6, 0.8, 1.0, 1.25, 1.5),
    deadband: float = _DEADBAND,
    solver_tol: float = 1e-12,
) -> list[list[str]]:
    """Per-(k, i) verdicts in {convex, concave, indefinite} from the sign
    of d^2 v_k / d delta_i^2 as delta_i sweeps over scaled values.

    Sweep points that leave the endemic regime are skipped; if fewer than
    two points of a sweep remain, the verdict is "indefinite".
    """
    n = g.n
    signs_min = np.full((n, n), np.inf)
    signs_max = np.full((n, n), -np.inf)
    counts = np.zeros(n, dtype=int)
    for i in range(n):
        for scale in scales:
            delta = rates.delta.copy()
            delta[i] = rates.delta[i] * scale
            trial = RateConfig.for_graph(g, rates.beta, delta)
            try:
                ss = solve(g, trial, tol=solver_tol)
            except NumericalError:
                continue
            if ss.regime != "endemic":
                continue
            d2 = second_derivatives(g, trial, ss, mode="independent")[:, i]
            signs_min[:, i] = np.minimum(signs_min[:, i], d2)
            signs_max[:, i] = np.maximum(signs_max[:, i], d2)
            counts[i] += 1

    verdicts = []
    for k in range(n):
        row = []
        for i in range(n):
            if counts[i] < 2:
                row.append("indefinite")
            elif signs_min[k, i] >= -deadband:
                row.append("convex")
            elif signs_max[k, i] <= deadband:
                row.append("concave")
            else:
                row.append("indefinite")
        verdicts.append(row)
    return verdicts


def inverse_checks(g: Graph, rates: RateConfig, ss: SteadyState, tol: float = 1e-9) -> dict:
    """Ledger of identities and inequalities on S^{-1} at an endemic state.

    Every entry reports lhs <= rhs with the worst-case pair substituted;
    identity entries additionally carry the largest absolute deviation.
    The symmetric upper bound only applies when all infection rates are
    equal (S is then symmetric) and is marked inapplicable otherwise.
    """
    s = sensitivity_matrix(g, rates, ss)
    inv = _inverse(s)
    a = g.adjacency
    v, beta, delta = ss.v_inf, rates.beta, rates.delta
    d = g.degrees.astype(float)
    n = g.n
    diag = np.diag(inv)
    off = ~np.eye(n, dtype=bool)

    ledger: dict[str, dict] = {}

    def slack(lhs: float, rhs: float) -> float:
        return tol * max(1.0, abs(lhs), abs(rhs))

    def identity(name: str, values: np.ndarray, targets: np.ndarray) -> None:
        devs = np.abs(values - targets)
        worst = int(np.argmax(devs))
        lhs, rhs = float(values.flat[worst]), float(targets.flat[worst])
        ledger[name] = {
            "lhs": lhs,
            "rhs": rhs,
            "satisfied": bool(devs.flat[worst] <= slack(lhs, rhs)),
            "max_abs_dev": float(devs.flat[worst]),
        }

    def inequality(name: str, lhs: np.ndarray, rhs: np.ndarray, mask=None, strict=False) -> None:
        lhs, rhs = np.broadcast_arrays(np.asarray(lhs, float), np.asarray(rhs, float))
        margin = rhs - lhs
        if mask is not None:
            margin = np.where(mask, margin, np.inf)
        worst = int(np.argmin(margin))
        wl, wr = float(lhs.flat[worst]), float(rhs.flat[worst])
        ok = wl < wr if strict else wl <= wr + slack(wl, wr)
        ledger[name] = {"lhs": wl, "rhs": wr, "satisfied": bool(ok)}

    inequality("nonnegative_inverse", -inv, np.zeros_like(inv))

    scaled_diag = delta * diag / (1.0 - v) ** 2
    identity("diag_identity", scaled_diag - beta * np.sum(inv * a, axis=1), np.ones(n))
    inequality("diag_lower", np.ones(n), scaled_diag)
    identity("row_identity", inv @ (delta * v**2 / (1.0 - v) ** 2), v)
    inequality("diag_strict", v * scaled_diag, np.ones(n), strict=True)

    # entry (i, j) bound: a_ij * max((1-v_j)^2 tau_j Sinv_ii, (beta_j/delta_i)(1-v_i)^2 Sinv_jj)
    neighbor_bound = a * np.maximum(
        ((1.0 - v) ** 2 * rates.tau)[None, :] * diag[:, None],
        (beta[None, :] / delta[:, None]) * ((1.0 - v) ** 2)[:, None] * diag[None, :],
    )
    inequality("neighbor_lower", neighbor_bound, inv, mask=(a > 0) & off)

    if float(np.abs(beta - beta[0]).max()) <= 1e-12 * float(beta.max()):
        pair_mean = 0.5 * (diag[:, None] + diag[None, :])
        pair_geo = np.sqrt(diag[:, None] * diag[None, :])
        inequality("symmetric_upper", inv, np.minimum(pair_mean, pair_geo), mask=off)
    else:
        ledger["symmetric_upper"] = {"lhs": None, "rhs": None, "satisfied": None, "applicable": False}

    base = (1.0 - v) ** 2 / delta
    inequality("diag_bracket_lower", base, diag)
    inequality("diag_bracket_upper", diag, base / v, strict=True)

    for p in (1, 2):
        # sum over k != j of a_kj Sinv_ik^p equals row i of Sinv^p times column j of A
        sums = (inv**p) @ a
        holder = base[None, :] * (np.eye(n) + beta[None, :] * d[None, :] ** (1.0 - 1.0 / p) * sums ** (1.0 / p))
        inequality(f"holder_p{p}", inv, holder)

    return ledger


@dataclass(frozen=True)
class SensitivityReport:
    """Complete sensitivity picture at one endemic configuration."""

    s_matrix: np.ndarray = field(repr=False)
    s_inverse: np.ndarray = field(repr=False)
    d1: np.ndarray = field(repr=False)
    d2: np.ndarray = field(repr=False)
    d1_tied: np.ndarray | None = field(repr=False)
    d2_tied: np.ndarray | None = field(repr=False)
    m_matrix: np.ndarray = field(repr=False)
    convexity: list


def full_report(
    g: Graph,
    rates: RateConfig,
    ss: SteadyState | None = None,
    scales=(0.6, 0.8, 1.0, 1.25, 1.5),
) -> SensitivityReport:
    if ss is None:
        ss = solve(g, rates, tol=1e-12)
    s = sensitivity_matrix(g, rates, ss)
    inv = _inverse(s)
    if float(inv.min()) < -1e-10:
        raise NumericalError("negative entry in inverse sensitivity matrix", code="sign-violation")
    d1 = first_derivatives(g, rates, ss, mode="independent")
    d2 = second_derivatives(g, rates, ss, mode="independent")
    tied = float(np.abs(rates.delta - rates.delta[0]).max()) <= 1e-12 * float(rates.delta.max())
    d1_tied = first_derivatives(g, rates, ss, mode="tied") if tied else None
    d2_tied = second_derivatives(g, rates, ss, mode="tied") if tied else None
    m, _ = curvature_matrix(g, rates, ss)
    return SensitivityReport(
        s_matrix=s,
        s_inverse=inv,
        d1=d1,
        d2=d2,
        d1_tied=d1_tied,
        d2_tied=d2_tied,
        m_matrix=m,
        convexity=convexity_verdicts(g, rates, scales=scales),
    )
