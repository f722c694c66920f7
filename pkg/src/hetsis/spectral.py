"""Symmetric eigenproblems and threshold-related matrices.

Full spectra come from a cyclic Jacobi rotation sweep; dominant
eigenpairs from power iteration on a diagonally shifted copy of the
matrix.  The shift matters: bipartite graphs (stars, paths, grids) have
eigenvalue pairs +/-lambda_max of equal modulus, where the raw iteration
stalls on a mixed Rayleigh quotient instead of converging to the Perron
value.  Shifting by the max row sum keeps eigenvectors intact, makes the
spectrum non-negative, and restores a strict modulus gap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NumericalError
from .graphs import Graph

__all__ = [
    "Spectrum",
    "full_spectrum",
    "dominant_eigenpair",
    "effective_adjacency",
    "generalized_laplacian",
    "gerschgorin_intervals",
]


def _check_symmetric(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"expected a square matrix, got shape {m.shape}", code="invalid-matrix")
    if not np.all(np.isfinite(m)):
        raise InputError("matrix contains non-finite entries", code="invalid-matrix")
    scale = max(1.0, float(np.abs(m).max()))
    if float(np.abs(m - m.T).max()) > 1e-12 * scale:
        raise InputError("matrix is not symmetric", code="invalid-matrix")
    return m


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in ascending order, optional orthonormal eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = field(repr=False, default=None)
    residual: float = 0.0

    def as_dict(self) -> dict:
        doc = {"eigenvalues": self.eigenvalues.tolist(), "residual": self.residual}
        if self.eigenvectors is not None:
            doc["eigenvectors"] = self.eigenvectors.tolist()
        return doc


def full_spectrum(m: np.ndarray, vectors: bool = True, max_sweeps: int = 100) -> Spectrum:
    """Diagonalize a symmetric matrix by cyclic Jacobi rotations.

    Rotations are applied in row-cyclic order until the off-diagonal
    Frobenius mass is negligible.  The returned residual is
    max_k ||m x_k - lambda_k x_k||_inf over all eigenpairs.
    """
    m = _check_symmetric(m)
    n = m.shape[0]
    a = m.copy()
    v = np.eye(n)
    if n == 1:
        return Spectrum(eigenvalues=a.diagonal().copy(), eigenvectors=v if vectors else None)

    scale = max(1.0, float(np.abs(m).max()))
    off_tol = 1e-14 * n * scale
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off <= off_tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-18 * scale:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) if theta != 0 else 1.0
                t = t / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                a[p, q] = a[q, p] = 0.0
                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    else:
        raise NumericalError(
            f"jacobi sweep did not converge in {max_sweeps} sweeps, off-diagonal mass {off:.3e}",
            code="no-convergence",
        )

    eigenvalues = a.diagonal().copy()
    order = np.argsort(eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    v = v[:, order]
    residual = float(np.abs(m @ v - v * eigenvalues[None, :]).max())
    if residual > 1e-10 * scale:
        raise NumericalError(f"jacobi residual {residual:.3e} exceeds tolerance", code="no-convergence")
    return Spectrum(
        eigenvalues=eigenvalues,
        eigenvectors=v if vectors else None,
        residual=residual,
    )


def dominant_eigenpair(
    m: np.ndarray, tol: float = 1e-12, max_iter: int | None = None
) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and positive unit eigenvector of a symmetric
    non-negative irreducible matrix, by shifted power iteration.

    Starts from the all-ones vector and stops when successive Rayleigh
    quotients agree to ``tol`` and the eigen-residual is comparably small.
    """
    m = _check_symmetric(m)
    if np.any(m < 0):
        raise InputError("matrix must be entrywise non-negative", code="invalid-matrix")
    n = m.shape[0]
    if max_iter is None:
        max_iter = 100 * max(n, 10)
    shift = float(np.abs(m).sum(axis=1).max())
    if shift == 0.0:
        raise InputError("matrix is identically zero", code="invalid-matrix")
    shifted = m + shift * np.eye(n)

    x = np.ones(n) / np.sqrt(n)
    rho = float(x @ (shifted @ x))
    resid = np.inf
    for _ in range(max_iter):
        y = shifted @ x
        norm = float(np.linalg.norm(y))
        x = y / norm
        rho_new = float(x @ (shifted @ x))
        resid = float(np.abs(shifted @ x - rho_new * x).max())
        done = abs(rho_new - rho) <= tol * max(1.0, abs(rho_new))
        rho = rho_new
        if done and resid <= 1e-11 * max(1.0, shift):
            break
    else:
        raise NumericalError(
            f"power iteration did not converge in {max_iter} iterations, residual {resid:.3e}",
            code="no-convergence",
        )
    if x.sum() < 0:
        x = -x
    if np.any(x <= 0):
        raise NumericalError("dominant eigenvector is not strictly positive", code="no-convergence")
    return rho - shift, x


def effective_adjacency(g: Graph, tau: np.ndarray) -> np.ndarray:
    """Symmetric effective-rate coupling diag(sqrt tau) A diag(sqrt tau).

    Its spectral radius equals one exactly on the critical surface of the
    mean-field model, above one in the endemic regime.
    """
    tau = np.asarray(tau, dtype=float)
    if tau.shape != (g.n,):
        raise InputError(f"tau must have length {g.n}", code="length-mismatch")
    if np.any(tau <= 0) or not np.all(np.isfinite(tau)):
        raise InputError("tau must be strictly positive and finite", code="invalid-rates")
    root = np.sqrt(tau)
    return root[:, None] * g.adjacency * root[None, :]


@dataclass(frozen=True)
class GeneralizedLaplacian:
    """diag(q) - A for a node weight vector q."""

    q: np.ndarray
    matrix: np.ndarray = field(repr=False)


def generalized_laplacian(g: Graph, q: np.ndarray) -> GeneralizedLaplacian:
    q = np.asarray(q, dtype=float)
    if q.shape != (g.n,):
        raise InputError(f"q must have length {g.n}", code="length-mismatch")
    if not np.all(np.isfinite(q)):
        raise InputError("q contains non-finite entries", code="invalid-rates")
    matrix = np.diag(q) - g.adjacency
    return GeneralizedLaplacian(q=q, matrix=matrix)


def gerschgorin_intervals(g: Graph, q: np.ndarray) -> np.ndarray:
    """Per-row eigenvalue enclosures [q_i - d_i, q_i + d_i], shape (n, 2)."""
    q = np.asarray(q, dtype=float)
    d = g.degrees.astype(float)
    return np.column_stack([q - d, q + d])
