"""Dense symmetric eigensolvers and graph-derived matrices.

Closed-form spectra used as oracles:
  triangle       eigenvalues (-1, -1, 2)
  star on 4      eigenvalues (-sqrt(3), 0, 0, sqrt(3)), from lambda^2 (lambda^2 - 3)
  path on 4      roots of lambda^4 - 3 lambda^2 + 1, i.e. +-phi and +-1/phi
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hetsis import (
    InputError,
    dominant_eigenpair,
    effective_adjacency,
    full_spectrum,
    generalized_laplacian,
    gerschgorin_intervals,
)

from conftest import (
    complete_graph,
    eigvalsh_lambda_max,
    path_graph,
    random_connected_graph,
    star_graph,
)

PHI = (1.0 + np.sqrt(5.0)) / 2.0


def random_symmetric(n: int, seed: int) -> np.ndarray:
    m = np.random.default_rng(seed).normal(size=(n, n))
    return m + m.T


def test_full_spectrum_triangle():
    spec = full_spectrum(complete_graph(3).adjacency)
    assert np.allclose(spec.eigenvalues, [-1.0, -1.0, 2.0], atol=1e-12)


def test_full_spectrum_star4():
    spec = full_spectrum(star_graph(4).adjacency)
    root = np.sqrt(3.0)
    assert np.allclose(spec.eigenvalues, [-root, 0.0, 0.0, root], atol=1e-12)


def test_full_spectrum_path4():
    spec = full_spectrum(path_graph(4).adjacency)
    expect = [-PHI, -1.0 / PHI, 1.0 / PHI, PHI]
    assert np.allclose(spec.eigenvalues, expect, atol=1e-12)


def test_full_spectrum_orthonormal_reconstruction():
    m = random_symmetric(8, seed=5)
    spec = full_spectrum(m)
    q, lam = spec.eigenvectors, spec.eigenvalues
    scale = np.abs(m).max()
    assert np.abs(q.T @ q - np.eye(8)).max() < 1e-12
    assert np.abs(q @ np.diag(lam) @ q.T - m).max() < 1e-10 * scale
    assert spec.residual < 1e-10 * scale


def test_full_spectrum_sorted_ascending():
    spec = full_spectrum(random_symmetric(10, seed=11))
    assert np.all(np.diff(spec.eigenvalues) >= 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=9), st.integers(min_value=0, max_value=10**6))
def test_full_spectrum_matches_lapack(n, seed):
    m = random_symmetric(n, seed)
    scale = max(1.0, np.abs(m).max())
    mine = full_spectrum(m, vectors=False).eigenvalues
    assert np.abs(mine - np.linalg.eigvalsh(m)).max() < 1e-8 * scale


def test_full_spectrum_trace_identities():
    m = random_symmetric(9, seed=3)
    lam = full_spectrum(m, vectors=False).eigenvalues
    assert abs(lam.sum() - np.trace(m)) < 1e-10 * max(1.0, abs(np.trace(m)))
    assert abs((lam**2).sum() - np.sum(m * m)) < 1e-9 * np.sum(m * m)


def test_full_spectrum_rejects_asymmetric():
    m = np.array([[0.0, 1.0], [0.5, 0.0]])
    with pytest.raises(InputError, match="symmetric"):
        full_spectrum(m)


def test_dominant_eigenpair_closed_forms():
    lam, vec = dominant_eigenpair(complete_graph(3).adjacency)
    assert abs(lam - 2.0) < 1e-12
    assert np.allclose(vec, np.full(3, 1.0 / np.sqrt(3.0)), atol=1e-10)

    lam, _ = dominant_eigenpair(star_graph(4).adjacency)
    assert abs(lam - np.sqrt(3.0)) < 1e-12

    lam, _ = dominant_eigenpair(path_graph(4).adjacency)
    assert abs(lam - PHI) < 1e-12


def test_dominant_eigenpair_positive_unit_vector():
    g = random_connected_graph(15, np.random.default_rng(0))
    lam, vec = dominant_eigenpair(g.adjacency)
    assert np.all(vec > 0)
    assert abs(np.linalg.norm(vec) - 1.0) < 1e-12
    assert np.abs(g.adjacency @ vec - lam * vec).max() < 1e-10 * max(1.0, lam)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=2, max_value=25), st.integers(min_value=0, max_value=10**6))
def test_dominant_eigenpair_matches_lapack(n, seed):
    # includes trees and near-bipartite graphs, where the +-lambda pair
    # makes unshifted power iteration stall
    g = random_connected_graph(n, np.random.default_rng(seed), extra=0.05)
    lam, _ = dominant_eigenpair(g.adjacency)
    assert abs(lam - eigvalsh_lambda_max(g.adjacency)) < 1e-10 * max(1.0, lam)


def test_effective_adjacency_entries():
    g = path_graph(3)
    tau = np.array([1.0, 4.0, 9.0])
    r = effective_adjacency(g, tau)
    assert np.array_equal(r, r.T)
    assert np.all(np.diag(r) == 0)
    assert abs(r[0, 1] - 2.0) < 1e-15
    assert abs(r[1, 2] - 6.0) < 1e-15


@settings(max_examples=25, deadline=None)
@given(
    st.integers(min_value=2, max_value=12),
    st.integers(min_value=0, max_value=10**6),
    st.floats(min_value=0.01, max_value=100.0),
)
def test_effective_adjacency_scale_linearity(n, seed, c):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(n, rng)
    tau = rng.uniform(0.2, 5.0, n)
    lam, _ = dominant_eigenpair(effective_adjacency(g, tau))
    lam_scaled, _ = dominant_eigenpair(effective_adjacency(g, c * tau))
    assert abs(lam_scaled - c * lam) < 1e-10 * max(1.0, c * lam)


def test_generalized_laplacian_classical_case():
    g = random_connected_graph(10, np.random.default_rng(7))
    q = generalized_laplacian(g, g.degrees.astype(float))
    spec = full_spectrum(q.matrix)
    assert abs(spec.eigenvalues[0]) < 1e-10
    assert spec.eigenvalues[1] > 1e-10
    ones = np.ones(g.n)
    assert np.abs(q.matrix @ ones).max() < 1e-12


def test_generalized_laplacian_loading_shift_gives_definiteness():
    # positive semi-definite at q, strictly definite at any q* > q
    g = random_connected_graph(8, np.random.default_rng(3))
    base = g.degrees.astype(float)
    bump = np.random.default_rng(4).uniform(0.05, 0.5, g.n)
    spec = full_spectrum(generalized_laplacian(g, base + bump).matrix)
    assert spec.eigenvalues[0] > 1e-10


def test_gerschgorin_intervals_cover_spectrum():
    g = random_connected_graph(12, np.random.default_rng(9))
    q = np.random.default_rng(10).uniform(0.5, 3.0, g.n)
    intervals = gerschgorin_intervals(g, q)
    assert np.allclose(intervals[:, 0], q - g.degrees)
    assert np.allclose(intervals[:, 1], q + g.degrees)
    lam = full_spectrum(generalized_laplacian(g, q).matrix, vectors=False).eigenvalues
    assert lam.min() >= intervals[:, 0].min() - 1e-12
    assert lam.max() <= intervals[:, 1].max() + 1e-12
