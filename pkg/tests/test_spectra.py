import math

import numpy as np
import pytest

from spectralpod.exceptions import SizeError
from spectralpod.kernel_graph import KernelSpec, build_weight_graph, laplacian
from spectralpod.spectra import (
    smallest_eigenpairs_random_walk,
    smallest_eigenpairs_unnormalized,
)


def graph_from_points(points, sigma=0.7):
    return build_weight_graph(np.asarray(points, dtype=float), KernelSpec(sigma=sigma))


def random_points(n, seed, d=2):
    return np.random.default_rng(seed).uniform(size=(n, d))


def symmetric_3x3_eigenvalues(m):
    """Closed-form eigenvalues of a symmetric 3x3 matrix.

    Independent oracle: solves the characteristic cubic analytically with the
    trigonometric method (no iterative eigensolver involved).
    """
    q = np.trace(m) / 3.0
    b = m - q * np.eye(3)
    p2 = (b * b).sum() / 6.0
    if p2 == 0.0:
        return np.array([q, q, q])
    p = math.sqrt(p2)
    det_b = np.linalg.det(b / p)
    r = max(-1.0, min(1.0, det_b / 2.0))
    phi = math.acos(r) / 3.0
    eig1 = q + 2.0 * p * math.cos(phi)
    eig3 = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    eig2 = 3.0 * q - eig1 - eig3
    return np.sort(np.array([eig1, eig2, eig3]))


def test_connected_graph_first_pair_is_constant():
    graph = graph_from_points(random_points(30, seed=0))
    emb = smallest_eigenpairs_unnormalized(laplacian(graph, "unnormalized"), 1)
    assert abs(emb.eigenvalues[0]) < 1e-10
    expected = np.full(30, 1.0 / math.sqrt(30))
    assert np.abs(emb.vectors[:, 0] - expected).max() < 1e-8


def test_two_far_clusters_have_two_null_directions():
    rng = np.random.default_rng(4)
    a = rng.normal(size=(15, 2)) * 0.1
    b = rng.normal(size=(10, 2)) * 0.1 + 100.0
    graph = graph_from_points(np.vstack([a, b]), sigma=1.0)
    assert graph.raw[:15, 15:].max() < 1e-12
    emb = smallest_eigenpairs_unnormalized(laplacian(graph, "unnormalized"), 2)
    assert np.abs(emb.eigenvalues).max() < 1e-10
    for indicator in (np.r_[np.ones(15), np.zeros(10)], np.r_[np.zeros(15), np.ones(10)]):
        indicator = indicator / np.linalg.norm(indicator)
        projected = emb.vectors @ (emb.vectors.T @ indicator)
        assert np.linalg.norm(projected - indicator) < 1e-8


def test_three_point_spectrum_against_closed_form():
    graph = graph_from_points([[0.0], [1.0], [2.0]], sigma=1.0)
    lap = laplacian(graph, "unnormalized")
    emb = smallest_eigenpairs_unnormalized(lap, 3)
    oracle = symmetric_3x3_eigenvalues(lap.materialize())
    assert np.abs(emb.eigenvalues - oracle).max() < 1e-10


def test_identity_normalization_and_residuals():
    graph = graph_from_points(random_points(40, seed=2))
    lap = laplacian(graph, "unnormalized")
    emb = smallest_eigenpairs_unnormalized(lap, 4)
    gram = emb.vectors.T @ emb.vectors
    assert np.abs(gram - np.eye(4)).max() <= 1e-8
    mat = lap.materialize()
    for k in range(4):
        lam, u = emb.eigenvalues[k], emb.vectors[:, k]
        assert np.linalg.norm(mat @ u - lam * u) <= 1e-8 * (1.0 + abs(lam))
    assert np.all(np.diff(emb.eigenvalues) >= 0)


def test_random_walk_constant_eigenvector_degree_normalized():
    graph = graph_from_points(random_points(25, seed=6))
    emb = smallest_eigenpairs_random_walk(laplacian(graph, "random_walk"), 1)
    assert abs(emb.eigenvalues[0]) < 1e-10
    u = emb.vectors[:, 0]
    assert u.std() / abs(u.mean()) < 1e-8
    assert abs(u @ (graph.degrees * u) - 1.0) < 1e-8


def test_two_point_random_walk_spectrum_by_hand():
    # raw = all-ones: L_rw = [[0.5, -0.5], [-0.5, 0.5]], eigenvalues {0, 1}
    graph = graph_from_points([[0.0], [0.0]], sigma=1.0)
    emb = smallest_eigenpairs_random_walk(laplacian(graph, "random_walk"), 2)
    assert np.abs(emb.eigenvalues - np.array([0.0, 1.0])).max() < 1e-12


def test_random_walk_generalized_residual():
    graph = graph_from_points(random_points(5, seed=8), sigma=0.8)
    lap_u = laplacian(graph, "unnormalized").materialize()
    emb = smallest_eigenpairs_random_walk(laplacian(graph, "random_walk"), 5)
    d = graph.degrees
    for k in range(5):
        lam, u = emb.eigenvalues[k], emb.vectors[:, k]
        assert np.linalg.norm(lap_u @ u - lam * (d * u)) <= 1e-8
    gram = emb.vectors.T @ (d[:, None] * emb.vectors)
    assert np.abs(gram - np.eye(5)).max() <= 1e-8


def test_random_walk_matches_asymmetric_eigenvalues():
    # independent route: dense nonsymmetric solve of the materialized I - D^-1 W
    for seed in range(5):
        graph = graph_from_points(random_points(7, seed=seed), sigma=0.6)
        lrw = laplacian(graph, "random_walk")
        emb = smallest_eigenpairs_random_walk(lrw, 3)
        asym = np.sort(np.linalg.eigvals(lrw.materialize()).real)
        assert np.abs(emb.eigenvalues - asym[:3]).max() <= 1e-8


def test_sign_convention_and_determinism():
    graph = graph_from_points(random_points(30, seed=9))
    lap = laplacian(graph, "unnormalized")
    emb1 = smallest_eigenpairs_unnormalized(lap, 3)
    emb2 = smallest_eigenpairs_unnormalized(lap, 3)
    assert np.array_equal(emb1.vectors, emb2.vectors)
    assert np.array_equal(emb1.eigenvalues, emb2.eigenvalues)
    for k in range(3):
        col = emb1.vectors[:, k]
        assert col[np.argmax(np.abs(col))] > 0


def test_k_out_of_range():
    graph = graph_from_points(random_points(6, seed=1))
    with pytest.raises(SizeError):
        smallest_eigenpairs_unnormalized(laplacian(graph, "unnormalized"), 7)
    with pytest.raises(SizeError):
        smallest_eigenpairs_random_walk(laplacian(graph, "random_walk"), 0)


def test_kind_mismatch_is_rejected():
    graph = graph_from_points(random_points(6, seed=1))
    with pytest.raises(SizeError):
        smallest_eigenpairs_unnormalized(laplacian(graph, "random_walk"), 2)
    with pytest.raises(SizeError):
        smallest_eigenpairs_random_walk(laplacian(graph, "unnormalized"), 2)
