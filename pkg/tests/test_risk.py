import numpy as np
import pytest

from spectralpod.exceptions import ConfigError, SizeError
from spectralpod.kernel_graph import KernelSpec, WeightGraph, build_weight_graph, laplacian
from spectralpod.pod import DiscreteAssignment, Rotation, discretize_step, normalize_rows, rotation_step
from spectralpod.risk import discretization_gap, empirical_error, spectral_identity_check
from spectralpod.spectra import (
    smallest_eigenpairs_random_walk,
    smallest_eigenpairs_unnormalized,
)


def random_graph(n, seed, sigma=0.7):
    points = np.random.default_rng(seed).uniform(size=(n, 2))
    return build_weight_graph(points, KernelSpec(sigma=sigma))


def test_constant_columns_have_zero_error():
    graph = random_graph(12, seed=0)
    u = np.column_stack([np.full(12, 2.5), np.full(12, -1.0)])
    assert empirical_error(graph, u) == 0.0


def test_block_indicators_on_block_graph():
    raw = np.zeros((6, 6))
    raw[:3, :3] = 1.0
    raw[3:, 3:] = 1.0
    graph = WeightGraph.from_raw(raw)
    u = np.zeros((6, 2))
    u[:3, 0] = 1.0
    u[3:, 1] = 1.0
    assert empirical_error(graph, u) == 0.0


def test_two_point_value_by_hand():
    # scaled weights are 1/2; the two ordered cross pairs each contribute
    # (1/2) * 1, and the 1/(2 n (n-1)) prefactor is 1/4: total 0.25
    graph = WeightGraph.from_raw(np.ones((2, 2)))
    assert empirical_error(graph, np.array([[1.0], [0.0]])) == 0.25


def test_error_matches_quadratic_form():
    graph = random_graph(30, seed=3)
    lap = laplacian(graph, "unnormalized").materialize()
    rng = np.random.default_rng(4)
    u = rng.normal(size=(30, 3))
    direct = empirical_error(graph, u)
    quad = sum(u[:, k] @ lap @ u[:, k] for k in range(3)) / (30 * 29)
    assert abs(direct - quad) <= 1e-10 * max(abs(quad), 1e-300)


def test_error_invariant_under_column_permutation():
    graph = random_graph(15, seed=5)
    u = np.random.default_rng(6).normal(size=(15, 4))
    assert empirical_error(graph, u) == pytest.approx(
        empirical_error(graph, u[:, [2, 0, 3, 1]]), rel=1e-14
    )


def test_spectral_identity_ratiocut():
    graph = random_graph(10, seed=7)
    emb = smallest_eigenpairs_unnormalized(laplacian(graph, "unnormalized"), 3)
    _, _, rel_err = spectral_identity_check(emb, graph)
    assert rel_err <= 1e-10


def test_spectral_identity_ncut():
    graph = random_graph(10, seed=8)
    emb = smallest_eigenpairs_random_walk(laplacian(graph, "random_walk"), 3)
    _, _, rel_err = spectral_identity_check(emb, graph)
    assert rel_err <= 1e-10


def test_full_spectrum_equals_trace():
    graph = random_graph(8, seed=9)
    lap = laplacian(graph, "unnormalized")
    emb = smallest_eigenpairs_unnormalized(lap, 8)
    fhat, eig_sum, rel_err = spectral_identity_check(emb, graph)
    assert rel_err <= 1e-10
    assert abs(fhat - np.trace(lap.materialize()) / (8 * 7)) <= 1e-12


def test_identity_check_rejects_mismatched_graph():
    graph = random_graph(10, seed=7)
    other = random_graph(12, seed=7)
    emb = smallest_eigenpairs_unnormalized(laplacian(graph, "unnormalized"), 2)
    with pytest.raises(ConfigError):
        spectral_identity_check(emb, other)


def test_gap_zero_when_aligned():
    assignment = DiscreteAssignment.from_labels(np.array([0, 1, 0]), 2)
    gap, per_cluster = discretization_gap(assignment, assignment.matrix, Rotation(np.eye(2)))
    assert gap == 0.0
    assert np.array_equal(per_cluster, np.zeros(2))


def test_gap_value_by_hand():
    assignment = DiscreteAssignment.from_labels(np.array([0, 1]), 2)
    u_hat = np.array([[0.8, 0.6], [0.6, 0.8]])
    gap, per_cluster = discretization_gap(assignment, u_hat, Rotation(np.eye(2)))
    assert abs(gap - np.sqrt(0.8)) <= 1e-12
    assert abs(gap**2 - np.sum(per_cluster**2)) <= 1e-10 * gap**2


def test_gap_dimension_checks():
    assignment = DiscreteAssignment.from_labels(np.array([0, 1]), 2)
    with pytest.raises(SizeError):
        discretization_gap(assignment, np.ones((3, 2)), Rotation(np.eye(2)))
    with pytest.raises(SizeError):
        discretization_gap(assignment, np.ones((2, 2)), Rotation(np.eye(3)))


def test_gap_non_increasing_across_pod_iterations():
    graph = random_graph(60, seed=10, sigma=0.4)
    emb = smallest_eigenpairs_random_walk(laplacian(graph, "random_walk"), 3)
    u_hat = normalize_rows(emb.vectors)
    rot = Rotation(np.eye(3))
    gaps = []
    for _ in range(8):
        assignment = discretize_step(u_hat, rot)
        rot, _ = rotation_step(assignment, u_hat)
        gap, _ = discretization_gap(assignment, u_hat, rot)
        gaps.append(gap)
    assert all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))


def test_error_dimension_mismatch():
    graph = random_graph(10, seed=11)
    with pytest.raises(SizeError):
        empirical_error(graph, np.ones((9, 2)))
