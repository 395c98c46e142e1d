"""Risk diagnostics: the pairwise empirical error and the discretization gap.

empirical_error is deliberately computed as the literal double sum over
point pairs; the spectral identity check compares it against the scaled
eigenvalue sum computed by the solver, so the two sides stay independent.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import ConfigError, SizeError
from .kernel_graph import WeightGraph
from .pod import DiscreteAssignment, Rotation
from .spectra import SpectralEmbedding


@dataclass(frozen=True)
class RiskReport:
    empirical_error: float
    eigen_sum_scaled: float
    discretization_gap: float
    per_cluster_gap: list[float]

    def as_dict(self) -> dict:
        return asdict(self)


def empirical_error(graph: WeightGraph, u: np.ndarray) -> float:
    """Pairwise error (1/(2n(n-1))) sum_k sum_{i,j} W_scaled[i,j] (u_ki - u_kj)^2.

    The i = j terms vanish identically, so the full sum equals the sum over
    i != j. Computed column by column to bound the transient memory at one
    n x n block.
    """
    u = np.asarray(u, dtype=float)
    if u.ndim == 1:
        u = u[:, None]
    n = graph.n
    if u.shape[0] != n:
        raise SizeError(f"embedding has {u.shape[0]} rows, graph has {n} nodes")
    w = graph.scaled_weights()
    total = 0.0
    for k in range(u.shape[1]):
        diff = u[:, k][:, None] - u[:, k][None, :]
        total += float(np.sum(w * diff * diff))
    return total / (2.0 * n * (n - 1))


def spectral_identity_check(
    embedding: SpectralEmbedding, graph: WeightGraph
) -> tuple[float, float, float]:
    """Compare the pairwise error of an embedding with its eigenvalue sum.

    For the K smallest eigenpairs of either Laplacian the two agree exactly:
    the pairwise error equals (1/(n(n-1))) * sum_k lambda_k. Returns
    (pairwise error, scaled eigenvalue sum, relative difference).
    """
    if embedding.n != graph.n:
        raise ConfigError(
            f"embedding has {embedding.n} rows but graph has {graph.n} nodes"
        )
    fhat = empirical_error(graph, embedding.vectors)
    eig_sum = float(embedding.eigenvalues.sum()) / (graph.n * (graph.n - 1))
    rel_err = abs(fhat - eig_sum) / max(eig_sum, 1e-300)
    return fhat, eig_sum, rel_err


def discretization_gap(
    assignment: DiscreteAssignment, u_hat: np.ndarray, rotation: Rotation
) -> tuple[float, np.ndarray]:
    """Frobenius distance between the assignment and the rotated embedding.

    Returns the total gap ||A - U R||_F and the per-column 2-norms of the
    same difference.
    """
    u_hat = np.asarray(u_hat, dtype=float)
    if u_hat.shape != assignment.matrix.shape:
        raise SizeError(
            f"embedding shape {u_hat.shape} != assignment shape {assignment.matrix.shape}"
        )
    if rotation.matrix.shape[0] != u_hat.shape[1]:
        raise SizeError(
            f"rotation is {rotation.matrix.shape}, embedding has {u_hat.shape[1]} columns"
        )
    diff = assignment.matrix - u_hat @ rotation.matrix
    per_cluster = np.linalg.norm(diff, axis=0)
    return float(np.linalg.norm(diff)), per_cluster
