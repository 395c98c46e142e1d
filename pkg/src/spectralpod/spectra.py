"""Smallest eigenpairs of the graph Laplacians.

The random-walk problem L u = lambda D u is solved through the symmetric
substitution v = D^{1/2} u on D^{-1/2} L D^{-1/2}, which keeps eigenvalues
real and gives the degree normalization u^T D u = 1 for free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import NumericalError, SizeError
from .kernel_graph import Laplacian


@dataclass(frozen=True)
class SpectralEmbedding:
    """Ascending eigenvalues with their eigenvector matrix.

    normalization is "identity" (V^T V = I, unnormalized Laplacian) or
    "degree" (V^T D V = I, random-walk Laplacian).
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    normalization: str
    laplacian_kind: str

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def k(self) -> int:
        return self.vectors.shape[1]


def dense_eigh(matrix: np.ndarray, k: int):
    """Smallest k eigenpairs of a dense symmetric matrix (ascending).

    Single entry point for every eigendecomposition in the package, so tests
    can poison it to prove that out-of-sample extension never eigensolves.
    """
    try:
        vals, vecs = scipy.linalg.eigh(matrix, subset_by_index=[0, k - 1])
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - rare
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    return vals, vecs


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip columns so the largest-magnitude entry (lowest index on ties) is positive."""
    vectors = vectors.copy()
    for k in range(vectors.shape[1]):
        col = vectors[:, k]
        if col[np.argmax(np.abs(col))] < 0:
            vectors[:, k] = -col
    return vectors


def _check_k(k: int, n: int):
    if not 1 <= k <= n:
        raise SizeError(f"K must be in [1, n]={n}, got {k}")


def smallest_eigenpairs_unnormalized(lap: Laplacian, k: int) -> SpectralEmbedding:
    """K smallest eigenpairs of L = D - W, columns orthonormal.

    Eigenvalues are ascending and each eigenvector's sign is fixed
    deterministically (largest-magnitude entry positive).
    """
    if lap.kind != "unnormalized":
        raise SizeError(f"expected an unnormalized Laplacian, got {lap.kind!r}")
    _check_k(k, lap.graph.n)
    vals, vecs = dense_eigh(lap.materialize(), k)
    return SpectralEmbedding(
        eigenvalues=vals,
        vectors=_fix_signs(vecs),
        normalization="identity",
        laplacian_kind="unnormalized",
    )


def smallest_eigenpairs_random_walk(lap: Laplacian, k: int) -> SpectralEmbedding:
    """K smallest eigenpairs of L_rw = I - D^{-1} W, degree-normalized.

    Solves the generalized symmetric problem L u = lambda D u via
    D^{-1/2} L D^{-1/2}; the returned vectors satisfy u^T D u = 1.
    """
    if lap.kind != "random_walk":
        raise SizeError(f"expected a random_walk Laplacian, got {lap.kind!r}")
    graph = lap.graph
    _check_k(k, graph.n)
    d = graph.degrees
    dinv_sqrt = 1.0 / np.sqrt(d)
    w = graph.scaled_weights()
    sym = -(w * dinv_sqrt[:, None]) * dinv_sqrt[None, :]
    sym[np.diag_indices_from(sym)] += 1.0
    vals, vecs = dense_eigh(sym, k)
    vectors = vecs * dinv_sqrt[:, None]
    return SpectralEmbedding(
        eigenvalues=vals,
        vectors=_fix_signs(vectors),
        normalization="degree",
        laplacian_kind="random_walk",
    )
