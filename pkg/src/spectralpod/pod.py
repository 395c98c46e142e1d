"""Discretization of a continuous embedding by alternating optimization.

Alternates a row-argmax assignment step with an SVD-based orthonormal
Procrustes alignment, maximizing phi = tr(Omega), the sum of singular
values of assignment^T embedding. The objective is monotone because each
step is an exact maximization with the other block held fixed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import NumericalError, ParameterError, SizeError


class ZeroRowWarning(UserWarning):
    """Rows with zero norm were left unnormalized."""


@dataclass(frozen=True)
class DiscreteAssignment:
    """Binary indicator matrix with one 1 per row, plus the label view."""

    matrix: np.ndarray
    cluster_of: np.ndarray

    @classmethod
    def from_labels(cls, labels: np.ndarray, k: int) -> "DiscreteAssignment":
        labels = np.asarray(labels, dtype=int)
        matrix = np.zeros((labels.size, k))
        matrix[np.arange(labels.size), labels] = 1.0
        return cls(matrix=matrix, cluster_of=labels)

    @property
    def k(self) -> int:
        return self.matrix.shape[1]

    def empty_clusters(self) -> tuple[int, ...]:
        return tuple(np.flatnonzero(self.matrix.sum(axis=0) == 0))


@dataclass(frozen=True)
class Rotation:
    """Orthonormal K x K transform."""

    matrix: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.matrix, dtype=float)
        gram_err = np.abs(r.T @ r - np.eye(r.shape[1])).max()
        if gram_err > 1e-10:
            raise ParameterError(f"rotation is not orthonormal (|R^T R - I| = {gram_err:.3e})")


@dataclass(frozen=True)
class PodResult:
    assignment: DiscreteAssignment
    rotation: Rotation
    objective_trace: np.ndarray
    converged: bool
    iterations: int
    empty_clusters: tuple[int, ...]


def normalize_rows(embedding: np.ndarray) -> np.ndarray:
    """Scale each row to unit Euclidean norm; zero rows stay zero (warned)."""
    embedding = np.asarray(embedding, dtype=float)
    norms = np.linalg.norm(embedding, axis=1)
    zero = norms == 0.0
    n_zero = int(zero.sum())
    if n_zero:
        warnings.warn(f"{n_zero} zero rows left unnormalized", ZeroRowWarning)
    safe = np.where(zero, 1.0, norms)
    return embedding / safe[:, None]


def _orthonormalize(columns: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Gram-Schmidt on the given columns, dropping near-dependent ones and
    completing with random orthonormal directions."""
    k = columns.shape[0]
    basis: list[np.ndarray] = []
    for j in range(columns.shape[1]):
        v = columns[:, j].copy()
        for u in basis:
            v -= (u @ v) * u
        nrm = np.linalg.norm(v)
        if nrm > 1e-10:
            basis.append(v / nrm)
    while len(basis) < k:
        v = rng.normal(size=k)
        for u in basis:
            v -= (u @ v) * u
        nrm = np.linalg.norm(v)
        if nrm > 1e-10:
            basis.append(v / nrm)
    return np.column_stack(basis)


def init_rotation(u_hat: np.ndarray, seed: int) -> Rotation:
    """Greedy initial rotation from K maximally spread rows of the embedding.

    The first column is a random row (per seed); each following column is the
    row least explained by the columns picked so far. The stacked rows are
    then orthonormalized, preserving the greedy directions.
    """
    u_hat = np.asarray(u_hat, dtype=float)
    n, k = u_hat.shape
    if n < k:
        raise SizeError(f"need at least K={k} rows, got {n}")
    rng = np.random.default_rng(seed)
    columns = np.empty((k, k))
    idx = int(rng.integers(n))
    columns[:, 0] = u_hat[idx]
    accum = np.zeros(n)
    for j in range(1, k):
        accum += np.abs(u_hat @ columns[:, j - 1])
        idx = int(np.argmin(accum))
        columns[:, j] = u_hat[idx]
    return Rotation(_orthonormalize(columns, rng))


def discretize_step(u_hat: np.ndarray, rotation: Rotation) -> DiscreteAssignment:
    """Assign each row to the argmax column of u_hat @ R (ties -> lowest index)."""
    scores = np.asarray(u_hat, dtype=float) @ rotation.matrix
    labels = np.argmax(scores, axis=1)
    return DiscreteAssignment.from_labels(labels, scores.shape[1])


def rotation_step(assignment: DiscreteAssignment, u_hat: np.ndarray) -> tuple[Rotation, float]:
    """Optimal orthonormal alignment of the embedding to the assignment.

    Returns the Procrustes rotation from the full SVD of assignment^T u_hat
    together with phi, the sum of singular values (the alignment objective).
    """
    m = assignment.matrix.T @ np.asarray(u_hat, dtype=float)
    try:
        v, sing, vtilde_t = np.linalg.svd(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - rare
        raise NumericalError(f"SVD failed in rotation step: {exc}") from exc
    rotation = Rotation(vtilde_t.T @ v.T)
    return rotation, float(sing.sum())


def pod(
    u_hat: np.ndarray,
    seed: int,
    tol: float = 1e-10,
    max_iter: int = 100,
    initial_rotation: Rotation | None = None,
) -> PodResult:
    """Alternate discretization and alignment until phi stalls.

    Parameters
    ----------
    u_hat : (n, K) array
        Row-normalized embedding (zero rows allowed).
    seed : int
        Seed for the greedy initialization's random first pick.
    tol, max_iter :
        Stop when |phi - phi_prev| < tol or after max_iter iterations;
        hitting max_iter is reported via converged=False, not an error.
    initial_rotation :
        Start from this rotation instead of the greedy initialization.
    """
    u_hat = np.asarray(u_hat, dtype=float)
    rotation = initial_rotation if initial_rotation is not None else init_rotation(u_hat, seed)
    trace: list[float] = []
    phi_prev = 0.0
    converged = False
    assignment = None
    iterations = 0
    for iterations in range(1, max_iter + 1):
        assignment = discretize_step(u_hat, rotation)
        rotation, phi = rotation_step(assignment, u_hat)
        trace.append(phi)
        if abs(phi - phi_prev) < tol:
            converged = True
            break
        phi_prev = phi
    return PodResult(
        assignment=assignment,
        rotation=rotation,
        objective_trace=np.asarray(trace),
        converged=converged,
        iterations=iterations,
        empty_clusters=assignment.empty_clusters(),
    )
