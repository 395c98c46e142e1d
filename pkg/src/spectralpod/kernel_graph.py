"""Gaussian affinity graphs and their Laplacians.

The weight matrix convention is W_scaled[i, j] = (1/n) * W(x_i, x_j) with
W the raw kernel; degrees are row sums of the scaled matrix. The raw kernel
matrix is stored unscaled and the 1/n factor is applied only when forming
degrees and Laplacians, so eigenvalue identities downstream are unambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateGraphError, InputError, ParameterError, SizeError

LAPLACIAN_KINDS = ("unnormalized", "random_walk")


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family and bandwidth. Only the Gaussian kernel is supported."""

    kind: str = "gaussian"
    sigma: float = 1.0

    def __post_init__(self):
        if self.kind != "gaussian":
            raise ParameterError(f"unsupported kernel kind: {self.kind!r}")
        if not np.isfinite(self.sigma) or self.sigma <= 0:
            raise ParameterError(f"kernel sigma must be positive, got {self.sigma}")


def pairwise_sq_dists(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances between rows of `a` and rows of `b`.

    Uses the Gram-matrix expansion ||x||^2 + ||y||^2 - 2<x, y>. When `a` and
    `b` are the same array the result is exactly symmetric with an exactly
    zero diagonal, because each entry is computed from the same three terms
    in the same order. Negative rounding residue is clamped to zero.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    cross = a @ b.T
    na = np.einsum("ij,ij->i", a, a)
    nb = na if b is a else np.einsum("ij,ij->i", b, b)
    d2 = na[:, None] + nb[None, :] - 2.0 * cross
    np.maximum(d2, 0.0, out=d2)
    if b is a:
        np.fill_diagonal(d2, 0.0)
    return d2


def gaussian_kernel(a: np.ndarray, b: np.ndarray, sigma: float) -> np.ndarray:
    """exp(-||x - y||^2 / (2 sigma^2)) for all row pairs of `a` and `b`."""
    d2 = pairwise_sq_dists(a, b)
    return np.exp(d2 / (-2.0 * sigma * sigma))


@dataclass(frozen=True)
class WeightGraph:
    """Symmetric affinity matrix with 1/n-scaled degrees.

    raw[i, j] holds the unscaled kernel value W(x_i, x_j); the scaled weight
    matrix is raw * scale with scale = 1/n, and degrees[i] is its i-th row sum.
    """

    raw: np.ndarray
    degrees: np.ndarray
    n: int
    scale: float

    @classmethod
    def from_raw(cls, raw: np.ndarray) -> "WeightGraph":
        raw = np.asarray(raw, dtype=float)
        n = raw.shape[0]
        if raw.ndim != 2 or raw.shape[1] != n:
            raise SizeError(f"affinity matrix must be square, got {raw.shape}")
        if n < 2:
            raise SizeError(f"need at least 2 points, got {n}")
        scale = 1.0 / n
        degrees = raw.sum(axis=1) * scale
        return cls(raw=raw, degrees=degrees, n=n, scale=scale)

    def scaled_weights(self) -> np.ndarray:
        """The (1/n)-scaled weight matrix."""
        return self.raw * self.scale


def build_weight_graph(points: np.ndarray, kernel: KernelSpec) -> WeightGraph:
    """Build the Gaussian affinity graph over a point set.

    Parameters
    ----------
    points : (n, d) array
        Sample coordinates; all entries must be finite and n >= 2.
    kernel : KernelSpec
        Gaussian bandwidth specification.

    Returns
    -------
    WeightGraph
        Exactly symmetric raw kernel matrix (unit diagonal) with scaled degrees.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2:
        raise SizeError(f"points must be a 2-d matrix, got ndim={points.ndim}")
    if points.shape[0] < 2:
        raise SizeError(f"need at least 2 points, got {points.shape[0]}")
    if not np.isfinite(points).all():
        raise InputError("points contain non-finite coordinates")
    raw = gaussian_kernel(points, points, kernel.sigma)
    return WeightGraph.from_raw(raw)


@dataclass(frozen=True)
class Laplacian:
    """Tagged Laplacian view; the dense matrix is materialized on demand."""

    kind: str
    graph: WeightGraph = field(repr=False)

    def materialize(self) -> np.ndarray:
        """Dense matrix: D - W_scaled, or I - D^{-1} W_scaled for random_walk."""
        w = self.graph.scaled_weights()
        d = self.graph.degrees
        if self.kind == "unnormalized":
            lap = -w
            lap[np.diag_indices_from(lap)] += d
            return lap
        lap = -w / d[:, None]
        lap[np.diag_indices_from(lap)] += 1.0
        return lap


def laplacian(graph: WeightGraph, kind: str) -> Laplacian:
    """Tag a WeightGraph as one of the supported Laplacians."""
    if kind not in LAPLACIAN_KINDS:
        raise ParameterError(f"unknown laplacian kind: {kind!r}")
    if np.any(graph.degrees < 1e-300):
        raise DegenerateGraphError("graph has a (numerically) zero degree")
    return Laplacian(kind=kind, graph=graph)
