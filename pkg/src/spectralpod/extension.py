"""Out-of-sample clustering via eigenfunction extension.

A fitted ExtensionModel evaluates the training eigenvectors' extensions at
arbitrary new points using only kernel evaluations against the training set,
then discretizes the new embedding with the alternating optimizer. No
eigendecomposition and no (n+m) x (n+m) matrix is ever involved.

Extension formulas (per new point xb, training eigenpair (lambda_k, u_k)):

  ratiocut, algorithm_literal (default):
      s(xb)    = (1/n) sum_j W(xb, x_j)
      shat_k   = (1/n) sum_j (s(xb) - W(xb, x_j)) u_k[j]
      out_k    = shat_k / sqrt(lambda_k)
  ratiocut, eq13_composed:
      out_k    = shat_k / (lambda_k - s(xb))
      (the composition of the eigenvector<->eigenfunction relations; this
      denominator is the one that makes the extension restrict to the
      training eigenvectors, since shat_k(x_j) = (lambda_k - s(x_j)) u_k[j]
      for mean-zero eigenvectors)
  ncut:
      out_k    = [sum_j W(xb, x_j) u_k[j] / sum_j W(xb, x_j)] / (1 - lambda_k)
      (computed with max-shifted exponentials so far-away points stay finite)

Columns whose denominator is degenerate (lambda ~ 0 for ratiocut, lambda ~ 1
for ncut) are replaced by the constant column 1/sqrt(m) and warned about.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .exceptions import ConfigError, InputError, ParameterError
from .kernel_graph import KernelSpec, gaussian_kernel, pairwise_sq_dists
from .pod import PodResult, normalize_rows, pod
from .spectra import SpectralEmbedding

VARIANTS = ("ratiocut", "ncut")
SCALING_MODES = ("algorithm_literal", "eq13_composed")

MODEL_FORMAT = "spectralpod-extension-model"
MODEL_VERSION = 1


class DegenerateEigenvalueWarning(UserWarning):
    """An extended column hit a degenerate eigenvalue and was set constant."""


@dataclass(frozen=True)
class ExtensionModel:
    """Everything needed to evaluate extended eigenfunctions at new points."""

    variant: str
    train_points: np.ndarray = field(repr=False)
    kernel: KernelSpec
    eigenvalues: np.ndarray
    train_vectors: np.ndarray = field(repr=False)
    scaling_mode: str = "algorithm_literal"
    degenerate_threshold: float = 1e-8

    @property
    def n(self) -> int:
        return self.train_points.shape[0]

    @property
    def k(self) -> int:
        return self.train_vectors.shape[1]


def fit_extension(
    embedding: SpectralEmbedding,
    train_points: np.ndarray,
    kernel: KernelSpec,
    variant: str,
    scaling_mode: str = "algorithm_literal",
    degenerate_threshold: float = 1e-8,
) -> ExtensionModel:
    """Package an embedding for out-of-sample evaluation (validation only)."""
    if variant not in VARIANTS:
        raise ParameterError(f"unknown variant: {variant!r}")
    if scaling_mode not in SCALING_MODES:
        raise ParameterError(f"unknown scaling mode: {scaling_mode!r}")
    expected = ("unnormalized", "identity") if variant == "ratiocut" else ("random_walk", "degree")
    if (embedding.laplacian_kind, embedding.normalization) != expected:
        raise ConfigError(
            f"variant {variant!r} needs a ({expected[0]}, {expected[1]}) embedding, got "
            f"({embedding.laplacian_kind}, {embedding.normalization})"
        )
    train_points = np.asarray(train_points, dtype=float)
    if train_points.shape[0] != embedding.n:
        raise ConfigError(
            f"embedding has {embedding.n} rows but train_points has {train_points.shape[0]}"
        )
    return ExtensionModel(
        variant=variant,
        train_points=train_points,
        kernel=kernel,
        eigenvalues=np.asarray(embedding.eigenvalues, dtype=float),
        train_vectors=np.asarray(embedding.vectors, dtype=float),
        scaling_mode=scaling_mode,
        degenerate_threshold=degenerate_threshold,
    )


def _check_new_points(model: ExtensionModel, new_points: np.ndarray) -> np.ndarray:
    new_points = np.atleast_2d(np.asarray(new_points, dtype=float))
    if new_points.shape[1] != model.train_points.shape[1]:
        raise InputError(
            f"new points have dimension {new_points.shape[1]}, "
            f"model was trained on dimension {model.train_points.shape[1]}"
        )
    if not np.isfinite(new_points).all():
        raise InputError("new points contain non-finite coordinates")
    return new_points


def _constant_columns(out: np.ndarray, degenerate: np.ndarray, what: str):
    m = out.shape[0]
    out[:, degenerate] = 1.0 / np.sqrt(m)
    cols = np.flatnonzero(degenerate)
    warnings.warn(
        f"columns {cols.tolist()} have {what}; set to the constant 1/sqrt(m)",
        DegenerateEigenvalueWarning,
    )


def extend_ratiocut(model: ExtensionModel, new_points: np.ndarray) -> np.ndarray:
    """Extended embedding of new points under the unnormalized-Laplacian variant."""
    if model.variant != "ratiocut":
        raise ConfigError(f"model variant is {model.variant!r}, expected 'ratiocut'")
    new_points = _check_new_points(model, new_points)
    lam = model.eigenvalues
    u = model.train_vectors
    n = model.n
    cross = gaussian_kernel(new_points, model.train_points, model.kernel.sigma)
    s_new = cross.sum(axis=1) / n
    shat = np.outer(s_new, u.mean(axis=0)) - (cross @ u) / n
    degenerate = lam < model.degenerate_threshold
    out = np.empty_like(shat)
    ok = ~degenerate
    if model.scaling_mode == "algorithm_literal":
        out[:, ok] = shat[:, ok] / np.sqrt(lam[ok])[None, :]
    else:
        out[:, ok] = shat[:, ok] / (lam[ok][None, :] - s_new[:, None])
    if degenerate.any():
        _constant_columns(out, degenerate, "eigenvalue below the degenerate threshold")
    return out


def extend_ncut(model: ExtensionModel, new_points: np.ndarray) -> np.ndarray:
    """Extended embedding of new points under the random-walk variant."""
    if model.variant != "ncut":
        raise ConfigError(f"model variant is {model.variant!r}, expected 'ncut'")
    new_points = _check_new_points(model, new_points)
    lam = model.eigenvalues
    u = model.train_vectors
    sigma = model.kernel.sigma
    # Each row of weights is W(xb, x_j) / sum_l W(xb, x_l); shifting by the
    # row max before exponentiating keeps this well defined arbitrarily far
    # from the training set, where the raw kernel row underflows to zero.
    logits = pairwise_sq_dists(new_points, model.train_points) / (-2.0 * sigma * sigma)
    logits -= logits.max(axis=1, keepdims=True)
    weights = np.exp(logits)
    weights /= weights.sum(axis=1, keepdims=True)
    shat = weights @ u
    degenerate = np.abs(1.0 - lam) < model.degenerate_threshold
    out = np.empty_like(shat)
    ok = ~degenerate
    out[:, ok] = shat[:, ok] / (1.0 - lam[ok])[None, :]
    if degenerate.any():
        _constant_columns(out, degenerate, "eigenvalue within threshold of 1")
    return out


def extend(model: ExtensionModel, new_points: np.ndarray) -> np.ndarray:
    """Dispatch to the model's variant."""
    if model.variant == "ratiocut":
        return extend_ratiocut(model, new_points)
    return extend_ncut(model, new_points)


def gpod(
    model: ExtensionModel,
    new_points: np.ndarray,
    seed: int,
    tol: float = 1e-10,
    max_iter: int = 100,
) -> PodResult:
    """Cluster new points: extend, row-normalize, discretize.

    Runs entirely on m x K / m x n arrays; never eigensolves.
    """
    u_bar = extend(model, new_points)
    u_hat = normalize_rows(u_bar)
    return pod(u_hat, seed=seed, tol=tol, max_iter=max_iter)


def model_to_document(model: ExtensionModel) -> dict:
    """JSON-ready dict; floats survive a round trip exactly."""
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "variant": model.variant,
        "kernel": {"kind": model.kernel.kind, "sigma": model.kernel.sigma},
        "eigenvalues": model.eigenvalues.tolist(),
        "train_points": model.train_points.tolist(),
        "train_vectors": model.train_vectors.tolist(),
        "scaling_mode": model.scaling_mode,
        "degenerate_threshold": model.degenerate_threshold,
    }


def model_from_document(doc: dict) -> ExtensionModel:
    if doc.get("format") != MODEL_FORMAT:
        raise ConfigError(f"not an extension model document: format={doc.get('format')!r}")
    if doc.get("version") != MODEL_VERSION:
        raise ConfigError(f"unsupported model version: {doc.get('version')!r}")
    if doc["variant"] not in VARIANTS:
        raise ConfigError(f"unknown variant in model document: {doc['variant']!r}")
    if doc["scaling_mode"] not in SCALING_MODES:
        raise ConfigError(f"unknown scaling mode in model document: {doc['scaling_mode']!r}")
    return ExtensionModel(
        variant=doc["variant"],
        train_points=np.asarray(doc["train_points"], dtype=float),
        kernel=KernelSpec(kind=doc["kernel"]["kind"], sigma=doc["kernel"]["sigma"]),
        eigenvalues=np.asarray(doc["eigenvalues"], dtype=float),
        train_vectors=np.asarray(doc["train_vectors"], dtype=float),
        scaling_mode=doc["scaling_mode"],
        degenerate_threshold=doc["degenerate_threshold"],
    )


def save_model(model: ExtensionModel, path) -> None:
    with open(path, "w") as fh:
        json.dump(model_to_document(model), fh)


def load_model(path) -> ExtensionModel:
    with open(path) as fh:
        doc = json.load(fh)
    return model_from_document(doc)


def with_scaling_mode(model: ExtensionModel, scaling_mode: str) -> ExtensionModel:
    """Copy of the model with a different ratiocut scaling mode."""
    if scaling_mode not in SCALING_MODES:
        raise ParameterError(f"unknown scaling mode: {scaling_mode!r}")
    return replace(model, scaling_mode=scaling_mode)
