"""Spectral clustering with orthonormal-transform discretization and
out-of-sample extension."""

from .datasets import Dataset, load_delimited, make_circles, make_moons, train_test_split
from .extension import (
    ExtensionModel,
    extend_ncut,
    extend_ratiocut,
    fit_extension,
    gpod,
    load_model,
    save_model,
)
from .kernel_graph import KernelSpec, Laplacian, WeightGraph, build_weight_graph, laplacian
from .metrics import accuracy, hungarian, nmi
from .pod import (
    DiscreteAssignment,
    PodResult,
    Rotation,
    discretize_step,
    init_rotation,
    normalize_rows,
    pod,
    rotation_step,
)
from .risk import RiskReport, discretization_gap, empirical_error, spectral_identity_check
from .spectra import (
    SpectralEmbedding,
    smallest_eigenpairs_random_walk,
    smallest_eigenpairs_unnormalized,
)

__all__ = [
    "Dataset",
    "DiscreteAssignment",
    "ExtensionModel",
    "KernelSpec",
    "Laplacian",
    "PodResult",
    "RiskReport",
    "Rotation",
    "SpectralEmbedding",
    "WeightGraph",
    "accuracy",
    "build_weight_graph",
    "discretization_gap",
    "discretize_step",
    "empirical_error",
    "extend_ncut",
    "extend_ratiocut",
    "fit_extension",
    "gpod",
    "hungarian",
    "init_rotation",
    "laplacian",
    "load_delimited",
    "load_model",
    "make_circles",
    "make_moons",
    "nmi",
    "normalize_rows",
    "pod",
    "rotation_step",
    "save_model",
    "smallest_eigenpairs_random_walk",
    "smallest_eigenpairs_unnormalized",
    "spectral_identity_check",
    "train_test_split",
]

__version__ = "0.1.0"
