"""Exception hierarchy shared by all modules.

Exit-code mapping used by the CLI: ParameterError/ConfigError -> 1,
InputError/SizeError -> 2, NumericalError -> 3.
"""


class SpectralPodError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(SpectralPodError):
    """A parameter is outside its declared range (bad sigma, fraction, ...)."""


class ConfigError(SpectralPodError):
    """Inconsistent configuration, e.g. mismatched embedding/variant tags."""


class InputError(SpectralPodError):
    """Bad input data: non-finite values, parse failures, length mismatches."""


class SizeError(SpectralPodError):
    """Dimension or shape violation (too few points, K > n, ...)."""


class NumericalError(SpectralPodError):
    """A numerical routine failed (eigensolver or SVD non-convergence)."""


class DegenerateGraphError(NumericalError):
    """A graph degree is zero (or numerically indistinguishable from zero)."""
