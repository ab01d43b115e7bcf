"""Exception types shared across the package.

ValueError subclasses signal bad input (CLI exit code 2), RuntimeError
subclasses signal a failed numerical check (CLI exit code 3).
"""


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


class InvalidModelError(ValueError):
    """A closed-form shortcut was requested outside its model family."""


class NoStationaryPointError(RuntimeError):
    """The trace is monotone over the search interval; no PMS point found."""


class EigensolverError(RuntimeError):
    """Dense eigensolver failed to converge or to reconstruct its input."""


class ResolutionError(RuntimeError):
    """Grid refinement check failed; the oracle grid is too coarse."""


class BoundaryLeakError(RuntimeError):
    """Wave function has non-negligible weight at the grid boundary."""


class StepSizeError(RuntimeError):
    """Time-step halving check failed; the propagator step is too large."""
