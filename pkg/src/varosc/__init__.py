"""varosc: spectra and dynamics of 1D polynomial potentials in a
variational oscillator basis fixed by the principle of minimal sensitivity."""

from .basis import (
    BasisSpec,
    PolynomialPotential,
    basis_function_values,
    build_hamiltonian,
    p2_matrix,
    trace_diagonal,
    x_matrix_power,
    x_power_element_closed,
)
from .errors import (
    BoundaryLeakError,
    ConfigError,
    EigensolverError,
    InvalidModelError,
    NoStationaryPointError,
    ResolutionError,
    StepSizeError,
)
from .evolution import (
    EvolutionState,
    MomentSeries,
    ObservableSeries,
    gaussian_coefficients_closed,
    gaussian_coefficients_quadrature,
    gaussian_state,
    observable_series,
    project_to_eigenbasis,
    x2_series,
)
from .oracle import (
    GridSolution,
    GridSpec,
    crank_nicolson_evolve,
    grid_eigensolve,
    quadrature_overlap,
)
from .pms import (
    PmsResult,
    omega_pms_closed,
    optimize_pms_numeric,
    quartic_family_parameters,
    trace_scan,
)
from .spectral import (
    ConvergenceStudy,
    SpectralDecomposition,
    convergence_study,
    eigendecompose,
    solve_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "BasisSpec",
    "PolynomialPotential",
    "basis_function_values",
    "build_hamiltonian",
    "p2_matrix",
    "trace_diagonal",
    "x_matrix_power",
    "x_power_element_closed",
    "BoundaryLeakError",
    "ConfigError",
    "EigensolverError",
    "InvalidModelError",
    "NoStationaryPointError",
    "ResolutionError",
    "StepSizeError",
    "EvolutionState",
    "MomentSeries",
    "ObservableSeries",
    "gaussian_coefficients_closed",
    "gaussian_coefficients_quadrature",
    "gaussian_state",
    "observable_series",
    "project_to_eigenbasis",
    "x2_series",
    "GridSolution",
    "GridSpec",
    "crank_nicolson_evolve",
    "grid_eigensolve",
    "quadrature_overlap",
    "PmsResult",
    "omega_pms_closed",
    "optimize_pms_numeric",
    "quartic_family_parameters",
    "trace_scan",
    "ConvergenceStudy",
    "SpectralDecomposition",
    "convergence_study",
    "eigendecompose",
    "solve_spectrum",
    "__version__",
]
