"""Diagonalization of the truncated Hamiltonian and convergence studies."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import (
    BasisSpec,
    PolynomialPotential,
    basis_function_values,
    build_hamiltonian,
)
from .errors import ConfigError, EigensolverError, InvalidModelError
from .pms import (
    DEFAULT_OMEGA_BOUNDS,
    omega_pms_closed,
    optimize_pms_numeric,
    quartic_family_parameters,
)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues and eigenvectors of a truncated Hamiltonian.

    Row n of ``vectors`` holds the coefficients d_{nk} of the n-th
    eigenstate over the basis functions phi_k.  Energies are ascending and
    each eigenvector's first significant component is positive, so output
    is reproducible across equivalent runs.
    """

    basis: BasisSpec
    energies: np.ndarray
    vectors: np.ndarray

    @property
    def n_basis(self) -> int:
        return self.basis.n_basis

    def eigenfunction_values(self, x: np.ndarray) -> np.ndarray:
        """psi_n(x) = sum_k d_{nk} phi_k(x) on the given points (debugging
        aid, not tuned for speed)."""
        return self.vectors @ basis_function_values(self.basis, x)


def eigendecompose(h: np.ndarray, basis: BasisSpec) -> SpectralDecomposition:
    """Full eigendecomposition of a real symmetric truncated Hamiltonian.

    Raises EigensolverError if LAPACK fails to converge or if the spectral
    reconstruction d^T diag(E) d does not reproduce the input to
    1e-9 * max|H|.
    """
    h = np.asarray(h, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] != basis.n_basis:
        raise ValueError(f"expected a {basis.n_basis} x {basis.n_basis} matrix, got {h.shape}")
    if not np.array_equal(h, h.T):
        raise ValueError("Hamiltonian matrix must be exactly symmetric")
    try:
        energies, columns = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver did not converge: {exc}") from exc
    d = np.ascontiguousarray(columns.T)
    for row in d:
        significant = np.nonzero(np.abs(row) > 1e-8)[0]
        if significant.size and row[significant[0]] < 0.0:
            row *= -1.0
    scale = np.abs(h).max() or 1.0
    residual = np.abs(d.T @ (d * energies[:, None]) - h).max()
    if residual > 1e-9 * scale:
        raise EigensolverError(
            f"spectral reconstruction residual {residual:.3e} exceeds {1e-9 * scale:.3e}"
        )
    return SpectralDecomposition(basis, energies, d)


def _resolve_basis(
    potential: PolynomialPotential,
    n_basis: int,
    omega_mode,
    sigma_mode,
    omega_bounds: tuple[float, float],
) -> BasisSpec:
    optimize_sigma = sigma_mode == "optimize"
    sigma = 0.0 if optimize_sigma else float(sigma_mode)
    if isinstance(omega_mode, (int, float)):
        if optimize_sigma:
            raise ConfigError("center optimization requires omega mode 'pms-numeric'")
        return BasisSpec(float(omega_mode), n_basis, sigma)
    if omega_mode in ("pms", "pms-closed"):
        if optimize_sigma:
            raise InvalidModelError(
                "the closed form fixes omega only; use 'pms-numeric' to optimize the center"
            )
        m_sq, g = quartic_family_parameters(potential)
        return BasisSpec(omega_pms_closed(n_basis, m_sq, g), n_basis, sigma)
    if omega_mode == "pms-numeric":
        result = optimize_pms_numeric(
            potential,
            n_basis,
            bounds=omega_bounds,
            optimize_sigma=optimize_sigma,
            sigma=sigma,
        )
        return BasisSpec(result.omega, n_basis, result.sigma)
    raise ConfigError(f"unknown omega mode {omega_mode!r}")


def solve_spectrum(
    potential: PolynomialPotential,
    n_basis: int,
    omega_mode="pms",
    sigma_mode=0.0,
    omega_bounds: tuple[float, float] = DEFAULT_OMEGA_BOUNDS,
) -> SpectralDecomposition:
    """PMS basis selection + Hamiltonian build + diagonalization.

    ``omega_mode`` is "pms" (closed form, quadratic-plus-quartic potentials
    only), "pms-numeric", or a fixed positive number.  ``sigma_mode`` is a
    fixed center or "optimize" (pms-numeric only).
    """
    basis = _resolve_basis(potential, n_basis, omega_mode, sigma_mode, omega_bounds)
    return eigendecompose(build_hamiltonian(potential, basis), basis)


@dataclass(frozen=True)
class ConvergenceStudy:
    """Low-lying energies as a function of truncation order, with errors
    measured against the largest order in the study."""

    n_values: tuple[int, ...]
    omegas: np.ndarray
    energies: np.ndarray  # shape (len(n_values), levels)
    errors: np.ndarray    # |E_k(N) - E_k(N_max)|


def convergence_study(
    potential: PolynomialPotential,
    n_list,
    omega_mode="pms",
    levels: int = 4,
) -> ConvergenceStudy:
    """Solve the spectrum for each order in ascending ``n_list`` and report
    the first ``levels`` energies plus their deviation from the largest-N
    run."""
    n_values = tuple(int(n) for n in n_list)
    if list(n_values) != sorted(set(n_values)):
        raise ValueError("n_list must be strictly ascending")
    if levels > min(n_values):
        raise ValueError(f"levels={levels} exceeds the smallest truncation order")
    omegas = np.empty(len(n_values))
    energies = np.empty((len(n_values), levels))
    for i, n in enumerate(n_values):
        dec = solve_spectrum(potential, n, omega_mode=omega_mode)
        omegas[i] = dec.basis.omega
        energies[i] = dec.energies[:levels]
    errors = np.abs(energies - energies[-1])
    return ConvergenceStudy(n_values, omegas, energies, errors)
