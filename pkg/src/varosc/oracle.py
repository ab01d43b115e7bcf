"""Independent grid-based reference solvers.

Nothing here touches the oscillator-basis machinery: eigenvalues come from
a central-difference Hamiltonian on a uniform grid and time evolution from
unitary Crank-Nicolson stepping, so agreement with the spectral modules is
a genuine cross-method check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal, solve_banded

from .basis import BasisSpec, PolynomialPotential
from .errors import BoundaryLeakError, ResolutionError, StepSizeError
from .evolution import ObservableSeries, gaussian_coefficients_quadrature

BOUNDARY_TOLERANCE = 1e-8


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on [-half_width, half_width] with n_points points
    (Dirichlet boundaries) and a propagator time step dt."""

    half_width: float
    n_points: int
    dt: float = 0.005

    def __post_init__(self):
        if not self.half_width > 0.0:
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        if self.n_points < 3:
            raise ValueError(f"n_points must be at least 3, got {self.n_points}")
        if not self.dt > 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")


@dataclass(frozen=True)
class GridSolution:
    """Lowest eigenpairs on the finest refinement level."""

    x: np.ndarray         # interior grid points
    energies: np.ndarray  # Richardson-combined from the two finest levels
    vectors: np.ndarray   # row n = eigenfunction n, trapezoid-normalized


def _interior_operator(potential: PolynomialPotential, half_width: float, n_points: int):
    """Diagonal and off-diagonal of the central-difference Hamiltonian on
    the interior points, plus the interior grid and spacing."""
    x = np.linspace(-half_width, half_width, n_points)
    h = x[1] - x[0]
    xi = x[1:-1]
    kin = potential.kinetic_coeff / (h * h)
    diag = 2.0 * kin + potential.values(xi)
    off = np.full(xi.size - 1, -kin)
    return xi, h, diag, off


def _check_boundary(vectors_rows: np.ndarray, context: str) -> None:
    peak = np.abs(vectors_rows).max(axis=1)
    edge = np.maximum(np.abs(vectors_rows[:, 0]), np.abs(vectors_rows[:, -1]))
    worst = (edge / peak).max()
    if worst > BOUNDARY_TOLERANCE:
        raise BoundaryLeakError(
            f"{context}: boundary amplitude {worst:.3e} of peak exceeds "
            f"{BOUNDARY_TOLERANCE:.0e}; enlarge the domain"
        )


def grid_eigensolve(
    potential: PolynomialPotential, grid: GridSpec, count: int
) -> GridSolution:
    """Lowest ``count`` eigenpairs of the central-difference Hamiltonian.

    Solves on three nested grids (spacing h, h/2, h/4).  Each adjacent pair
    is Richardson-combined, cancelling the leading O(h^2) error; the two
    combined estimates must agree to 1e-7 relative, otherwise the grid is
    declared too coarse.  Reported energies come from the finest pair,
    eigenfunctions from the finest grid.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if count > grid.n_points // 4:
        raise ValueError(
            f"count={count} is not resolvable on {grid.n_points} points (need count <= n_points/4)"
        )

    sizes = [grid.n_points, 2 * grid.n_points - 1, 4 * grid.n_points - 3]
    levels = []
    for n_points in sizes[:-1]:
        _, _, diag, off = _interior_operator(potential, grid.half_width, n_points)
        energies = eigh_tridiagonal(
            diag, off, eigvals_only=True, select="i", select_range=(0, count - 1)
        )
        levels.append(energies)
    xi, h, diag, off = _interior_operator(potential, grid.half_width, sizes[-1])
    energies, columns = eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))
    levels.append(energies)

    coarse_pair = levels[1] + (levels[1] - levels[0]) / 3.0
    fine_pair = levels[2] + (levels[2] - levels[1]) / 3.0
    scale = np.maximum(np.abs(fine_pair), 1e-3 * np.abs(fine_pair).max())
    drift = np.abs(fine_pair - coarse_pair) / scale
    if drift.max() > 1e-7:
        raise ResolutionError(
            f"refinement check failed: successive extrapolated energies differ by "
            f"{drift.max():.3e} relative (> 1e-07); increase n_points"
        )

    vectors = columns.T / math.sqrt(h)  # trapezoid normalization, psi(+-L) = 0
    _check_boundary(vectors, "grid eigenfunction")
    return GridSolution(xi, fine_pair, vectors)


def _propagate(
    potential: PolynomialPotential,
    m_init: float,
    grid: GridSpec,
    times: np.ndarray,
    dt: float,
):
    """Crank-Nicolson run sampling <x^2>, norm and <H> at the given times."""
    xi, h, diag, off_val = _interior_operator(potential, grid.half_width, grid.n_points)
    off = off_val[0]

    psi = (m_init / math.pi) ** 0.25 * np.exp(-0.5 * m_init * xi * xi)
    psi = psi.astype(complex)
    psi /= math.sqrt(h * np.sum(np.abs(psi) ** 2))

    def apply_h(v: np.ndarray) -> np.ndarray:
        out = diag * v
        out[:-1] += off * v[1:]
        out[1:] += off * v[:-1]
        return out

    def sample(v: np.ndarray) -> tuple[float, float, float]:
        density = np.abs(v) ** 2
        return (
            float(h * np.sum(xi * xi * density)),
            float(h * np.sum(density)),
            float(h * np.real(np.vdot(v, apply_h(v)))),
        )

    banded_cache: dict[float, tuple[np.ndarray, complex]] = {}

    def banded_for(step: float):
        if step not in banded_cache:
            z = 0.5j * step
            ab = np.empty((3, xi.size), dtype=complex)
            ab[0, 0] = 0.0
            ab[0, 1:] = z * off
            ab[1, :] = 1.0 + z * diag
            ab[2, :-1] = z * off
            ab[2, -1] = 0.0
            banded_cache[step] = (ab, z)
        return banded_cache[step]

    x2_out = np.empty(times.size)
    norm_out = np.empty(times.size)
    energy_out = np.empty(times.size)
    t_prev = 0.0
    for i, t_next in enumerate(times):
        span = t_next - t_prev
        if span > 0.0:
            n_steps = max(1, round(span / dt))
            ab, z = banded_for(span / n_steps)
            for _ in range(n_steps):
                rhs = (1.0 - z * diag) * psi
                rhs[:-1] -= z * off * psi[1:]
                rhs[1:] -= z * off * psi[:-1]
                psi = solve_banded((1, 1), ab, rhs)
            t_prev = t_next
        amp = np.abs(psi)
        if max(amp[0], amp[-1]) > BOUNDARY_TOLERANCE * amp.max():
            raise BoundaryLeakError(
                f"wave function reached the boundary near t={t_next:g}; enlarge the domain"
            )
        x2_out[i], norm_out[i], energy_out[i] = sample(psi)
    return x2_out, norm_out, energy_out


def crank_nicolson_evolve(
    potential: PolynomialPotential,
    m_init: float,
    grid: GridSpec,
    times,
) -> ObservableSeries:
    """Norm-preserving Crank-Nicolson evolution of the initial Gaussian.

    The full run is repeated with the time step halved; if any <x^2> sample
    moves by more than 1e-6 the requested step is rejected.  The emitted
    series comes from the finer run.  Sample times are hit exactly by
    snapping each interval to a whole number of steps of size <= dt.
    """
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("times must be a non-empty 1-D sequence")
    if t[0] < 0.0 or np.any(np.diff(t) <= 0.0):
        raise ValueError("times must be non-negative and strictly increasing")
    if m_init <= 0.0:
        raise ValueError(f"Gaussian width parameter must be positive, got {m_init}")

    x2_coarse, _, _ = _propagate(potential, m_init, grid, t, grid.dt)
    x2_fine, norm, energy = _propagate(potential, m_init, grid, t, grid.dt / 2.0)
    drift = np.abs(x2_fine - x2_coarse).max()
    if drift > 1e-6:
        raise StepSizeError(
            f"halving dt moved <x^2> samples by {drift:.3e} (> 1e-06); reduce dt"
        )
    return ObservableSeries(t, x2_fine, norm, energy)


def quadrature_overlap(m: float, basis: BasisSpec, n: int) -> float:
    """Single overlap coefficient c_n of the width-m Gaussian, by the same
    Gauss-Hermite rule the evolution module uses."""
    if not 0 <= n < basis.n_basis:
        raise ValueError(f"index {n} outside the basis of size {basis.n_basis}")
    return float(gaussian_coefficients_quadrature(m, basis)[n])
