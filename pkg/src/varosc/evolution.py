"""Time evolution by the method of stationary states.

The initial Gaussian Psi(x, 0) = (m/pi)^{1/4} exp(-m x^2/2) is projected
onto the truncated basis (coefficients c_n), rotated into the eigenbasis
(a_n), and observables are then exact cosine sums over eigenfrequency
differences,

    <x^p>(t) = sum_{n,l} a_n a_l (X_p)_{nl} cos((E_n - E_l) t),

with (X_p)_{nl} the power matrix conjugated into the eigenbasis.  The norm
sum(a^2) and the energy sum(a^2 E) are constants of the motion by
construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import BasisSpec, basis_function_values, x_matrix_power
from .spectral import SpectralDecomposition


@dataclass(frozen=True)
class EvolutionState:
    """Initial-state coefficients over the basis (c) and eigenbasis (a)."""

    c: np.ndarray
    a: np.ndarray
    decomposition: SpectralDecomposition
    m_init: float


@dataclass(frozen=True)
class ObservableSeries:
    """Time samples of <x^2> together with the conserved norm and energy."""

    times: np.ndarray
    x2: np.ndarray
    norm: np.ndarray
    energy: np.ndarray


@dataclass(frozen=True)
class MomentSeries:
    """Time samples of a general position moment <x^power>."""

    times: np.ndarray
    power: int
    values: np.ndarray
    norm: np.ndarray
    energy: np.ndarray


def gaussian_coefficients_closed(m: float, basis: BasisSpec) -> np.ndarray:
    """Projection coefficients of the width-m Gaussian on a centered basis.

    Odd coefficients vanish by parity; the even ones follow from the
    Hermite expansion of the overlap integral, which sums to

        c_{2l} = sqrt(2) (m Omega)^{1/4} (m + Omega)^{-1/2}
                 * rho^l sqrt((2l)!) / (2^l l!),      rho = (Omega - m)/(Omega + m).

    The factorial ratio is built by recurrence so arbitrarily large orders
    stay finite.  Requires sigma = 0; shifted bases go through the
    quadrature path instead.
    """
    if m <= 0.0:
        raise ValueError(f"Gaussian width parameter must be positive, got {m}")
    if basis.sigma != 0.0:
        raise ValueError(
            "closed-form projection requires a basis centered at the origin; "
            "use gaussian_coefficients_quadrature for shifted bases"
        )
    omega = basis.omega
    rho = (omega - m) / (omega + m)
    c = np.zeros(basis.n_basis)
    term = math.sqrt(2.0) * (m * omega) ** 0.25 / math.sqrt(m + omega)
    c[0] = term
    for l in range(1, (basis.n_basis - 1) // 2 + 1):
        term *= rho * math.sqrt((2 * l) * (2 * l - 1)) / (2 * l)
        c[2 * l] = term
    return c


def gaussian_coefficients_quadrature(
    m: float, basis: BasisSpec, n_nodes: int | None = None
) -> np.ndarray:
    """Overlaps c_n = integral phi_n(x) Psi(x, 0) dx by Gauss-Hermite
    quadrature; valid for shifted bases too.

    The integrand is exactly a degree-n polynomial times the combined
    Gaussian exp(-beta^2 (x - x0)^2 / 2) with beta^2 = m + Omega, so the
    rule is exact once 2*nodes - 1 >= n_basis.  The node-doubling check is
    kept as a guard and the doubled-rule values are returned.
    """
    if m <= 0.0:
        raise ValueError(f"Gaussian width parameter must be positive, got {m}")
    beta_sq = m + basis.omega
    x0 = basis.omega * basis.sigma / beta_sq
    if n_nodes is None:
        n_nodes = basis.n_basis // 2 + 24
    if 2 * n_nodes > 320:
        # beyond ~320 nodes the weight w_i exp(u_i^2) under/overflows in double
        raise ValueError(f"node count {n_nodes} too large for double-precision rules")

    def overlaps(nodes: int) -> np.ndarray:
        u, w = np.polynomial.hermite.hermgauss(nodes)
        x = x0 + u * math.sqrt(2.0 / beta_sq)
        psi0 = (m / math.pi) ** 0.25 * np.exp(-0.5 * m * x * x)
        phi = basis_function_values(basis, x)
        # w_i exp(u_i^2) is O(1): the Gaussian decay sits in phi * psi0
        factors = w * np.exp(u * u) * psi0 * math.sqrt(2.0 / beta_sq)
        return phi @ factors

    coarse = overlaps(n_nodes)
    fine = overlaps(2 * n_nodes)
    drift = np.abs(fine - coarse).max()
    if drift > 1e-12:
        raise ArithmeticError(
            f"quadrature not converged: node doubling moved coefficients by {drift:.3e}"
        )
    return fine


def project_to_eigenbasis(c: np.ndarray, decomposition: SpectralDecomposition) -> np.ndarray:
    """Eigenbasis coefficients a_n = sum_l d_{nl} c_l.

    The eigenvector matrix is orthogonal, so this contraction is its own
    inverse-transpose and preserves the Euclidean norm of c.
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (decomposition.n_basis,):
        raise ValueError(f"coefficient vector has shape {c.shape}, expected ({decomposition.n_basis},)")
    return decomposition.vectors @ c


def gaussian_state(
    decomposition: SpectralDecomposition, m_init: float, method: str = "auto"
) -> EvolutionState:
    """Project the initial Gaussian and package both coefficient vectors.

    ``method`` picks the projection path: "closed", "quadrature", or "auto"
    (closed form when the basis is centered, quadrature otherwise).
    """
    basis = decomposition.basis
    if method == "auto":
        method = "closed" if basis.sigma == 0.0 else "quadrature"
    if method == "closed":
        c = gaussian_coefficients_closed(m_init, basis)
    elif method == "quadrature":
        c = gaussian_coefficients_quadrature(m_init, basis)
    else:
        raise ValueError(f"unknown projection method {method!r}")
    a = project_to_eigenbasis(c, decomposition)
    norm_c, norm_a = float(np.sum(c * c)), float(np.sum(a * a))
    if abs(norm_a - norm_c) > 1e-12:
        raise ArithmeticError(f"projection broke the norm: {norm_c} -> {norm_a}")
    if norm_c > 1.0 + 1e-12:
        raise ArithmeticError(f"projected norm {norm_c} exceeds 1")
    return EvolutionState(c, a, decomposition, m_init)


def _cosine_sum(state: EvolutionState, times, matrix: np.ndarray) -> np.ndarray:
    """sum_{nl} a_n a_l M_{nl} cos((E_n - E_l) t) for each sample time."""
    t = np.asarray(times, dtype=float)
    amplitude = np.outer(state.a, state.a) * matrix
    phase = np.exp(1j * np.outer(t, state.decomposition.energies))
    return np.einsum("ti,ti->t", phase.conj(), phase @ amplitude).real


def observable_series(state: EvolutionState, times, power: int) -> MomentSeries:
    """<x^power>(t) by the stationary-state cosine sum.

    The power matrix is conjugated into the eigenbasis once; evaluation is
    then independent per time sample.  Norm and energy columns carry the
    conserved sums a^2 and a^2 E.
    """
    dec = state.decomposition
    xp = dec.vectors @ x_matrix_power(dec.basis, power) @ dec.vectors.T
    t = np.asarray(times, dtype=float)
    values = _cosine_sum(state, t, xp)
    norm = float(np.sum(state.a**2))
    energy = float(np.sum(state.a**2 * dec.energies))
    return MomentSeries(t, power, values, np.full(t.shape, norm), np.full(t.shape, energy))


def x2_series(state: EvolutionState, times) -> ObservableSeries:
    """<x^2>(t) with the conserved norm and energy attached."""
    moments = observable_series(state, times, 2)
    return ObservableSeries(moments.times, moments.values, moments.norm, moments.energy)
