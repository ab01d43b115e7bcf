"""Harmonic-oscillator basis and matrix representations of x^p, p^2 and
polynomial Hamiltonians.

The basis functions are

    phi_n(x) = N_n exp(-alpha^2 (x - sigma)^2 / 2) H_n(alpha (x - sigma)),

with N_n = (alpha / (2^n n! sqrt(pi)))^{1/2}, an arbitrary frequency
Omega = alpha^2 and an optional center sigma.  Everything here is a pure
function of immutable inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class BasisSpec:
    """Oscillator basis parameters: frequency Omega (= alpha^2), truncation
    order N and center sigma."""

    omega: float
    n_basis: int
    sigma: float = 0.0

    def __post_init__(self):
        if not self.omega > 0.0:
            raise ValueError(f"basis frequency must be positive, got {self.omega}")
        if int(self.n_basis) != self.n_basis or self.n_basis < 1:
            raise ValueError(f"n_basis must be a positive integer, got {self.n_basis}")

    @property
    def alpha(self) -> float:
        return math.sqrt(self.omega)

    def centered(self) -> "BasisSpec":
        """The same basis with its center moved to the origin."""
        return replace(self, sigma=0.0) if self.sigma != 0.0 else self


@dataclass(frozen=True)
class PolynomialPotential:
    """Hamiltonian model H = kinetic_coeff * p^2 + sum_j v_j x^j.

    The leading nonzero coefficient must have even degree and be positive,
    so that the potential confines and the spectrum is purely discrete.
    An all-zero coefficient list (free particle) is allowed; it is useful
    for propagator checks even though it has no bound states.
    """

    kinetic_coeff: float
    potential_coeffs: tuple[float, ...]

    def __post_init__(self):
        if not self.kinetic_coeff > 0.0:
            raise ValueError(f"kinetic coefficient must be positive, got {self.kinetic_coeff}")
        coeffs = tuple(float(v) for v in self.potential_coeffs)
        object.__setattr__(self, "potential_coeffs", coeffs)
        lead = next((j for j in reversed(range(len(coeffs))) if coeffs[j] != 0.0), None)
        if lead is not None and (lead % 2 == 1 or coeffs[lead] < 0.0):
            raise ValueError(
                "leading potential coefficient must be positive and of even degree, "
                f"got v_{lead} = {coeffs[lead]}"
            )

    @classmethod
    def harmonic(cls, omega: float) -> "PolynomialPotential":
        """H = p^2/2 + omega^2 x^2 / 2."""
        return cls(0.5, (0.0, 0.0, 0.5 * omega * omega))

    @classmethod
    def double_well(cls, a: float, coupling_lambda: float) -> "PolynomialPotential":
        """Symmetric quartic double well lambda (x^2 - a^2)^2 / 24 with the
        constant dropped: H = p^2/2 - m^2 x^2/2 + g x^4, m^2 = lambda a^2/6,
        g = lambda/24."""
        m_sq = coupling_lambda * a * a / 6.0
        g = coupling_lambda / 24.0
        return cls(0.5, (0.0, 0.0, -0.5 * m_sq, 0.0, g))

    @classmethod
    def quartic_benchmark(cls, g: float) -> "PolynomialPotential":
        """Strong-coupling benchmark H = p^2 + x^2 + 2 g x^4."""
        return cls(1.0, (0.0, 0.0, 1.0, 0.0, 2.0 * g))

    @property
    def degree(self) -> int:
        return next((j for j in reversed(range(len(self.potential_coeffs)))
                     if self.potential_coeffs[j] != 0.0), 0)

    def values(self, x: np.ndarray) -> np.ndarray:
        """V(x) evaluated pointwise."""
        return np.polynomial.polynomial.polyval(x, self.potential_coeffs)

    def shifted_coeffs(self, sigma: float) -> tuple[float, ...]:
        """Coefficients w_k of V(sigma + xi) = sum_k w_k xi^k (exact binomial
        re-expansion about x = sigma)."""
        if sigma == 0.0:
            return self.potential_coeffs
        v = self.potential_coeffs
        w = [0.0] * len(v)
        for j, vj in enumerate(v):
            if vj != 0.0:
                for k in range(j + 1):
                    w[k] += vj * math.comb(j, k) * sigma ** (j - k)
        return tuple(w)


def _mirror_upper(m: np.ndarray) -> np.ndarray:
    """Copy the upper triangle onto the lower one: bit-for-bit symmetry."""
    return np.triu(m) + np.triu(m, 1).T


def position_matrix(basis: BasisSpec, dim: int) -> np.ndarray:
    """Position operator in a dim-dimensional ladder representation:
    x = sigma + (a + a^dag)/(sqrt(2) alpha)."""
    off = np.sqrt(np.arange(1, dim) / (2.0 * basis.omega))
    x = np.zeros((dim, dim))
    idx = np.arange(dim - 1)
    x[idx, idx + 1] = off
    x[idx + 1, idx] = off
    if basis.sigma != 0.0:
        x[np.diag_indices(dim)] += basis.sigma
    return x


def x_matrix_power(basis: BasisSpec, p: int) -> np.ndarray:
    """Exact truncated matrix of x^p, entries (x^p)_{nl} for n, l < N.

    Built by raising the position operator to the p-th power in an
    (N + p)-dimensional ladder space and truncating.  x couples only
    neighbouring levels, so intermediate sums for the retained block never
    reach beyond level N + p - 1 and the truncation loses nothing.
    """
    if p < 0 or int(p) != p:
        raise ValueError(f"power must be a non-negative integer, got {p}")
    n = basis.n_basis
    if p == 0:
        return np.eye(n)
    full = np.linalg.matrix_power(position_matrix(basis, n + p), p)
    return _mirror_upper(full[:n, :n])


def x_power_element_closed(basis: BasisSpec, n: int, ell: int, p: int) -> float:
    """Closed-form matrix element ((x - sigma)^p)_{n ell} of the centered
    coordinate (equal to (x^p)_{n ell} for a basis centered at the origin).

    With s = |ell - n| the element vanishes unless p >= s and p - s is even;
    otherwise, writing q = (p - s)/2,

        (xi^p)_{n ell} = (2 Omega)^{-p/2} p! sqrt(n! ell!)
                         * sum_{k=0}^{min(n,q)} [2^{q-k} (q-k)! (n-k)! (s+k)! k!]^{-1}

    for ell >= n (the matrix is symmetric).  All terms are positive, so the
    sum is evaluated stably from log-gamma factors.
    """
    if n < 0 or ell < 0:
        raise ValueError("state indices must be non-negative")
    if p < 0:
        raise ValueError("power must be non-negative")
    if ell < n:
        n, ell = ell, n
    s = ell - n
    if p < s or (p - s) % 2 != 0:
        return 0.0
    q = (p - s) // 2
    log_pref = (
        math.lgamma(p + 1)
        + 0.5 * (math.lgamma(n + 1) + math.lgamma(ell + 1))
        - 0.5 * p * math.log(2.0 * basis.omega)
    )
    total = 0.0
    for k in range(min(n, q) + 1):
        lg = (
            log_pref
            - (q - k) * _LN2
            - math.lgamma(q - k + 1)
            - math.lgamma(n - k + 1)
            - math.lgamma(s + k + 1)
            - math.lgamma(k + 1)
        )
        total += math.exp(lg)
    return total


def p2_matrix(basis: BasisSpec) -> np.ndarray:
    """Matrix of p^2: diagonal Omega (n + 1/2), off-diagonal
    -(Omega/2) sqrt((n+1)(n+2)) two steps away.  Momentum matrix elements
    are translation invariant, so the center sigma never enters."""
    n = basis.n_basis
    m = np.zeros((n, n))
    m[np.diag_indices(n)] = basis.omega * (np.arange(n) + 0.5)
    if n > 2:
        idx = np.arange(n - 2)
        val = -0.5 * basis.omega * np.sqrt((idx + 1.0) * (idx + 2.0))
        m[idx, idx + 2] = val
        m[idx + 2, idx] = val
    return m


def build_hamiltonian(potential: PolynomialPotential, basis: BasisSpec) -> np.ndarray:
    """Truncated Hamiltonian H_{nl} in the (possibly shifted) basis.

    For sigma != 0 the potential is re-expanded about the center by exact
    binomial shift and the centered-coordinate power matrices are used.
    The result is symmetric bit-for-bit.
    """
    centered = basis.centered()
    h = potential.kinetic_coeff * p2_matrix(basis)
    for k, w in enumerate(potential.shifted_coeffs(basis.sigma)):
        if w != 0.0:
            h = h + w * x_matrix_power(centered, k)
    return _mirror_upper(h)


def trace_diagonal(potential: PolynomialPotential, basis: BasisSpec) -> float:
    """T_N = sum_{n<N} H_nn from diagonal matrix elements alone.

    The kinetic diagonal sums to kinetic_coeff * Omega * N^2 / 2; potential
    terms use the closed-form diagonal elements of even centered powers
    (odd powers have no diagonal by parity).  This path never builds the
    full matrix, so it can cross-check build_hamiltonian's trace.
    """
    n = basis.n_basis
    total = potential.kinetic_coeff * basis.omega * n * n / 2.0
    centered = basis.centered()
    for j, w in enumerate(potential.shifted_coeffs(basis.sigma)):
        if w != 0.0 and j % 2 == 0:
            total += w * sum(x_power_element_closed(centered, i, i, j) for i in range(n))
    return total


def basis_function_values(basis: BasisSpec, x: np.ndarray, count: int | None = None) -> np.ndarray:
    """phi_n(x) for n < count on the given points, shape (count, len(x)).

    Uses the recurrence for normalized Hermite functions
    h_n(y) = sqrt(2/n) y h_{n-1}(y) - sqrt((n-1)/n) h_{n-2}(y), which keeps
    every intermediate bounded (no raw Hermite polynomials, no factorials).
    """
    if count is None:
        count = basis.n_basis
    x = np.asarray(x, dtype=float)
    y = basis.alpha * (x - basis.sigma)
    out = np.empty((count, x.size))
    h_prev = math.pi ** -0.25 * np.exp(-0.5 * y * y)
    out[0] = h_prev
    if count > 1:
        h_cur = math.sqrt(2.0) * y * h_prev
        out[1] = h_cur
        for n in range(2, count):
            h_prev, h_cur = h_cur, math.sqrt(2.0 / n) * y * h_cur - math.sqrt((n - 1) / n) * h_prev
            out[n] = h_cur
    return math.sqrt(basis.alpha) * out
