"""Selection of the variational basis frequency Omega (and optionally the
center sigma) by the principle of minimal sensitivity: the truncated trace
T_N must be stationary in the basis parameters, since the exact spectrum
does not depend on them.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .basis import BasisSpec, PolynomialPotential, trace_diagonal
from .errors import InvalidModelError, NoStationaryPointError

DEFAULT_OMEGA_BOUNDS = (1e-3, 1e3)


@dataclass(frozen=True)
class PmsResult:
    """Stationary basis parameters and the trace value there."""

    omega: float
    sigma: float
    trace_value: float
    method: str  # "closed-form" | "numeric-1d" | "numeric-2d"


def quartic_family_parameters(potential: PolynomialPotential) -> tuple[float, float]:
    """Map K p^2 + v0 + v2 x^2 + v4 x^4 onto the reference quartic family
    p^2/2 - m^2 x^2/2 + g x^4.

    The trace stationarity condition for general K is the same cubic in
    Omega with m^2 = -v2/K and g = v4/(2K); a constant v0 shifts the trace
    uniformly and never moves the stationary point.  Raises
    InvalidModelError for any other potential shape.
    """
    v = potential.potential_coeffs
    if any(v[j] != 0.0 for j in range(len(v)) if j not in (0, 2, 4)):
        raise InvalidModelError(
            "closed-form PMS frequency applies only to quadratic-plus-quartic potentials"
        )
    v2 = v[2] if len(v) > 2 else 0.0
    v4 = v[4] if len(v) > 4 else 0.0
    if v4 <= 0.0:
        raise InvalidModelError("closed-form PMS frequency requires a positive quartic term")
    k = potential.kinetic_coeff
    return -v2 / k, v4 / (2.0 * k)


def omega_pms_closed(n_basis: int, m_sq: float, g: float) -> float:
    """Unique positive root of Omega^3 + m^2 Omega = 2 g (1 + 2 N^2) / N.

    Evaluated in Cardano form, Omega = X^{1/3}/3 - m^2 X^{-1/3} with

        X = (3/N) [9 g (1 + 2 N^2) + sqrt(3) (N^2 m^6 + 27 g^2 (1 + 2 N^2)^2)^{1/2}],

    where the inner square root may turn imaginary for m^2 < 0; the
    principal complex cube root then still produces the positive real root
    (the two conjugate contributions add up to twice the real part).  Two
    Newton steps polish the result to machine residual.
    """
    if n_basis < 1:
        raise ValueError("n_basis must be >= 1")
    if g <= 0.0:
        raise InvalidModelError("quartic coupling must be positive")
    rhs = 2.0 * g * (1.0 + 2.0 * n_basis**2) / n_basis
    disc = cmath.sqrt(n_basis**2 * m_sq**3 + 27.0 * g**2 * (1.0 + 2.0 * n_basis**2) ** 2)
    x = (3.0 / n_basis) * (9.0 * g * (1.0 + 2.0 * n_basis**2) + math.sqrt(3.0) * disc)
    root = x ** (1.0 / 3.0)
    omega = (root / 3.0 - m_sq / root).real
    for _ in range(2):  # polish away cube-root rounding
        f = omega**3 + m_sq * omega - rhs
        omega -= f / (3.0 * omega**2 + m_sq)
    residual = omega**3 + m_sq * omega - rhs
    scale = max(1.0, abs(m_sq * omega), abs(rhs))
    if not omega > 0.0 or abs(residual) > 1e-12 * scale:
        raise ArithmeticError(
            f"cubic root failed: omega={omega}, residual={residual:.3e}"
        )
    return omega


def _trace_of(potential: PolynomialPotential, n_basis: int):
    def f(omega: float, sigma: float = 0.0) -> float:
        return trace_diagonal(potential, BasisSpec(omega, n_basis, sigma))

    return f


def _derivative_polish(f, x0: float, span: float) -> float:
    """Refine a smooth interior minimum by root-finding the central-difference
    derivative.  A direct function minimum is only reliable to sqrt(eps);
    the derivative root recovers nearly full precision."""
    h = 1e-6 * max(abs(x0), 1e-3)

    def df(x: float) -> float:
        return (f(x + h) - f(x - h)) / (2.0 * h)

    lo, hi = x0 - span, x0 + span
    try:
        if df(lo) < 0.0 < df(hi):
            return float(optimize.brentq(df, lo, hi, xtol=1e-15, rtol=8.9e-16))
    except ValueError:
        pass
    return x0


def optimize_pms_numeric(
    potential: PolynomialPotential,
    n_basis: int,
    bounds: tuple[float, float] = DEFAULT_OMEGA_BOUNDS,
    optimize_sigma: bool = False,
    sigma: float = 0.0,
) -> PmsResult:
    """Locate the PMS point of the truncated trace numerically.

    1D mode minimizes T_N over Omega inside ``bounds`` (log-grid bracket,
    Brent minimization, then a derivative-root polish).  2D mode starts the
    simplex search for (Omega, sigma) from the 1D solution and finishes
    with coordinate-wise bracketed polishing.  Raises NoStationaryPointError
    when the trace is monotone over the interval.
    """
    lo, hi = bounds
    if not (0.0 < lo < hi):
        raise ValueError(f"bounds must satisfy 0 < lo < hi, got {bounds}")
    f = _trace_of(potential, n_basis)

    grid = np.geomspace(lo, hi, 181)
    vals = np.array([f(om, sigma) for om in grid])
    i = int(np.argmin(vals))
    if i == 0 or i == len(grid) - 1:
        end = "lower" if i == 0 else "upper"
        raise NoStationaryPointError(
            f"trace is monotone over omega in [{lo:g}, {hi:g}]: minimal value "
            f"{vals[i]:.6g} sits at the {end} end (T({lo:g})={vals[0]:.6g}, "
            f"T({hi:g})={vals[-1]:.6g})"
        )
    res = optimize.minimize_scalar(
        lambda u: f(math.exp(u), sigma),
        bracket=(math.log(grid[i - 1]), math.log(grid[i]), math.log(grid[i + 1])),
        method="brent",
        options={"xtol": 1e-12},
    )
    omega = _derivative_polish(lambda om: f(om, sigma), math.exp(res.x), 1e-3 * math.exp(res.x))

    if not optimize_sigma:
        return PmsResult(omega, sigma, f(omega, sigma), "numeric-1d")

    simplex = optimize.minimize(
        lambda z: f(z[0], z[1]) if z[0] > 0 else np.inf,
        x0=np.array([omega, sigma]),
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 2000},
    )
    omega, sig = float(simplex.x[0]), float(simplex.x[1])
    for _ in range(2):  # coordinate-wise polish, tolerance 1e-8 on both
        omega = _derivative_polish(lambda om: f(om, sig), omega, 1e-3 * omega)
        sig = _derivative_polish(lambda s: f(omega, s), sig, 1e-3 * max(abs(sig), 1.0))
    return PmsResult(omega, sig, f(omega, sig), "numeric-2d")


def trace_scan(
    potential: PolynomialPotential, n_basis: int, omega_grid
) -> np.ndarray:
    """Sample (Omega, T_N / N) over a frequency grid; two-column array."""
    omegas = np.asarray(omega_grid, dtype=float)
    if np.any(omegas <= 0.0):
        raise ValueError("omega grid values must be positive")
    f = _trace_of(potential, n_basis)
    table = np.empty((omegas.size, 2))
    table[:, 0] = omegas
    table[:, 1] = [f(om) / n_basis for om in omegas]
    return table
