"""Command-line front end.

Subcommands: spectrum | evolve | pms-scan | validate.  Runs are described
by a single JSON config document (see README for the schema); a few flags
override config fields.  Plot-ready tables go to CSV (comma separated,
header row, LF endings, floats at 17 significant digits so identical
configs produce byte-identical files); structured reports go to JSON.
Exit codes: 0 ok, 2 config error, 3 numerical-check failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .basis import BasisSpec, PolynomialPotential, build_hamiltonian
from .errors import ConfigError, InvalidModelError
from .evolution import gaussian_state, x2_series
from .oracle import GridSpec, crank_nicolson_evolve, grid_eigensolve
from .pms import omega_pms_closed, optimize_pms_numeric, quartic_family_parameters, trace_scan
from .spectral import eigendecompose, solve_spectrum

_FLOAT_FMT = "{:.17g}"


@dataclass(frozen=True)
class RunConfig:
    """Validated run description assembled from the JSON config plus flag
    overrides."""

    potential: PolynomialPotential
    potential_label: str
    m_init: float
    n_values: tuple[int, ...]
    omega_mode: object          # "pms" | "pms-numeric" | float
    sigma_mode: object          # float | "optimize"
    omega_bounds: tuple[float, float]
    times: np.ndarray
    grid: GridSpec
    oracle_count: int
    scan_grid: np.ndarray
    out_dir: Path


# ---------------------------------------------------------------------------
# config parsing


def _parse_times(spec: str) -> np.ndarray:
    try:
        start_s, stop_s, step_s = spec.split(":")
        start, stop, step = float(start_s), float(stop_s), float(step_s)
    except ValueError as exc:
        raise ConfigError(f"times must look like START:STOP:STEP, got {spec!r}") from exc
    if step <= 0.0 or stop < start:
        raise ConfigError(f"times range {spec!r} is empty or has a non-positive step")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    times = start + step * np.arange(count)
    if np.any(np.diff(times) <= 0.0):
        raise ConfigError("time grid must be strictly increasing")
    return times


def _parse_potential(block: dict) -> tuple[PolynomialPotential, str, float | None]:
    """Returns (potential, label, natural initial width or None)."""
    if not isinstance(block, dict) or len(block) != 1:
        raise ConfigError("config must give exactly one potential form")
    (form, params), = block.items()
    try:
        if form == "slow_roll":
            a, lam = float(params["a"]), float(params["lambda"])
            m_sq = lam * a * a / 6.0
            return (
                PolynomialPotential.double_well(a, lam),
                f"slow_roll(a={a:g}, lambda={lam:g})",
                math.sqrt(m_sq),
            )
        if form == "quartic_benchmark":
            g = float(params["g"])
            return PolynomialPotential.quartic_benchmark(g), f"quartic_benchmark(g={g:g})", None
        if form == "harmonic":
            omega = float(params["omega"])
            return PolynomialPotential.harmonic(omega), f"harmonic(omega={omega:g})", omega
        if form == "coefficients":
            kinetic = float(params.get("kinetic", 0.5))
            coeffs = tuple(float(v) for v in params["v"])
            return PolynomialPotential(kinetic, coeffs), "coefficients", None
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad parameters for potential form {form!r}: {exc}") from exc
    raise ConfigError(f"unknown potential form {form!r}")


def _parse_omega_mode(raw) -> object:
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        if raw <= 0:
            raise ConfigError(f"fixed omega must be positive, got {raw}")
        return float(raw)
    if raw in ("pms", "pms-closed", "pms-numeric"):
        return "pms" if raw == "pms-closed" else raw
    if isinstance(raw, str):
        try:
            return _parse_omega_mode(float(raw))
        except ValueError:
            pass
    raise ConfigError(f"omega mode must be 'pms', 'pms-numeric' or a positive number, got {raw!r}")


def _harmonic_origin_width(potential: PolynomialPotential) -> float:
    """Width of the harmonic ground state matching |V''(0)|: the customary
    initial Gaussian for wells and inverted wells alike."""
    v2 = potential.potential_coeffs[2] if len(potential.potential_coeffs) > 2 else 0.0
    if v2 == 0.0:
        raise ConfigError("'harmonic-origin' initial width needs a nonzero x^2 coefficient")
    return math.sqrt(abs(v2) / potential.kinetic_coeff)


def load_config(raw: dict, overrides: argparse.Namespace) -> RunConfig:
    if "potential" not in raw:
        raise ConfigError("config is missing the 'potential' block")
    potential, label, natural_width = _parse_potential(raw["potential"])

    basis_block = raw.get("basis", {})
    n_raw = basis_block.get("n_basis", 10)
    if overrides.n_basis is not None:
        n_raw = overrides.n_basis
    if isinstance(n_raw, str):
        n_raw = [part for part in n_raw.split(",") if part]
    if not isinstance(n_raw, list):
        n_raw = [n_raw]
    try:
        n_values = tuple(int(n) for n in n_raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"n_basis must be an integer or list of integers, got {n_raw!r}") from exc
    if not n_values or any(n < 1 for n in n_values):
        raise ConfigError(f"n_basis values must be positive, got {n_values}")

    omega_raw = basis_block.get("omega", "pms")
    if overrides.omega is not None:
        omega_raw = overrides.omega
    omega_mode = _parse_omega_mode(omega_raw)

    sigma_raw = basis_block.get("sigma", 0.0)
    if sigma_raw == "optimize":
        sigma_mode = "optimize"
    else:
        try:
            sigma_mode = float(sigma_raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"sigma must be a number or 'optimize', got {sigma_raw!r}") from exc

    bounds_raw = basis_block.get("omega_bounds", [1e-3, 1e3])
    try:
        omega_bounds = (float(bounds_raw[0]), float(bounds_raw[1]))
    except (TypeError, ValueError, IndexError) as exc:
        raise ConfigError(f"omega_bounds must be [lo, hi], got {bounds_raw!r}") from exc
    if not 0.0 < omega_bounds[0] < omega_bounds[1]:
        raise ConfigError(f"omega_bounds must satisfy 0 < lo < hi, got {omega_bounds}")

    evolution_block = raw.get("evolution", {})
    m_raw = evolution_block.get("m_init", "harmonic-origin")
    if m_raw == "harmonic-origin":
        m_init = natural_width if natural_width is not None else _harmonic_origin_width(potential)
    else:
        try:
            m_init = float(m_raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"m_init must be a number or 'harmonic-origin', got {m_raw!r}") from exc
    if m_init <= 0.0:
        raise ConfigError(f"initial Gaussian width must be positive, got {m_init}")

    times_raw = evolution_block.get("times", "0:30:0.05")
    if overrides.times is not None:
        times_raw = overrides.times
    times = _parse_times(times_raw)

    oracle_block = raw.get("oracle", {})
    try:
        grid = GridSpec(
            half_width=float(oracle_block.get("half_width", 15.0)),
            n_points=int(oracle_block.get("n_points", 3000)),
            dt=float(oracle_block.get("dt", 0.005)),
        )
        oracle_count = int(oracle_block.get("count", 4))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad oracle block: {exc}") from exc

    scan_block = raw.get("scan", {})
    try:
        scan_grid = np.linspace(
            float(scan_block.get("omega_min", 0.05)),
            float(scan_block.get("omega_max", 1.0)),
            int(scan_block.get("count", 96)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad scan block: {exc}") from exc
    if scan_grid[0] <= 0.0:
        raise ConfigError("scan omega_min must be positive")

    out_dir = Path(overrides.out if overrides.out is not None else raw.get("output", {}).get("dir", "out"))

    return RunConfig(
        potential=potential,
        potential_label=label,
        m_init=m_init,
        n_values=n_values,
        omega_mode=omega_mode,
        sigma_mode=sigma_mode,
        omega_bounds=omega_bounds,
        times=times,
        grid=grid,
        oracle_count=oracle_count,
        scan_grid=scan_grid,
        out_dir=out_dir,
    )


# ---------------------------------------------------------------------------
# output helpers


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    rows = [",".join(header)]
    for i in range(len(columns[0])):
        rows.append(",".join(_FLOAT_FMT.format(float(col[i])) for col in columns))
    _atomic_write(path, "\n".join(rows) + "\n")


def write_json(path: Path, payload: dict) -> None:
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def _solve(config: RunConfig, n: int):
    return solve_spectrum(
        config.potential,
        n,
        omega_mode=config.omega_mode,
        sigma_mode=config.sigma_mode,
        omega_bounds=config.omega_bounds,
    )


def cmd_spectrum(config: RunConfig) -> int:
    report: dict = {"potential": config.potential_label, "runs": []}
    for n in config.n_values:
        dec = _solve(config, n)
        write_csv(
            config.out_dir / f"spectrum_N{n}.csv",
            ["level", "energy"],
            [np.arange(n), dec.energies],
        )
        report["runs"].append(
            {
                "n_basis": n,
                "omega": dec.basis.omega,
                "sigma": dec.basis.sigma,
                "energies": [float(e) for e in dec.energies],
            }
        )
    if len(config.n_values) > 1:
        runs = report["runs"]
        report["convergence"] = [
            {
                "n_pair": [runs[i]["n_basis"], runs[i + 1]["n_basis"]],
                "delta_e0": abs(runs[i + 1]["energies"][0] - runs[i]["energies"][0]),
            }
            for i in range(len(runs) - 1)
        ]
    write_json(config.out_dir / "spectrum.json", report)
    for run in report["runs"]:
        print(f"N={run['n_basis']}: omega={run['omega']:.10g} E0={run['energies'][0]:.12g}")
    return 0


def cmd_evolve(config: RunConfig) -> int:
    for n in config.n_values:
        dec = _solve(config, n)
        state = gaussian_state(dec, config.m_init)
        series = x2_series(state, config.times)
        write_csv(
            config.out_dir / f"evolve_N{n}.csv",
            ["t", "x2_mean", "x2_rms", "norm", "energy"],
            [series.times, series.x2, np.sqrt(series.x2), series.norm, series.energy],
        )
        print(
            f"N={n}: {series.times.size} samples, x2(0)={series.x2[0]:.6g}, "
            f"norm={series.norm[0]:.12g}"
        )
    return 0


def cmd_pms_scan(config: RunConfig) -> int:
    header = ["omega"]
    columns = [config.scan_grid]
    for n in config.n_values:
        table = trace_scan(config.potential, n, config.scan_grid)
        header.append(f"trace_over_N{n}")
        columns.append(table[:, 1])
        interior = np.argmin(table[:, 1])
        print(f"N={n}: scan minimum near omega={table[interior, 0]:.6g}")
    write_csv(config.out_dir / "pms_scan.csv", header, columns)
    return 0


# ---------------------------------------------------------------------------
# validate


def _check_harmonic_exactness(config: RunConfig):
    potential = PolynomialPotential.harmonic(1.0)
    basis = BasisSpec(1.0, 16)
    dec = eigendecompose(build_hamiltonian(potential, basis), basis)
    exact = np.arange(16) + 0.5
    err_e = np.abs(dec.energies - exact).max()
    err_d = np.abs(dec.vectors - np.eye(16)).max()
    ok = err_e < 1e-12 and err_d < 1e-12
    return ok, f"energy dev {err_e:.2e}, eigenvector dev {err_d:.2e} (tol 1e-12)"


def _check_matrix_elements(config: RunConfig):
    from .basis import x_matrix_power, x_power_element_closed

    worst = 0.0
    basis = BasisSpec(0.7, 12)
    for p in range(7):
        ladder = x_matrix_power(basis, p)
        closed = np.array(
            [[x_power_element_closed(basis, i, j, p) for j in range(12)] for i in range(12)]
        )
        scale = np.abs(ladder).max() or 1.0
        worst = max(worst, np.abs(ladder - closed).max() / scale)
    return worst < 1e-12, f"closed-form vs ladder elements: worst scaled dev {worst:.2e} (tol 1e-12)"


def _check_pms_consistency(config: RunConfig):
    n = config.n_values[-1]
    numeric = optimize_pms_numeric(config.potential, n, bounds=config.omega_bounds)
    try:
        m_sq, g = quartic_family_parameters(config.potential)
    except InvalidModelError:
        return True, f"closed form not applicable; numeric PMS omega={numeric.omega:.8g}"
    closed = omega_pms_closed(n, m_sq, g)
    rel = abs(numeric.omega - closed) / closed
    return rel < 1e-8, f"closed {closed:.10g} vs numeric {numeric.omega:.10g}: rel dev {rel:.2e} (tol 1e-08)"


def _check_spectrum_vs_oracle(config: RunConfig):
    n = config.n_values[-1]
    count = min(config.oracle_count, n)
    reference = grid_eigensolve(config.potential, config.grid, count).energies
    scale = np.maximum(np.abs(reference), 1e-3 * np.abs(reference).max())

    def rel_err(n_basis: int) -> float:
        dec = _solve(config, n_basis)
        return float((np.abs(dec.energies[:count] - reference) / scale).max())

    base, refined = rel_err(n), rel_err(n + 8)
    ok = refined <= max(0.3 * base, 1e-10)
    return ok, (
        f"lowest {count} levels vs grid: rel err {base:.2e} at N={n}, "
        f"{refined:.2e} at N={n + 8} (must shrink)"
    )


def _check_evolution_self_convergence(config: RunConfig):
    n = config.n_values[-1]
    curves = []
    for order in (n, n + 4):
        dec = _solve(config, order)
        state = gaussian_state(dec, config.m_init)
        curves.append(np.sqrt(x2_series(state, config.times).x2))
    dev = float(np.abs(curves[0] - curves[1]).max())
    return dev < 1e-2, f"max |rms_x(N={n}) - rms_x(N={n + 4})| = {dev:.3e} (tol 1e-02)"


def _check_conservation(config: RunConfig):
    dec = _solve(config, config.n_values[-1])
    state = gaussian_state(dec, config.m_init)
    series = x2_series(state, config.times)
    norm_dev = float(np.abs(series.norm - series.norm[0]).max())
    energy_dev = float(np.abs(series.energy - series.energy[0]).max())
    rel_energy = energy_dev / max(abs(series.energy[0]), 1e-300)
    ok = norm_dev == 0.0 and rel_energy < 1e-10
    return ok, f"norm column spread {norm_dev:.1e}, energy rel spread {rel_energy:.2e}"


def _check_parity_and_completeness(config: RunConfig):
    from .evolution import gaussian_coefficients_closed

    n = config.n_values[-1]
    dec = _solve(config, n)
    c = gaussian_coefficients_closed(config.m_init, dec.basis.centered())
    odd = float(np.abs(c[1::2]).max()) if n > 1 else 0.0
    deficits = []
    for order in sorted({max(4, n - 4), n, n + 4}):
        basis = BasisSpec(dec.basis.omega, order)
        ci = gaussian_coefficients_closed(config.m_init, basis)
        deficits.append(max(1.0 - float(np.sum(ci * ci)), 1e-13))
    monotone = all(deficits[i + 1] <= deficits[i] for i in range(len(deficits) - 1))
    ok = odd < 1e-12 and monotone
    return ok, f"max odd |c_n| = {odd:.2e}; deficits {['%.2e' % d for d in deficits]}"


def cmd_validate(config: RunConfig) -> int:
    checks = [
        ("harmonic-exactness", _check_harmonic_exactness),
        ("matrix-elements", _check_matrix_elements),
        ("pms-consistency", _check_pms_consistency),
        ("spectrum-vs-oracle", _check_spectrum_vs_oracle),
        ("evolution-self-convergence", _check_evolution_self_convergence),
        ("conservation", _check_conservation),
        ("parity-completeness", _check_parity_and_completeness),
    ]
    results = []
    all_ok = True
    for name, check in checks:
        try:
            ok, detail = check(config)
        except (RuntimeError, ArithmeticError, ValueError) as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        ok = bool(ok)
        results.append({"check": name, "passed": ok, "detail": detail})
        all_ok = all_ok and ok
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    write_json(config.out_dir / "validate.json", {"passed": all_ok, "checks": results})
    return 0 if all_ok else 3


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="varosc",
        description="Spectra and dynamics of 1D polynomial potentials "
        "in a PMS-optimized oscillator basis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("spectrum", "energies and eigenvectors for each requested basis size"),
        ("evolve", "time series of <x^2> via the method of stationary states"),
        ("pms-scan", "trace-over-N samples across a frequency grid"),
        ("validate", "run the oracle cross-check suite and report pass/fail"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", type=Path, default=None, help="JSON config file")
        cmd.add_argument("--n-basis", dest="n_basis", default=None,
                         help="basis size or comma-separated list (overrides config)")
        cmd.add_argument("--omega", default=None,
                         help="pms | pms-numeric | positive number (overrides config)")
        cmd.add_argument("--out", default=None, help="output directory (overrides config)")
        cmd.add_argument("--times", default=None, help="START:STOP:STEP (overrides config)")
    return parser


_DISPATCH = {
    "spectrum": cmd_spectrum,
    "evolve": cmd_evolve,
    "pms-scan": cmd_pms_scan,
    "validate": cmd_validate,
}

_DEFAULT_CONFIG = {"potential": {"slow_roll": {"a": 5.0, "lambda": 0.01}}, "basis": {"n_basis": 14}}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config is not None:
            try:
                raw = json.loads(Path(args.config).read_text())
            except OSError as exc:
                raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config {args.config} is not valid JSON: {exc}") from exc
        else:
            raw = _DEFAULT_CONFIG
        config = load_config(raw, args)
        return _DISPATCH[args.command](config)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, ArithmeticError) as exc:
        print(f"numerical check failed: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
