"""Run orchestration: config parsing, subcommand dispatch, output writing.

Exit codes: 0 success, 2 usage/config errors, 3 physics-domain validation
errors, 4 numerical failures. Every run writes a manifest listing the
produced files with content hashes; identical configs produce bit-identical
data files.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, check_keys, load_config, medium_from_config
from .dispersion import (
    DegenerateBranch,
    FitResidualTooLarge,
    band_structure,
    dark_curvature_closed_form,
    dark_mass_fit,
    transverse_curvature_closed_form,
    write_band_csv,
)
from .emission import (
    EquilibriumSpec,
    NoConvergence,
    chemical_potential,
    transverse_profile,
    write_emission_csv,
)
from .evolve import (
    EvolutionConfig,
    NonFiniteField,
    StabilityViolation,
    gaussian_state,
    observables,
    step,
    uniform_state,
)
from .kinetics import kerr_coupling, master_equation_coefficients, rate_report
from .medium import ParameterError
from .thermo import critical_temperature, mass_tensor

EXIT_CONFIG = 2
EXIT_PHYSICS = 3
EXIT_NUMERICS = 4

_NUMERICAL_ERRORS = (
    DegenerateBranch,
    FitResidualTooLarge,
    StabilityViolation,
    NonFiniteField,
    NoConvergence,
    AssertionError,
    np.linalg.LinAlgError,
)


def _fmt(value):
    """JSON-serializable form with floats at 17 significant digits."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        if math.isfinite(value):
            return float(f"{value:.17g}")
        return str(value)
    if isinstance(value, complex):
        return {"re": _fmt(value.real), "im": _fmt(value.imag)}
    if isinstance(value, dict):
        return {k: _fmt(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_fmt(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_fmt(float(v)) for v in value.tolist()]
    if isinstance(value, np.floating):
        return _fmt(float(value))
    if isinstance(value, np.integer):
        return int(value)
    return value


def write_json(obj: dict, path: Path) -> None:
    path.write_text(json.dumps(_fmt(obj), indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(out_dir: Path, subcommand: str, cfg: dict, files: list[Path]):
    manifest = {
        "subcommand": subcommand,
        "artifact_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "config": cfg,
        "outputs": [
            {"path": f.name, "sha256": _sha256(f)} for f in sorted(files)
        ],
    }
    write_json(manifest, out_dir / "manifest.json")


def _parse_sweep(spec: str):
    try:
        key, _, rng = spec.partition("=")
        start_s, stop_s, n_s = rng.split(":")
        return key.strip(), float(start_s), float(stop_s), int(n_s)
    except ValueError as exc:
        raise ConfigError(f"bad --sweep spec {spec!r}, expected key=start:stop:n") from exc


# --- subcommand scalar reports (shared by single runs and sweeps) -----------

def _tc_report(cfg: dict) -> dict:
    params = medium_from_config(cfg)
    report = critical_temperature(params)
    return {
        "t_c_atom_K": report.t_c_atom,
        "t_c_dsp_K": report.t_c_dsp,
        "ratio": report.ratio,
        "t_eit_K": report.t_eit,
        "feasible": report.feasible,
    }


def _rates_report(cfg: dict) -> dict:
    params = medium_from_config(cfg)
    report = rate_report(params, cfg["pulse_length"])
    d = asdict(report)
    return {
        "u_elastic_J_m3": d.pop("u_elastic"),
        "gamma_coll_per_s": d.pop("gamma_coll"),
        "gamma_loss_nl_per_s": d.pop("gamma_loss_nl"),
        "gamma_loss_lin_per_s": d.pop("gamma_loss_lin"),
        "tau_s": d.pop("tau"),
        **d,
    }


def run_tc(cfg: dict, out_dir: Path) -> list[Path]:
    path = out_dir / "tc.json"
    write_json({"inputs": cfg, **_tc_report(cfg)}, path)
    return [path]


def run_rates(cfg: dict, out_dir: Path) -> list[Path]:
    path = out_dir / "rates.json"
    write_json({"inputs": cfg, **_rates_report(cfg)}, path)
    return [path]


def run_mass(cfg: dict, out_dir: Path) -> list[Path]:
    params = medium_from_config(cfg)
    mass = mass_tensor(params)
    fit_k_max = cfg.get("fit_k_max")
    if fit_k_max is None:
        # default fine window well inside the quadratic region
        g_sqrt_n = params.g * math.sqrt(params.n)
        from .constants import C_LIGHT
        fit_k_max = 5e-3 * g_sqrt_n / C_LIGHT
    fit = dark_mass_fit(
        params,
        fit_k_max,
        n_points=int(cfg.get("fit_points", 15)),
        # lossy media sit near the eigenvalue noise floor; default guard is
        # looser here than the library's, still tight enough for ppm curvature
        max_residual=cfg.get("fit_max_residual", 1e-4),
    )
    path = out_dir / "mass.json"
    write_json(
        {
            "inputs": cfg,
            "m_perp_kg": mass.m_perp,
            "m_par_kg": mass.m_par,
            "m_par_real_kg": mass.m_par_real,
            "m_eff_geometric_kg": mass.m_eff_geometric,
            "fitted_curvature_m2_s": fit.curvature,
            "fitted_linear_m_s": fit.linear,
            "fit_residual": fit.rel_residual,
            "curvature_closed_form_re_m2_s": dark_curvature_closed_form(params),
            "transverse_curvature_m2_s": transverse_curvature_closed_form(params),
        },
        path,
    )
    return [path]


def run_dispersion(cfg: dict, out_dir: Path) -> list[Path]:
    params = medium_from_config(cfg)
    n_k = int(cfg["n_k"])
    if n_k % 2 == 0:
        n_k += 1
    k = np.linspace(-cfg["k_max"], cfg["k_max"], n_k)
    k[np.argmin(np.abs(k))] = 0.0
    band = band_structure(params, k, k_perp=cfg.get("k_perp", 0.0))
    path = out_dir / "bands.csv"
    write_band_csv(band, path)
    return [path]


def run_evolve(cfg: dict, out_dir: Path) -> list[Path]:
    params = medium_from_config(cfg)
    mass = mass_tensor(params)
    coeffs = master_equation_coefficients(params)
    u = kerr_coupling(params)
    n = int(cfg["grid_n"])
    box = (cfg["box_length"],)
    kind = cfg.get("initial", "gaussian")
    density = cfg.get("density", params.rho_dsp)
    if kind == "gaussian":
        sigma = cfg.get("sigma0", cfg["box_length"] / 16.0)
        state = gaussian_state(box, (n,), sigma, amplitude=math.sqrt(density),
                               k0=cfg.get("k0", 0.0))
    elif kind == "uniform":
        state = uniform_state(box, (n,), density, k0=cfg.get("k0", 0.0))
    else:
        raise ConfigError(f"initial must be 'gaussian' or 'uniform', got {kind!r}")
    evo = EvolutionConfig(
        dt=cfg["dt"],
        elastic=bool(cfg.get("elastic", 1)),
        nonlinear_loss=bool(cfg.get("nonlinear_loss", 1)),
        dispersive_shift=bool(cfg.get("dispersive_shift", 1)),
        high_k_absorption=bool(cfg.get("high_k_absorption", 1)),
    )
    n_steps = int(cfg["n_steps"])
    obs_every = int(cfg.get("obs_every", max(1, n_steps // 100)))

    series = []
    t_done = 0
    while t_done < n_steps:
        chunk = min(obs_every, n_steps - t_done)
        state = step(state, evo, coeffs, mass, u, n_steps=chunk)
        t_done += chunk
        obs = observables(state)
        series.append((state.time, obs.norm, obs.rms_widths[-1], obs.peak_density))

    obs_path = out_dir / "observables.csv"
    with open(obs_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("time,norm,rms_width_z,peak_density\n")
        for row in series:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")

    bin_path = out_dir / "snapshot.bin"
    bin_path.write_bytes(np.ascontiguousarray(state.psi, dtype="<c16").tobytes())
    sidecar = out_dir / "snapshot.json"
    write_json(
        {
            "shape": list(state.psi.shape),
            "spacings_m": list(state.spacings),
            "box_m": list(state.box),
            "time_s": state.time,
            "layout": "interleaved re/im",
            "dtype": "float64",
            "endianness": "little",
        },
        sidecar,
    )
    return [obs_path, bin_path, sidecar]


def run_emit(cfg: dict, out_dir: Path) -> list[Path]:
    params = medium_from_config(cfg)
    mass = mass_tensor(params)
    tc = critical_temperature(params)
    spec = EquilibriumSpec(
        temperature=cfg["temperature"],
        total_density=params.rho_dsp,
        mass=mass,
        envelope_width_lambdas=cfg.get("envelope_width_lambdas", 178.0),
    )
    mu = chemical_potential(spec)
    profile = transverse_profile(
        spec, mu,
        x_max=cfg.get("x_max", 4.0),
        n_points=int(cfg.get("n_points", 160_000)),
    )
    csv_path = out_dir / "emission.csv"
    write_emission_csv(profile, csv_path)
    meta_path = out_dir / "emission.json"
    write_json(
        {
            "inputs": cfg,
            "temperature_K": spec.temperature,
            "t_c_dsp_K": tc.t_c_dsp,
            "t_over_t_c": spec.temperature / tc.t_c_dsp,
            "mu_J": mu.mu,
            "fugacity": mu.fugacity,
            "condensate_fraction": mu.condensate_fraction,
            "thermal_density_per_m3": mu.thermal_density,
            "momentum_per_x_rad_per_m": profile.momentum_per_x,
        },
        meta_path,
    )
    return [csv_path, meta_path]


RUNNERS = {
    "tc": run_tc,
    "rates": run_rates,
    "mass": run_mass,
    "dispersion": run_dispersion,
    "evolve": run_evolve,
    "emit": run_emit,
}

SWEEPABLE = {"tc": _tc_report, "rates": _rates_report}


def run_sweep(subcommand: str, cfg: dict, sweep: str, out_dir: Path) -> list[Path]:
    if subcommand not in SWEEPABLE:
        raise ConfigError(f"--sweep supports {sorted(SWEEPABLE)}, not {subcommand!r}")
    key, start, stop, npts = _parse_sweep(sweep)
    if npts < 2:
        raise ConfigError("--sweep needs n >= 2")
    compute = SWEEPABLE[subcommand]
    rows = []
    header = None
    for value in np.linspace(start, stop, npts):
        point = dict(cfg)
        point[key] = float(value)
        report = compute(point)
        scalars = {k: v for k, v in report.items()
                   if isinstance(v, (int, float, bool))}
        if header is None:
            header = [key] + list(scalars)
        rows.append([float(value)] + [float(scalars[k]) for k in header[1:]])
    path = out_dir / f"{subcommand}_sweep.csv"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
    return [path]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polbec",
        description="Stationary-light dark-polariton condensation toolkit",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in RUNNERS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="flat key = value file (SI)")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--sweep", default=None, metavar="key=start:stop:n")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0

    try:
        cfg = load_config(args.config)
        check_keys(cfg, args.subcommand)
    except (ConfigError, OSError) as exc:
        _error_report(args, "config", exc)
        return EXIT_CONFIG

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        if args.sweep:
            files = run_sweep(args.subcommand, cfg, args.sweep, out_dir)
        else:
            files = RUNNERS[args.subcommand](cfg, out_dir)
    except ConfigError as exc:
        _error_report(args, "config", exc)
        return EXIT_CONFIG
    except ParameterError as exc:
        _error_report(args, "physics", exc)
        return EXIT_PHYSICS
    except _NUMERICAL_ERRORS as exc:
        _error_report(args, "numerics", exc)
        return EXIT_NUMERICS

    _write_manifest(out_dir, args.subcommand, cfg, files)
    return 0


def _error_report(args, kind: str, exc: Exception) -> None:
    report = {
        "error_kind": kind,
        "error_type": type(exc).__name__,
        "message": str(exc),
        "subcommand": getattr(args, "subcommand", None),
    }
    print(json.dumps(report), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
