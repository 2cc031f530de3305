"""Flat ``key = value`` run configuration (SI units).

One file per run; the subcommand decides which keys it requires. Unknown
keys are rejected outright, known-but-unused keys only warn.
"""

from __future__ import annotations

import warnings
from pathlib import Path

from .medium import MediumParams


class ConfigError(ValueError):
    """Unparseable configuration or unknown key."""


MEDIUM_KEYS = (
    "g", "n", "gamma", "delta_plus", "delta_minus",
    "omega_plus", "omega_minus", "k_p", "m_atom", "delta_kerr", "rho_dsp",
)

# key -> python type; everything is SI
KNOWN_KEYS: dict[str, type] = {
    **{k: float for k in MEDIUM_KEYS},
    "pulse_length": float,      # m
    "pulse_time": float,        # s
    "temperature": float,       # K
    "envelope_width_lambdas": float,
    "x_max": float,             # emission grid half-width, lambda_Tx units
    "n_points": int,            # emission grid points
    "k_max": float,             # rad/m, band-structure half-window
    "n_k": int,                 # band-structure grid points (odd)
    "k_perp": float,            # rad/m
    "fit_k_max": float,         # rad/m, mass-fit half-window
    "fit_points": int,
    "fit_max_residual": float,
    "dt": float,                # s
    "n_steps": int,
    "obs_every": int,
    "grid_n": int,
    "box_length": float,        # m
    "initial": str,             # gaussian | uniform
    "sigma0": float,            # m, gaussian width (density rms)
    "density": float,           # 1/m^3, peak or uniform density
    "k0": float,                # rad/m, initial boost
    "elastic": int,             # toggles, 0/1
    "nonlinear_loss": int,
    "dispersive_shift": int,
    "high_k_absorption": int,
}

REQUIRED: dict[str, tuple[str, ...]] = {
    "dispersion": MEDIUM_KEYS + ("k_max", "n_k"),
    "mass": MEDIUM_KEYS,
    "tc": MEDIUM_KEYS,
    "rates": MEDIUM_KEYS + ("pulse_length",),
    "evolve": MEDIUM_KEYS + ("dt", "n_steps", "grid_n", "box_length"),
    "emit": MEDIUM_KEYS + ("temperature",),
}


def load_config(path) -> dict:
    """Parse a flat key = value file into typed values."""
    values: dict = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        typ = KNOWN_KEYS[key]
        try:
            values[key] = value if typ is str else typ(float(value)) if typ is int else typ(value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {value!r}") from exc
    return values


def check_keys(values: dict, subcommand: str) -> None:
    required = REQUIRED[subcommand]
    missing = [k for k in required if k not in values]
    if missing:
        raise ConfigError(f"missing keys for {subcommand!r}: {', '.join(missing)}")
    unused = [k for k in values if k not in required and k not in OPTIONAL.get(subcommand, ())]
    if unused:
        warnings.warn(f"unused config keys for {subcommand!r}: {', '.join(unused)}",
                      stacklevel=2)


OPTIONAL: dict[str, tuple[str, ...]] = {
    "dispersion": ("k_perp",),
    "mass": ("fit_k_max", "fit_points", "fit_max_residual"),
    "tc": (),
    "rates": (),
    "evolve": ("initial", "sigma0", "density", "k0", "obs_every",
               "elastic", "nonlinear_loss", "dispersive_shift",
               "high_k_absorption", "pulse_length"),
    "emit": ("envelope_width_lambdas", "x_max", "n_points"),
}


def medium_from_config(values: dict) -> MediumParams:
    return MediumParams(**{k: values[k] for k in MEDIUM_KEYS})
