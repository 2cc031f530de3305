"""Loading and validation of the simulation artifacts consumed here.

Each loader checks the file against the producer's declared schema and
raises SchemaError naming the offending column or key, so a renamed or
reordered column fails loudly instead of producing a silently wrong figure.
"""

from __future__ import annotations

from pathlib import Path

import json

import numpy as np


class SchemaError(ValueError):
    """Input file does not match the producer's declared schema."""


BANDS_COLUMNS = (
    "k", "branch", "re_omega", "im_omega",
    "w_e_plus", "w_e_minus", "w_sigma_plus", "w_sigma_minus", "w_s",
)
EMISSION_COLUMNS = ("x", "i_total", "i_thermal", "i_condensate")
OBSERVABLES_COLUMNS = ("time", "norm", "rms_width_z", "peak_density")

RATES_KEYS = (
    "gamma_coll_per_s", "gamma_loss_nl_per_s", "gamma_loss_lin_per_s",
    "od_actual", "od_required", "hierarchy_ok",
)
MASS_KEYS = (
    "fitted_curvature_m2_s", "fitted_linear_m_s",
    "curvature_closed_form_re_m2_s", "m_par_kg", "m_perp_kg",
)


def _read_header(path: Path, expected: tuple[str, ...]) -> list[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().strip()
    except OSError as exc:
        raise SchemaError(f"{path}: cannot read ({exc})") from exc
    columns = header.split(",") if header else []
    for want, got in zip(expected, columns):
        if want != got:
            raise SchemaError(f"{path}: expected column {want!r}, found {got!r}")
    if len(columns) < len(expected):
        missing = expected[len(columns):]
        raise SchemaError(f"{path}: missing column {missing[0]!r}")
    if len(columns) > len(expected):
        raise SchemaError(f"{path}: unexpected column {columns[len(expected)]!r}")
    return columns


def load_bands(path) -> dict[str, np.ndarray]:
    """bands.csv -> {branch label: (k, re_omega) arrays, k sorted}."""
    path = Path(path)
    _read_header(path, BANDS_COLUMNS)
    rows = np.genfromtxt(path, delimiter=",", names=True, dtype=None,
                         encoding="utf-8")
    if rows.size == 0:
        raise SchemaError(f"{path}: no data rows")
    rows = np.atleast_1d(rows)
    branches: dict[str, np.ndarray] = {}
    for label in np.unique(rows["branch"]):
        sel = rows[rows["branch"] == label]
        order = np.argsort(sel["k"])
        branches[str(label)] = np.stack(
            [sel["k"][order], sel["re_omega"][order]], axis=0)
    if "dark" not in branches:
        raise SchemaError(f"{path}: no rows with branch 'dark' in column 'branch'")
    return branches


def _load_table(path, expected) -> np.ndarray:
    path = Path(path)
    _read_header(path, expected)
    body = path.read_text(encoding="utf-8").splitlines()[1:]
    if not any(line.strip() for line in body):
        raise SchemaError(f"{path}: no data rows")
    data = np.loadtxt(body, delimiter=",", ndmin=2)
    if data.shape[1] != len(expected):
        raise SchemaError(
            f"{path}: expected {len(expected)} columns, found {data.shape[1]}")
    return data


def load_emission(path) -> np.ndarray:
    return _load_table(path, EMISSION_COLUMNS)


def load_observables(path) -> np.ndarray:
    return _load_table(path, OBSERVABLES_COLUMNS)


def _load_json(path, required: tuple[str, ...]) -> dict:
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"{path}: cannot parse JSON ({exc})") from exc
    for key in required:
        if key not in obj:
            raise SchemaError(f"{path}: missing key {key!r}")
    return obj


def load_rates(path) -> dict:
    return _load_json(path, RATES_KEYS)


def load_mass(path) -> dict:
    return _load_json(path, MASS_KEYS)


def load_emission_meta(path) -> dict:
    return _load_json(path, ("t_over_t_c", "condensate_fraction"))
