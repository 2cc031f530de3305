"""One figure builder per artifact kind.

Builders take already-validated inputs and return a matplotlib Figure;
`render` ties loading, building and deterministic saving together.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "polbec-plots"

import matplotlib.pyplot as plt
import numpy as np

from . import schemas
from .schemas import SchemaError

DARK_COLOR = "crimson"
OTHER_COLOR = "0.55"


def bands_figure(branches: dict[str, np.ndarray]) -> plt.Figure:
    """Band diagram with the dark branch highlighted."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for label, (k, omega) in sorted(branches.items()):
        if label == "dark":
            continue
        ax.plot(k, omega, color=OTHER_COLOR, lw=1.0)
    k, omega = branches["dark"]
    ax.plot(k, omega, color=DARK_COLOR, lw=2.2, label="dark branch")
    ax.set_xlabel(r"$k_z$ (rad/m)")
    ax.set_ylabel(r"$\mathrm{Re}\,\omega$ (rad/s)")
    ax.legend(loc="upper center", frameon=False)
    fig.tight_layout()
    return fig


def mass_fit_figure(branches: dict[str, np.ndarray], mass: dict) -> plt.Figure:
    """Dark branch near k = 0 with the fitted quadratic overlaid."""
    k, omega = branches["dark"]
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.plot(k, omega, "o", ms=3.5, color=DARK_COLOR, label="dark branch")
    curvature = mass["fitted_curvature_m2_s"]["re"]
    linear = mass["fitted_linear_m_s"]["re"]
    kf = np.linspace(k.min(), k.max(), 400)
    i0 = int(np.argmin(np.abs(k)))
    ax.plot(kf, omega[i0] + linear * kf + curvature * kf**2, "-",
            color="0.2", lw=1.2,
            label=rf"quadratic fit, $C={curvature:.3g}\,$m$^2$/s")
    ax.set_xlabel(r"$k_z$ (rad/m)")
    ax.set_ylabel(r"$\mathrm{Re}\,\omega$ (rad/s)")
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig


def rates_figure(rates: dict) -> plt.Figure:
    """Rate-hierarchy bar chart on a log scale."""
    names = ["collisions", "nonlinear loss", "linear loss"]
    values = [rates["gamma_coll_per_s"], rates["gamma_loss_nl_per_s"],
              rates["gamma_loss_lin_per_s"]]
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    colors = [DARK_COLOR, OTHER_COLOR, OTHER_COLOR]
    ax.bar(names, values, color=colors)
    ax.set_yscale("log")
    ax.set_ylabel(r"rate (s$^{-1}$)")
    ok = "satisfied" if rates["hierarchy_ok"] else "violated"
    ax.set_title(
        f"thermalization hierarchy {ok} "
        f"(OD {rates['od_actual']:.3g} vs required {rates['od_required']:.3g})",
        fontsize=10)
    fig.tight_layout()
    return fig


def emission_figure(panels: list[tuple[np.ndarray, dict | None]]) -> plt.Figure:
    """Side-by-side transverse emission profiles (e.g. above/below T_c)."""
    fig, axes = plt.subplots(1, len(panels), figsize=(5.0 * len(panels), 4.0),
                             sharey=True, squeeze=False)
    for ax, (data, meta) in zip(axes[0], panels):
        x = data[:, 0]
        ax.plot(x, data[:, 1], color=DARK_COLOR, lw=1.8, label="total")
        ax.plot(x, data[:, 2], color=OTHER_COLOR, lw=1.2, ls="--",
                label="thermal")
        ax.set_xlabel(r"$x = k_x \lambda_{T,x} / 2\pi$")
        if meta is not None:
            ax.set_title(rf"$T / T_c = {meta['t_over_t_c']:.2f}$, "
                         rf"$N_0/N = {meta['condensate_fraction']:.2f}$",
                         fontsize=10)
        ax.legend(frameon=False)
    axes[0][0].set_ylabel("intensity (normalized)")
    fig.tight_layout()
    return fig


def evolution_figure(series: np.ndarray) -> plt.Figure:
    """Norm and longitudinal rms width against time."""
    t = series[:, 0]
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.plot(t, series[:, 1] / series[0, 1], color=DARK_COLOR, lw=1.8,
            label="norm (relative)")
    ax2 = ax.twinx()
    ax2.plot(t, series[:, 2], color="0.3", lw=1.4, ls="--")
    ax.set_xlabel("time (s)")
    ax.set_ylabel("norm (relative)", color=DARK_COLOR)
    ax2.set_ylabel("rms width (m)", color="0.3")
    ax.legend(frameon=False)
    fig.tight_layout()
    return fig


KINDS = ("bands", "mass-fit", "rates", "emission", "evolution-series")


def _sidecar_meta(csv_path: Path) -> dict | None:
    sidecar = csv_path.with_suffix(".json")
    if sidecar.exists():
        try:
            return schemas.load_emission_meta(sidecar)
        except SchemaError:
            return None
    return None


def build(kind: str, inputs: list[Path]) -> plt.Figure:
    if kind == "bands":
        _expect_inputs(kind, inputs, 1)
        return bands_figure(schemas.load_bands(inputs[0]))
    if kind == "mass-fit":
        _expect_inputs(kind, inputs, 2)
        csvs = [p for p in inputs if p.suffix == ".csv"]
        jsons = [p for p in inputs if p.suffix == ".json"]
        if len(csvs) != 1 or len(jsons) != 1:
            raise SchemaError("mass-fit needs one bands CSV and one mass JSON")
        return mass_fit_figure(schemas.load_bands(csvs[0]),
                               schemas.load_mass(jsons[0]))
    if kind == "rates":
        _expect_inputs(kind, inputs, 1)
        return rates_figure(schemas.load_rates(inputs[0]))
    if kind == "emission":
        if not 1 <= len(inputs) <= 2:
            raise SchemaError("emission takes one or two profile CSVs")
        panels = [(schemas.load_emission(p), _sidecar_meta(Path(p)))
                  for p in inputs]
        return emission_figure(panels)
    if kind == "evolution-series":
        _expect_inputs(kind, inputs, 1)
        return evolution_figure(schemas.load_observables(inputs[0]))
    raise SchemaError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")


def _expect_inputs(kind: str, inputs: list, count: int) -> None:
    if len(inputs) != count:
        raise SchemaError(f"{kind} takes exactly {count} input file(s), "
                          f"got {len(inputs)}")


def render(kind: str, inputs: list, out_path) -> None:
    """Validate, build and save; no image file is left behind on failure."""
    out_path = Path(out_path)
    fig = build(kind, [Path(p) for p in inputs])
    try:
        # strip volatile metadata so identical inputs give identical bytes
        metadata = {"Date": None} if out_path.suffix == ".svg" else {}
        fig.savefig(out_path, dpi=150, metadata=metadata)
    finally:
        plt.close(fig)
