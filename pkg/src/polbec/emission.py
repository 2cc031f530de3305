"""Equilibrium momentum occupation of the anisotropic ideal polariton gas
and the transverse profile of the light released from it.

The gas is quasi-homogeneous: thermal occupation is the homogeneous Bose
distribution with the anisotropic quadratic dispersion, while the
condensate's momentum width is regularized by a finite transverse Gaussian
envelope (a pure homogeneous condensate would be a delta function).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as gamma_fn
from scipy.special import zeta as riemann_zeta

from .constants import HBAR, K_B, ZETA_1_2, ZETA_3_2
from .thermo import MassTensor, thermal_wavelengths


class NoConvergence(RuntimeError):
    """Bisection for the chemical potential failed to reach tolerance."""


def _zeta_half_integer(k: int) -> float:
    """zeta(3/2 - k) for integer k >= 0 via the functional equation."""
    if k == 0:
        return ZETA_3_2
    if k == 1:
        return ZETA_1_2
    s = 1.5 - k
    return (
        2.0**s
        * math.pi ** (s - 1.0)
        * math.sin(math.pi * s / 2.0)
        * gamma_fn(1.0 - s)
        * float(riemann_zeta(1.0 - s))
    )


def polylog_3_2(z: float) -> float:
    """g_{3/2}(z) = sum z^l / l^(3/2) for 0 <= z <= 1.

    Direct series for small z; for z near 1 the power series is useless
    (all-positive terms, algebraic tail), so the asymptotic expansion in
    alpha = -ln z is used:
    g_{3/2}(e^-alpha) = -2 sqrt(pi alpha) + sum_k zeta(3/2-k) (-alpha)^k / k!.
    """
    if not 0.0 <= z <= 1.0:
        raise ValueError("polylog_3_2 defined on [0, 1]")
    if z == 0.0:
        return 0.0
    if z < 0.5:
        total = 0.0
        term = z
        l = 1
        while True:
            contrib = term / l**1.5
            total += contrib
            if contrib < 1e-17 * total:
                return total
            l += 1
            term *= z
    alpha = -math.log(z)
    total = -2.0 * math.sqrt(math.pi * alpha)
    power = 1.0
    fact = 1.0
    for k in range(0, 60):
        if k > 0:
            power *= -alpha
            fact *= k
        contrib = _zeta_half_integer(k) * power / fact
        total += contrib
        if k > 2 and abs(contrib) < 1e-17 * abs(total):
            break
    return total


@dataclass(frozen=True)
class EquilibriumSpec:
    temperature: float     # K
    total_density: float   # 1/m^3 (dark-polariton density)
    mass: MassTensor
    envelope_width_lambdas: float = 178.0  # condensate envelope in units of lambda_Tx

    def __post_init__(self):
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")
        if self.total_density <= 0:
            raise ValueError("density must be positive")
        if self.envelope_width_lambdas <= 0:
            raise ValueError("envelope width must be positive")

    def wavelengths(self) -> tuple[float, float, float]:
        return thermal_wavelengths(self.temperature, self.mass)


@dataclass(frozen=True)
class ChemicalPotentialResult:
    mu: float                 # J, <= 0
    fugacity: float           # exp(mu / k_B T)
    thermal_density: float    # 1/m^3
    condensate_density: float  # 1/m^3 (excess above critical)
    condensate_fraction: float


def critical_density(spec: EquilibriumSpec) -> float:
    lx, ly, lz = spec.wavelengths()
    return ZETA_3_2 / (lx * ly * lz)


def chemical_potential(
    spec: EquilibriumSpec,
    rel_tol: float = 1e-12,
    max_steps: int = 200,
) -> ChemicalPotentialResult:
    """Solve n = g_{3/2}(z) / (lx ly lz) for the fugacity by bisection.

    Above the critical density the solution saturates at mu = 0 and the
    excess density is assigned to the condensate.
    """
    lx, ly, lz = spec.wavelengths()
    lam3 = lx * ly * lz
    target = spec.total_density * lam3
    if target >= ZETA_3_2:
        n_th = ZETA_3_2 / lam3
        n_c = spec.total_density - n_th
        return ChemicalPotentialResult(
            mu=0.0,
            fugacity=1.0,
            thermal_density=n_th,
            condensate_density=n_c,
            condensate_fraction=n_c / spec.total_density,
        )
    lo, hi = 0.0, 1.0
    for _ in range(max_steps):
        mid = 0.5 * (lo + hi)
        if polylog_3_2(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rel_tol * max(hi, 1e-300):
            break
    else:
        raise NoConvergence(
            f"fugacity bisection did not reach {rel_tol} in {max_steps} steps"
        )
    z = 0.5 * (lo + hi)
    return ChemicalPotentialResult(
        mu=K_B * spec.temperature * math.log(z),
        fugacity=z,
        thermal_density=polylog_3_2(z) / lam3,
        condensate_density=0.0,
        condensate_fraction=0.0,
    )


def dispersion_energy(spec: EquilibriumSpec, kx, ky, kz):
    """Anisotropic kinetic energy hbar^2 k_perp^2/(2 m_perp) + hbar^2 k_z^2/(2 m_par_real)."""
    m = spec.mass
    return (
        HBAR**2 * (np.asarray(kx) ** 2 + np.asarray(ky) ** 2) / (2.0 * m.m_perp)
        + HBAR**2 * np.asarray(kz) ** 2 / (2.0 * m.m_par_real)
    )


@dataclass
class MomentumDistribution:
    k_axes: tuple[np.ndarray, np.ndarray, np.ndarray]
    thermal_occupation: np.ndarray  # Bose occupation n(k) on the 3D grid
    condensate_density: float       # 1/m^3, separate weight at k = 0


def momentum_distribution(
    spec: EquilibriumSpec,
    result: ChemicalPotentialResult,
    k_axes: tuple[np.ndarray, np.ndarray, np.ndarray],
) -> MomentumDistribution:
    """Bose-Einstein occupation on a rectangular k grid; the condensate is
    carried as a separate k=0 weight, never as a grid sample."""
    if result.mu > 0:
        raise ValueError("chemical potential must be non-positive")
    kx, ky, kz = (np.asarray(a, dtype=float) for a in k_axes)
    eps = dispersion_energy(
        spec,
        kx[:, None, None],
        ky[None, :, None],
        kz[None, None, :],
    )
    beta = 1.0 / (K_B * spec.temperature)
    x = beta * (eps - result.mu)
    with np.errstate(over="ignore", divide="ignore"):
        occ = 1.0 / np.expm1(x)
    occ = np.where(np.isfinite(occ), occ, 0.0)
    if result.mu == 0.0:
        # regularize the (integrable) k=0 divergence of the critical gas
        occ = np.where(x > 0, occ, 0.0)
    return MomentumDistribution(
        k_axes=(kx, ky, kz),
        thermal_occupation=occ,
        condensate_density=result.condensate_density,
    )


@dataclass
class EmissionProfile:
    """Transverse far-field profile in units of the transverse thermal
    de Broglie wavelength: x = k_x * lambda_Tx / (2 pi)."""

    x: np.ndarray
    intensity: np.ndarray       # normalized total, integral 1
    thermal: np.ndarray         # normalized thermal component
    condensate: np.ndarray      # normalized condensate component
    condensate_fraction: float
    momentum_per_x: float       # rad/m of k_x per unit of x (the paraxial map)


def transverse_profile(
    spec: EquilibriumSpec,
    result: ChemicalPotentialResult,
    x_max: float = 4.0,
    n_points: int = 160_000,
) -> EmissionProfile:
    """Transverse emission profile of the released gas.

    Thermal part: transverse momentum marginal of the Bose gas,
    proportional to -ln(1 - z exp(-pi x^2)) in thermal units. Condensate
    part: far field of a Gaussian source whose field amplitude has width
    envelope_width_lambdas * lambda_Tx, i.e. intensity
    exp(-(2 pi W)^2 x^2) with W the envelope width in lambda_Tx units.
    The grid is symmetric and staggered off x = 0 so the critical-gas
    logarithmic cusp stays finite.
    """
    if n_points % 2:
        n_points += 1
    dx = 2.0 * x_max / n_points
    x = (np.arange(n_points) - (n_points - 1) / 2.0) * dx
    z = result.fugacity
    arg = z * np.exp(-math.pi * x**2)
    thermal = -np.log1p(-arg)
    thermal = thermal / np.trapezoid(thermal, x)
    w = spec.envelope_width_lambdas
    condensate = np.exp(-((2.0 * math.pi * w) ** 2) * x**2)
    condensate = condensate / np.trapezoid(condensate, x)
    f_c = result.condensate_fraction
    total = (1.0 - f_c) * thermal + f_c * condensate
    total = total / np.trapezoid(total, x)
    lx = spec.wavelengths()[0]
    return EmissionProfile(
        x=x,
        intensity=total,
        thermal=thermal,
        condensate=condensate,
        condensate_fraction=f_c,
        momentum_per_x=2.0 * math.pi / lx,
    )


EMISSION_CSV_HEADER = "x,i_total,i_thermal,i_condensate"


def write_emission_csv(profile: EmissionProfile, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(EMISSION_CSV_HEADER + "\n")
        for xi, it, ith, ic in zip(
            profile.x, profile.intensity, profile.thermal, profile.condensate
        ):
            fh.write(f"{xi:.17g},{it:.17g},{ith:.17g},{ic:.17g}\n")
