"""Effective-mass tensor and ideal-gas condensation thermodynamics.

The longitudinal mass is complex; its imaginary part encodes absorption of
high-k components and is handled by the dynamics/kinetics, never by the
equilibrium formulas. The real mass entering thermodynamics is defined as
1/Re(1/m_par) (the mass of the dispersive part of the kinetic term), which
makes the closed-form critical-temperature ratio and the geometric-mean
ideal-gas evaluation agree identically.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .constants import HBAR, H_PLANCK, K_B, ZETA_3_2
from .medium import MediumParams, ParameterError, derive_scales


@dataclass(frozen=True)
class MassTensor:
    m_perp: float          # hbar k_p / v_gr, kg
    m_par: complex         # m_perp / (2 k_p L_abs (Delta/gamma + i)), kg
    m_par_real: float      # 1 / Re(1/m_par) = m_perp / (2 k_p L_abs Delta/gamma), kg
    m_eff_geometric: float  # (m_perp^2 * m_par_real)^(1/3), kg

    @property
    def inv_m_par(self) -> complex:
        return 1.0 / self.m_par


def mass_tensor(params: MediumParams) -> MassTensor:
    """Closed-form tensorial mass of the stationary dark polariton."""
    delta = params.delta_mean
    if delta <= 0:
        raise ParameterError("mass tensor requires a positive one-photon detuning")
    if abs(delta) < 10 * params.gamma:
        warnings.warn(
            "mass tensor derived for |Delta| >> gamma; "
            f"|Delta|/gamma = {abs(delta) / params.gamma:.3g}",
            stacklevel=2,
        )
    scales = derive_scales(params)
    m_perp = HBAR * params.k_p / scales.v_gr
    ratio = delta / params.gamma
    factor = 2.0 * params.k_p * scales.l_abs
    m_par = m_perp / (factor * (ratio + 1j))
    m_par_real = m_perp / (factor * ratio)
    m_eff = (m_perp**2 * m_par_real) ** (1.0 / 3.0)
    return MassTensor(m_perp=m_perp, m_par=m_par, m_par_real=m_par_real,
                      m_eff_geometric=m_eff)


def ideal_gas_tc(density: float, mass: float) -> float:
    """Homogeneous ideal Bose gas critical temperature,
    k_B T_c = 2 pi hbar^2 (density/zeta(3/2))^(2/3) / mass."""
    return (2.0 * math.pi * HBAR**2 / (mass * K_B)) * (density / ZETA_3_2) ** (2.0 / 3.0)


@dataclass(frozen=True)
class TcReport:
    t_c_atom: float   # K, atomic comparison scale at density n
    t_c_dsp: float    # K, dark-polariton condensation temperature
    ratio: float      # t_c_dsp / t_c_atom
    t_eit: float      # K, transparency-window ceiling hbar*Delta/k_B (no prefactor)
    feasible: bool    # soft flag: t_c_dsp <= t_eit


def critical_temperature(params: MediumParams) -> TcReport:
    """Critical temperature of the polariton gas and its atomic-scale ratio.

    The closed-form ratio (rho/n)^(2/3) (v_gr/v_rec) (2 k_p L_abs Delta/gamma)^(1/3)
    is cross-checked at build time against the ideal-gas formula evaluated
    with the geometric-mean mass and rho_dsp; the two must agree to 1e-10.
    """
    scales = derive_scales(params)
    mass = mass_tensor(params)
    t_c_atom = ideal_gas_tc(params.n, params.m_atom)
    ratio = (
        (params.rho_dsp / params.n) ** (2.0 / 3.0)
        * (scales.v_gr / scales.v_rec)
        * (2.0 * params.k_p * scales.l_abs * params.delta_mean / params.gamma) ** (1.0 / 3.0)
    )
    t_c_dsp = t_c_atom * ratio
    direct = ideal_gas_tc(params.rho_dsp, mass.m_eff_geometric)
    if abs(direct - t_c_dsp) > 1e-10 * abs(t_c_dsp):
        raise AssertionError(
            "geometric-mean mass evaluation disagrees with the closed-form ratio: "
            f"{direct!r} vs {t_c_dsp!r}"
        )
    t_eit = HBAR * abs(params.delta_mean) / K_B
    return TcReport(
        t_c_atom=t_c_atom,
        t_c_dsp=t_c_dsp,
        ratio=ratio,
        t_eit=t_eit,
        feasible=t_c_dsp <= t_eit,
    )


def condensate_fraction(temperature: float, t_c: float) -> float:
    """Ideal-gas condensate fraction max(0, 1 - (T/Tc)^(3/2))."""
    if temperature < 0 or t_c <= 0:
        raise ParameterError("need T >= 0 and t_c > 0")
    return max(0.0, 1.0 - (temperature / t_c) ** 1.5)


def thermal_wavelength(temperature: float, mass: float) -> float:
    """h / sqrt(2 pi m k_B T)."""
    if temperature <= 0 or mass <= 0:
        raise ParameterError("need T > 0 and mass > 0")
    return H_PLANCK / math.sqrt(2.0 * math.pi * mass * K_B * temperature)


def thermal_wavelengths(temperature: float, mass: MassTensor) -> tuple[float, float, float]:
    """De Broglie wavelengths per principal axis (x, y transverse; z uses
    the real longitudinal mass)."""
    lx = thermal_wavelength(temperature, mass.m_perp)
    return (lx, lx, thermal_wavelength(temperature, mass.m_par_real))
