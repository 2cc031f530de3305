"""Physical input parameters and the scalar scales derived from them.

All quantities are SI at the interface. The two control fields are taken
real and non-negative; the probe/control coupling constant ``g`` absorbs
the dipole moment and field normalization (units sqrt(m^3)/s so that
``g*sqrt(n)`` is an angular frequency).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import C_LIGHT, HBAR


class ParameterError(ValueError):
    """A physical input violates its validity constraints."""


@dataclass(frozen=True)
class MediumParams:
    """Atomic/optical inputs of the double-Lambda stationary-light medium.

    g: collective coupling normalization, sqrt(m^3) rad/s
    n: atomic number density, 1/m^3
    gamma: transverse decay rate of the excited-state coherences, rad/s
    delta_plus, delta_minus: one-photon detunings, rad/s
    omega_plus, omega_minus: control Rabi frequencies (real, >= 0), rad/s
    k_p: probe carrier wavenumber, rad/m
    m_atom: atomic mass, kg
    delta_kerr: detuning from the auxiliary excited states providing the
        Kerr shift, rad/s (nonzero)
    rho_dsp: dark-polariton density, 1/m^3 (must stay below n)
    """

    g: float
    n: float
    gamma: float
    delta_plus: float
    delta_minus: float
    omega_plus: float
    omega_minus: float
    k_p: float
    m_atom: float
    delta_kerr: float
    rho_dsp: float

    def __post_init__(self):
        if self.g <= 0 or self.n <= 0 or self.k_p <= 0 or self.m_atom <= 0:
            raise ParameterError("g, n, k_p, m_atom must be positive")
        # gamma == 0 is tolerated for lossless band-structure studies;
        # derive_scales rejects it because L_abs would vanish.
        if self.gamma < 0:
            raise ParameterError("gamma must be non-negative")
        if self.omega_plus < 0 or self.omega_minus < 0:
            raise ParameterError("control Rabi frequencies must be non-negative")
        if self.omega_plus == 0 and self.omega_minus == 0:
            raise ParameterError("at least one control field must be on")
        if self.delta_kerr == 0:
            raise ParameterError("delta_kerr must be nonzero")
        if not 0 <= self.rho_dsp < self.n:
            raise ParameterError("rho_dsp must satisfy 0 <= rho_dsp < n (linear response)")

    @property
    def omega_total_sq(self) -> float:
        return self.omega_plus**2 + self.omega_minus**2

    @property
    def delta_mean(self) -> float:
        """Common one-photon detuning; meaningful when delta_plus ~ delta_minus."""
        return 0.5 * (self.delta_plus + self.delta_minus)


def cos2_theta(params: MediumParams) -> float:
    """Field weight cos^2(theta) = Omega^2 / (Omega^2 + g^2 n); well defined
    even at gamma = 0 where the full scale set is not."""
    g2n = params.g**2 * params.n
    return params.omega_total_sq / (params.omega_total_sq + g2n)


@dataclass(frozen=True)
class DerivedScales:
    theta: float          # matter/field mixing angle, rad
    phi: float            # forward/backward field mixing angle, rad
    omega_total_sq: float  # Omega_+^2 + Omega_-^2, rad^2/s^2
    v_gr: float           # group velocity c*cos^2(theta), m/s
    l_abs: float          # resonant absorption length gamma*c/(g^2 n), m
    v_rec: float          # recoil velocity hbar*k_p/m, m/s


def derive_scales(params: MediumParams) -> DerivedScales:
    """Compute mixing angles and velocity/length scales from the inputs.

    tan^2(theta) = g^2 n / Omega^2 and tan^2(phi) = Omega_-^2 / Omega_+^2.
    """
    if params.gamma <= 0:
        raise ParameterError("derive_scales needs gamma > 0 (l_abs undefined otherwise)")
    omega_sq = params.omega_total_sq
    if omega_sq == 0:
        raise ParameterError("theta undefined for Omega_+ = Omega_- = 0")
    g2n = params.g**2 * params.n
    theta = math.atan2(math.sqrt(g2n), math.sqrt(omega_sq))
    phi = math.atan2(params.omega_minus, params.omega_plus)
    v_gr = C_LIGHT * math.cos(theta) ** 2
    l_abs = params.gamma * C_LIGHT / g2n
    v_rec = HBAR * params.k_p / params.m_atom
    return DerivedScales(
        theta=theta,
        phi=phi,
        omega_total_sq=omega_sq,
        v_gr=v_gr,
        l_abs=l_abs,
        v_rec=v_rec,
    )


@dataclass(frozen=True)
class AdiabaticityReport:
    """Slow-envelope validity check for a pulse of duration T and length L.

    The length condition L >> L_abs is unambiguous. For the time scale the
    source inequality reads T << {L_abs/c, 1/gamma}, while a slowly varying
    envelope argument suggests T >> those scales; both ratios are reported
    and the ambiguity is flagged instead of silently resolved.
    """

    length_ratio: float        # L / L_abs
    length_ok: bool            # L / L_abs > length_threshold
    length_threshold: float
    t_over_transit: float      # T / (L_abs / c)
    t_times_gamma: float       # T * gamma
    time_short_ok: bool        # T << both scales (literal reading)
    time_long_ok: bool         # T >> both scales (envelope reading)
    time_ambiguous: bool
    tau_characteristic: float  # L_abs / v_gr, s


def validate_adiabaticity(
    params: MediumParams,
    pulse_time_t: float,
    pulse_length_l: float,
    length_threshold: float = 10.0,
) -> AdiabaticityReport:
    """Report adiabaticity margins for a pulse (pure report, never raises
    on physics; rejects only non-positive T or L)."""
    if pulse_time_t <= 0 or pulse_length_l <= 0:
        raise ParameterError("pulse time and length must be positive")
    scales = derive_scales(params)
    length_ratio = pulse_length_l / scales.l_abs
    t_over_transit = pulse_time_t / (scales.l_abs / C_LIGHT)
    t_times_gamma = pulse_time_t * params.gamma
    time_short_ok = t_over_transit < 1.0 and t_times_gamma < 1.0
    time_long_ok = t_over_transit > 1.0 and t_times_gamma > 1.0
    return AdiabaticityReport(
        length_ratio=length_ratio,
        length_ok=length_ratio > length_threshold,
        length_threshold=length_threshold,
        t_over_transit=t_over_transit,
        t_times_gamma=t_times_gamma,
        time_short_ok=time_short_ok,
        time_long_ok=time_long_ok,
        time_ambiguous=time_short_ok == time_long_ok,
        tau_characteristic=scales.l_abs / scales.v_gr,
    )
