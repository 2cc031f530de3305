"""Kerr-mediated collision and loss rates, and the optical-depth criterion.

All rates are per polariton with the homogeneous background density
rho_dsp. The closed forms are evaluated through the v_gr/L_abs combination
so that the dimensionless groups (gamma/Delta_Kerr, rho_dsp/n) enter
exactly as written.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .constants import HBAR
from .medium import MediumParams, ParameterError, cos2_theta, derive_scales


@dataclass(frozen=True)
class MeanFieldCoefficients:
    """C-number coefficients of the reduced dark-polariton master equation.

    elastic:           g^2 cos^2(theta) / Delta_Kerr          [m^3/s]
    dispersive_cubic:  4 g^2 Delta cos^2(theta) / (n Delta_Kerr^2)  [m^6/s]
    anticommutator:    4 g^2 gamma cos^2(theta) / (n Delta_Kerr^2)  [m^6/s]
    jump:              8 g^2 gamma cos^2(theta) / (n Delta_Kerr^2)  [m^6/s]

    jump == 2 * anticommutator always (Lindblad-form consistency).
    """

    elastic: float
    dispersive_cubic: float
    anticommutator: float
    jump: float


@dataclass(frozen=True)
class RateReport:
    u_elastic: float       # two-body coupling strength, J m^3 (signed)
    gamma_coll: float      # elastic collision rate, 1/s
    gamma_loss_nl: float   # collision-induced loss rate, 1/s
    gamma_loss_lin: float  # linear (high-k absorption) loss rate, 1/s
    tau: float             # L_abs / v_gr, s
    od_actual: float       # L / L_abs
    od_required: float     # sqrt((Delta_Kerr/gamma) (n/rho_dsp))
    hierarchy_ok: bool     # gamma_coll > max(gamma_loss_nl, gamma_loss_lin)


def kerr_coupling(params: MediumParams) -> float:
    """Two-body coupling strength, -hbar g^2 cos^2(theta) / Delta_Kerr
    (attractive for positive Kerr detuning as written)."""
    cos2 = cos2_theta(params)
    if cos2 > 0.1:
        warnings.warn(
            "Kerr reduction assumes sin(theta) ~ 1 (v_gr << c); "
            f"cos^2(theta) = {cos2:.3g}",
            stacklevel=2,
        )
    return -HBAR * params.g**2 * cos2 / params.delta_kerr


def collision_rate(params: MediumParams) -> float:
    """Elastic collision rate (v_gr/L_abs)(gamma/Delta_Kerr)(rho_dsp/n),
    evaluated through the gamma-free equivalent g^2 cos^2(theta) rho / Delta_Kerr."""
    return params.g**2 * cos2_theta(params) * params.rho_dsp / params.delta_kerr


def loss_rates(params: MediumParams, pulse_length_l: float) -> tuple[float, float]:
    """(nonlinear, linear) loss rates:
    (v_gr/L_abs)[(gamma/Delta_Kerr)(rho/n)]^2 and (v_gr/L_abs)(L_abs/L)^2."""
    if pulse_length_l <= 0:
        raise ParameterError("pulse length must be positive")
    scales = derive_scales(params)
    base = scales.v_gr / scales.l_abs
    small = (params.gamma / params.delta_kerr) * (params.rho_dsp / params.n)
    gamma_nl = base * small**2
    gamma_lin = base * (scales.l_abs / pulse_length_l) ** 2
    return gamma_nl, gamma_lin


def od_criterion(params: MediumParams, pulse_length_l: float) -> tuple[float, float, bool]:
    """(od_actual, od_required, pass). Strict inequality: equality fails."""
    if pulse_length_l <= 0:
        raise ParameterError("pulse length must be positive")
    if params.rho_dsp == 0:
        raise ParameterError("OD criterion needs rho_dsp > 0")
    scales = derive_scales(params)
    od_actual = pulse_length_l / scales.l_abs
    od_required = math.sqrt((params.delta_kerr / params.gamma) * (params.n / params.rho_dsp))
    return od_actual, od_required, od_actual > od_required


def master_equation_coefficients(params: MediumParams) -> MeanFieldCoefficients:
    """Coefficients of the elastic, dispersive-shift and cubic-density loss
    channels feeding the mean-field evolution."""
    cos2 = cos2_theta(params)
    g2 = params.g**2
    dk2 = params.delta_kerr**2
    return MeanFieldCoefficients(
        elastic=g2 * cos2 / params.delta_kerr,
        dispersive_cubic=4.0 * g2 * params.delta_mean * cos2 / (params.n * dk2),
        anticommutator=4.0 * g2 * params.gamma * cos2 / (params.n * dk2),
        jump=8.0 * g2 * params.gamma * cos2 / (params.n * dk2),
    )


def rate_report(params: MediumParams, pulse_length_l: float) -> RateReport:
    scales = derive_scales(params)
    gamma_coll = collision_rate(params)
    gamma_nl, gamma_lin = loss_rates(params, pulse_length_l)
    od_actual, od_required, _ = od_criterion(params, pulse_length_l)
    return RateReport(
        u_elastic=kerr_coupling(params),
        gamma_coll=gamma_coll,
        gamma_loss_nl=gamma_nl,
        gamma_loss_lin=gamma_lin,
        tau=scales.l_abs / scales.v_gr,
        od_actual=od_actual,
        od_required=od_required,
        hierarchy_ok=gamma_coll > gamma_nl and gamma_coll > gamma_lin,
    )
