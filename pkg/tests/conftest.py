"""Shared parameter builders for the test suite."""

import math

import numpy as np
import pytest

from polbec.constants import C_LIGHT, HBAR
from polbec.medium import MediumParams


def params_from_scales(
    v_gr=1e3,
    v_rec=0.05,
    l_abs=1e-2,
    gamma=2 * math.pi * 3e6,
    k_p=2 * math.pi / 500e-9,
    n=1e18,
    delta_over_gamma=10.0,
    delta_kerr_over_gamma=100.0,
    rho_frac=0.1,
):
    """Build primitive inputs that realize the requested derived scales."""
    g2n = gamma * C_LIGHT / l_abs
    g = math.sqrt(g2n / n)
    cos2 = v_gr / C_LIGHT
    omega_sq = g2n * cos2 / (1.0 - cos2)
    om_each = math.sqrt(omega_sq / 2.0)
    return MediumParams(
        g=g,
        n=n,
        gamma=gamma,
        delta_plus=delta_over_gamma * gamma,
        delta_minus=delta_over_gamma * gamma,
        omega_plus=om_each,
        omega_minus=om_each,
        k_p=k_p,
        m_atom=HBAR * k_p / v_rec,
        delta_kerr=delta_kerr_over_gamma * gamma,
        rho_dsp=rho_frac * n,
    )


def symmetric_params(gamma=0.0, g_sqrt_n=1e5, n=1e18, delta_over_omega=2.0):
    """Symmetric stationary-light configuration: tan(theta) = tan(phi) = 1,
    equal detunings Delta = delta_over_omega * Omega."""
    g = g_sqrt_n / math.sqrt(n)
    omega_total = g_sqrt_n  # tan^2(theta) = g^2 n / Omega^2 = 1
    om_each = omega_total / math.sqrt(2.0)
    delta = delta_over_omega * omega_total
    return MediumParams(
        g=g,
        n=n,
        gamma=gamma,
        delta_plus=delta,
        delta_minus=delta,
        omega_plus=om_each,
        omega_minus=om_each,
        k_p=2 * math.pi / 500e-9,
        m_atom=1e-26,
        delta_kerr=1e6,
        rho_dsp=0.1 * n,
    )


@pytest.fixture
def vapor():
    """The vapor-cell working point used throughout the closed-form checks."""
    return params_from_scales()


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
