import dataclasses
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import params_from_scales
from polbec.constants import HBAR
from polbec import kinetics
from polbec.medium import ParameterError, derive_scales


class TestKerrCoupling:
    def test_sign_follows_kerr_detuning(self, vapor):
        u = kinetics.kerr_coupling(vapor)
        assert u < 0  # attractive for positive Delta_Kerr as written
        flipped = dataclasses.replace(vapor, delta_kerr=-vapor.delta_kerr)
        assert kinetics.kerr_coupling(flipped) == -u

    def test_quadratic_in_g_at_fixed_theta(self, vapor):
        # doubling g while keeping g^2 n / Omega^2 fixed quadruples |u|
        scaled = dataclasses.replace(
            vapor, g=2 * vapor.g,
            omega_plus=2 * vapor.omega_plus, omega_minus=2 * vapor.omega_minus)
        assert kinetics.kerr_coupling(scaled) == pytest.approx(
            4 * kinetics.kerr_coupling(vapor), rel=1e-12)

    def test_matter_only_limit_warns_and_vanishes(self):
        # cos(theta) -> 1 regime violates the slow-light assumption
        p = params_from_scales(v_gr=2.9e8)
        with pytest.warns(UserWarning):
            kinetics.kerr_coupling(p)

    def test_collision_rate_equals_u_rho_over_hbar(self, vapor):
        u = kinetics.kerr_coupling(vapor)
        assert abs(u) * vapor.rho_dsp / HBAR == pytest.approx(
            kinetics.collision_rate(vapor), rel=1e-9)


class TestClosedFormRates:
    def test_vapor_collision_rate(self):
        p = params_from_scales(v_gr=1e3, l_abs=1e-2,
                               delta_kerr_over_gamma=100.0, rho_frac=0.1)
        assert kinetics.collision_rate(p) == pytest.approx(1e2, rel=1e-9)

    def test_solid_collision_rate(self):
        p = params_from_scales(v_gr=1e3, l_abs=10e-6,
                               delta_kerr_over_gamma=100.0, rho_frac=0.1)
        assert kinetics.collision_rate(p) == pytest.approx(1e5, rel=1e-9)

    def test_zero_density_zero_rate(self, vapor):
        p = dataclasses.replace(vapor, rho_dsp=0.0)
        assert kinetics.collision_rate(p) == 0.0

    def test_nonlinear_loss_much_slower(self):
        p = params_from_scales(v_gr=1e3, l_abs=1e-2,
                               delta_kerr_over_gamma=100.0, rho_frac=0.1)
        gamma_nl, _ = kinetics.loss_rates(p, pulse_length_l=1.0)
        assert gamma_nl == pytest.approx(1e-1, rel=1e-9)
        assert gamma_nl < 1e-2 * kinetics.collision_rate(p)

    def test_linear_loss_definitional(self, vapor):
        s = derive_scales(vapor)
        _, gamma_lin = kinetics.loss_rates(vapor, pulse_length_l=s.l_abs)
        assert gamma_lin == pytest.approx(s.v_gr / s.l_abs, rel=1e-12)

    def test_linear_loss_vanishes_for_long_pulse(self, vapor):
        _, gamma_lin = kinetics.loss_rates(vapor, pulse_length_l=1e12)
        assert gamma_lin == pytest.approx(0.0, abs=1e-15)


class TestOdCriterion:
    def test_vapor_threshold(self, vapor):
        _, od_req, _ = kinetics.od_criterion(vapor, pulse_length_l=1.0)
        assert od_req == pytest.approx(math.sqrt(1000.0), abs=1e-4)
        assert od_req > 30

    def test_unity_threshold(self):
        p = params_from_scales(delta_kerr_over_gamma=1.0, rho_frac=1 - 1e-12)
        _, od_req, _ = kinetics.od_criterion(p, pulse_length_l=1.0)
        assert od_req == pytest.approx(1.0, rel=1e-9)

    def test_boundary_equality_fails(self, vapor):
        s = derive_scales(vapor)
        _, od_req, _ = kinetics.od_criterion(vapor, 1.0)
        od_act, od_req2, ok = kinetics.od_criterion(vapor, od_req * s.l_abs)
        assert od_act == pytest.approx(od_req2, rel=1e-12)
        assert not ok or od_act > od_req2  # strict inequality convention


class TestMasterEquationCoefficients:
    def test_lossless_limit(self):
        p = params_from_scales()
        p = dataclasses.replace(p, gamma=1e-30)  # gamma -> 0 limit
        c = kinetics.master_equation_coefficients(p)
        assert c.anticommutator == pytest.approx(0.0, abs=1e-40)
        assert c.jump == pytest.approx(0.0, abs=1e-40)

    def test_jump_is_twice_anticommutator(self, vapor):
        c = kinetics.master_equation_coefficients(vapor)
        assert c.jump == pytest.approx(2 * c.anticommutator, rel=1e-14)

    def test_elastic_matches_kerr_coupling(self, vapor):
        c = kinetics.master_equation_coefficients(vapor)
        assert HBAR * c.elastic == pytest.approx(-kinetics.kerr_coupling(vapor),
                                                 rel=1e-12)


class TestAlgebraicIdentities:
    @given(
        v_gr=st.floats(min_value=1e1, max_value=1e6),
        l_abs=st.floats(min_value=1e-6, max_value=1e0),
        dk=st.floats(min_value=1.0, max_value=1e4),
        rho_frac=st.floats(min_value=1e-6, max_value=0.999),
        pulse=st.floats(min_value=1e-6, max_value=1e3),
    )
    @settings(max_examples=200, deadline=None)
    def test_rate_ratio_identity(self, v_gr, l_abs, dk, rho_frac, pulse):
        p = params_from_scales(v_gr=v_gr, l_abs=l_abs,
                               delta_kerr_over_gamma=dk, rho_frac=rho_frac)
        gamma_coll = kinetics.collision_rate(p)
        gamma_nl, gamma_lin = kinetics.loss_rates(p, pulse)
        expected = (p.delta_kerr / p.gamma) * (p.n / p.rho_dsp)
        assert gamma_coll / gamma_nl == pytest.approx(expected, rel=1e-9)
        # OD pass <=> collisions beat linear loss
        _, _, od_ok = kinetics.od_criterion(p, pulse)
        if abs(gamma_coll / gamma_lin - 1) > 1e-9:
            assert od_ok == (gamma_coll > gamma_lin)

    def test_rates_scale_with_vgr_over_labs(self):
        p1 = params_from_scales(v_gr=1e3, l_abs=1e-2)
        p2 = params_from_scales(v_gr=1e4, l_abs=1e-2)
        assert kinetics.collision_rate(p2) == pytest.approx(
            10 * kinetics.collision_rate(p1), rel=1e-9)
        nl1, lin1 = kinetics.loss_rates(p1, 1.0)
        nl2, lin2 = kinetics.loss_rates(p2, 1.0)
        assert nl2 == pytest.approx(10 * nl1, rel=1e-9)
        assert lin2 == pytest.approx(10 * lin1, rel=1e-9)


class TestRateReport:
    def test_report_fields_consistent(self, vapor):
        rep = kinetics.rate_report(vapor, pulse_length_l=1.0)
        s = derive_scales(vapor)
        assert rep.tau == pytest.approx(s.l_abs / s.v_gr, rel=1e-12)
        assert rep.gamma_coll == kinetics.collision_rate(vapor)
        assert rep.od_actual == pytest.approx(1.0 / s.l_abs, rel=1e-12)
        assert rep.hierarchy_ok

    def test_rejects_bad_pulse_length(self, vapor):
        with pytest.raises(ParameterError):
            kinetics.loss_rates(vapor, -1.0)
