import numpy as np
import pytest

from sicem.constants import CM3_TO_M3, EPS0, MVCM_PER_V_PER_M, Q_E, UM
from sicem.device import (
    DopingRangeError,
    Junction1D,
    breakdown_field,
    depletion_1d,
    punch_through_voltage,
    rotate_to_crystal,
)


def _oracle_triangular(junction, bias):
    """Closed-form one-sided abrupt junction, evaluated independently."""
    eps = junction.eps_r * EPS0
    n = junction.donor_cm3 * CM3_TO_M3
    v = junction.builtin_v + bias
    w = np.sqrt(2 * eps * v / (Q_E * n))
    e_max = Q_E * n * w / eps
    return w / UM, e_max * MVCM_PER_V_PER_M


class TestDepletion1D:
    def test_high_bias_anchor(self):
        res = depletion_1d(Junction1D(donor_cm3=1e16, epi_thickness_um=12.0), 1500.0)
        assert res.punch_through
        assert res.width_um == 12.0
        assert 2.2 <= res.e_max_mvcm <= 2.5

    def test_zero_bias_closed_form(self):
        j = Junction1D()
        res = depletion_1d(j, 0.0)
        w_ref, e_ref = _oracle_triangular(j, 0.0)
        assert not res.punch_through
        assert np.isclose(res.width_um, w_ref, rtol=1e-12)
        assert np.isclose(res.e_max_mvcm, e_ref, rtol=1e-12)
        assert res.e_max_mvcm < 0.102  # ~0.1 MV/cm at the built-in potential

    def test_doping_scaling_doubles_field(self):
        # In the triangular regime E_max = sqrt(2 q N (V_bi+V)/eps): x4 doping
        # doubles the peak field at fixed bias.
        r1 = depletion_1d(Junction1D(donor_cm3=1e16), 50.0)
        r4 = depletion_1d(Junction1D(donor_cm3=4e16), 50.0)
        assert not r1.punch_through and not r4.punch_through
        assert np.isclose(r4.e_max_mvcm / r1.e_max_mvcm, 2.0, rtol=1e-12)

    def test_punch_through_boundary(self):
        j = Junction1D()
        v_pt = punch_through_voltage(j)
        assert not depletion_1d(j, v_pt * 0.999).punch_through
        assert depletion_1d(j, v_pt * 1.001).punch_through

    def test_profile_integrates_to_voltage(self):
        # integral of E over the depletion region equals V_bi + V in both regimes
        j = Junction1D()
        for bias in (100.0, 1500.0):
            res = depletion_1d(j, bias)
            z = np.linspace(0, res.width_um, 20001)
            integral_v = np.trapezoid(res.e_profile(z), z) / (MVCM_PER_V_PER_M / UM)
            assert np.isclose(integral_v, j.builtin_v + bias, rtol=1e-6)

    def test_profile_zero_outside(self):
        res = depletion_1d(Junction1D(), 100.0)
        assert res.e_profile(res.width_um + 0.5) == 0.0
        assert res.e_profile(-1.0) == 0.0

    def test_negative_bias_rejected(self):
        with pytest.raises(ValueError):
            depletion_1d(Junction1D(), -1.0)

    def test_bad_junction(self):
        with pytest.raises(ValueError):
            Junction1D(donor_cm3=0.0)
        with pytest.raises(ValueError):
            Junction1D(epi_thickness_um=-1.0)


class TestBreakdownField:
    def test_anchor_value(self):
        assert abs(breakdown_field(1e16) - 2.49) < 1e-6

    def test_formula_point(self):
        assert np.isclose(breakdown_field(1e17), 2.49 / 0.75, rtol=1e-12)

    def test_monotone_increasing(self):
        n = np.logspace(14, 18, 30)
        e = np.array([breakdown_field(v) for v in n])
        assert np.all(np.diff(e) > 0)

    def test_range_guard(self):
        with pytest.raises(DopingRangeError):
            breakdown_field(9e13)
        with pytest.raises(DopingRangeError):
            breakdown_field(2e18)


class TestRotation:
    def test_identity_at_zero(self):
        e = rotate_to_crystal((0.3, -0.1, 1.7), 0.0)
        assert np.allclose(e, (1.7, 0.3, -0.1))

    def test_four_degree_unit_z(self):
        e_par, e_perp_x, e_perp_y = rotate_to_crystal((0.0, 0.0, 1.0), 4.0)
        assert np.isclose(e_par, 0.9975640502598242, atol=1e-12)
        assert np.isclose(e_perp_x, -0.0697564737441253, atol=1e-12)
        assert e_perp_y == 0.0

    def test_norm_preserved(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            v = rng.normal(size=3)
            out = rotate_to_crystal(tuple(v), rng.uniform(-14, 14))
            assert abs(np.sqrt(sum(c**2 for c in out)) - np.linalg.norm(v)) < 1e-12

    def test_miscut_limit(self):
        with pytest.raises(ValueError):
            rotate_to_crystal((0, 0, 1), 15.0)

    def test_vectorized(self):
        ez = np.linspace(0, 2, 5)
        e_par, e_perp_x, _ = rotate_to_crystal((np.zeros(5), np.zeros(5), ez), 4.0)
        assert e_par.shape == (5,)
        assert np.allclose(e_par, ez * np.cos(np.deg2rad(4.0)))
