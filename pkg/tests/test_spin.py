import numpy as np
import pytest

from sicem.constants import MU_B_MHZ_PER_MT
from sicem.spin import (
    DIPOLE_MOMENT_TABLE,
    CrystalField,
    FieldLimitError,
    SpinSystem,
    UnsupportedSpinError,
    analytic_axial_frequency,
    build_hamiltonian,
    preset,
    spin_operators,
    transition_frequencies,
    zero_field_odmr_frequency,
)

# Independent oracle values, frozen from numpy.linalg.eigvalsh evaluations
# and CODATA constants (see test bodies for the generating expressions).
GAP_D35_EPERP05 = 75.60919256280945  # D=35, d_perp=16.5, E_perp=0.5
SPLIT_1MT = 56.06335863976315  # 2 * 2.0028 * mu_B/h * 1 mT
VSI_HIGHFIELD_F = 9.417213335164494  # VSi preset, E=2.3, ratio 0.07, r=1.1


def _sys35(d_perp=16.5):
    return SpinSystem("test", 1.5, 35.0, 2.0028, -15.0, d_perp)


class TestPresets:
    def test_table_values_exact(self):
        expected_par = {"VSi": 15.0, "NV": 0.35, "PL1": 2.65, "PL2": 1.61,
                        "PL4": 0.44, "PL6": 0.96}
        expected_perp = {"VSi": 16.5, "NV": 17.0, "PL3": 32.3, "PL4": 28.5,
                         "PL5": 32.5}
        for name, val in expected_par.items():
            assert DIPOLE_MOMENT_TABLE[name]["d_par"] == val
        for name, val in expected_perp.items():
            assert DIPOLE_MOMENT_TABLE[name]["d_perp"] == val
        # bounded-only / unreported entries stay unset
        assert DIPOLE_MOMENT_TABLE["PL3"]["d_par"] is None
        assert DIPOLE_MOMENT_TABLE["PL5"]["d_par"] is None
        assert DIPOLE_MOMENT_TABLE["PL1"]["d_perp"] is None

    def test_vsi_preset(self):
        vsi = preset("vsi")
        assert vsi.spin_multiplicity == 1.5
        assert vsi.dimension == 4
        assert vsi.zfs_D == 35.5
        assert vsi.d_par_over_h == -15.0
        assert vsi.d_perp_over_h == 16.5

    def test_all_presets_build(self):
        for name in DIPOLE_MOMENT_TABLE:
            sys_ = preset(name)
            assert sys_.zfs_D > 0
            h = build_hamiltonian(sys_, CrystalField(e_par=0.1, e_perp_x=0.1, b_par=0.5))
            assert h.shape == (sys_.dimension,) * 2

    def test_unknown_preset(self):
        with pytest.raises(KeyError):
            preset("qubitron")


class TestValidation:
    def test_unsupported_spin(self):
        with pytest.raises(UnsupportedSpinError):
            SpinSystem("bad", spin_multiplicity=2.5)
        with pytest.raises(UnsupportedSpinError):
            spin_operators(0.5)

    def test_field_guard(self):
        with pytest.raises(FieldLimitError):
            CrystalField(e_par=11.0)
        with pytest.raises(FieldLimitError):
            CrystalField(e_par=8.0, e_perp_x=8.0)
        with pytest.raises(ValueError):
            CrystalField(e_par=float("nan"))

    def test_nonfinite_system(self):
        with pytest.raises(ValueError):
            SpinSystem("bad", zfs_D=float("inf"))


class TestOperators:
    def test_spin_three_half_matrices(self):
        sx, sy, sz = spin_operators(1.5)
        assert np.allclose(np.diag(sz), [1.5, 0.5, -0.5, -1.5])
        r3 = np.sqrt(3.0)
        expected_sx = 0.5 * np.array(
            [[0, r3, 0, 0], [r3, 0, 2, 0], [0, 2, 0, r3], [0, 0, r3, 0]]
        )
        assert np.allclose(sx, expected_sx)
        # su(2) algebra: [Sx, Sy] = i Sz
        assert np.allclose(sx @ sy - sy @ sx, 1j * sz)


class TestHamiltonian:
    def test_zero_field_diagonal_pattern(self):
        h = build_hamiltonian(_sys35(), CrystalField())
        assert np.allclose(h, np.diag([35.0, -35.0, -35.0, 35.0]))
        w = np.linalg.eigvalsh(h)
        assert np.isclose(w[2] - w[1], 70.0)

    def test_axial_stark_gap_40(self):
        # Axial field of 1 MV/cm with d_par/h = -15 shifts the line to 40 MHz.
        h = build_hamiltonian(_sys35(), CrystalField(e_par=1.0))
        w = np.linalg.eigvalsh(h)
        assert np.isclose(w[2] - w[1], 40.0)

    def test_transverse_gap_matches_dense_solver(self):
        f = CrystalField(e_perp_x=0.5)
        h = build_hamiltonian(_sys35(), f)
        w = np.linalg.eigvalsh(h)  # independent dense oracle
        gap = w[2] - w[1]
        assert np.isclose(gap, GAP_D35_EPERP05, rtol=1e-12)
        # operator algebra fixes the transverse coefficient at 3
        assert np.isclose(gap, 2 * np.sqrt(35.0**2 + 3 * (16.5 * 0.5) ** 2), rtol=1e-12)

    def test_hermitian_exactly(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            f = CrystalField(*rng.uniform(-2, 2, size=3), *rng.uniform(-5, 5, size=3))
            h = build_hamiltonian(_sys35(), f)
            assert np.array_equal(h, np.conj(h.T))

    def test_traceless(self):
        f = CrystalField(e_par=1.3, e_perp_x=0.4, e_perp_y=-0.2, b_par=2.0)
        ts = transition_frequencies(_sys35(), f)
        assert abs(ts.eigenvalues_mhz.sum()) < 1e-9


class TestTransitions:
    def test_zero_field_single_line(self):
        ts = transition_frequencies(_sys35(), CrystalField())
        assert len(ts.transitions) == 1
        assert np.isclose(ts.frequencies[0], 70.0)

    def test_vsi_zero_field_71(self):
        ts = transition_frequencies(preset("vsi"), CrystalField())
        assert ts.frequencies.tolist() == [71.0]

    def test_axial_zeeman_two_lines(self):
        ts = transition_frequencies(_sys35(), CrystalField(b_par=1.0))
        f_plus, f_minus = analytic_axial_frequency(_sys35(), 0.0, 1.0)
        assert len(ts.transitions) == 2
        assert np.allclose(sorted(ts.frequencies), sorted([f_plus, f_minus]), rtol=1e-12)
        split = ts.frequencies.max() - ts.frequencies.min()
        assert np.isclose(split, SPLIT_1MT, rtol=1e-12)
        assert np.isclose(split, 2 * 2.0028 * MU_B_MHZ_PER_MT, rtol=1e-15)

    def test_vsi_high_field_point(self):
        # E_par = 2.3 MV/cm at transverse ratio 0.07 with |d_perp/d_par| = 1.1
        vsi = preset("vsi")
        f = CrystalField(e_par=2.3, e_perp_x=0.07 * 2.3)
        ts = transition_frequencies(vsi, f)
        assert len(ts.transitions) == 1
        assert np.isclose(ts.frequencies[0], VSI_HIGHFIELD_F, rtol=1e-9)
        # cross-check against the dense eigensolver
        w = np.linalg.eigvalsh(build_hamiltonian(vsi, f))
        assert np.isclose(ts.frequencies[0], w[2] - w[1], rtol=1e-12)

    def test_weights_nonnegative_and_thresholded(self):
        ts = transition_frequencies(_sys35(), CrystalField(b_par=2.0, e_perp_x=0.3))
        assert (ts.weights >= 1e-6).all()

    def test_nv_zero_field(self):
        nv = preset("nv")
        ts = transition_frequencies(nv, CrystalField())
        assert len(ts.transitions) == 1
        assert np.isclose(ts.frequencies[0], nv.zfs_D)


class TestAnalyticAxial:
    def test_zero_everything(self):
        assert analytic_axial_frequency(_sys35(), 0.0, 0.0) == (70.0, 70.0)

    def test_linear_shift(self):
        # 1.2 MV/cm at -15 MHz/(MV/cm): 2*(35 - 18) = 34 MHz
        f_p, f_m = analytic_axial_frequency(_sys35(), 1.2, 0.0)
        assert np.isclose(f_p, 34.0) and np.isclose(f_m, 34.0)

    def test_absolute_value_fold(self):
        # 2.4 MV/cm crosses the fold: |2*(35 - 36)| = 2 MHz
        f_p, f_m = analytic_axial_frequency(_sys35(), 2.4, 0.0)
        assert np.isclose(f_p, 2.0) and np.isclose(f_m, 2.0)


class TestInvariants:
    def test_axial_equivalence_random(self):
        rng = np.random.default_rng(10)
        sys_base = _sys35()
        for _ in range(300):
            d = rng.uniform(10, 100)
            e = rng.uniform(0, 3)
            b = rng.uniform(0, 5)
            sys_ = sys_base.with_overrides(zfs_D=d)
            ts = transition_frequencies(sys_, CrystalField(e_par=e, b_par=b))
            expected = sorted(set(analytic_axial_frequency(sys_, e, b)))
            got = sorted(ts.frequencies)
            assert len(got) == len(expected)
            for g, x in zip(got, expected):
                assert abs(g - x) <= 1e-9 * max(abs(x), 1.0)

    def test_kramers_degeneracy(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            f = CrystalField(
                e_par=rng.uniform(0, 3),
                e_perp_x=rng.uniform(-1, 1),
                e_perp_y=rng.uniform(-1, 1),
            )
            ts = transition_frequencies(_sys35(), f)
            w = ts.eigenvalues_mhz
            assert w[1] - w[0] < 1e-9
            assert w[3] - w[2] < 1e-9

    def test_azimuthal_invariance(self):
        rng = np.random.default_rng(12)
        sys_ = _sys35()
        for _ in range(50):
            e_par = rng.uniform(0, 2.5)
            e_perp = rng.uniform(0, 1.0)
            phi0, phi1 = rng.uniform(0, 2 * np.pi, size=2)
            f0 = transition_frequencies(
                sys_,
                CrystalField(e_par=e_par, e_perp_x=e_perp * np.cos(phi0),
                             e_perp_y=e_perp * np.sin(phi0)),
            ).frequencies
            f1 = transition_frequencies(
                sys_,
                CrystalField(e_par=e_par, e_perp_x=e_perp * np.cos(phi1),
                             e_perp_y=e_perp * np.sin(phi1)),
            ).frequencies
            assert len(f0) == len(f1)
            assert np.allclose(f0, f1, rtol=1e-9, atol=1e-9)

    def test_axial_linearity_slope(self):
        sys_ = _sys35()
        h = 1e-3
        for e0 in (0.2, 0.8, 1.5):
            f_hi = transition_frequencies(sys_, CrystalField(e_par=e0 + h)).frequencies[0]
            f_lo = transition_frequencies(sys_, CrystalField(e_par=e0 - h)).frequencies[0]
            slope = (f_hi - f_lo) / (2 * h)
            assert abs(slope - 2 * sys_.d_par_over_h) <= 1e-9 * abs(2 * sys_.d_par_over_h) + 1e-8

    def test_sign_blindness_d_perp(self):
        f = CrystalField(e_par=1.0, e_perp_x=0.3, e_perp_y=0.1)
        f_pos = transition_frequencies(_sys35(16.5), f).frequencies
        f_neg = transition_frequencies(_sys35(-16.5), f).frequencies
        assert np.allclose(f_pos, f_neg, rtol=1e-12)


class TestZeroFieldHelper:
    def test_matches_transition_frequencies(self):
        vsi = preset("vsi")
        e_par = np.linspace(0.0, 2.4, 25)
        e_perp = 0.13 * e_par
        batch = zero_field_odmr_frequency(vsi, e_par, e_perp)
        for k in range(len(e_par)):
            ts = transition_frequencies(vsi, CrystalField(e_par=e_par[k], e_perp_x=e_perp[k]))
            assert np.isclose(batch[k], ts.frequencies[0], rtol=1e-12)

    def test_requires_spin_three_half(self):
        with pytest.raises(UnsupportedSpinError):
            zero_field_odmr_frequency(preset("nv"), 0.1, 0.1)
