import numpy as np
import pytest

from sicem.dose import (
    BoundaryPeakError,
    DegenerateProfileError,
    DepthProfile,
    EnergyRangeError,
    ProfileFormatError,
    ProfileParseError,
    SpotRef,
    density_profile,
    depth_for_energy,
    ions_per_spot_to_fluence_cm2,
    parse_depth_profile,
    peak_density,
    place_spot_grid,
    profile_stats,
    profile_to_csv,
    read_profile,
    uniform_profile,
    write_profile,
)


def _gaussian_profile(peak_um=2.1, sigma_um=0.15, amp=0.05, n=161, span=1.5):
    z = np.linspace(peak_um - span, peak_um + span, n)
    v = amp * np.exp(-0.5 * ((z - peak_um) / sigma_um) ** 2)
    return DepthProfile(z, v)


class TestParsing:
    def test_minimal_csv(self):
        prof = parse_depth_profile("depth_um,vacancies_per_ion_um\n0.0,0.1\n1.0,0.4\n2.0,0.2\n")
        assert len(prof.depth_um) == 3
        assert prof.vacancies_per_ion_um[1] == 0.4

    def test_gaussian_fixture_peak(self):
        prof = _gaussian_profile(2.1)
        text = profile_to_csv(prof)
        back = parse_depth_profile(text)
        peak, _ = profile_stats(back)
        assert abs(peak - 2.1) < 1e-6

    def test_shuffled_depth_rejected(self):
        with pytest.raises(ProfileFormatError):
            parse_depth_profile("depth_um,vacancies_per_ion_um\n1.0,0.1\n0.5,0.2\n2.0,0.1\n")

    def test_malformed_row_carries_line_number(self):
        text = "depth_um,vacancies_per_ion_um\n0.0,0.1\n1.0,oops\n"
        with pytest.raises(ProfileParseError, match="line 3"):
            parse_depth_profile(text)

    def test_srim_style_angstrom_table(self):
        lines = [
            "==================================",
            " COLLISION EVENTS by He in SiC",
            "  DEPTH (Ang.)   Vacancies/(Angstrom-Ion)  Recoil Vacancies",
            "----------------------------------",
        ]
        z_ang = np.linspace(1000, 30000, 30)
        peak = 21000.0
        for z in z_ang:
            v = 1e-4 * np.exp(-0.5 * ((z - peak) / 3000.0) ** 2)
            lines.append(f"  {z:.1f}  {v:.6E}  {v / 2:.6E}")
        prof = parse_depth_profile("\n".join(lines))
        assert abs(prof.depth_um[0] - 0.1) < 1e-9  # Angstrom -> um
        pk, _ = profile_stats(prof)
        assert abs(pk - 2.1) < 0.1
        # per-Angstrom converted to per-um and columns summed
        k = np.argmax(prof.vacancies_per_ion_um)
        assert np.isclose(prof.vacancies_per_ion_um[k], 1.5 * 1e-4 * 1e4, rtol=1e-3)

    def test_no_numeric_rows(self):
        with pytest.raises(ProfileFormatError):
            parse_depth_profile("just words\nno data here\n")


class TestProfileStats:
    def test_gaussian_fwhm(self):
        prof = _gaussian_profile(sigma_um=0.15)
        _, fwhm = profile_stats(prof)
        assert abs(fwhm - 2.3548 * 0.15) / (2.3548 * 0.15) < 0.01

    def test_low_energy_fixture_peak(self):
        # shallow implant peaked near 1.6 um
        prof = _gaussian_profile(peak_um=1.6, sigma_um=0.12, span=1.0)
        peak, _ = profile_stats(prof)
        assert abs(peak - 1.6) < 0.02

    def test_flat_profile_boundary_peak(self):
        prof = DepthProfile(np.linspace(0, 1, 10), np.ones(10))
        with pytest.raises(BoundaryPeakError):
            profile_stats(prof)

    def test_edge_peak(self):
        z = np.linspace(0, 1, 10)
        prof = DepthProfile(z, np.exp(-z))
        with pytest.raises(BoundaryPeakError):
            profile_stats(prof)

    def test_amplitude_invariance(self):
        prof = _gaussian_profile()
        scaled = DepthProfile(prof.depth_um, prof.vacancies_per_ion_um * 137.0)
        assert profile_stats(prof) == pytest.approx(profile_stats(scaled))


class TestDensity:
    def test_reference_dose_chain(self):
        # 5e3 ions over a 1 um spot (~5e11 cm^-2), 0.8 sensors/ion, 0.8 um
        # effective thickness: ~5e15 cm^-3 peak density
        fluence = ions_per_spot_to_fluence_cm2(5e3, 1.0)
        assert np.isclose(fluence, 5e11)
        prof = uniform_profile(0.8, z0_um=1.7)
        peak = peak_density(prof, fluence, 0.8)
        assert abs(peak - 5e15) / 5e15 < 0.1

    def test_linear_in_fluence_and_rate(self):
        prof = _gaussian_profile()
        _, d1 = density_profile(prof, 1e11, 0.4)
        _, d2 = density_profile(prof, 2e11, 0.4)
        _, d3 = density_profile(prof, 1e11, 0.8)
        assert np.allclose(d2, 2 * d1)
        assert np.allclose(d3, 2 * d1)

    def test_high_fluence_rejected_by_guard(self):
        from sicem.electrometry import density_guard

        fluence = ions_per_spot_to_fluence_cm2(3e5, 1.0)
        prof = uniform_profile(0.8, z0_um=1.7)
        peak = peak_density(prof, fluence, 0.8)
        assert peak == pytest.approx(3e17, rel=0.1)
        assert density_guard(peak) == "reject"

    def test_zero_profile_degenerate(self):
        prof = DepthProfile(np.linspace(0, 1, 5), np.zeros(5))
        with pytest.raises(DegenerateProfileError):
            density_profile(prof, 1e11, 0.5)

    def test_validation(self):
        prof = _gaussian_profile()
        with pytest.raises(ValueError):
            density_profile(prof, -1.0, 0.5)
        with pytest.raises(ValueError):
            density_profile(prof, 1e11, 0.0)


class TestSpotPlacement:
    def test_grid_positions(self):
        spots = place_spot_grid(10.0, 3, 20.0, 0.75)
        assert [s.x_um for s in spots] == [10.0, 30.0, 50.0]
        assert all(s.z_um == 2.1 for s in spots)

    def test_energy_endpoints(self):
        assert depth_for_energy(0.75) == 2.1
        assert depth_for_energy(3.0) == 8.1

    def test_energy_interpolation_monotone(self):
        energies = np.linspace(0.75, 3.0, 10)
        depths = [depth_for_energy(e) for e in energies]
        assert all(a < b for a, b in zip(depths, depths[1:]))

    def test_out_of_range_energy(self):
        with pytest.raises(EnergyRangeError):
            depth_for_energy(5.0)
        with pytest.raises(EnergyRangeError):
            depth_for_energy(0.5)

    def test_custom_table(self):
        table = {0.4: 1.3, 0.5: 1.6, 0.75: 2.1}
        assert depth_for_energy(0.5, table) == 1.6

    def test_spot_validation(self):
        with pytest.raises(ValueError):
            SpotRef(x_um=0.0, z_um=-1.0)
        with pytest.raises(ValueError):
            SpotRef(x_um=0.0, z_um=1.0, spot_diameter_um=25.0, pitch_um=20.0)

    def test_count_validation(self):
        with pytest.raises(ValueError):
            place_spot_grid(0.0, 0, 20.0, 0.75)


class TestIO:
    def test_profile_round_trip_bit_exact(self, tmp_path):
        prof = _gaussian_profile()
        path = tmp_path / "profile.csv"
        write_profile(path, prof)
        back = read_profile(path)
        assert np.array_equal(back.depth_um, prof.depth_um)
        assert np.array_equal(back.vacancies_per_ion_um, prof.vacancies_per_ion_um)
        assert profile_to_csv(back) == profile_to_csv(prof)

    def test_spots_round_trip(self, tmp_path):
        from sicem.dose import read_spots, write_spots

        spots = place_spot_grid(10.0, 4, 20.0, 3.0)
        path = tmp_path / "spots.json"
        write_spots(path, spots, provenance={"energy_mev": 3.0})
        back = read_spots(path)
        assert [s.x_um for s in back] == [s.x_um for s in spots]
        assert back[0].z_um == 8.1
