"""Shared fixtures; the 2D Poisson solves are expensive and session-scoped."""

import numpy as np
import pytest

from sicem.poisson2d import edge_termination_model, laterally_uniform_model, solve_poisson_2d


@pytest.fixture(scope="session")
def map_nowire_189():
    """Reference edge-termination map, no wire, Fluorinert dielectric, 750 V."""
    return solve_poisson_2d(edge_termination_model(eps_r_dielectric=1.89), 750.0)


@pytest.fixture(scope="session")
def wire_sweep_maps():
    """Maps for the wire-distance and dielectric-constant trend checks (750 V)."""
    cases = {
        "nowire_e1": dict(eps_r_dielectric=1.0),
        "nowire_e189": dict(eps_r_dielectric=1.89),
        "d4_e1": dict(eps_r_dielectric=1.0, wire_height_um=4.0),
        "d10_e1": dict(eps_r_dielectric=1.0, wire_height_um=10.0),
        "d50_e1": dict(eps_r_dielectric=1.0, wire_height_um=50.0),
        "d4_e189": dict(eps_r_dielectric=1.89, wire_height_um=4.0),
        "d4_e38": dict(eps_r_dielectric=3.8, wire_height_um=4.0),
    }
    maps = {}
    for tag, kw in cases.items():
        kw = dict(kw)
        if "wire_height_um" in kw:
            kw.update(wire_x0_um=0.0, wire_x1_um=160.0)
        maps[tag] = solve_poisson_2d(edge_termination_model(**kw), 750.0)
    return maps


@pytest.fixture(scope="session")
def uniform_maps_300v():
    """Laterally uniform diode at 300 V, two grid resolutions differing by 2x."""
    coarse = laterally_uniform_model(dz_fine_um=0.1, dz_coarse_um=0.25)
    fine = laterally_uniform_model(dz_fine_um=0.05, dz_coarse_um=0.125)
    return {
        "coarse": solve_poisson_2d(coarse, 300.0),
        "fine": solve_poisson_2d(fine, 300.0),
    }


def spread_crossing(fmap, depth_um=2.1, thresh_mvcm=0.1):
    """Largest x where |E_par| at the given depth still reaches the threshold."""
    from sicem.poisson2d import line_cut

    xs, e_par, _ = line_cut(fmap, depth_um)
    mag = np.abs(e_par)
    above = mag >= thresh_mvcm
    if not above.any():
        return 0.0
    k = int(np.max(np.nonzero(above)))
    if k == len(xs) - 1:
        return float(xs[-1])
    frac = (mag[k] - thresh_mvcm) / (mag[k] - mag[k + 1])
    return float(xs[k] + frac * (xs[k + 1] - xs[k]))
