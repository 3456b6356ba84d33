"""One-dimensional electrostatics of the reverse-biased epilayer and the
miscut-frame rotation.

The abrupt one-sided junction model covers the vertical structure of the
diode: depletion width ``W = sqrt(2 eps (V_bi + V) / (q N))``, a
triangular field profile while ``W <= t``, and a trapezoidal profile with
``E_max = V_eff/t + q N t/(2 eps)`` once the depletion region punches
through the epilayer of thickness ``t``.
"""

from dataclasses import dataclass

import numpy as np

from .constants import CM3_TO_M3, EPS0, MVCM_PER_V_PER_M, Q_E, SIC_BUILTIN_V, SIC_EPS_R, UM

# Empirical 4H-SiC critical-field law, anchored so that a donor density of
# 1e16 cm^-3 gives 2.49 MV/cm.  Coefficient and slope are model constants
# of this toolkit, not measured values.
BREAKDOWN_ANCHOR_MV_CM = 2.49
BREAKDOWN_LOG_SLOPE = 0.25
BREAKDOWN_N_MIN_CM3 = 1e14
BREAKDOWN_N_MAX_CM3 = 1e18

MISCUT_LIMIT_DEG = 15.0


class DopingRangeError(ValueError):
    """Donor density outside the validity window of the empirical law."""


@dataclass(frozen=True)
class Junction1D:
    """Abrupt one-sided p+/n junction with an n epilayer."""

    donor_cm3: float = 1e16
    epi_thickness_um: float = 12.0
    eps_r: float = SIC_EPS_R
    builtin_v: float = SIC_BUILTIN_V

    def __post_init__(self):
        if not self.donor_cm3 > 0:
            raise ValueError("donor_cm3 must be positive")
        if not self.epi_thickness_um > 0:
            raise ValueError("epi_thickness_um must be positive")


@dataclass
class DepletionResult:
    width_um: float
    e_max_mvcm: float
    punch_through: bool
    e_profile: object  # callable z_um -> E in MV/cm


def depletion_1d(junction: Junction1D, bias_v: float) -> DepletionResult:
    """Depletion width, peak field, and field profile at a reverse bias."""
    if bias_v < 0:
        raise ValueError("bias must be >= 0 (reverse bias)")
    eps = junction.eps_r * EPS0
    n = junction.donor_cm3 * CM3_TO_M3
    t = junction.epi_thickness_um * UM
    v_eff = junction.builtin_v + bias_v
    w = np.sqrt(2.0 * eps * v_eff / (Q_E * n))
    slope = Q_E * n / eps  # dE/dz magnitude, V/m^2

    if w <= t:
        e_max = slope * w
        punch = False

        def profile(z_um):
            z = np.asarray(z_um, dtype=float) * UM
            e = np.where((z >= 0) & (z <= w), e_max - slope * z, 0.0)
            return e * MVCM_PER_V_PER_M

        width = w
    else:
        e_max = v_eff / t + Q_E * n * t / (2.0 * eps)
        punch = True

        def profile(z_um):
            z = np.asarray(z_um, dtype=float) * UM
            e = np.where((z >= 0) & (z <= t), e_max - slope * z, 0.0)
            return e * MVCM_PER_V_PER_M

        width = t

    return DepletionResult(
        width_um=float(width / UM),
        e_max_mvcm=float(e_max * MVCM_PER_V_PER_M),
        punch_through=punch,
        e_profile=profile,
    )


def punch_through_voltage(junction: Junction1D) -> float:
    """Bias at which the depletion region reaches the epilayer bottom."""
    eps = junction.eps_r * EPS0
    n = junction.donor_cm3 * CM3_TO_M3
    t = junction.epi_thickness_um * UM
    return float(Q_E * n * t**2 / (2.0 * eps) - junction.builtin_v)


def breakdown_field(donor_cm3: float) -> float:
    """Critical field (MV/cm) of 4H-SiC vs donor density.

    ``E_c(N) = 2.49 / (1 - 0.25 log10(N / 1e16))``, valid for
    1e14 <= N <= 1e18 cm^-3.
    """
    if not BREAKDOWN_N_MIN_CM3 <= donor_cm3 <= BREAKDOWN_N_MAX_CM3:
        raise DopingRangeError(
            f"donor density {donor_cm3:.3g} cm^-3 outside "
            f"[{BREAKDOWN_N_MIN_CM3:.0e}, {BREAKDOWN_N_MAX_CM3:.0e}]"
        )
    return BREAKDOWN_ANCHOR_MV_CM / (1.0 - BREAKDOWN_LOG_SLOPE * np.log10(donor_cm3 / 1e16))


def rotate_to_crystal(e_device, miscut_deg: float):
    """Rotate a device-frame field vector into the crystal (c-axis) frame.

    The wafer c-axis is tilted by the miscut angle toward the
    off-direction (device +x), so
    ``E_par = Ez cos(t) + Ex sin(t)``,
    ``E_perp_x = -Ez sin(t) + Ex cos(t)``, ``E_perp_y = Ey``.
    Components may be scalars or broadcastable arrays.
    """
    if abs(miscut_deg) >= MISCUT_LIMIT_DEG:
        raise ValueError(f"|miscut| must be < {MISCUT_LIMIT_DEG} degrees")
    ex, ey, ez = (np.asarray(c, dtype=float) for c in e_device)
    th = np.deg2rad(miscut_deg)
    e_par = ez * np.cos(th) + ex * np.sin(th)
    e_perp_x = -ez * np.sin(th) + ex * np.cos(th)
    return e_par, e_perp_x, ey
