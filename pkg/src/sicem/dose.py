"""Ion/vacancy depth profiles and sensor-spot placement.

Reads binary-collision depth tables (simplified two-column CSV or raw
SRIM-style vacancy tables), converts irradiation fluence into sensor
density profiles, and lays out spot grids in device coordinates.
"""

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np


class ProfileParseError(ValueError):
    """Malformed row in a depth-profile table (carries the line number)."""


class ProfileFormatError(ValueError):
    """Structurally invalid profile (non-monotone depth, bad header)."""


class BoundaryPeakError(ValueError):
    """Profile maximum sits on the table boundary; peak stats undefined."""


class DegenerateProfileError(ValueError):
    """Profile integrates to zero; cannot be normalized."""


class EnergyRangeError(ValueError):
    """Requested ion energy outside the depth-calibration table."""


# Depth calibration: peak depth (um) vs He ion energy (MeV).  Endpoints
# bracket the energies used for mapping; interior energies interpolate
# linearly, outside energies are refused.
DEFAULT_ENERGY_TO_DEPTH_UM = {0.75: 2.1, 3.0: 8.1}


@dataclass(frozen=True)
class DepthProfile:
    depth_um: np.ndarray
    vacancies_per_ion_um: np.ndarray
    ion_species: Optional[str] = None
    ion_energy_mev: Optional[float] = None

    def __post_init__(self):
        d = np.asarray(self.depth_um, dtype=float)
        v = np.asarray(self.vacancies_per_ion_um, dtype=float)
        object.__setattr__(self, "depth_um", d)
        object.__setattr__(self, "vacancies_per_ion_um", v)
        if d.ndim != 1 or d.size < 2 or d.shape != v.shape:
            raise ProfileFormatError("profile needs >= 2 aligned (depth, value) samples")
        if not np.all(np.diff(d) > 0):
            raise ProfileFormatError("depth values must be strictly increasing")
        if np.any(v < 0):
            raise ProfileFormatError("vacancy rates must be >= 0")
        if not np.all(np.isfinite(d)) or not np.all(np.isfinite(v)):
            raise ProfileFormatError("profile values must be finite")


@dataclass(frozen=True)
class SpotRef:
    """Sensor spot in device coordinates (x from the anode edge, z = depth)."""

    x_um: float
    z_um: float
    fluence_ions: float = 5e3
    spot_diameter_um: float = 1.0
    pitch_um: float = 20.0

    def __post_init__(self):
        if not self.z_um > 0:
            raise ValueError("spot depth must be positive")
        if not self.pitch_um > self.spot_diameter_um:
            raise ValueError("pitch must exceed the spot diameter")


def parse_depth_profile(text: str, ion_species=None, ion_energy_mev=None) -> DepthProfile:
    """Parse a depth table from simplified CSV or a raw SRIM-style dump.

    The bit-specified format is the two-column CSV with header
    ``depth_um,vacancies_per_ion_um``.  SRIM vacancy tables (depth in
    Angstrom, one or more vacancies/(Angstrom ion) columns that are
    summed) are accepted by a tolerant scanner keyed on an 'Ang' unit
    token in the header.
    """
    lines = text.splitlines()
    header_idx = None
    for k, line in enumerate(lines):
        if line.strip().lower().replace(" ", "").startswith("depth_um,vacancies_per_ion_um"):
            header_idx = k
            break
    if header_idx is not None:
        return _parse_simple_csv(lines, header_idx, ion_species, ion_energy_mev)
    return _parse_srim_like(lines, ion_species, ion_energy_mev)


def _parse_simple_csv(lines, header_idx, ion_species, ion_energy_mev) -> DepthProfile:
    depth, vac = [], []
    for ln, line in enumerate(lines[header_idx + 1 :], start=header_idx + 2):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split(",")
        try:
            depth.append(float(parts[0]))
            vac.append(float(parts[1]))
        except (ValueError, IndexError) as exc:
            raise ProfileParseError(f"line {ln}: cannot parse {line!r}") from exc
    if len(depth) < 2:
        raise ProfileFormatError("profile table has fewer than 2 rows")
    return DepthProfile(np.array(depth), np.array(vac), ion_species, ion_energy_mev)


_NUMBER = re.compile(r"[-+]?\d+(?:\.\d*)?(?:[eE][-+]?\d+)?")


def _parse_srim_like(lines, ion_species, ion_energy_mev) -> DepthProfile:
    angstrom = any(
        ("ang" in line.lower() or "(a)" in line.lower()) and "depth" in line.lower()
        for line in lines
    )
    depth_scale = 1e-4 if angstrom else 1.0  # Angstrom -> um
    value_scale = 1e4 if angstrom else 1.0  # per Angstrom -> per um
    depth, vac = [], []
    for ln, line in enumerate(lines, start=1):
        nums = _NUMBER.findall(line.replace(",", " "))
        if len(nums) < 2:
            continue
        if any(c.isalpha() for c in re.sub(r"[eE](?=[-+]?\d)", "", line.strip())):
            continue  # unit/header line with stray numbers
        try:
            vals = [float(v) for v in nums]
        except ValueError as exc:
            raise ProfileParseError(f"line {ln}: cannot parse {line!r}") from exc
        depth.append(vals[0] * depth_scale)
        vac.append(sum(vals[1:]) * value_scale)
    if len(depth) < 2:
        raise ProfileFormatError("no numeric depth rows found")
    return DepthProfile(np.array(depth), np.array(vac), ion_species, ion_energy_mev)


def profile_stats(profile: DepthProfile):
    """(peak depth, FWHM) in micrometres.

    Peak by a parabola through the discrete maximum and its neighbours,
    FWHM by linear interpolation of the half-maximum crossings.
    """
    d, v = profile.depth_um, profile.vacancies_per_ion_um
    k = int(np.argmax(v))
    if k == 0 or k == len(v) - 1:
        raise BoundaryPeakError("profile maximum on the table boundary")
    a, b, c = np.polyfit(d[k - 1 : k + 2], v[k - 1 : k + 2], 2)
    peak_depth = d[k]
    peak_val = v[k]
    if a < 0:
        vertex = -b / (2 * a)
        vertex_val = np.polyval([a, b, c], vertex)
        # Strongly uneven spacing around a flat top can send the parabola far
        # above the data; trust the refinement only when it stays near it.
        if d[k - 1] <= vertex <= d[k + 1] and vertex_val <= 1.5 * v[k]:
            peak_depth = vertex
            peak_val = vertex_val

    half = peak_val / 2.0
    left = None
    for i in range(k, 0, -1):
        if v[i - 1] <= half <= v[i]:
            frac = (half - v[i - 1]) / (v[i] - v[i - 1])
            left = d[i - 1] + frac * (d[i] - d[i - 1])
            break
    right = None
    for i in range(k, len(v) - 1):
        if v[i + 1] <= half <= v[i]:
            frac = (v[i] - half) / (v[i] - v[i + 1])
            right = d[i] + frac * (d[i + 1] - d[i])
            break
    if left is None or right is None:
        raise BoundaryPeakError("half-maximum crossing outside the table")
    return float(peak_depth), float(right - left)


def density_profile(profile: DepthProfile, fluence_cm2: float, generation_rate: float):
    """Sensor density vs depth (cm^-3) for a given fluence and V/ion rate.

    ``density(z) = fluence * rate * profile(z) / integral(profile)``;
    the 1e4 factor converts the per-um normalized profile to per-cm.
    """
    if not fluence_cm2 > 0:
        raise ValueError("fluence must be positive")
    if not generation_rate > 0:
        raise ValueError("generation rate must be positive")
    integral = float(np.trapezoid(profile.vacancies_per_ion_um, profile.depth_um))
    if integral <= 0:
        raise DegenerateProfileError("profile integrates to zero")
    norm = profile.vacancies_per_ion_um / integral  # 1/um
    density = fluence_cm2 * generation_rate * norm * 1e4
    return profile.depth_um.copy(), density


def peak_density(profile: DepthProfile, fluence_cm2: float, generation_rate: float) -> float:
    _, density = density_profile(profile, fluence_cm2, generation_rate)
    return float(density.max())


def uniform_profile(thickness_um: float, z0_um: float = 0.0, n_points: int = 65) -> DepthProfile:
    """Rectangular profile of a given effective thickness.

    Lets dose planning state an effective sensor-layer thickness directly
    instead of committing to a particular straggling shape.
    """
    if not thickness_um > 0:
        raise ValueError("thickness must be positive")
    edge = thickness_um * 1e-3
    d = np.concatenate(
        [
            [z0_um - edge],
            np.linspace(z0_um, z0_um + thickness_um, n_points),
            [z0_um + thickness_um + edge],
        ]
    )
    v = np.concatenate([[0.0], np.full(n_points, 1.0), [0.0]])
    return DepthProfile(d, v)


def ions_per_spot_to_fluence_cm2(ions: float, spot_diameter_um: float = 1.0) -> float:
    """Fluence referenced to the bounding square of the writing spot.

    A 1 um spot at 5e3 ions/spot maps to 5e11 cm^-2, the convention used
    in the irradiation planning.
    """
    if not ions > 0 or not spot_diameter_um > 0:
        raise ValueError("ions and spot diameter must be positive")
    area_cm2 = (spot_diameter_um * 1e-4) ** 2
    return ions / area_cm2


def depth_for_energy(energy_mev: float, table: Optional[dict] = None) -> float:
    table = table or DEFAULT_ENERGY_TO_DEPTH_UM
    energies = np.array(sorted(table))
    depths = np.array([table[e] for e in energies])
    if not energies[0] <= energy_mev <= energies[-1]:
        raise EnergyRangeError(
            f"energy {energy_mev} MeV outside calibration range "
            f"[{energies[0]}, {energies[-1]}] MeV"
        )
    return float(np.interp(energy_mev, energies, depths))


def place_spot_grid(
    x0_um: float,
    count: int,
    pitch_um: float,
    energy_mev: float,
    energy_to_depth: Optional[dict] = None,
    fluence_ions: float = 5e3,
    spot_diameter_um: float = 1.0,
) -> list:
    """Row of spots at x0 + i*pitch, all at the depth for the given energy."""
    if count < 1:
        raise ValueError("count must be >= 1")
    z = depth_for_energy(energy_mev, energy_to_depth)
    return [
        SpotRef(
            x_um=x0_um + i * pitch_um,
            z_um=z,
            fluence_ions=fluence_ions,
            spot_diameter_um=spot_diameter_um,
            pitch_um=pitch_um,
        )
        for i in range(count)
    ]


def write_spots(path, spots, provenance: Optional[dict] = None) -> None:
    payload = {
        "spots": [
            {
                "x_um": s.x_um,
                "z_um": s.z_um,
                "fluence_ions": s.fluence_ions,
                "spot_diameter_um": s.spot_diameter_um,
                "pitch_um": s.pitch_um,
            }
            for s in spots
        ]
    }
    if provenance:
        payload["provenance"] = provenance
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_spots(path) -> list:
    data = json.loads(Path(path).read_text())
    return [SpotRef(**s) for s in data["spots"]]


def profile_to_csv(profile: DepthProfile) -> str:
    lines = ["depth_um,vacancies_per_ion_um"]
    for d, v in zip(profile.depth_um, profile.vacancies_per_ion_um):
        lines.append(f"{float(d)!r},{float(v)!r}")
    return "\n".join(lines) + "\n"


def write_profile(path, profile: DepthProfile) -> None:
    Path(path).write_text(profile_to_csv(profile))


def read_profile(path, **kwargs) -> DepthProfile:
    return parse_depth_profile(Path(path).read_text(), **kwargs)
