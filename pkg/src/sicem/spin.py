"""Ground-state spin Hamiltonian of c-axis spin defects under combined
electric and magnetic fields, and the ODMR transitions it predicts.

Conventions
-----------
* Crystal frame x'-y'-z' with z' along the c-axis.  Electric field
  components in MV/cm, magnetic field in mT.
* Hamiltonians are expressed in frequency units (MHz), i.e. H/h.
* Axial term in the traceless form
  ``(D + (d_par/h) Ez') [Sz^2 - S(S+1)/3]``.
* Transverse Stark term
  ``-(d_perp/h) [Ex'(Sx Sy + Sy Sx) + Ey'(Sx^2 - Sy^2)]``.
  Resonance frequencies depend on the transverse field only through
  sqrt(Ex'^2 + Ey'^2) (verified by the azimuthal-invariance tests), so
  the in-plane pairing convention does not affect any prediction.

ODMR weighting
--------------
Transitions are weighted by |<i|Sx|j>|^2 for a perpendicular RF drive.
Optical readout contrasts the two zero-field level families (the Kramers
doublets for half-integer spin, the m=0 vs m=+-1 manifolds for S=1);
transitions inside one family shuffle population without photoluminescence
contrast, so only family-crossing transitions are reported.  For the pure
axial S=3/2 case this yields exactly the two branches
``f+- = |2(D + (d_par/h) Ez') +- (g mu_B / h) Bz'|``.
"""

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .constants import DEFAULT_G_FACTOR, MU_B_MHZ_PER_MT

E_FIELD_LIMIT_MV_CM = 10.0
DRIVE_WEIGHT_THRESHOLD = 1e-6

# Degenerate ODMR lines are merged below this gap (MHz); matches the
# Kramers-degeneracy tolerance used throughout.
FREQ_MERGE_TOL_MHZ = 1e-9


class UnsupportedSpinError(ValueError):
    """Spin multiplicity outside the supported set {1, 3/2}."""


class FieldLimitError(ValueError):
    """Electric field beyond material limits, almost certainly a unit error."""


@dataclass(frozen=True)
class SpinSystem:
    """Defect parameters defining the ground-state Hamiltonian.

    ``d_par_over_h`` and ``d_perp_over_h`` are signed couplings in
    MHz/(MV/cm).  ``d_perp_sign_known`` records whether the stored sign of
    the transverse coupling is physical; resonance frequencies at zero
    magnetic field are blind to it.
    """

    label: str
    spin_multiplicity: float = 1.5
    zfs_D: float = 35.5  # MHz
    g_factor: float = DEFAULT_G_FACTOR
    d_par_over_h: float = 0.0  # MHz/(MV/cm)
    d_perp_over_h: float = 0.0  # MHz/(MV/cm)
    d_perp_sign_known: bool = False

    def __post_init__(self):
        if self.spin_multiplicity not in (1.0, 1.5):
            raise UnsupportedSpinError(
                f"spin S={self.spin_multiplicity} not supported (use 1 or 3/2)"
            )
        for name in ("zfs_D", "g_factor", "d_par_over_h", "d_perp_over_h"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def dimension(self) -> int:
        return int(round(2 * self.spin_multiplicity + 1))

    def with_overrides(self, **kwargs) -> "SpinSystem":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class CrystalField:
    """Electric (MV/cm) and magnetic (mT) field in the crystal frame."""

    e_par: float = 0.0
    e_perp_x: float = 0.0
    e_perp_y: float = 0.0
    b_par: float = 0.0
    b_perp_x: float = 0.0
    b_perp_y: float = 0.0

    def __post_init__(self):
        vals = (self.e_par, self.e_perp_x, self.e_perp_y,
                self.b_par, self.b_perp_x, self.b_perp_y)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("field components must be finite")
        e_mag = float(np.sqrt(self.e_par**2 + self.e_perp_x**2 + self.e_perp_y**2))
        if e_mag > E_FIELD_LIMIT_MV_CM:
            raise FieldLimitError(
                f"|E| = {e_mag:.3g} MV/cm exceeds the {E_FIELD_LIMIT_MV_CM} MV/cm "
                "guard; check units (expected MV/cm)"
            )

    @property
    def e_perp(self) -> float:
        return float(np.hypot(self.e_perp_x, self.e_perp_y))


@dataclass(frozen=True)
class Transition:
    frequency_mhz: float
    drive_weight: float


@dataclass(frozen=True)
class TransitionSet:
    """ODMR-active transitions plus the full eigenvalue list (MHz, ascending)."""

    transitions: tuple
    eigenvalues_mhz: np.ndarray

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([t.frequency_mhz for t in self.transitions])

    @property
    def weights(self) -> np.ndarray:
        return np.array([t.drive_weight for t in self.transitions])


@lru_cache(maxsize=8)
def spin_operators(spin_multiplicity: float):
    """Sx, Sy, Sz for spin S in the basis m = S, S-1, ..., -S."""
    if spin_multiplicity not in (1.0, 1.5):
        raise UnsupportedSpinError(
            f"spin S={spin_multiplicity} not supported (use 1 or 3/2)"
        )
    s = float(spin_multiplicity)
    dim = int(round(2 * s + 1))
    m = s - np.arange(dim)
    sz = np.diag(m)
    # <m+1|S+|m> = sqrt(S(S+1) - m(m+1)); raising connects column k+1 to row k.
    raise_amp = np.sqrt(s * (s + 1) - m[1:] * (m[1:] + 1))
    sp = np.zeros((dim, dim))
    sp[np.arange(dim - 1), np.arange(1, dim)] = raise_amp
    sx = (sp + sp.T) / 2.0
    sy = (sp - sp.T) / 2.0j
    return sx, sy, sz


def build_hamiltonian(system: SpinSystem, field: CrystalField) -> np.ndarray:
    """Hermitian (2S+1)x(2S+1) Hamiltonian in MHz."""
    sx, sy, sz = spin_operators(system.spin_multiplicity)
    s = system.spin_multiplicity
    dim = sx.shape[0]
    zeeman_mhz_per_mt = system.g_factor * MU_B_MHZ_PER_MT
    axial = system.zfs_D + system.d_par_over_h * field.e_par
    h = zeeman_mhz_per_mt * (
        field.b_perp_x * sx + field.b_perp_y * sy + field.b_par * sz
    )
    h = h + axial * (sz @ sz - s * (s + 1) / 3.0 * np.eye(dim))
    if field.e_perp_x != 0.0 or field.e_perp_y != 0.0:
        h = h - system.d_perp_over_h * (
            field.e_perp_x * (sx @ sy + sy @ sx)
            + field.e_perp_y * (sx @ sx - sy @ sy)
        )
    if np.abs(h.imag).max() == 0.0:
        return h.real
    return h


def _family_labels(v: np.ndarray, dim: int) -> np.ndarray:
    """Classify eigenvectors by their weight on the outermost |m|=S states.

    At zero magnetic field the two groups are the Kramers families
    (S=3/2) or the m=0 vs m=+-1 manifolds (S=1); ODMR contrast exists
    only between groups.
    """
    outer = np.abs(v[..., 0, :]) ** 2 + np.abs(v[..., dim - 1, :]) ** 2
    return outer >= 0.5


def transition_frequencies(
    system: SpinSystem,
    field: CrystalField,
    weight_threshold: float = DRIVE_WEIGHT_THRESHOLD,
) -> TransitionSet:
    """Diagonalize and report ODMR-active transition frequencies.

    Family-crossing eigenpair gaps with Sx drive weight above
    ``weight_threshold`` are emitted; degenerate lines are merged (their
    weights add).  At zero magnetic field exactly one frequency results
    for S=3/2 (Kramers doublets).
    """
    from .linalg import jacobi_eigh

    h = build_hamiltonian(system, field)
    w, v = jacobi_eigh(h)
    sx, _, _ = spin_operators(system.spin_multiplicity)
    amp = np.conj(v.T) @ sx.astype(v.dtype) @ v
    weight = np.abs(amp) ** 2
    fam = _family_labels(v, system.dimension)

    raw = []
    dim = system.dimension
    scale = max(np.abs(w).max(), 1.0)
    for i in range(dim):
        for j in range(i + 1, dim):
            if fam[i] == fam[j]:
                continue
            if weight[i, j] < weight_threshold:
                continue
            freq = w[j] - w[i]
            if freq <= max(FREQ_MERGE_TOL_MHZ, 1e-12 * scale):
                continue
            raw.append((freq, weight[i, j]))

    raw.sort(key=lambda t: t[0])
    merged = []
    for freq, wt in raw:
        if merged and freq - merged[-1][0] <= max(FREQ_MERGE_TOL_MHZ, 1e-12 * freq):
            f0, w0 = merged[-1]
            merged[-1] = (f0, w0 + wt)
        else:
            merged.append((freq, wt))
    transitions = tuple(Transition(float(f), float(wt)) for f, wt in merged)
    return TransitionSet(transitions=transitions, eigenvalues_mhz=w)


def analytic_axial_frequency(system: SpinSystem, e_par: float, b_par: float):
    """Closed-form resonance pair for the pure axial case (E_perp = B_perp = 0).

    Returns (f_plus, f_minus) in MHz with
    ``f+- = |2(D + (d_par/h) E) +- (g mu_B/h) B|``.
    """
    axial = 2.0 * (system.zfs_D + system.d_par_over_h * e_par)
    zeeman = system.g_factor * MU_B_MHZ_PER_MT * b_par
    return abs(axial + zeeman), abs(axial - zeeman)


def zero_field_odmr_frequency(system: SpinSystem, e_par, e_perp) -> np.ndarray:
    """Vectorized single ODMR frequency at B = 0 for an S=3/2 system.

    ``e_par`` and ``e_perp`` broadcast against each other; the transverse
    field enters only through its magnitude, so it is applied along y'
    (keeping the Hamiltonian real).  Agrees with
    ``transition_frequencies`` to solver precision; used by calibration
    scans that diagonalize large batches.
    """
    from .linalg import jacobi_eigh

    if system.spin_multiplicity != 1.5:
        raise UnsupportedSpinError("zero-field single-line helper requires S=3/2")
    e_par, e_perp = np.broadcast_arrays(
        np.asarray(e_par, dtype=float), np.asarray(e_perp, dtype=float)
    )
    sx, sy, sz = spin_operators(1.5)
    quad = (sz @ sz - 1.5 * 2.5 / 3.0 * np.eye(4)).real
    perp_op = (sx @ sx - sy @ sy).real
    axial = system.zfs_D + system.d_par_over_h * e_par
    coup = -system.d_perp_over_h * e_perp
    h = axial[..., None, None] * quad + coup[..., None, None] * perp_op
    w, _ = jacobi_eigh(h)
    return (w[..., 2] + w[..., 3] - w[..., 0] - w[..., 1]) / 2.0


# Electric dipole moments of various spin defects, |d/h| in Hz/(V/cm)
# (== MHz/(MV/cm)).  None marks values that are only bounded or not
# reported; the V_Si parallel coupling is negative (frequency decreases
# with increasing axial field).
DIPOLE_MOMENT_TABLE = {
    "VSi": {"d_par": 15.0, "d_perp": 16.5},
    "NV": {"d_par": 0.35, "d_perp": 17.0},
    "PL1": {"d_par": 2.65, "d_perp": None},
    "PL2": {"d_par": 1.61, "d_perp": None},
    "PL3": {"d_par": None, "d_perp": 32.3},
    "PL4": {"d_par": 0.44, "d_perp": 28.5},
    "PL5": {"d_par": None, "d_perp": 32.5},
    "PL6": {"d_par": 0.96, "d_perp": None},
}

# Nominal zero-field splittings (MHz) for the shipped presets.  The V_Si
# value reproduces the measured 71 MHz zero-field line (f = 2D); the
# divacancy and NV values are standard room-temperature figures and are
# freely overridable.
_PRESET_ZFS_MHZ = {
    "VSi": 35.5,
    "NV": 2870.0,
    "PL1": 1336.0,
    "PL2": 1305.0,
    "PL3": 1222.0,
    "PL4": 1334.0,
    "PL5": 1373.0,
    "PL6": 1365.0,
}

_PRESET_SPIN = {"VSi": 1.5}  # everything else in the table is S=1


def preset(name: str, **overrides) -> SpinSystem:
    """Build a SpinSystem from the shipped defect table.

    Unreported couplings enter as 0.0; signs follow the measured/theory
    convention for V_Si (d_par < 0, d_perp taken positive) and are stored
    as magnitudes for the other defects.
    """
    key = _canonical_preset_name(name)
    row = DIPOLE_MOMENT_TABLE[key]
    d_par = row["d_par"] if row["d_par"] is not None else 0.0
    d_perp = row["d_perp"] if row["d_perp"] is not None else 0.0
    if key == "VSi":
        d_par = -d_par
    sys = SpinSystem(
        label=key,
        spin_multiplicity=_PRESET_SPIN.get(key, 1.0),
        zfs_D=_PRESET_ZFS_MHZ[key],
        g_factor=DEFAULT_G_FACTOR,
        d_par_over_h=d_par,
        d_perp_over_h=d_perp,
        d_perp_sign_known=(key == "VSi"),
    )
    if overrides:
        sys = sys.with_overrides(**overrides)
    return sys


def _canonical_preset_name(name: str) -> str:
    lookup = {k.lower(): k for k in DIPOLE_MOMENT_TABLE}
    lookup["vsi"] = "VSi"
    lookup["v_si"] = "VSi"
    key = lookup.get(name.strip().lower())
    if key is None:
        raise KeyError(
            f"unknown preset {name!r}; available: {', '.join(DIPOLE_MOMENT_TABLE)}"
        )
    return key


def preset_names():
    return list(DIPOLE_MOMENT_TABLE)
