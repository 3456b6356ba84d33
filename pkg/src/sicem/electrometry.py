"""Dipole-moment calibration, resonance-to-field inversion, and validity
guards.

Calibration works on bias series pairing simulated fields with fitted
resonance frequencies.  The parallel dipole coupling follows from a
weighted straight-line fit of ``f = 2D + 2 (d_par/h) E_par`` at a spot
with negligible transverse field; the transverse-to-parallel ratio
``|d_perp/d_par|`` follows from a one-dimensional chi-square scan at a
spot with substantial transverse field.  The inverter solves the full
spin model for the axial field on the monotone branch below the
frequency fold.
"""

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .spin import SpinSystem, zero_field_odmr_frequency

RATIO_SCAN_STEP = 1e-3
RATIO_REFINE_TOL = 1e-5
RATIO_RANGE = (0.0, 2.0)
PARALLEL_SPOT_RATIO_LIMIT = 0.01

# Sensor-density regimes (cm^-3): the resonance shift stays linear in the
# field up to ~9e15; spin-spin interactions distort it beyond ~3e16.
DENSITY_OK_CM3 = 9e15
DENSITY_REJECT_CM3 = 3e16


class DegenerateDesignError(ValueError):
    """Too few records or no field variation to constrain the fit."""


class TransverseRatioError(ValueError):
    """Series violates the small-transverse-field precondition."""


class IllConditionedRatioError(ValueError):
    """Ratio objective flat: no transverse-field leverage in the series."""


class UnphysicalFrequencyError(ValueError):
    """Measured frequency above the zero-field line by more than noise."""


class AmbiguousBranchError(ValueError):
    """Frequency below the fold minimum: not reachable on the monotone branch."""


@dataclass
class BiasRecord:
    bias_v: float
    e_par_mvcm: float
    e_perp_mvcm: float
    f_mhz: float
    f_sigma_mhz: float
    ok: bool = True


@dataclass
class BiasSeries:
    records: list
    spot: Optional[object] = None  # SpotRef when placed on a device
    field_source: str = "unspecified"
    temperature_k: float = 300.0  # accepted for other defects; no-op for V_Si

    def good_records(self):
        return [r for r in self.records if r.ok and np.isfinite(r.f_mhz)]


@dataclass
class DipoleFit:
    d_par_over_h: Optional[float] = None
    d_par_sigma: Optional[float] = None
    zfs_D_fit: Optional[float] = None
    zfs_D_sigma: Optional[float] = None
    ratio_r: Optional[float] = None
    ratio_sigma: Optional[float] = None
    covariance: Optional[np.ndarray] = None  # 2x2, (slope, intercept) order
    chi2: Optional[float] = None
    n_records: int = 0
    # Model curves f(E_par) for selected ratios, for figure rendering.
    curves: Optional[dict] = None

    def to_dict(self) -> dict:
        out = {
            "d_par_over_h_mhz_per_mvcm": self.d_par_over_h,
            "d_par_sigma": self.d_par_sigma,
            "zfs_D_mhz": self.zfs_D_fit,
            "zfs_D_sigma": self.zfs_D_sigma,
            "ratio_d_perp_over_d_par": self.ratio_r,
            "ratio_sigma": self.ratio_sigma,
            "chi2": self.chi2,
            "n_records": self.n_records,
        }
        if self.covariance is not None:
            out["covariance_slope_intercept"] = np.asarray(self.covariance).tolist()
        return out


@dataclass
class FieldEstimate:
    e_par_mvcm: float
    e_perp_mvcm: float
    sigma_e_mvcm: float
    linearity_ok: bool


def fit_dipole_parallel(series: BiasSeries) -> DipoleFit:
    """Weighted linear regression ``f = 2D + (2 d_par/h) E_par``.

    Requires a parallel-field spot: every record must satisfy
    ``E_perp/E_par < 0.01``.  Standard errors come from the weighted
    normal equations with weights 1/sigma_f^2 (records without a sigma
    get the series median).
    """
    recs = series.good_records()
    if len(recs) < 3:
        raise DegenerateDesignError(f"need >= 3 records, got {len(recs)}")
    _check_series_invariants(recs)
    worst = None
    for r in recs:
        ratio = _perp_ratio(r)
        if worst is None or ratio > worst[0]:
            worst = (ratio, r)
        if ratio >= PARALLEL_SPOT_RATIO_LIMIT:
            raise TransverseRatioError(
                f"record at bias {r.bias_v} V has E_perp/E_par = {ratio:.3g} "
                f">= {PARALLEL_SPOT_RATIO_LIMIT} (worst in series)"
            )
    e = np.array([r.e_par_mvcm for r in recs])
    f = np.array([r.f_mhz for r in recs])
    sig = _effective_sigmas(recs)
    if np.ptp(e) == 0.0:
        raise DegenerateDesignError("all records share one field value")

    w = 1.0 / sig**2
    design = np.column_stack([e, np.ones_like(e)])  # slope, intercept
    normal = design.T * w @ design
    rhs = design.T @ (w * f)
    coef = np.linalg.solve(normal, rhs)
    cov = np.linalg.inv(normal)
    slope, intercept = coef
    resid = f - design @ coef
    chi2 = float((w * resid**2).sum())
    return DipoleFit(
        d_par_over_h=float(slope / 2.0),
        d_par_sigma=float(np.sqrt(cov[0, 0]) / 2.0),
        zfs_D_fit=float(intercept / 2.0),
        zfs_D_sigma=float(np.sqrt(cov[1, 1]) / 2.0),
        covariance=cov,
        chi2=chi2,
        n_records=len(recs),
    )


def fit_ratio_perp(
    series: BiasSeries,
    d_par_over_h: float,
    zfs_D: float,
    curve_ratios: Sequence[float] = (0.0, 0.5, 1.0, 1.5, 2.0),
) -> DipoleFit:
    """One-dimensional least squares for r = |d_perp/d_par| on [0, 2].

    chi^2(r) is scanned on a 1e-3 grid, refined by golden section to
    1e-5; the 1-sigma interval is read off Delta chi^2 = 1.  Model
    frequencies come from the full spin Hamiltonian at the recorded
    (E_par, E_perp) pairs.  Also tabulates model curves for the standard
    ratio set used in the comparison figures.
    """
    recs = series.good_records()
    if len(recs) < 3:
        raise DegenerateDesignError(f"need >= 3 records, got {len(recs)}")
    _check_series_invariants(recs)
    e_par = np.array([r.e_par_mvcm for r in recs])
    e_perp = np.array([r.e_perp_mvcm for r in recs])
    f_meas = np.array([r.f_mhz for r in recs])
    sig = _effective_sigmas(recs)
    base = SpinSystem(
        label="ratio-fit", spin_multiplicity=1.5, zfs_D=zfs_D, d_par_over_h=d_par_over_h
    )

    def chi2_of(r_values: np.ndarray) -> np.ndarray:
        r_values = np.atleast_1d(np.asarray(r_values, dtype=float))
        model = _model_freqs(base, r_values[:, None], e_par[None, :], e_perp[None, :])
        return (((model - f_meas[None, :]) / sig[None, :]) ** 2).sum(axis=1)

    r_grid = np.arange(RATIO_RANGE[0], RATIO_RANGE[1] + RATIO_SCAN_STEP / 2, RATIO_SCAN_STEP)
    chi2_grid = chi2_of(r_grid)
    spread = float(chi2_grid.max() - chi2_grid.min())
    if not np.isfinite(spread) or spread <= 1e-9 * max(chi2_grid.min(), 1.0):
        raise IllConditionedRatioError(
            "chi^2 is flat in r; series has no transverse-field leverage"
        )
    k = int(np.argmin(chi2_grid))
    lo = r_grid[max(k - 1, 0)]
    hi = r_grid[min(k + 1, len(r_grid) - 1)]
    r_hat = _golden_minimize(lambda r: float(chi2_of(r)[0]), lo, hi, RATIO_REFINE_TOL)
    chi2_min = float(chi2_of(r_hat)[0])

    target = chi2_min + 1.0
    upper = _bisect_level(lambda r: float(chi2_of(r)[0]), r_hat, RATIO_RANGE[1], target)
    lower = _bisect_level(lambda r: float(chi2_of(r)[0]), r_hat, RATIO_RANGE[0], target)
    halves = [abs(b - r_hat) for b in (lower, upper) if b is not None]
    if not halves:
        raise IllConditionedRatioError("Delta chi^2 = 1 interval exceeds the scan range")
    sigma_r = float(np.mean(halves))

    curves = {}
    e_line = np.linspace(0.0, float(e_par.max()) * 1.05 + 1e-12, 200)
    perp_slope = _median_ratio(e_par, e_perp)
    for rv in curve_ratios:
        curves[float(rv)] = (
            e_line.copy(),
            _model_freqs(base, np.array([[rv]]), e_line[None, :], (perp_slope * e_line)[None, :])[0],
        )
    resid_chi = chi2_min
    return DipoleFit(
        d_par_over_h=d_par_over_h,
        zfs_D_fit=zfs_D,
        ratio_r=float(r_hat),
        ratio_sigma=sigma_r,
        chi2=resid_chi,
        n_records=len(recs),
        curves=curves,
    )


def invert_field(
    system: SpinSystem,
    f_mhz: float,
    f_sigma_mhz: float,
    ratio_perp_par: float = 0.0,
) -> FieldEstimate:
    """Solve the spin model for E_par given a measured resonance.

    Bisection on the monotone branch E in [0, E_fold) with
    E_perp = ratio * E_par; tolerance 1e-6 MV/cm.  ``linearity_ok`` flags
    whether the naive linear inversion ``(f - 2D)/(2 d_par/h)`` agrees
    with the full inversion to 1 percent, i.e. whether transverse-field
    nonlinearity is negligible at this operating point.
    """
    if f_sigma_mhz <= 0 or not np.isfinite(f_sigma_mhz):
        raise ValueError("f_sigma must be positive and finite")
    if ratio_perp_par < 0:
        raise ValueError("ratio must be >= 0")
    f0 = _freq_at(system, 0.0, ratio_perp_par)  # zero-field line, 2D
    if f_mhz > f0 + 3.0 * f_sigma_mhz:
        raise UnphysicalFrequencyError(
            f"f = {f_mhz:.6g} MHz exceeds the zero-field line {f0:.6g} MHz "
            f"by more than 3 sigma"
        )
    e_max = 0.99 * 10.0 / np.sqrt(1.0 + ratio_perp_par**2)
    e_fold = _golden_minimize(lambda e: _freq_at(system, e, ratio_perp_par), 0.0, e_max, 1e-9)
    f_fold = _freq_at(system, e_fold, ratio_perp_par)
    if f_mhz < f_fold - 1e-12:
        raise AmbiguousBranchError(
            f"f = {f_mhz:.6g} MHz lies below the fold minimum {f_fold:.6g} MHz; "
            "the axial field is beyond the monotone branch"
        )

    if f_mhz >= f0:
        e_hat = 0.0
    else:
        lo, hi = 0.0, e_fold
        while hi - lo > 1e-6:
            mid = 0.5 * (lo + hi)
            if _freq_at(system, mid, ratio_perp_par) > f_mhz:
                lo = mid
            else:
                hi = mid
        e_hat = 0.5 * (lo + hi)

    h = 1e-4
    e_minus = max(e_hat - h, 0.0)
    dfde = (_freq_at(system, e_hat + h, ratio_perp_par) - _freq_at(system, e_minus, ratio_perp_par)) / (
        e_hat + h - e_minus
    )
    sigma_e = f_sigma_mhz / max(abs(dfde), 1e-12)

    e_linear = (f_mhz - 2.0 * system.zfs_D) / (2.0 * system.d_par_over_h)
    deviation = abs(e_linear - e_hat)
    linearity_ok = deviation <= 0.01 * max(e_hat, 1e-2)
    return FieldEstimate(
        e_par_mvcm=float(e_hat),
        e_perp_mvcm=float(ratio_perp_par * e_hat),
        sigma_e_mvcm=float(sigma_e),
        linearity_ok=bool(linearity_ok),
    )


def density_guard(vsi_density_cm3: float) -> str:
    """Classify a sensor density against the linear-response limits.

    'ok' up to 9e15 cm^-3 (inclusive), 'warn' up to the 3e16 cm^-3
    nonlinearity threshold, 'reject' from there on.
    """
    if not vsi_density_cm3 > 0:
        raise ValueError("density must be positive")
    if vsi_density_cm3 <= DENSITY_OK_CM3:
        return "ok"
    if vsi_density_cm3 < DENSITY_REJECT_CM3:
        return "warn"
    return "reject"


def sensitivity_scale(n_spins: float, t2_us: float) -> float:
    """Relative sensitivity figure sqrt(N T2), normalized to (1, 1 us) = 1.

    A comparison number only; absolute sensitivity needs photon
    statistics that are out of scope.
    """
    if n_spins < 1:
        raise ValueError("n_spins must be >= 1")
    if not t2_us > 0:
        raise ValueError("t2 must be positive")
    return float(np.sqrt(n_spins * t2_us))


# -- helpers ---------------------------------------------------------------

def _check_series_invariants(recs) -> None:
    biases = [r.bias_v for r in recs]
    if len(set(biases)) != len(biases):
        raise DegenerateDesignError("duplicate bias values in the series")
    for r in recs:
        if r.e_par_mvcm < 0:
            raise ValueError(f"negative simulated field at bias {r.bias_v} V")


def _perp_ratio(rec: BiasRecord) -> float:
    if rec.e_par_mvcm > 0:
        return rec.e_perp_mvcm / rec.e_par_mvcm
    return 0.0 if rec.e_perp_mvcm == 0 else np.inf


def _effective_sigmas(recs) -> np.ndarray:
    sig = np.array([r.f_sigma_mhz for r in recs], dtype=float)
    good = np.isfinite(sig) & (sig > 0)
    if not good.any():
        return np.ones_like(sig)
    med = float(np.median(sig[good]))
    sig[~good] = med
    return sig


def _model_freqs(base: SpinSystem, r, e_par, e_perp) -> np.ndarray:
    # d_perp = r * |d_par| enters only through the product d_perp * E_perp,
    # so the ratio folds into the field and one system serves every r.
    probe = base.with_overrides(d_perp_over_h=np.abs(base.d_par_over_h))
    return zero_field_odmr_frequency(probe, e_par, np.asarray(r) * np.asarray(e_perp))


def _freq_at(system: SpinSystem, e_par: float, ratio: float) -> float:
    return float(zero_field_odmr_frequency(system, e_par, ratio * e_par))


def _golden_minimize(fun, lo: float, hi: float, tol: float) -> float:
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


def _bisect_level(fun, x_from: float, x_to: float, target: float):
    """x between x_from (f<target) and x_to with f(x) = target, or None."""
    f_to = fun(x_to)
    if f_to < target:
        return None
    a, b = x_from, x_to
    for _ in range(80):
        mid = 0.5 * (a + b)
        if fun(mid) < target:
            a = mid
        else:
            b = mid
        if abs(b - a) < RATIO_REFINE_TOL:
            break
    return 0.5 * (a + b)


def _median_ratio(e_par: np.ndarray, e_perp: np.ndarray) -> float:
    mask = e_par > 0
    if not mask.any():
        return 0.0
    return float(np.median(e_perp[mask] / e_par[mask]))


# ---------------------------------------------------------------------------
# File formats: series CSV `bias_v,e_par_mvcm,e_perp_mvcm,f_mhz,f_sigma_mhz`
# (comment lines allowed), dipole-fit report as JSON.
# ---------------------------------------------------------------------------

SERIES_COLUMNS = ["bias_v", "e_par_mvcm", "e_perp_mvcm", "f_mhz", "f_sigma_mhz"]


def series_to_csv(series: BiasSeries, comment_lines: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    for line in comment_lines:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SERIES_COLUMNS)
    for r in series.records:
        writer.writerow(
            [repr(float(v)) for v in (r.bias_v, r.e_par_mvcm, r.e_perp_mvcm, r.f_mhz, r.f_sigma_mhz)]
        )
    return buf.getvalue()


def series_from_csv(text: str, field_source: str = "csv") -> BiasSeries:
    rows = [
        line for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    reader = csv.reader(rows)
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != SERIES_COLUMNS:
        raise ValueError(f"expected header {','.join(SERIES_COLUMNS)!r}")
    records = []
    for ln, row in enumerate(reader, start=2):
        try:
            bias, e_par, e_perp, f, sig = (float(v) for v in row[:5])
        except (ValueError, IndexError) as exc:
            raise ValueError(f"bad series row {ln}: {row!r}") from exc
        records.append(BiasRecord(bias, e_par, e_perp, f, sig, ok=np.isfinite(f)))
    return BiasSeries(records=records, field_source=field_source)


def write_series(path, series: BiasSeries, comment_lines: Sequence[str] = ()) -> None:
    Path(path).write_text(series_to_csv(series, comment_lines))


def read_series(path) -> BiasSeries:
    path = Path(path)
    return series_from_csv(path.read_text(), field_source=f"csv:{path.name}")


def write_dipole_fit(path, fit: DipoleFit, provenance: Optional[dict] = None) -> None:
    payload = fit.to_dict()
    if provenance:
        payload["provenance"] = provenance
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
