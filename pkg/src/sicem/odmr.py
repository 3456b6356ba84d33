"""ODMR spectrum synthesis, Lorentzian fitting, and bias-series assembly.

Spectrum model: ``contrast(f) = baseline + sum_k A_k (G_k/2)^2 /
((f - f_k)^2 + (G_k/2)^2)`` with A_k > 0 for a peak (renderers may flip
the sign to draw PL dips).  Continuous-wave spectra of the targeted
defects are well described by Lorentzian lines.
"""

import csv
import io
import json
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .levmar import damped_least_squares

MIN_SPECTRUM_POINTS = 16


class SpectrumFormatError(ValueError):
    """Spectrum data violating the sampling contract."""


@dataclass(frozen=True)
class LinePeak:
    center_mhz: float
    fwhm_mhz: float
    amplitude: float
    population_weight: float = 1.0

    def __post_init__(self):
        if not self.fwhm_mhz > 0:
            raise ValueError("fwhm must be positive")
        if not 0.0 <= self.population_weight <= 1.0:
            raise ValueError("population_weight must lie in [0, 1]")


@dataclass(frozen=True)
class SpectrumMeta:
    bias_v: Optional[float] = None
    spot_id: Optional[str] = None
    noise_sigma: Optional[float] = None
    seed: Optional[int] = None
    # Simulated fields may ride along for synthetic calibration chains.
    e_par_mvcm: Optional[float] = None
    e_perp_mvcm: Optional[float] = None

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


@dataclass
class OdmrSpectrum:
    freqs_mhz: np.ndarray
    contrast: np.ndarray
    meta: SpectrumMeta = field(default_factory=SpectrumMeta)

    def __post_init__(self):
        self.freqs_mhz = np.asarray(self.freqs_mhz, dtype=float)
        self.contrast = np.asarray(self.contrast, dtype=float)
        if self.freqs_mhz.size < MIN_SPECTRUM_POINTS:
            raise SpectrumFormatError(
                f"need at least {MIN_SPECTRUM_POINTS} samples, got {self.freqs_mhz.size}"
            )
        if self.freqs_mhz.shape != self.contrast.shape:
            raise SpectrumFormatError("freqs and contrast must have equal length")
        if not np.all(np.diff(self.freqs_mhz) > 0):
            raise SpectrumFormatError("frequency grid must be strictly increasing")
        if not np.all(np.isfinite(self.contrast)):
            raise SpectrumFormatError("contrast must be finite")


@dataclass
class FitResult:
    peaks: list  # LinePeak, sorted by center frequency
    center_uncertainties_mhz: np.ndarray
    residual_rms: float
    converged: bool
    iterations: int
    baseline: float = 0.0
    degenerate_covariance: bool = False


def lorentzian_sum(freqs, baseline: float, peaks: Sequence[LinePeak]) -> np.ndarray:
    f = np.asarray(freqs, dtype=float)
    out = np.full_like(f, float(baseline))
    for pk in peaks:
        hw2 = (pk.fwhm_mhz / 2.0) ** 2
        out += pk.amplitude * pk.population_weight * hw2 / ((f - pk.center_mhz) ** 2 + hw2)
    return out


def synthesize_spectrum(
    peaks: Sequence[LinePeak],
    freqs_mhz,
    noise_sigma: float = 0.0,
    seed: int = 0,
    baseline: float = 0.0,
    meta: Optional[SpectrumMeta] = None,
) -> OdmrSpectrum:
    """Deterministic Lorentzian-sum spectrum with optional Gaussian noise."""
    f = np.asarray(freqs_mhz, dtype=float)
    if f.size == 0:
        raise SpectrumFormatError("empty frequency grid")
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be >= 0")
    y = lorentzian_sum(f, baseline, peaks)
    if noise_sigma > 0:
        rng = np.random.default_rng(seed)
        y = y + rng.normal(0.0, noise_sigma, size=f.shape)
    if meta is None:
        meta = SpectrumMeta(noise_sigma=noise_sigma or None, seed=seed)
    return OdmrSpectrum(freqs_mhz=f, contrast=y, meta=meta)


def _moving_average(y: np.ndarray, window: int = 5) -> np.ndarray:
    kernel = np.ones(window) / window
    pad = window // 2
    padded = np.concatenate([np.full(pad, y[0]), y, np.full(pad, y[-1])])
    return np.convolve(padded, kernel, mode="valid")


def _auto_init(spec: OdmrSpectrum, n_peaks: int) -> tuple:
    """Initial (baseline, peaks) from smoothed local extrema."""
    f, y = spec.freqs_mhz, spec.contrast
    smooth = _moving_average(y, 5)
    baseline = float(np.percentile(smooth, 10))
    height = smooth - baseline
    interior = np.arange(1, len(f) - 1)
    is_max = (height[interior] >= height[interior - 1]) & (
        height[interior] >= height[interior + 1]
    )
    cand = interior[is_max]
    cand = cand[np.argsort(height[cand])[::-1]]

    # Greedy selection with a minimum separation so one broad line does
    # not swallow every requested initial center.
    min_sep = (f[-1] - f[0]) / (4.0 * max(n_peaks, 1))
    chosen = []
    for idx in cand:
        if all(abs(f[idx] - f[j]) >= min_sep for j in chosen):
            chosen.append(idx)
        if len(chosen) == n_peaks:
            break
    while len(chosen) < n_peaks:
        frac = (len(chosen) + 1) / (n_peaks + 1)
        chosen.append(int(frac * (len(f) - 1)))

    span = f[-1] - f[0]
    peaks = []
    for idx in sorted(chosen):
        amp = max(height[idx], 1e-12)
        half = baseline + amp / 2.0
        left = idx
        while left > 0 and smooth[left] > half:
            left -= 1
        right = idx
        while right < len(f) - 1 and smooth[right] > half:
            right += 1
        width = max(f[right] - f[left], span / 50.0)
        peaks.append(LinePeak(center_mhz=float(f[idx]), fwhm_mhz=float(width), amplitude=float(amp)))
    return baseline, peaks


def _pack(baseline: float, peaks: Sequence[LinePeak]) -> np.ndarray:
    p = [baseline]
    for pk in peaks:
        p.extend([pk.amplitude * pk.population_weight, pk.center_mhz, pk.fwhm_mhz])
    return np.array(p)


def _unpack(p: np.ndarray):
    baseline = p[0]
    peaks = []
    for k in range((len(p) - 1) // 3):
        a, f0, g = p[1 + 3 * k : 4 + 3 * k]
        peaks.append((a, f0, abs(g)))
    return baseline, peaks


def fit_spectrum(
    spec: OdmrSpectrum,
    n_peaks: int = 1,
    init: Optional[Sequence[LinePeak]] = None,
    max_iter: int = 200,
) -> FitResult:
    """Fit a baseline plus ``n_peaks`` Lorentzians to a spectrum.

    Damped least squares over {baseline, A_k, f_k, G_k}; 1-sigma center
    uncertainties come from the Gauss-Newton covariance scaled by the
    residual variance.  Returns ``converged=False`` with best-so-far
    parameters after ``max_iter``; an unresolvable extra peak shows up as
    ``degenerate_covariance=True``.
    """
    if n_peaks not in (1, 2):
        raise ValueError("n_peaks must be 1 or 2")
    f, y = spec.freqs_mhz, spec.contrast
    if init is not None:
        baseline0 = float(np.percentile(y, 10))
        p0 = _pack(baseline0, init)
    else:
        baseline0, peaks0 = _auto_init(spec, n_peaks)
        p0 = _pack(baseline0, peaks0)

    def residual_jac(p):
        baseline, peaks = _unpack(p)
        model = np.full_like(f, baseline)
        jac = np.zeros((len(f), len(p)))
        jac[:, 0] = 1.0
        for k, (a, f0, g) in enumerate(peaks):
            hw2 = (g / 2.0) ** 2
            v = (f - f0) ** 2
            den = v + hw2
            shape = hw2 / den
            model += a * shape
            col = 1 + 3 * k
            jac[:, col] = shape
            jac[:, col + 1] = a * hw2 * 2.0 * (f - f0) / den**2
            jac[:, col + 2] = a * v * (g / 2.0) / den**2
        return model - y, jac

    res = damped_least_squares(residual_jac, p0, max_iter=max_iter)
    baseline, raw_peaks = _unpack(res.params)
    order = np.argsort([pk[1] for pk in raw_peaks])
    sigma_centers = []
    peaks = []
    for k in order:
        a, f0, g = raw_peaks[k]
        var = res.covariance[1 + 3 * k + 1, 1 + 3 * k + 1]
        sigma_centers.append(float(np.sqrt(max(var, 0.0))))
        # Fitted amplitudes are effective values; population_weight stays 1
        # so the fitted peak list feeds straight back into the model.
        peaks.append(LinePeak(center_mhz=float(f0), fwhm_mhz=float(g), amplitude=float(a)))
    return FitResult(
        peaks=peaks,
        center_uncertainties_mhz=np.array(sigma_centers),
        residual_rms=float(np.sqrt(res.cost / len(f))),
        converged=res.converged,
        iterations=res.iterations,
        baseline=float(baseline),
        degenerate_covariance=res.degenerate_covariance,
    )


def resonance_series(spectra: Sequence[OdmrSpectrum]):
    """Fit each spectrum (dominant line) and assemble a bias series.

    Non-converging members yield records flagged ``ok=False`` so that a
    partial series survives; downstream fits use only the good records.
    """
    from .electrometry import BiasRecord, BiasSeries

    records = []
    for spec in spectra:
        bias = spec.meta.bias_v if spec.meta.bias_v is not None else 0.0
        fit = fit_spectrum(spec, n_peaks=1)
        if fit.converged and fit.peaks:
            idx = int(np.argmax([abs(p.amplitude) for p in fit.peaks]))
            records.append(
                BiasRecord(
                    bias_v=float(bias),
                    e_par_mvcm=spec.meta.e_par_mvcm or 0.0,
                    e_perp_mvcm=spec.meta.e_perp_mvcm or 0.0,
                    f_mhz=fit.peaks[idx].center_mhz,
                    f_sigma_mhz=float(fit.center_uncertainties_mhz[idx]),
                )
            )
        else:
            records.append(
                BiasRecord(
                    bias_v=float(bias),
                    e_par_mvcm=spec.meta.e_par_mvcm or 0.0,
                    e_perp_mvcm=spec.meta.e_perp_mvcm or 0.0,
                    f_mhz=float("nan"),
                    f_sigma_mhz=float("nan"),
                    ok=False,
                )
            )
    records.sort(key=lambda r: r.bias_v)
    return BiasSeries(records=records, field_source="odmr.resonance_series")


# ---------------------------------------------------------------------------
# File formats: CSV `freq_mhz,contrast` plus an optional JSON sidecar with
# `bias_v`, `spot_id`, `noise_sigma` (and the optional synthetic-chain
# fields).  Floats are written with repr so a read-back is bit exact.
# ---------------------------------------------------------------------------

def spectrum_to_csv(spec: OdmrSpectrum, comment_lines: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    for line in comment_lines:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["freq_mhz", "contrast"])
    for fv, cv in zip(spec.freqs_mhz, spec.contrast):
        writer.writerow([repr(float(fv)), repr(float(cv))])
    return buf.getvalue()


def spectrum_from_csv(text: str, meta: Optional[SpectrumMeta] = None) -> OdmrSpectrum:
    rows = [
        line for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    reader = csv.reader(rows)
    header = next(reader, None)
    if header is None or [h.strip() for h in header[:2]] != ["freq_mhz", "contrast"]:
        raise SpectrumFormatError("expected header 'freq_mhz,contrast'")
    freqs, contrast = [], []
    for ln, row in enumerate(reader, start=2):
        try:
            freqs.append(float(row[0]))
            contrast.append(float(row[1]))
        except (ValueError, IndexError) as exc:
            raise SpectrumFormatError(f"bad spectrum row {ln}: {row!r}") from exc
    return OdmrSpectrum(np.array(freqs), np.array(contrast), meta or SpectrumMeta())


def write_spectrum(path, spec: OdmrSpectrum, comment_lines: Sequence[str] = ()) -> None:
    path = Path(path)
    path.write_text(spectrum_to_csv(spec, comment_lines))
    if spec.meta.to_dict():
        sidecar = path.with_suffix(".meta.json")
        sidecar.write_text(json.dumps(spec.meta.to_dict(), indent=2, sort_keys=True) + "\n")


def read_spectrum(path) -> OdmrSpectrum:
    path = Path(path)
    meta = SpectrumMeta()
    sidecar = path.with_suffix(".meta.json")
    if sidecar.exists():
        data = json.loads(sidecar.read_text())
        meta = SpectrumMeta(**{
            k: data.get(k)
            for k in ("bias_v", "spot_id", "noise_sigma", "seed", "e_par_mvcm", "e_perp_mvcm")
        })
    return spectrum_from_csv(path.read_text(), meta)
