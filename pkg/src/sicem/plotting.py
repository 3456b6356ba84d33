"""Matplotlib renderers for the CLI report paths.

Every function writes a PNG next to the delimited output and returns the
path.  Rendering is headless (Agg); figures are diagnostic views of the
same data the CSV/JSON files carry, never an extra data channel.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .odmr import OdmrSpectrum, lorentzian_sum  # noqa: E402

_DPI = 150


def _finish(fig, path, metadata=None):
    path = Path(path)
    fig.savefig(path, dpi=_DPI, bbox_inches="tight", metadata=metadata)
    plt.close(fig)
    return path


def spectrum_figure(spec: OdmrSpectrum, path, fit=None, metadata=None):
    fig, ax = plt.subplots(figsize=(5.5, 3.5))
    ax.plot(spec.freqs_mhz, spec.contrast, ".", ms=3, color="C0", label="data")
    if fit is not None:
        grid = np.linspace(spec.freqs_mhz[0], spec.freqs_mhz[-1], 600)
        ax.plot(grid, lorentzian_sum(grid, fit.baseline, fit.peaks), "-", color="k",
                lw=1.2, label="fit")
        for pk in fit.peaks:
            ax.axvline(pk.center_mhz, color="C3", lw=0.7, alpha=0.6)
    ax.set_xlabel("frequency (MHz)")
    ax.set_ylabel("contrast")
    title = ""
    if spec.meta.bias_v is not None:
        title = f"bias {spec.meta.bias_v:g} V"
    if spec.meta.spot_id:
        title = f"{spec.meta.spot_id}  {title}"
    if title:
        ax.set_title(title)
    if fit is not None:
        ax.legend(loc="best", fontsize=8)
    return _finish(fig, path, metadata)


def dipole_regression_figure(series, fit, path, metadata=None):
    recs = series.good_records()
    e = np.array([r.e_par_mvcm for r in recs])
    f = np.array([r.f_mhz for r in recs])
    s = np.array([r.f_sigma_mhz for r in recs])
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    ax.errorbar(e, f, yerr=s, fmt="o", ms=4, capsize=2, color="C0", label="fitted resonances")
    line_e = np.linspace(0.0, e.max() * 1.05 + 1e-12, 50)
    ax.plot(
        line_e,
        2 * fit.zfs_D_fit + 2 * fit.d_par_over_h * line_e,
        "-", color="k", lw=1.2,
        label=f"d_par/h = {fit.d_par_over_h:.2f} +/- {fit.d_par_sigma:.2f} MHz/(MV/cm)",
    )
    ax.set_xlabel("E_par (MV/cm)")
    ax.set_ylabel("resonance (MHz)")
    ax.legend(loc="best", fontsize=8)
    return _finish(fig, path, metadata)


def ratio_curves_figure(series, fit, path, metadata=None):
    recs = series.good_records()
    e = np.array([r.e_par_mvcm for r in recs])
    f = np.array([r.f_mhz for r in recs])
    s = np.array([r.f_sigma_mhz for r in recs])
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    if fit.curves:
        for rv in sorted(fit.curves):
            ex, fx = fit.curves[rv]
            ax.plot(ex, fx, lw=1.0, label=f"|d_perp/d_par| = {rv:g}")
    ax.errorbar(e, f, yerr=s, fmt="^", ms=5, color="k", zorder=5, label="data")
    ax.set_xlabel("E_par (MV/cm)")
    ax.set_ylabel("resonance (MHz)")
    ax.set_title(f"ratio = {fit.ratio_r:.3f} +/- {fit.ratio_sigma:.3f}")
    ax.legend(loc="best", fontsize=7)
    return _finish(fig, path, metadata)


def fieldmap_figure(fmap, path, metadata=None):
    fig, axes = plt.subplots(1, 2, figsize=(10, 3.6), sharey=True)
    extent = None
    for ax, comp, name in (
        (axes[0], fmap.e_par_mvcm, "|E_par| (MV/cm)"),
        (axes[1], fmap.e_perp_mvcm, "|E_perp| (MV/cm)"),
    ):
        pm = ax.pcolormesh(fmap.x_um, fmap.z_um, np.abs(comp), shading="nearest", cmap="inferno")
        ax.axhline(0.0, color="w", lw=0.5, ls="--")
        ax.set_xlabel("x (um)")
        ax.set_title(name, fontsize=9)
        fig.colorbar(pm, ax=ax)
        extent = extent or pm
    axes[0].set_ylabel("z (um)")
    axes[0].invert_yaxis()
    fig.suptitle(f"bias {fmap.bias_v:g} V", fontsize=10)
    return _finish(fig, path, metadata)


def linecuts_figure(fmap, depths_um, path, metadata=None):
    from .poisson2d import line_cut

    fig, ax = plt.subplots(figsize=(5.5, 3.5))
    for z in depths_um:
        xs, ep, _ = line_cut(fmap, z)
        ax.plot(xs, np.abs(ep), lw=1.0, label=f"z = {z:g} um")
    ax.set_xlabel("x (um)")
    ax.set_ylabel("|E_par| (MV/cm)")
    ax.legend(loc="best", fontsize=8)
    return _finish(fig, path, metadata)


def dose_profile_figure(profile, density, path, metadata=None):
    depth, dens = density
    fig, ax1 = plt.subplots(figsize=(5.0, 3.5))
    ax1.plot(profile.depth_um, profile.vacancies_per_ion_um, color="C0", lw=1.0)
    ax1.set_xlabel("depth (um)")
    ax1.set_ylabel("vacancies / (ion um)", color="C0")
    ax2 = ax1.twinx()
    ax2.plot(depth, dens, color="C3", lw=1.0)
    ax2.set_ylabel("density (cm^-3)", color="C3")
    return _finish(fig, path, metadata)


def spot_fields_figure(spot_fields, path, metadata=None):
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    good = [s for s in spot_fields if s.ok]
    depths = sorted({s.z_um for s in good})
    for z in depths:
        row = [s for s in good if s.z_um == z]
        ax.plot(
            [s.x_um for s in row],
            [abs(s.e_par_mvcm) for s in row],
            "o-", ms=4, lw=0.8, label=f"z = {z:g} um",
        )
    ax.set_xlabel("x (um)")
    ax.set_ylabel("|E_par| (MV/cm)")
    if depths:
        ax.legend(loc="best", fontsize=8)
    return _finish(fig, path, metadata)
