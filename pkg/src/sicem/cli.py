"""Command-line workflows.

Subcommands: ``simulate-spectrum``, ``fit-spectrum``, ``fit-dipole``,
``invert``, ``device-sim``, ``map-field``, ``dose``.  Values resolve as
defaults < command-line flags < ``--config`` JSON file.  Every output
embeds the toolkit version and a hash of the resolved configuration;
no timestamps are written, so a fixed config and seed reproduce outputs
byte for byte.

Exit codes: 0 success (including partial per-row failures), 2 config
error, 3 statistical/degeneracy error, 4 solver non-convergence.
"""

import argparse
import csv
import hashlib
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import dose as dose_mod
from . import electrometry as em
from . import odmr
from . import poisson2d as p2d
from .spin import CrystalField, FieldLimitError, UnsupportedSpinError, preset, preset_names, transition_frequencies

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_STATISTICAL = 3
EXIT_SOLVER = 4

_CONFIG_ERRORS = (
    FileNotFoundError,
    json.JSONDecodeError,
    KeyError,
    odmr.SpectrumFormatError,
    p2d.DeviceConfigError,
    dose_mod.ProfileParseError,
    dose_mod.ProfileFormatError,
    dose_mod.EnergyRangeError,
    UnsupportedSpinError,
    FieldLimitError,
)
_STATISTICAL_ERRORS = (
    em.DegenerateDesignError,
    em.TransverseRatioError,
    em.IllConditionedRatioError,
    em.UnphysicalFrequencyError,
    em.AmbiguousBranchError,
    dose_mod.BoundaryPeakError,
    dose_mod.DegenerateProfileError,
)

DEFAULT_CUT_DEPTHS_UM = (2.1, 3.7, 5.0, 6.5, 8.1)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        try:
            _apply_config_file(args)
        except (FileNotFoundError, json.JSONDecodeError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    try:
        return args.func(args)
    except _STATISTICAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STATISTICAL
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sicem",
        description="Spin-defect electrometry workflows for SiC power devices",
    )
    parser.add_argument("--version", action="version", version=f"sicem {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file; overrides flags")
        p.add_argument("--output-dir", default=".", help="directory for outputs")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")

    def spin_flags(p):
        p.add_argument("--preset", default="vsi", help=f"one of {', '.join(preset_names())}")
        p.add_argument("--zfs-d-mhz", type=float, default=None)
        p.add_argument("--d-par", type=float, default=None, help="d_par/h in MHz/(MV/cm)")
        p.add_argument("--d-perp", type=float, default=None, help="d_perp/h in MHz/(MV/cm)")
        p.add_argument("--g-factor", type=float, default=None)

    p = sub.add_parser("simulate-spectrum", help="synthesize ODMR spectra from the spin model")
    common(p)
    spin_flags(p)
    p.add_argument("--e-par", type=float, default=0.0, help="axial field, MV/cm")
    p.add_argument("--e-perp", type=float, default=0.0, help="transverse field, MV/cm")
    p.add_argument("--b-par", type=float, default=0.0, help="axial magnetic field, mT")
    p.add_argument("--bias-v", type=float, default=None, help="recorded bias metadata, V")
    p.add_argument("--fmin", type=float, default=10.0)
    p.add_argument("--fmax", type=float, default=130.0)
    p.add_argument("--points", type=int, default=241)
    p.add_argument("--fwhm-mhz", type=float, default=8.0)
    p.add_argument("--amplitude", type=float, default=0.01)
    p.add_argument("--baseline", type=float, default=0.0)
    p.add_argument("--noise-sigma", type=float, default=0.0)
    p.add_argument("--series-config", default=None,
                   help="JSON with {'biases': [{'bias_v':..,'e_par_mvcm':..,'e_perp_mvcm':..}]}")
    p.set_defaults(func=cmd_simulate_spectrum)

    p = sub.add_parser("fit-spectrum", help="fit Lorentzian lines to a spectrum CSV")
    common(p)
    p.add_argument("--input", required=True, help="spectrum CSV")
    p.add_argument("--n-peaks", type=int, default=1, choices=(1, 2))
    p.set_defaults(func=cmd_fit_spectrum)

    p = sub.add_parser("fit-dipole", help="calibrate d_par (and optionally |d_perp/d_par|)")
    common(p)
    spin_flags(p)
    p.add_argument("--series", required=True, help="bias-series CSV")
    p.add_argument("--fit-ratio", action="store_true",
                   help="fit |d_perp/d_par| instead of the parallel regression")
    p.set_defaults(func=cmd_fit_dipole)

    p = sub.add_parser("invert", help="convert resonance frequencies to field values")
    common(p)
    spin_flags(p)
    p.add_argument("--f-mhz", type=float, default=None)
    p.add_argument("--f-sigma-mhz", type=float, default=0.3)
    p.add_argument("--series", default=None, help="bias-series CSV to invert record by record")
    p.add_argument("--ratio", type=float, default=0.0, help="assumed E_perp/E_par at the spot")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("device-sim", help="solve the 2D device electrostatics")
    common(p)
    p.add_argument("--model", default=None, help="device model JSON (default: reference fixture)")
    p.add_argument("--bias-v", type=float, required=True)
    p.add_argument("--eps-ext", type=float, default=1.89, help="dielectric above the surface")
    p.add_argument("--wire-height-um", type=float, default=None)
    p.add_argument("--cut-depths-um", type=float, nargs="*", default=list(DEFAULT_CUT_DEPTHS_UM))
    p.set_defaults(func=cmd_device_sim)

    p = sub.add_parser("map-field", help="sample a field map at sensor spots / invert resonances")
    common(p)
    spin_flags(p)
    p.add_argument("--model", default=None, help="device model JSON (default: reference fixture)")
    p.add_argument("--bias-v", type=float, required=True)
    p.add_argument("--eps-ext", type=float, default=1.89)
    p.add_argument("--wire-height-um", type=float, default=None)
    p.add_argument("--spots", default=None, help="spots JSON (from `sicem dose --place ...`)")
    p.add_argument("--resonances", default=None,
                   help="CSV x_um,z_um,f_mhz,f_sigma_mhz[,ratio] to invert into fields")
    p.set_defaults(func=cmd_map_field)

    p = sub.add_parser("dose", help="depth profiles, densities, and spot placement")
    common(p)
    p.add_argument("--profile", default=None, help="depth-profile CSV/SRIM table")
    p.add_argument("--uniform-thickness-um", type=float, default=None,
                   help="use a rectangular profile of this effective thickness")
    p.add_argument("--z0-um", type=float, default=0.0)
    p.add_argument("--fluence-cm2", type=float, default=None)
    p.add_argument("--ions-per-spot", type=float, default=None)
    p.add_argument("--spot-diameter-um", type=float, default=1.0)
    p.add_argument("--rate", type=float, default=0.8, help="sensor yield per ion")
    p.add_argument("--place", action="store_true", help="emit a spot grid JSON")
    p.add_argument("--x0-um", type=float, default=10.0)
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--pitch-um", type=float, default=20.0)
    p.add_argument("--energy-mev", type=float, default=0.75)
    p.set_defaults(func=cmd_dose)

    return parser


def _apply_config_file(args) -> None:
    path = Path(args.config)
    data = json.loads(path.read_text())
    if not isinstance(data, dict):
        raise json.JSONDecodeError("config must be a JSON object", path.name, 0)
    for key, value in data.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            raise KeyError(f"unknown config key {key!r} for command {args.command!r}")
        setattr(args, dest, value)


def _resolved_config(args) -> dict:
    # Environment-only knobs stay out of the hash so the same science
    # config reproduces identical outputs regardless of destination.
    skip = {"func", "config", "output_dir", "no_figures"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _provenance(args):
    cfg = _resolved_config(args)
    digest = hashlib.sha256(json.dumps(cfg, sort_keys=True, default=str).encode()).hexdigest()
    comments = [
        f"sicem_version={__version__}",
        f"config_sha256={digest}",
        f"seed={getattr(args, 'seed', 0)}",
    ]
    meta = {"sicem_version": __version__, "config_sha256": digest, "config": cfg}
    return comments, meta


def _png_metadata(meta: dict) -> dict:
    return {
        "Software": f"sicem {__version__}",
        "Description": f"config_sha256={meta['config_sha256']}",
    }


def _outdir(args) -> Path:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _spin_system(args):
    sys_ = preset(args.preset)
    overrides = {}
    if args.zfs_d_mhz is not None:
        overrides["zfs_D"] = args.zfs_d_mhz
    if args.d_par is not None:
        overrides["d_par_over_h"] = args.d_par
    if args.d_perp is not None:
        overrides["d_perp_over_h"] = args.d_perp
    if args.g_factor is not None:
        overrides["g_factor"] = args.g_factor
    return sys_.with_overrides(**overrides) if overrides else sys_


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n")


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj)}")


# -- subcommand handlers ------------------------------------------------------

def cmd_simulate_spectrum(args) -> int:
    out = _outdir(args)
    comments, meta = _provenance(args)
    system = _spin_system(args)
    grid = np.linspace(args.fmin, args.fmax, args.points)

    if args.series_config:
        series_spec = json.loads(Path(args.series_config).read_text())
        entries = series_spec["biases"]
    else:
        entries = [{
            "bias_v": args.bias_v,
            "e_par_mvcm": args.e_par,
            "e_perp_mvcm": args.e_perp,
        }]

    peaks_report = []
    for k, entry in enumerate(entries):
        field = CrystalField(
            e_par=float(entry.get("e_par_mvcm", 0.0)),
            e_perp_x=float(entry.get("e_perp_mvcm", 0.0)),
            b_par=args.b_par,
        )
        tset = transition_frequencies(system, field)
        wmax = tset.weights.max() if len(tset.transitions) else 1.0
        peaks = [
            odmr.LinePeak(
                center_mhz=t.frequency_mhz,
                fwhm_mhz=args.fwhm_mhz,
                amplitude=args.amplitude * t.drive_weight / wmax,
            )
            for t in tset.transitions
        ]
        spec = odmr.synthesize_spectrum(
            peaks,
            grid,
            noise_sigma=args.noise_sigma,
            seed=args.seed + k,
            baseline=args.baseline,
            meta=odmr.SpectrumMeta(
                bias_v=entry.get("bias_v"),
                noise_sigma=args.noise_sigma or None,
                seed=args.seed + k,
                e_par_mvcm=entry.get("e_par_mvcm"),
                e_perp_mvcm=entry.get("e_perp_mvcm"),
            ),
        )
        bias = entry.get("bias_v")
        stem = "spectrum" if bias is None else f"spectrum_{_num_token(bias)}V"
        odmr.write_spectrum(out / f"{stem}.csv", spec, comments)
        if not args.no_figures:
            from . import plotting

            plotting.spectrum_figure(spec, out / f"{stem}.png", metadata=_png_metadata(meta))
        peaks_report.append({
            "bias_v": bias,
            "e_par_mvcm": entry.get("e_par_mvcm"),
            "e_perp_mvcm": entry.get("e_perp_mvcm"),
            "transitions_mhz": [t.frequency_mhz for t in tset.transitions],
            "drive_weights": [t.drive_weight for t in tset.transitions],
            "files": [f"{stem}.csv"],
        })
    _write_json(out / "peaks.json", {"spectra": peaks_report, "provenance": meta})
    return EXIT_OK


def cmd_fit_spectrum(args) -> int:
    out = _outdir(args)
    _, meta = _provenance(args)
    spec = odmr.read_spectrum(Path(args.input))
    fit = odmr.fit_spectrum(spec, n_peaks=args.n_peaks)
    payload = {
        "baseline": fit.baseline,
        "converged": fit.converged,
        "iterations": fit.iterations,
        "residual_rms": fit.residual_rms,
        "degenerate_covariance": fit.degenerate_covariance,
        "peaks": [
            {
                "center_mhz": pk.center_mhz,
                "fwhm_mhz": pk.fwhm_mhz,
                "amplitude": pk.amplitude,
                "center_sigma_mhz": float(sig),
            }
            for pk, sig in zip(fit.peaks, fit.center_uncertainties_mhz)
        ],
        "provenance": meta,
    }
    _write_json(out / "spectrum_fit.json", payload)
    if not args.no_figures:
        from . import plotting

        plotting.spectrum_figure(spec, out / "spectrum_fit.png", fit=fit,
                                     metadata=_png_metadata(meta))
    return EXIT_OK


def cmd_fit_dipole(args) -> int:
    out = _outdir(args)
    comments, meta = _provenance(args)
    series = em.read_series(Path(args.series))
    system = _spin_system(args)

    if args.fit_ratio:
        fit = em.fit_ratio_perp(series, system.d_par_over_h, system.zfs_D)
        em.write_dipole_fit(out / "dipole_fit.json", fit, provenance=meta)
        _write_ratio_curves_csv(out / "ratio_curves.csv", fit, comments)
        if not args.no_figures:
            from . import plotting

            plotting.ratio_curves_figure(series, fit, out / "ratio_fit.png",
                                         metadata=_png_metadata(meta))
    else:
        fit = em.fit_dipole_parallel(series)
        em.write_dipole_fit(out / "dipole_fit.json", fit, provenance=meta)
        _write_regression_csv(out / "regression_line.csv", series, fit, comments)
        if not args.no_figures:
            from . import plotting

            plotting.dipole_regression_figure(series, fit, out / "dipole_fit.png",
                                              metadata=_png_metadata(meta))
    return EXIT_OK


def _write_regression_csv(path, series, fit, comments):
    recs = series.good_records()
    e_max = max(r.e_par_mvcm for r in recs)
    grid = np.linspace(0.0, e_max * 1.05 + 1e-12, 50)
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["e_par_mvcm", "f_fit_mhz"])
    for e in grid:
        w.writerow([repr(float(e)), repr(float(2 * fit.zfs_D_fit + 2 * fit.d_par_over_h * e))])
    Path(path).write_text(buf.getvalue())


def _write_ratio_curves_csv(path, fit, comments):
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["ratio", "e_par_mvcm", "f_model_mhz"])
    for rv in sorted(fit.curves):
        ex, fx = fit.curves[rv]
        for e, f in zip(ex, fx):
            w.writerow([repr(float(rv)), repr(float(e)), repr(float(f))])
    Path(path).write_text(buf.getvalue())


def cmd_invert(args) -> int:
    out = _outdir(args)
    comments, meta = _provenance(args)
    system = _spin_system(args)
    rows = []
    if args.series:
        series = em.read_series(Path(args.series))
        for rec in series.records:
            if not rec.ok:
                rows.append((rec.bias_v, rec.f_mhz, None, None, None, "fit failed"))
                continue
            est = em.invert_field(system, rec.f_mhz, rec.f_sigma_mhz, args.ratio)
            rows.append((rec.bias_v, rec.f_mhz, est.e_par_mvcm, est.sigma_e_mvcm,
                         est.linearity_ok, ""))
    elif args.f_mhz is not None:
        est = em.invert_field(system, args.f_mhz, args.f_sigma_mhz, args.ratio)
        rows.append((None, args.f_mhz, est.e_par_mvcm, est.sigma_e_mvcm, est.linearity_ok, ""))
    else:
        raise ValueError("provide --f-mhz or --series")

    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["bias_v", "f_mhz", "e_par_mvcm", "sigma_e_mvcm", "linearity_ok", "error"])
    for row in rows:
        w.writerow(["" if v is None else v for v in row])
    (out / "field_estimates.csv").write_text(buf.getvalue())
    _write_json(out / "field_estimates.json", {
        "estimates": [
            {
                "bias_v": r[0],
                "f_mhz": r[1],
                "e_par_mvcm": r[2],
                "sigma_e_mvcm": r[3],
                "linearity_ok": r[4],
                "error": r[5] or None,
            }
            for r in rows
        ],
        "provenance": meta,
    })
    return EXIT_OK


def _load_model(args) -> p2d.DeviceModel2D:
    if args.model:
        return p2d.read_model(Path(args.model))
    return p2d.edge_termination_model(
        eps_r_dielectric=args.eps_ext,
        wire_height_um=args.wire_height_um,
        wire_x0_um=0.0,
        wire_x1_um=None,
    )


def cmd_device_sim(args) -> int:
    out = _outdir(args)
    comments, meta = _provenance(args)
    model = _load_model(args)
    fmap = p2d.solve_poisson_2d(model, args.bias_v)
    if not fmap.converged:
        _write_json(out / "residual_history.json", {
            "converged": False,
            "newton_iters": fmap.newton_iters,
            "history": fmap.residual_history,
            "provenance": meta,
        })
        print("error: Newton iteration did not converge; residual history written",
              file=sys.stderr)
        return EXIT_SOLVER
    (out / "fieldmap.csv").write_text(p2d.fieldmap_to_csv(fmap, comments))
    for z in args.cut_depths_um:
        (out / f"cut_z{_num_token(z)}um.csv").write_text(p2d.linecut_to_csv(fmap, z, comments))
    _write_json(out / "device_sim.json", {
        "converged": True,
        "newton_iters": fmap.newton_iters,
        "bias_v": args.bias_v,
        "max_abs_e_par_mvcm": float(np.abs(fmap.e_par_mvcm).max()),
        "provenance": meta,
    })
    if not args.no_figures:
        from . import plotting

        plotting.fieldmap_figure(fmap, out / "fieldmap.png", metadata=_png_metadata(meta))
        plotting.linecuts_figure(fmap, args.cut_depths_um, out / "linecuts.png",
                                 metadata=_png_metadata(meta))
    return EXIT_OK


def cmd_map_field(args) -> int:
    out = _outdir(args)
    comments, meta = _provenance(args)
    model = _load_model(args)
    fmap = p2d.solve_poisson_2d(model, args.bias_v)
    if not fmap.converged:
        _write_json(out / "residual_history.json", {
            "converged": False,
            "newton_iters": fmap.newton_iters,
            "history": fmap.residual_history,
            "provenance": meta,
        })
        return EXIT_SOLVER

    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")

    if args.resonances:
        system = _spin_system(args)
        w.writerow(["x_um", "z_um", "f_mhz", "e_par_meas_mvcm", "sigma_e_mvcm",
                    "e_par_sim_mvcm", "linearity_ok", "error"])
        for x, z, f, sig, ratio in _read_resonances(Path(args.resonances)):
            sim = p2d.field_at_spots(fmap, [(x, z)])[0]
            sim_val = abs(sim.e_par_mvcm) if sim.ok else ""
            try:
                est = em.invert_field(system, f, sig, ratio)
                w.writerow([x, z, f, est.e_par_mvcm, est.sigma_e_mvcm, sim_val,
                            est.linearity_ok, ""])
            except (em.UnphysicalFrequencyError, em.AmbiguousBranchError) as exc:
                w.writerow([x, z, f, "", "", sim_val, "", str(exc)])
        (out / "measured_fields.csv").write_text(buf.getvalue())
        return EXIT_OK

    if not args.spots:
        raise ValueError("provide --spots or --resonances")
    spots = dose_mod.read_spots(Path(args.spots))
    fields = p2d.field_at_spots(fmap, spots)
    w.writerow(["x_um", "z_um", "e_par_mvcm", "e_perp_mvcm", "ratio_perp_par", "error"])
    for s in fields:
        if s.ok:
            ratio = abs(s.e_perp_mvcm) / max(abs(s.e_par_mvcm), 1e-12)
            w.writerow([s.x_um, s.z_um, repr(s.e_par_mvcm), repr(s.e_perp_mvcm),
                        repr(ratio), ""])
        else:
            w.writerow([s.x_um, s.z_um, "", "", "", s.error])
    (out / "spot_fields.csv").write_text(buf.getvalue())
    if not args.no_figures:
        from . import plotting

        plotting.spot_fields_figure(fields, out / "spot_fields.png",
                                    metadata=_png_metadata(meta))
    return EXIT_OK


def _read_resonances(path: Path):
    rows = [
        line for line in path.read_text().splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    reader = csv.reader(rows)
    header = next(reader)
    cols = [h.strip() for h in header]
    if cols[:4] != ["x_um", "z_um", "f_mhz", "f_sigma_mhz"]:
        raise ValueError("resonances CSV needs header x_um,z_um,f_mhz,f_sigma_mhz[,ratio]")
    out = []
    for row in reader:
        ratio = float(row[4]) if len(row) > 4 and row[4] != "" else 0.0
        out.append((float(row[0]), float(row[1]), float(row[2]), float(row[3]), ratio))
    return out


def cmd_dose(args) -> int:
    out = _outdir(args)
    comments, meta = _provenance(args)

    if args.profile:
        profile = dose_mod.read_profile(Path(args.profile))
    elif args.uniform_thickness_um:
        profile = dose_mod.uniform_profile(args.uniform_thickness_um, z0_um=args.z0_um)
    else:
        raise ValueError("provide --profile or --uniform-thickness-um")

    if args.fluence_cm2 is not None:
        fluence = args.fluence_cm2
    elif args.ions_per_spot is not None:
        fluence = dose_mod.ions_per_spot_to_fluence_cm2(args.ions_per_spot, args.spot_diameter_um)
    else:
        raise ValueError("provide --fluence-cm2 or --ions-per-spot")

    peak_z, fwhm = dose_mod.profile_stats(profile)
    depth, density = dose_mod.density_profile(profile, fluence, args.rate)
    peak_density = float(density.max())
    verdict = em.density_guard(peak_density)

    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["depth_um", "density_cm3"])
    for d, v in zip(depth, density):
        w.writerow([repr(float(d)), repr(float(v))])
    (out / "density_profile.csv").write_text(buf.getvalue())

    report = {
        "peak_depth_um": peak_z,
        "fwhm_um": fwhm,
        "fluence_cm2": fluence,
        "generation_rate": args.rate,
        "peak_density_cm3": peak_density,
        "density_guard": verdict,
        "provenance": meta,
    }
    if args.place:
        spots = dose_mod.place_spot_grid(
            args.x0_um, args.count, args.pitch_um, args.energy_mev,
            fluence_ions=args.ions_per_spot or 5e3,
            spot_diameter_um=args.spot_diameter_um,
        )
        dose_mod.write_spots(out / "spots.json", spots, provenance={
            "energy_mev": args.energy_mev,
            "pitch_um": args.pitch_um,
            **meta,
        })
        report["spots_file"] = "spots.json"
    _write_json(out / "dose_report.json", report)
    if not args.no_figures:
        from . import plotting

        plotting.dose_profile_figure(profile, (depth, density), out / "dose_profile.png",
                                      metadata=_png_metadata(meta))
    return EXIT_OK


def _num_token(value) -> str:
    s = f"{float(value):g}"
    return s.replace(".", "p").replace("-", "m")


if __name__ == "__main__":
    sys.exit(main())
