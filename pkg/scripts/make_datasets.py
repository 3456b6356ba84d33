#!/usr/bin/env python3
"""Regenerate the bundled calibration datasets under datasets/.

Both series mimic measured bias sweeps at the two calibration spots of
the reference device: a parallel-field spot (negligible transverse
component, fields up to 0.8 MV/cm over 0-1000 V) and a transverse-field
spot (E_perp/E_par = 0.19, fields up to 1.5 MV/cm over 0-1500 V).
Resonance frequencies come from the forward spin model for the V_Si
parameters plus 0.3 MHz Gaussian noise with fixed seeds, so the files
are reproducible byte for byte.
"""

from pathlib import Path

import numpy as np

from sicem.electrometry import BiasRecord, BiasSeries, write_series
from sicem.spin import SpinSystem, zero_field_odmr_frequency

OUT = Path(__file__).resolve().parent.parent / "datasets"

TRUTH = SpinSystem("VSi-truth", 1.5, 35.5, 2.0028, -15.0, 1.1 * 15.0)
SIGMA_MHZ = 0.3


def make_series(biases_v, e_par_per_kv, ratio, seed):
    biases = np.asarray(biases_v, dtype=float)
    e_par = e_par_per_kv * biases / 1000.0
    e_perp = ratio * e_par
    f = zero_field_odmr_frequency(TRUTH, e_par, e_perp)
    f = f + np.random.default_rng(seed).normal(0.0, SIGMA_MHZ, size=len(biases))
    records = [
        BiasRecord(b, ep, et, fv, SIGMA_MHZ)
        for b, ep, et, fv in zip(biases, e_par, e_perp, f)
    ]
    return BiasSeries(records=records, field_source="bundled-synthetic")


def main():
    OUT.mkdir(exist_ok=True)
    point1 = make_series(np.linspace(0, 1000, 6), e_par_per_kv=0.8, ratio=0.0, seed=101)
    write_series(OUT / "point1_series.csv", point1,
                 comment_lines=["bundled synthetic parallel-field calibration sweep",
                                "truth: D=35.5 MHz, d_par/h=-15.0 MHz/(MV/cm), sigma_f=0.3 MHz"])
    point3 = make_series(np.linspace(250, 1500, 6), e_par_per_kv=1.0, ratio=0.19, seed=103)
    write_series(OUT / "point3_series.csv", point3,
                 comment_lines=["bundled synthetic transverse-field calibration sweep",
                                "truth: |d_perp/d_par|=1.1, E_perp/E_par=0.19, sigma_f=0.3 MHz"])
    print(f"wrote {OUT / 'point1_series.csv'}")
    print(f"wrote {OUT / 'point3_series.csv'}")


if __name__ == "__main__":
    main()
