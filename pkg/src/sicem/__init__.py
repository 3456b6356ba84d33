"""Spin-defect electrometry toolkit for SiC power devices.

Library layout:

* ``sicem.spin`` - ground-state spin Hamiltonian, transition frequencies,
  defect presets.
* ``sicem.odmr`` - spectrum synthesis, Lorentzian fitting, bias series.
* ``sicem.electrometry`` - dipole calibration, field inversion, guards.
* ``sicem.device`` - 1D depletion analytics, breakdown field, miscut
  rotation.
* ``sicem.poisson2d`` - 2D nonlinear Poisson solver for the edge
  termination with dielectric and wire.
* ``sicem.dose`` - depth profiles, fluence-to-density conversion, spot
  placement.
* ``sicem.cli`` - command-line workflows with CSV/JSON outputs and
  rendered figures.
"""

__version__ = "0.1.0"

from .spin import (  # noqa: F401
    CrystalField,
    SpinSystem,
    analytic_axial_frequency,
    build_hamiltonian,
    preset,
    transition_frequencies,
)
