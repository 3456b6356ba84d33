"""Physical constants and the internal unit system.

The toolkit works in units chosen so that spin-Hamiltonian matrix entries
stay O(1-100): frequencies in MHz, electric fields in MV/cm, magnetic
fields in mT, lengths in micrometres, voltages in volts.  Electric dipole
couplings d/h are stored in MHz/(MV/cm), numerically identical to
Hz/(V/cm).
"""

from scipy import constants as _codata

Q_E = _codata.elementary_charge  # C
EPS0 = _codata.epsilon_0  # F/m
K_B = _codata.Boltzmann  # J/K
PLANCK_H = _codata.Planck  # J s
BOHR_MAGNETON = _codata.physical_constants["Bohr magneton"][0]  # J/T

# mu_B/h expressed in MHz per mT: (J/T)/(J s) = Hz/T = 1e-6 MHz / 1e3 mT.
MU_B_MHZ_PER_MT = BOHR_MAGNETON / PLANCK_H * 1e-9

# Free-electron-like g factor used when a defect preset does not specify one.
DEFAULT_G_FACTOR = 2.0028

# 4H-SiC bulk parameters (configurable wherever they are consumed).
SIC_EPS_R = 9.7
SIC_BUILTIN_V = 2.7

# Conversions.
MVCM_PER_V_PER_M = 1e-8  # 1 V/m = 1e-8 MV/cm
UM = 1e-6  # metres per micrometre
CM3_TO_M3 = 1e6  # multiply cm^-3 by this to get m^-3


def thermal_voltage(temperature_k: float = 300.0) -> float:
    """kT/q in volts."""
    return K_B * temperature_k / Q_E
