"""Physical constants and unit conversions.

Internal unit system: inductance in pH, capacitance in fF, current in uA,
flux in units of the flux quantum Phi0, time in ns.  All energies are stored
and reported as E/h in GHz, which keeps every quantity within a few orders of
magnitude of unity.
"""

import math

PLANCK_JS = 6.62607015e-34      # J s (exact, SI 2019)
PHI0_WB = 2.067833848e-15       # Wb, flux quantum h/2e

# Phi0 expressed in pH*uA (1 pH*uA = 1e-18 Wb).
PHI0_PH_UA = PHI0_WB / 1e-18

# (phi - phi_x)^2 * FLUX_ENERGY_GHZ_PH / (2 * L_pH) is the inductive term of
# the loop potential in GHz, with phi in units of Phi0.
FLUX_ENERGY_GHZ_PH = PHI0_WB**2 / PLANCK_JS / 1e-12 / 1e9

# Josephson energy E_J/h = Ic * Phi0 / (2 pi h), per uA of critical current.
JOSEPHSON_GHZ_PER_UA = 1e-6 * PHI0_WB / (2.0 * math.pi * PLANCK_JS) / 1e9

# Kinetic prefactor: the charging term is -(KINETIC_GHZ_FF / C_fF) d^2/dphi^2.
KINETIC_GHZ_FF = PLANCK_JS / (8.0 * math.pi**2 * 1e-15 * PHI0_WB**2) / 1e9

# Inductive energy in pH*uA^2 (= 1e-24 J) converted to E/h in GHz.
ENERGY_GHZ_PER_PH_UA2 = 1e-24 / PLANCK_JS / 1e9
