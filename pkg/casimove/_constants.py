from __future__ import annotations

import math

from scipy import constants

HBAR: float = constants.hbar
SPEED_OF_LIGHT: float = constants.c
BOLTZMANN: float = constants.k

# Prefactors of the spectral densities in reduced units (hbar = c = k_B = 1, a = 1).
PLATE_PREFACTOR: float = 1.0 / (16.0 * math.pi**3)
LATERAL_PREFACTOR: float = 1.0 / (8.0 * math.pi**3)
QVAC_PREFACTOR: float = 1.0 / (4.0 * math.pi**3)

DEFAULT_QVAC_REL_TOL = 1e-6
DEFAULT_THERMAL_REL_TOL = 1e-4
DEFAULT_ABS_TOL = 1e-13
DEFAULT_CUTOFF = 40.0
DEFAULT_MAX_CELLS = 4000
DEFAULT_BATCH = 16

RESONANCE_FLOOR = 1e-300

CASIMIR_MIRROR_STRESS: float = math.pi**2 / 240.0

# Truncation used by the real-axis quantum-vacuum check.
DEFAULT_DISK_RADIUS = 4.0
DEFAULT_REAL_OMEGA_MAX = 60.0
