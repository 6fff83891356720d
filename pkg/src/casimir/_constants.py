"""Physical constants (SI, CODATA exact values) and derived combinations."""

from __future__ import annotations

import math

HBAR = 1.054_571_817e-34  # J s
C = 299_792_458.0  # m / s
KB = 1.380_649e-23  # J / K

# tau = TAU_PER_METER_KELVIN * a * T, with a in meters and T in kelvin
TAU_PER_METER_KELVIN = 4.0 * math.pi * KB / (HBAR * C)

# xi_l = XI_PER_KELVIN * T * l
XI_PER_KELVIN = 2.0 * math.pi * KB / HBAR

ZETA3 = 1.2020569031595942854  # Riemann zeta(3), Apery's constant
