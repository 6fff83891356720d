"""Thermal Casimir/van der Waals interaction between parallel plates.

Lifshitz-theory evaluation of free energy, pressure, and entropy per unit
area for dielectric, metallic, semiconductor, and conductivity-augmented
plate materials, with closed-form low- and high-temperature asymptotics and
Nernst heat-theorem checks.
"""

from __future__ import annotations

__version__ = "0.1.0"
