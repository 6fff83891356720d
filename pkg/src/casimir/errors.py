"""Typed error taxonomy shared across the package.

Every error that crosses a module boundary carries a short machine-readable
``slug`` so the CLI can map failures to exit codes without string matching
on messages.
"""

from __future__ import annotations


class CasimirError(Exception):
    """Base class for all package errors."""

    slug = "error"


class StaticDivergenceError(CasimirError):
    """eps(i xi) requested at xi = 0 for a model that diverges there."""

    slug = "static-divergence"


class ModelNotPointwiseError(CasimirError):
    """Pointwise eps evaluation requested for the ideal-metal marker model."""

    slug = "model-not-pointwise"


class TailUnderspecifiedError(CasimirError):
    """Optical-table transform where an unconfigured tail is not negligible."""

    slug = "tail-underspecified"


class ConvergenceFailureError(CasimirError):
    """Matsubara sum hit its index cap before reaching tolerance."""

    slug = "convergence-failure"

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class InvalidTemperatureError(CasimirError):
    """Temperature outside the operation's domain (for example T <= 0)."""

    slug = "invalid-temperature"


class DerivativeUnstableError(CasimirError):
    """Richardson difference estimates still oscillating at maximum depth."""

    slug = "derivative-unstable"


class LadderUnconvergedError(CasimirError):
    """Nernst temperature-ladder fit residuals exceed tolerance."""

    slug = "ladder-unconverged"


class ConfigError(CasimirError):
    """Malformed run configuration or material definition."""

    slug = "config-error"
