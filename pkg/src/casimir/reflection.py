"""Fresnel reflection coefficients in dimensionless Matsubara variables.

The working variables are zeta = tau * l (dimensionless frequency) and y
(dimensionless transverse variable, y >= zeta). Zero frequency is handled
by per-model rules, never by taking a numerical zeta -> 0 limit: the exact
limits differ between model classes and that difference is the physics this
library exists to expose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from ._constants import C as SPEED_OF_LIGHT
from .errors import StaticDivergenceError
from .materials import (
    STATIC_DIVERGENT,
    DcAugmentedModel,
    DrudeModel,
    IdealMetal,
    OpticalDataTable,
    OscillatorModel,
    PermittivityModel,
    PlasmaModel,
    static_eps,
)


@dataclass(frozen=True)
class DimensionlessPoint:
    """A (zeta, y) evaluation point with y >= zeta >= 0."""

    zeta: float
    y: float

    def __post_init__(self) -> None:
        if self.zeta < 0:
            raise ValueError(f"zeta must be >= 0, got {self.zeta}")
        if self.y < self.zeta:
            raise ValueError(f"y must be >= zeta, got y={self.y}, zeta={self.zeta}")


ZeroFreqValue = Union[float, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class ZeroFreqPair:
    """Zero-frequency reflection pair (TM, TE); entries are constants or,
    for the plasma model's TE coefficient, functions of y."""

    r_par0: ZeroFreqValue
    r_perp0: ZeroFreqValue

    def __post_init__(self) -> None:
        for name, v in (("r_par0", self.r_par0), ("r_perp0", self.r_perp0)):
            if not callable(v) and not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")

    def par_at(self, y) -> np.ndarray:
        return self.r_par0(np.asarray(y, dtype=float)) if callable(self.r_par0) else np.full_like(
            np.asarray(y, dtype=float), self.r_par0
        )

    def perp_at(self, y) -> np.ndarray:
        return self.r_perp0(np.asarray(y, dtype=float)) if callable(
            self.r_perp0
        ) else np.full_like(np.asarray(y, dtype=float), self.r_perp0)

    @property
    def is_constant(self) -> bool:
        return not callable(self.r_par0) and not callable(self.r_perp0)


def _check_eps(eps, zeta) -> None:
    if eps is STATIC_DIVERGENT or not np.all(np.isfinite(eps)):
        if np.all(np.asarray(zeta) == 0):
            raise StaticDivergenceError(
                "divergent eps at zeta = 0; use zero_freq_pair for this model"
            )
        raise ValueError("eps must be finite at zeta > 0")


def tm_raw(eps, zeta, y):
    """TM coefficient on raw arrays; broadcasts, accepts complex eps/zeta."""
    kappa = np.sqrt(y * y + zeta * zeta * (eps - 1.0))
    return (eps * y - kappa) / (eps * y + kappa)


def te_raw(eps, zeta, y):
    """TE coefficient on raw arrays; broadcasts, accepts complex eps/zeta."""
    kappa = np.sqrt(y * y + zeta * zeta * (eps - 1.0))
    return (kappa - y) / (kappa + y)


def r_tm(eps, p: DimensionlessPoint) -> float:
    """TM (parallel-polarization) reflection coefficient at a point."""
    _check_eps(eps, p.zeta)
    return float(tm_raw(float(eps), p.zeta, p.y))


def r_te(eps, p: DimensionlessPoint) -> float:
    """TE (perpendicular-polarization) reflection coefficient at a point."""
    _check_eps(eps, p.zeta)
    return float(te_raw(float(eps), p.zeta, p.y))


def _plasma_te_zero(omega_p: float, separation: float) -> Callable[[np.ndarray], np.ndarray]:
    # dimensionless plasma scale: w = 2 a omega_p / c
    w = 2.0 * separation * omega_p / SPEED_OF_LIGHT

    def r_perp0(y: np.ndarray) -> np.ndarray:
        root = np.sqrt(y * y + w * w)
        return (root - y) / (root + y)

    return r_perp0


def zero_freq_pair(
    model: PermittivityModel, separation: float | None = None
) -> ZeroFreqPair:
    """Zero-frequency reflection rules by model class.

    The plasma model's TE coefficient stays y-dependent at zero frequency
    and needs the plate separation (meters) to fix its dimensionless scale;
    every other model yields constants.
    """
    if isinstance(model, IdealMetal):
        return ZeroFreqPair(1.0, 1.0)
    if isinstance(model, DrudeModel):
        return ZeroFreqPair(1.0, 0.0)
    if isinstance(model, DcAugmentedModel):
        return ZeroFreqPair(1.0, 0.0)
    if isinstance(model, PlasmaModel):
        if separation is None or separation <= 0:
            raise ValueError(
                "plasma model needs the plate separation to form its "
                "zero-frequency TE coefficient"
            )
        return ZeroFreqPair(1.0, _plasma_te_zero(model.plasma_frequency, separation))
    if isinstance(model, (OscillatorModel, OpticalDataTable)):
        try:
            eps0 = static_eps(model)
        except StaticDivergenceError:
            # table whose absorption extends to zero frequency: conductor-like
            return ZeroFreqPair(1.0, 0.0)
        if eps0 is STATIC_DIVERGENT:
            return ZeroFreqPair(1.0, 0.0)
        return ZeroFreqPair((eps0 - 1.0) / (eps0 + 1.0), 0.0)
    raise TypeError(f"unknown permittivity model {type(model).__name__}")
