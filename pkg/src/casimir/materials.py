"""Permittivity models on the imaginary frequency axis.

Each model evaluates eps(i xi) for xi >= 0, with divergences at xi = 0
surfaced as typed signals rather than floating-point infinities so callers
are forced through the zero-frequency reflection rules. Models are immutable
after construction and safe to share across threads.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
from scipy.integrate import quad

from ._constants import HBAR, KB, XI_PER_KELVIN
from .errors import (
    ConfigError,
    InvalidTemperatureError,
    ModelNotPointwiseError,
    StaticDivergenceError,
    TailUnderspecifiedError,
)


class _StaticDivergence:
    """Sentinel returned by static_eps for models that diverge at xi = 0."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "STATIC_DIVERGENT"


STATIC_DIVERGENT = _StaticDivergence()


@dataclass(frozen=True)
class OscillatorModel:
    """Oscillator-sum permittivity with finite static value.

    eps(i xi) = 1 + sum_j C_j / (1 + (xi / omega_j)^2). An empty oscillator
    list is vacuum (eps identically 1).
    """

    strengths: tuple[float, ...] = ()
    frequencies: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "strengths", tuple(float(c) for c in self.strengths))
        object.__setattr__(self, "frequencies", tuple(float(w) for w in self.frequencies))
        if len(self.strengths) != len(self.frequencies):
            raise ValueError("strengths and frequencies must have equal length")
        if any(c <= 0 for c in self.strengths):
            raise ValueError("all oscillator strengths must be > 0")
        if any(w <= 0 for w in self.frequencies):
            raise ValueError("all oscillator frequencies must be > 0")

    @property
    def eps0(self) -> float:
        return 1.0 + sum(self.strengths)


@dataclass(frozen=True)
class DrudeModel:
    """Metallic permittivity with relaxation: eps = 1 + wp^2/(xi (xi + nu)).

    The relaxation profile may be a constant (rad/s), a callable T -> rad/s,
    or a table of (T, nu) pairs interpolated linearly.
    """

    plasma_frequency: float
    relaxation: Union[float, Callable[[float], float], Sequence[tuple[float, float]]] = 0.0

    def __post_init__(self) -> None:
        if self.plasma_frequency <= 0:
            raise ValueError("plasma_frequency must be > 0")
        if isinstance(self.relaxation, (int, float)):
            if self.relaxation < 0:
                raise ValueError("constant relaxation must be >= 0")
        elif not callable(self.relaxation):
            pairs = tuple((float(t), float(n)) for t, n in self.relaxation)
            if any(n < 0 for _, n in pairs):
                raise ValueError("tabulated relaxation must be >= 0 everywhere")
            if any(b[0] <= a[0] for a, b in zip(pairs, pairs[1:])):
                raise ValueError("relaxation table temperatures must increase")
            object.__setattr__(self, "relaxation", pairs)

    def nu_at(self, T: float) -> float:
        if isinstance(self.relaxation, (int, float)):
            return float(self.relaxation)
        if callable(self.relaxation):
            nu = float(self.relaxation(T))
            if nu < 0:
                raise ValueError(f"relaxation profile returned {nu} < 0 at T={T}")
            return nu
        ts = [t for t, _ in self.relaxation]
        ns = [n for _, n in self.relaxation]
        return float(np.interp(T, ts, ns))

    @property
    def has_constant_relaxation(self) -> bool:
        return isinstance(self.relaxation, (int, float))


@dataclass(frozen=True)
class PlasmaModel:
    """Dissipationless metal: eps = 1 + wp^2 / xi^2."""

    plasma_frequency: float

    def __post_init__(self) -> None:
        if self.plasma_frequency <= 0:
            raise ValueError("plasma_frequency must be > 0")


@dataclass(frozen=True)
class IdealMetal:
    """Marker model; handled entirely at the reflection level."""


@dataclass(frozen=True)
class DcAugmentedModel:
    """Dielectric base plus a dc conductivity term 4 pi sigma0(T) / xi.

    sigma0 is either a number, read as the conductivity at 300 K with the
    built-in activation profile sigma0(T) = sigma0_300K exp(b/300 - b/T)
    (gap_parameter b in kelvin), or a callable T -> rad/s.
    """

    base: OscillatorModel
    sigma0: Union[float, Callable[[float], float]]
    gap_parameter: float = 0.0

    def __post_init__(self) -> None:
        if isinstance(self.sigma0, (int, float)):
            if self.sigma0 <= 0:
                raise ValueError("sigma0_300K must be > 0")
            if self.gap_parameter <= 0:
                raise ValueError(
                    "gap_parameter (kelvin) must be > 0 for the activation profile"
                )

    def sigma0_at(self, T: float) -> float:
        if T <= 0:
            raise InvalidTemperatureError(f"sigma0 requires T > 0, got {T}")
        if callable(self.sigma0):
            s = float(self.sigma0(T))
            if s <= 0:
                raise ValueError(f"sigma0 profile returned {s} <= 0 at T={T}")
            return s
        b = self.gap_parameter
        return float(self.sigma0) * math.exp(b / 300.0 - b / T)


@dataclass(frozen=True)
class OpticalDataTable:
    """Tabulated eps''(omega) with configurable extrapolation tails.

    Tail descriptors: None (no extrapolation; flagged if it matters),
    "constant", or a power-law exponent p meaning eps'' ~ omega^p beyond the
    grid. Defaults: low tail p=1, high tail p=-3. A constant high tail is
    rejected outright since its transform integral diverges logarithmically.
    """

    omegas: tuple[float, ...]
    eps2: tuple[float, ...]
    low_tail: Union[float, str, None] = 1.0
    high_tail: Union[float, str, None] = -3.0
    _low_p: Union[float, None] = field(init=False, default=None, repr=False)
    _high_p: Union[float, None] = field(init=False, default=None, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "omegas", tuple(float(w) for w in self.omegas))
        object.__setattr__(self, "eps2", tuple(float(e) for e in self.eps2))
        if len(self.omegas) != len(self.eps2):
            raise ValueError("omega and eps2 columns must have equal length")
        if len(self.omegas) < 8:
            raise ValueError("optical table needs at least 8 grid points")
        if self.omegas[0] <= 0:
            raise ValueError("all omega values must be > 0")
        if any(b <= a for a, b in zip(self.omegas, self.omegas[1:])):
            raise ValueError("omega grid must be strictly increasing")
        if any(e < 0 for e in self.eps2):
            raise ValueError("eps'' must be nonnegative")
        object.__setattr__(self, "_low_p", self._parse_tail(self.low_tail, low=True))
        object.__setattr__(self, "_high_p", self._parse_tail(self.high_tail, low=False))

    @staticmethod
    def _parse_tail(descriptor, low: bool) -> Union[float, None]:
        if descriptor is None or descriptor == "none":
            return None
        if descriptor == "constant":
            if not low:
                raise ValueError(
                    "constant high tail is not integrable in the transform"
                )
            return 0.0
        p = float(descriptor)
        if low and p <= -2.0:
            raise ValueError(f"low tail exponent must be > -2, got {p}")
        if not low and p >= 0.0:
            raise ValueError(f"high tail exponent must be < 0, got {p}")
        return p


PermittivityModel = Union[
    OscillatorModel, DrudeModel, PlasmaModel, IdealMetal, DcAugmentedModel, OpticalDataTable
]


def beta(model: DcAugmentedModel, T: float) -> float:
    """Dimensionless conductivity parameter beta(T) = 2 hbar sigma0(T)/(kB T)."""
    if T <= 0:
        raise InvalidTemperatureError(f"beta requires T > 0, got {T}")
    return 2.0 * HBAR * model.sigma0_at(T) / (KB * T)


def _require_temperature(model, T) -> float:
    if T is None:
        raise ValueError(
            f"{type(model).__name__} evaluation needs a temperature context"
        )
    if T <= 0:
        raise InvalidTemperatureError(f"temperature must be > 0, got {T}")
    return float(T)


def _is_zero(xi) -> bool:
    return np.isscalar(xi) and xi == 0


def _match_input(out: np.ndarray):
    """Return 0-d results as python scalars, arrays unchanged."""
    if out.shape:
        return out
    return complex(out) if np.iscomplexobj(out) else float(out)


def eval_eps(model: PermittivityModel, xi, T: float | None = None):
    """eps(i xi) for a single model; accepts scalar or ndarray xi.

    Real xi must be >= 0. Models that diverge at xi = 0 raise
    StaticDivergenceError there; the ideal metal always raises
    ModelNotPointwiseError. Drude and dc-augmented models need T.
    """
    if isinstance(model, IdealMetal):
        raise ModelNotPointwiseError(
            "ideal metal has no pointwise eps; use the reflection rules"
        )
    xi_arr = np.asarray(xi)
    if not np.iscomplexobj(xi_arr):
        if np.any(xi_arr < 0):
            raise ValueError("xi must be >= 0")
    if isinstance(model, OscillatorModel):
        acc = np.ones_like(xi_arr, dtype=xi_arr.dtype if xi_arr.dtype.kind == "c" else float)
        for c, w in zip(model.strengths, model.frequencies):
            acc = acc + c / (1.0 + (xi_arr / w) ** 2)
        return _match_input(acc)
    if isinstance(model, PlasmaModel):
        if _is_zero(xi) or np.any(xi_arr == 0):
            raise StaticDivergenceError("plasma model diverges at xi = 0")
        return _match_input(1.0 + (model.plasma_frequency / xi_arr) ** 2)
    if isinstance(model, DrudeModel):
        Tv = _require_temperature(model, T)
        if _is_zero(xi) or np.any(xi_arr == 0):
            raise StaticDivergenceError("Drude model diverges at xi = 0")
        nu = model.nu_at(Tv)
        return _match_input(1.0 + model.plasma_frequency**2 / (xi_arr * (xi_arr + nu)))
    if isinstance(model, DcAugmentedModel):
        Tv = _require_temperature(model, T)
        if _is_zero(xi) or np.any(xi_arr == 0):
            raise StaticDivergenceError("dc-augmented model diverges at xi = 0")
        base = np.asarray(eval_eps(model.base, xi))
        return _match_input(base + 4.0 * math.pi * model.sigma0_at(Tv) / xi_arr)
    if isinstance(model, OpticalDataTable):
        if np.iscomplexobj(xi_arr):
            raise ValueError("optical-table models support real xi only")
        if xi_arr.shape:
            return np.array([_kk_eval(model, float(x)) for x in xi_arr.ravel()]).reshape(
                xi_arr.shape
            )
        return _kk_eval(model, float(xi_arr))
    raise TypeError(f"unknown permittivity model {type(model).__name__}")


def static_eps(model: PermittivityModel):
    """Static permittivity eps(0), or STATIC_DIVERGENT for divergent models."""
    if isinstance(model, (DrudeModel, PlasmaModel, DcAugmentedModel, IdealMetal)):
        return STATIC_DIVERGENT
    if isinstance(model, OscillatorModel):
        return model.eps0
    if isinstance(model, OpticalDataTable):
        return _kk_eval(model, 0.0)
    raise TypeError(f"unknown permittivity model {type(model).__name__}")


def kk_to_imaginary_axis(table: OpticalDataTable, xi: float) -> float:
    """Kramers-Kronig transform of the tabulated absorptive spectrum.

    eps(i xi) = 1 + (2/pi) Int_0^inf omega eps''(omega) / (omega^2 + xi^2)
    d omega, with the grid part integrated by trapezoid in log-omega and the
    configured tails added in closed quadrature.
    """
    if xi <= 0:
        raise ValueError(f"kk_to_imaginary_axis requires xi > 0, got {xi}")
    return _kk_eval(table, float(xi))


def _tail_integrals(table: OpticalDataTable, xi: float, probe: bool):
    """Low/high tail contributions; with probe=True, unconfigured tails are
    estimated with the default exponents instead of contributing zero."""
    w = table.omegas
    e2 = table.eps2
    low_p = table._low_p if table._low_p is not None else (1.0 if probe else None)
    high_p = table._high_p if table._high_p is not None else (-3.0 if probe else None)
    low = high = 0.0
    if low_p is not None and e2[0] > 0:
        w1, a1 = w[0], e2[0]
        if xi == 0.0 and low_p <= 0:
            raise StaticDivergenceError(
                "optical table with nonvanishing low-frequency absorption has "
                "no finite static permittivity"
            )
        low = quad(
            lambda om: a1 * (om / w1) ** low_p * om / (om**2 + xi**2),
            0.0,
            w1,
            epsrel=1e-10,
            limit=100,
        )[0]
    if high_p is not None and e2[-1] > 0:
        wn, an = w[-1], e2[-1]
        high = quad(
            lambda om: an * (om / wn) ** high_p * om / (om**2 + xi**2),
            wn,
            np.inf,
            epsrel=1e-10,
            limit=100,
        )[0]
    return low, high


def _kk_eval(table: OpticalDataTable, xi: float) -> float:
    w = np.asarray(table.omegas)
    e2 = np.asarray(table.eps2)
    grid = float(np.trapezoid(w * w * e2 / (w * w + xi * xi), np.log(w)))
    low_probe, high_probe = _tail_integrals(table, xi, probe=True)
    total_est = grid + low_probe + high_probe
    if total_est > 0:
        if table._low_p is None and low_probe > 0.01 * total_est:
            raise TailUnderspecifiedError(
                f"low-frequency tail would contribute {low_probe / total_est:.1%} "
                "at this xi but no low_tail descriptor is configured"
            )
        if table._high_p is None and high_probe > 0.01 * total_est:
            raise TailUnderspecifiedError(
                f"high-frequency tail would contribute {high_probe / total_est:.1%} "
                "at this xi but no high_tail descriptor is configured"
            )
    low, high = _tail_integrals(table, xi, probe=False)
    return 1.0 + (2.0 / math.pi) * (grid + low + high)


def matsubara_eps_vector(model: PermittivityModel, T: float, l_values: np.ndarray):
    """eps(i xi_l) for an array of Matsubara indices l >= 1.

    For the dc-augmented model the conductivity enters as beta(T)/l, which
    is identical to 4 pi sigma0/xi_l; the l = 0 case never reaches eps and
    is encoded in the zero-frequency reflection rules.
    """
    l_arr = np.asarray(l_values, dtype=float)
    if np.any(l_arr < 1):
        raise ValueError("matsubara_eps_vector handles l >= 1 only")
    xi = XI_PER_KELVIN * T * l_arr
    if isinstance(model, DcAugmentedModel):
        return np.asarray(eval_eps(model.base, xi)) + beta(model, T) / l_arr
    return np.asarray(eval_eps(model, xi, T=T))


# ---------------------------------------------------------------------------
# presets and file I/O

SI_STATIC_EPS0 = 11.67
SIO2_STATIC_EPS0 = 3.84


def _make_presets() -> dict[str, PermittivityModel]:
    # the "-static" presets emulate a frequency-independent permittivity:
    # the single effective oscillator sits far above every frequency the
    # Matsubara machinery samples at laboratory separations, so eps(i xi)
    # stays at its static value throughout
    return {
        "Si-static": OscillatorModel(strengths=(10.67,), frequencies=(1.0e18,)),
        "SiO2-static": OscillatorModel(strengths=(2.84,), frequencies=(1.0e18,)),
        "ideal-metal": IdealMetal(),
    }


PRESETS = _make_presets()


def get_preset(name: str) -> PermittivityModel:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown material preset {name!r}; available: {sorted(PRESETS)}"
        ) from None


def read_optical_table(
    path: str, low_tail=1.0, high_tail=-3.0
) -> OpticalDataTable:
    """Read a comma-separated (omega_rad_s, eps2) spectrum file.

    Lines starting with '#' are ignored; the first data line must be the
    exact header 'omega_rad_s,eps2'.
    """
    omegas: list[float] = []
    eps2: list[float] = []
    header_seen = False
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if not header_seen:
                    if line != "omega_rad_s,eps2":
                        raise ConfigError(
                            f"{path}:{lineno}: expected header 'omega_rad_s,eps2', "
                            f"got {line!r}"
                        )
                    header_seen = True
                    continue
                parts = line.split(",")
                if len(parts) != 2:
                    raise ConfigError(f"{path}:{lineno}: expected two comma-separated fields")
                try:
                    omegas.append(float(parts[0]))
                    eps2.append(float(parts[1]))
                except ValueError:
                    raise ConfigError(f"{path}:{lineno}: non-numeric field") from None
    except OSError as exc:
        raise ConfigError(f"cannot read optical table {path}: {exc}") from exc
    if not header_seen:
        raise ConfigError(f"{path}: missing 'omega_rad_s,eps2' header line")
    try:
        return OpticalDataTable(tuple(omegas), tuple(eps2), low_tail, high_tail)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def load_material(spec, base_dir: str = ".") -> PermittivityModel:
    """Build a model from a JSON file path or an already-parsed dict.

    The schema uses a 'model' discriminator: oscillator, drude, plasma,
    ideal_metal, dc_augmented, or optical_table.
    """
    if isinstance(spec, str):
        try:
            with open(spec, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read material file {spec}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{spec}: invalid JSON: {exc}") from exc
        return load_material(doc, base_dir=os.path.dirname(os.path.abspath(spec)))
    if not isinstance(spec, dict):
        raise ConfigError(f"material spec must be a dict or file path, got {type(spec).__name__}")
    kind = spec.get("model")
    try:
        if kind == "oscillator":
            return OscillatorModel(tuple(spec["C"]), tuple(spec["omega"]))
        if kind == "drude":
            nu = spec.get("nu", 0.0)
            if isinstance(nu, list):
                nu = tuple((float(t), float(n)) for t, n in nu)
            return DrudeModel(float(spec["omega_p"]), nu)
        if kind == "plasma":
            return PlasmaModel(float(spec["omega_p"]))
        if kind == "ideal_metal":
            return IdealMetal()
        if kind == "dc_augmented":
            base = OscillatorModel(tuple(spec["C"]), tuple(spec["omega"]))
            return DcAugmentedModel(
                base=base,
                sigma0=float(spec["sigma0_300K"]),
                gap_parameter=float(spec["gap_b_K"]),
            )
        if kind == "optical_table":
            path = spec["table_path"]
            if not os.path.isabs(path):
                path = os.path.join(base_dir, path)
            return read_optical_table(
                path,
                low_tail=spec.get("low_tail", 1.0),
                high_tail=spec.get("high_tail", -3.0),
            )
    except KeyError as exc:
        raise ConfigError(f"material spec missing required key {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid material spec: {exc}") from exc
    raise ConfigError(
        f"unknown model kind {kind!r}; expected one of oscillator, drude, "
        "plasma, ideal_metal, dc_augmented, optical_table"
    )


def resolve_material(spec, base_dir: str = ".") -> PermittivityModel:
    """Accept a preset name, a file path, or an inline dict."""
    if isinstance(spec, dict):
        return load_material(spec, base_dir=base_dir)
    if isinstance(spec, str):
        if spec in PRESETS:
            return PRESETS[spec]
        candidate = spec if os.path.isabs(spec) else os.path.join(base_dir, spec)
        if os.path.exists(candidate) or spec.endswith(".json"):
            return load_material(candidate, base_dir=base_dir)
        raise ConfigError(
            f"material {spec!r} is neither a preset ({sorted(PRESETS)}) nor a file"
        )
    raise ConfigError(f"cannot interpret material spec {spec!r}")
