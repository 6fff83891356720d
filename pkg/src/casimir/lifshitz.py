"""Matsubara-sum evaluation of free energy, pressure, and entropy.

Everything is computed in the dimensionless variables zeta = tau * l and y,
with tau = 4 pi k_B a T / (hbar c). The working quantities are

    reduced_F = tau * [ G_F(0)/2 + sum_{l>=1} G_F(zeta_l) ]
    reduced_P = tau * [ G_P(0)/2 + sum_{l>=1} G_P(zeta_l) ]

where G_F(x) = Int_x^inf y [ln(1 - R_par e^-y) + ln(1 - R_perp e^-y)] dy and
G_P(x) = Int_x^inf y^2 [R_par/(e^y - R_par) + R_perp/(e^y - R_perp)] dy, with
R_p the product of the two plates' reflection coefficients. The physical
quantities are F = (hbar c / 32 pi^2 a^3) reduced_F and
P = -(hbar c / 32 pi^2 a^4) reduced_P.

The l = 0 term always comes from the per-model zero-frequency rules; for
constant rule pairs it has the closed forms -Li3(R) (free energy) and
2 Li3(R) (pressure) per polarization.

Small-tau thermal corrections are computed by a contour (sum-minus-integral)
representation rather than by subtracting two nearly equal numbers; see
thermal_correction for the routing rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from ._constants import C as SPEED_OF_LIGHT
from ._constants import HBAR, KB, TAU_PER_METER_KELVIN, XI_PER_KELVIN, ZETA3
from .errors import (
    ConvergenceFailureError,
    DerivativeUnstableError,
    InvalidTemperatureError,
)
from .materials import (
    DcAugmentedModel,
    DrudeModel,
    IdealMetal,
    OpticalDataTable,
    OscillatorModel,
    PermittivityModel,
    PlasmaModel,
    eval_eps,
)
from .reflection import ZeroFreqPair, te_raw, tm_raw, zero_freq_pair
from .specfun import polylog

# tau below this is numerically indistinguishable from zero temperature
TAU_ZERO_THRESHOLD = 1e-8
# small-tau corrections switch to the contour route below this
TAU_CONTOUR_THRESHOLD = 0.05

# y-panel edges in the offset u = y - zeta; the integrand decays like e^-y,
# so u = 40 leaves a tail below 1e-16 of the total
_U_EDGES = (0.0, 0.0625, 0.25, 1.0, 2.5, 5.0, 9.0, 14.0, 20.0, 28.0, 40.0)
_U_EDGES_LONG = _U_EDGES + (55.0, 70.0)
# t-panel edges for the contour integral; the kernel decays like e^-2 pi t
_T_EDGES = (0.0, 0.08, 0.2, 0.45, 0.8, 1.3, 2.0, 3.0, 4.5, 6.5)
_GL_POINTS = 12
_L_BLOCK = 256
_MAX_SPLITS = 8


@dataclass(frozen=True)
class PlateConfiguration:
    """Two plate materials, a separation (m), and a temperature (K)."""

    material_1: PermittivityModel
    material_2: PermittivityModel
    separation: float
    temperature: float

    def __post_init__(self) -> None:
        if self.separation <= 0:
            raise ValueError(f"separation must be > 0, got {self.separation}")
        if self.temperature < 0:
            raise InvalidTemperatureError(
                f"temperature must be >= 0, got {self.temperature}"
            )

    @property
    def tau(self) -> float:
        return TAU_PER_METER_KELVIN * self.separation * self.temperature

    def with_temperature(self, T: float) -> "PlateConfiguration":
        return PlateConfiguration(self.material_1, self.material_2, self.separation, T)

    def with_separation(self, a: float) -> "PlateConfiguration":
        return PlateConfiguration(self.material_1, self.material_2, a, self.temperature)


@dataclass(frozen=True)
class NumericalSettings:
    y_quad_rel_tol: float = 1e-10
    matsubara_rel_tol: float = 1e-9
    l_max_cap: int = 100_000
    diff_step_fraction: float = 0.25

    def __post_init__(self) -> None:
        for name in ("y_quad_rel_tol", "matsubara_rel_tol"):
            v = getattr(self, name)
            if not 0.0 < v <= 1e-4:
                raise ValueError(f"{name} must lie in (0, 1e-4], got {v}")
        if self.l_max_cap < 10:
            raise ValueError(f"l_max_cap must be >= 10, got {self.l_max_cap}")
        if not 0.0 < self.diff_step_fraction < 0.5:
            raise ValueError(
                f"diff_step_fraction must lie in (0, 0.5), got {self.diff_step_fraction}"
            )


DEFAULT_SETTINGS = NumericalSettings()


@dataclass(frozen=True)
class QuantityResult:
    value: float
    error: float
    terms_used: int
    truncation_error: float
    quadrature_error: float


@dataclass(frozen=True)
class ThermalQuantities:
    free_energy: float
    pressure: float
    entropy: float
    err_free_energy: float
    err_pressure: float
    err_entropy: float
    l_terms_used: int


@dataclass(frozen=True)
class CorrectionResult:
    value: float
    error: float
    definition: str
    alternative_value: float | None = None
    alternative_definition: str | None = None


@lru_cache(maxsize=8)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _panel_nodes(edges, splits: int):
    """Gauss-Legendre nodes/weights on each panel, each panel cut into
    `splits` equal slices. Returns flat (nodes, weights)."""
    x, w = _leggauss(_GL_POINTS)
    nodes = []
    weights = []
    for a, b in zip(edges, edges[1:]):
        sub = np.linspace(a, b, splits + 1)
        for lo, hi in zip(sub, sub[1:]):
            mid = 0.5 * (lo + hi)
            half = 0.5 * (hi - lo)
            nodes.append(mid + half * x)
            weights.append(half * w)
    return np.concatenate(nodes), np.concatenate(weights)


class _Side:
    """Per-plate permittivity supplier bound to a configuration."""

    def __init__(self, model: PermittivityModel, separation: float, T: float):
        self.model = model
        self.ideal = isinstance(model, IdealMetal)
        self._xi_scale = SPEED_OF_LIGHT / (2.0 * separation)
        self._T = T

    def eps(self, zeta: np.ndarray):
        """eps(i xi) at xi = zeta c / (2a); None for the ideal metal."""
        if self.ideal:
            return None
        return np.asarray(eval_eps(self.model, zeta * self._xi_scale, T=self._T))


def _pair_products(eps1, eps2, zeta, y):
    """(R_par, R_perp) reflection products on the node grid."""
    if eps1 is None and eps2 is None:
        one = np.ones_like(y)
        return one, one
    if eps1 is None:
        r2t = tm_raw(eps2[..., None], zeta, y)
        r2e = te_raw(eps2[..., None], zeta, y)
        return r2t, r2e
    if eps2 is None:
        r1t = tm_raw(eps1[..., None], zeta, y)
        r1e = te_raw(eps1[..., None], zeta, y)
        return r1t, r1e
    r1t = tm_raw(eps1[..., None], zeta, y)
    r2t = tm_raw(eps2[..., None], zeta, y)
    r1e = te_raw(eps1[..., None], zeta, y)
    r2e = te_raw(eps2[..., None], zeta, y)
    return r1t * r2t, r1e * r2e


def _g_integrand(kind: str, y, r_par, r_perp):
    decay = np.exp(-y)
    xp = r_par * decay
    xe = r_perp * decay
    if kind == "F":
        if np.iscomplexobj(y) or np.iscomplexobj(xp):
            return y * (np.log(1.0 - xp) + np.log(1.0 - xe))
        return y * (np.log1p(-xp) + np.log1p(-xe))
    return y * y * (xp / (1.0 - xp) + xe / (1.0 - xe))


def _quad_G(kind: str, zeta, eps1, eps2, edges, splits: int):
    """G_kind(zeta) for a block of zeta values with a fixed panel layout."""
    u, w = _panel_nodes(edges, splits)
    zcol = np.asarray(zeta)[..., None]
    y = zcol + u
    r_par, r_perp = _pair_products(eps1, eps2, zcol, y)
    vals = _g_integrand(kind, y, r_par, r_perp)
    return (vals * w).sum(axis=-1)


def _tail_bound(kind: str, zeta, edges) -> np.ndarray:
    """Crude bound on the neglected tail beyond the last panel edge."""
    Y = np.real(np.asarray(zeta)) + edges[-1]
    if kind == "F":
        return 2.2 * np.exp(-Y) * (Y + 1.0)
    return 2.2 * np.exp(-Y) * (Y * Y + 2.0 * Y + 2.0)


def _eval_G(kind: str, zeta, eps1, eps2, rel_tol: float, adaptive: bool = True):
    """(G, per-row error) with panel-doubling refinement where needed."""
    zeta = np.atleast_1d(zeta)
    edges = _U_EDGES
    coarse = _quad_G(kind, zeta, eps1, eps2, edges, 1)
    fine = _quad_G(kind, zeta, eps1, eps2, edges, 2)
    err = np.abs(fine - coarse) + _tail_bound(kind, zeta, edges)
    if not adaptive:
        return fine, err
    splits = 2
    while splits < _MAX_SPLITS:
        bad = err > rel_tol * np.maximum(np.abs(fine), 1e-300)
        if not np.any(bad):
            break
        idx = np.nonzero(bad)[0]
        sub_eps1 = None if eps1 is None else eps1[idx]
        sub_eps2 = None if eps2 is None else eps2[idx]
        finer = _quad_G(kind, zeta[idx], sub_eps1, sub_eps2, _U_EDGES_LONG, 2 * splits)
        ref = _quad_G(kind, zeta[idx], sub_eps1, sub_eps2, _U_EDGES_LONG, splits)
        fine[idx] = finer
        err[idx] = np.abs(finer - ref) + _tail_bound(kind, zeta[idx], _U_EDGES_LONG)
        splits *= 2
    return fine, err


def _zero_freq_G(kind: str, pair1: ZeroFreqPair, pair2: ZeroFreqPair, rel_tol: float):
    """The l = 0 integral from the zero-frequency rule pairs."""
    if pair1.is_constant and pair2.is_constant:
        r_par = pair1.r_par0 * pair2.r_par0
        r_perp = pair1.r_perp0 * pair2.r_perp0
        if kind == "F":
            val = -(polylog(3, r_par) + polylog(3, r_perp))
        else:
            val = 2.0 * (polylog(3, r_par) + polylog(3, r_perp))
        return val, abs(val) * 1e-14
    # plasma-model TE coefficient stays y-dependent: integrate numerically
    def g_of(edges, splits):
        u, w = _panel_nodes(edges, splits)
        y = u
        r_par = pair1.par_at(y) * pair2.par_at(y)
        r_perp = pair1.perp_at(y) * pair2.perp_at(y)
        vals = _g_integrand(kind, y, r_par, r_perp)
        # the y -> 0 endpoint of the F integrand is 0 (y ln y -> 0); nodes
        # are interior so no explicit limit handling is needed
        return float((vals * w).sum())

    coarse = g_of(_U_EDGES, 2)
    fine = g_of(_U_EDGES, 4)
    err = abs(fine - coarse) + float(_tail_bound(kind, 0.0, _U_EDGES))
    if err > rel_tol * max(abs(fine), 1e-300):
        finer = g_of(_U_EDGES_LONG, 8)
        err = abs(finer - fine) + float(_tail_bound(kind, 0.0, _U_EDGES_LONG))
        fine = finer
    return fine, err


def _matsubara_reduced(
    kind: str,
    cfg: PlateConfiguration,
    ns: NumericalSettings,
    l_max_forced: int | None = None,
    adaptive: bool = True,
):
    """tau * primed Matsubara sum of G_kind, with error accounting.

    Returns (reduced, truncation_error, quadrature_error, terms_used) where
    terms_used counts l >= 1 terms actually summed. Deterministic: terms are
    accumulated in index order with exact summation.
    """
    tau = cfg.tau
    side1 = _Side(cfg.material_1, cfg.separation, cfg.temperature)
    side2 = _Side(cfg.material_2, cfg.separation, cfg.temperature)
    pair1 = zero_freq_pair(cfg.material_1, cfg.separation)
    pair2 = zero_freq_pair(cfg.material_2, cfg.separation)

    g0, g0_err = _zero_freq_G(kind, pair1, pair2, ns.y_quad_rel_tol)
    terms = [0.5 * g0]
    qerrs = [0.5 * g0_err]

    tol = ns.matsubara_rel_tol
    consecutive_small = 0
    stopped = False
    last_two = [abs(0.5 * g0), abs(0.5 * g0)]
    l = 1
    limit = l_max_forced if l_max_forced is not None else ns.l_max_cap
    while l <= limit:
        block = np.arange(l, min(l + _L_BLOCK, limit + 1), dtype=float)
        zeta = tau * block
        eps1 = side1.eps(zeta)
        eps2 = side2.eps(zeta)
        g, g_err = _eval_G(kind, zeta, eps1, eps2, ns.y_quad_rel_tol, adaptive)
        partial = math.fsum(terms)
        for i, term in enumerate(g):
            terms.append(float(term))
            qerrs.append(float(g_err[i]))
            partial += float(term)
            last_two = [last_two[1], abs(float(term))]
            if l_max_forced is None:
                if abs(term) <= tol * abs(partial):
                    consecutive_small += 1
                    if consecutive_small >= 3:
                        stopped = True
                        break
                else:
                    consecutive_small = 0
            l += 1
        if stopped:
            break
        if l_max_forced is None and l > ns.l_max_cap:
            raise ConvergenceFailureError(
                f"matsubara sum hit the cap l_max={ns.l_max_cap} before "
                f"reaching tolerance {tol}",
                partial=tau * math.fsum(terms),
            )
    terms_used = len(terms) - 1

    if l_max_forced is not None or terms_used == 0:
        trunc = 0.0 if terms_used == 0 else 3.0 * last_two[1]
    else:
        # geometric continuation of the observed decay
        prev, last = last_two
        rho = last / prev if prev > 0 and last < prev else 0.5
        trunc = last * rho / (1.0 - rho) if rho < 1.0 else 3.0 * last
    reduced = tau * math.fsum(terms)
    return reduced, tau * trunc, tau * math.fsum(qerrs), terms_used


def _prefactor_F(a: float) -> float:
    return HBAR * SPEED_OF_LIGHT / (32.0 * math.pi**2 * a**3)


def _prefactor_P(a: float) -> float:
    return HBAR * SPEED_OF_LIGHT / (32.0 * math.pi**2 * a**4)


def matsubara_frequency(l: int, T: float) -> float:
    """xi_l = 2 pi k_B T l / hbar in rad/s."""
    if l < 0:
        raise ValueError(f"Matsubara index must be >= 0, got {l}")
    return XI_PER_KELVIN * T * l


def free_energy(
    cfg: PlateConfiguration, ns: NumericalSettings = DEFAULT_SETTINGS
) -> QuantityResult:
    """Free energy of interaction per unit area, J/m^2.

    T = 0 (or tau below the underflow threshold) routes to the
    zero-temperature integral; negative T is rejected.
    """
    if cfg.temperature < 0:
        raise InvalidTemperatureError(f"T must be >= 0, got {cfg.temperature}")
    if cfg.temperature == 0.0 or cfg.tau < TAU_ZERO_THRESHOLD:
        return zero_temperature_energy(cfg, ns)
    reduced, trunc, qerr, n = _matsubara_reduced("F", cfg, ns)
    pf = _prefactor_F(cfg.separation)
    return QuantityResult(
        value=pf * reduced,
        error=pf * (trunc + qerr),
        terms_used=n,
        truncation_error=pf * trunc,
        quadrature_error=pf * qerr,
    )


def pressure(
    cfg: PlateConfiguration, ns: NumericalSettings = DEFAULT_SETTINGS
) -> QuantityResult:
    """Pressure between the plates, Pa; negative means attraction."""
    if cfg.temperature < 0:
        raise InvalidTemperatureError(f"T must be >= 0, got {cfg.temperature}")
    if cfg.temperature == 0.0 or cfg.tau < TAU_ZERO_THRESHOLD:
        return zero_temperature_pressure(cfg, ns)
    reduced, trunc, qerr, n = _matsubara_reduced("P", cfg, ns)
    pf = _prefactor_P(cfg.separation)
    return QuantityResult(
        value=-pf * reduced,
        error=pf * (trunc + qerr),
        terms_used=n,
        truncation_error=pf * trunc,
        quadrature_error=pf * qerr,
    )


def _outer_integral(kind: str, cfg: PlateConfiguration, ns: NumericalSettings):
    """Int_0^inf G_kind(zeta) d zeta via the map zeta = t/(1-t)."""
    side1 = _Side(cfg.material_1, cfg.separation, cfg.temperature)
    side2 = _Side(cfg.material_2, cfg.separation, cfg.temperature)

    def integrand(t: float) -> float:
        zeta = t / (1.0 - t)
        z = np.array([zeta])
        g, _ = _eval_G(kind, z, side1.eps(z), side2.eps(z), ns.y_quad_rel_tol)
        return float(g[0]) / (1.0 - t) ** 2

    val, abserr, info, *rest = quad(
        integrand, 0.0, 1.0, epsabs=0.0, epsrel=1e-10, limit=200, full_output=True
    )
    if rest:
        raise ConvergenceFailureError(
            f"zero-temperature outer quadrature failed: {rest[0]}", partial=val
        )
    return val, abserr


def zero_temperature_energy(
    cfg: PlateConfiguration, ns: NumericalSettings = DEFAULT_SETTINGS
) -> QuantityResult:
    """Interaction energy at T = 0, J/m^2.

    Material models with explicit temperature dependence are evaluated with
    their properties frozen at the configuration's temperature.
    """
    val, abserr = _outer_integral("F", cfg, ns)
    pf = _prefactor_F(cfg.separation)
    err = pf * (abserr + abs(val) * ns.y_quad_rel_tol)
    return QuantityResult(pf * val, err, 0, 0.0, err)


def zero_temperature_pressure(
    cfg: PlateConfiguration, ns: NumericalSettings = DEFAULT_SETTINGS
) -> QuantityResult:
    """Pressure at T = 0, Pa."""
    val, abserr = _outer_integral("P", cfg, ns)
    pf = _prefactor_P(cfg.separation)
    err = pf * (abserr + abs(val) * ns.y_quad_rel_tol)
    return QuantityResult(-pf * val, err, 0, 0.0, err)


def _supports_contour(model: PermittivityModel) -> bool:
    """Models whose reflection data continues analytically off the real
    frequency axis with the machinery used here. The dc-augmented and
    tabulated models stay on the subtraction route."""
    return isinstance(model, (OscillatorModel, PlasmaModel, DrudeModel, IdealMetal))


def _contour_delta(kind: str, cfg: PlateConfiguration, ns: NumericalSettings):
    """Sum-minus-integral correction via the contour representation

        tau Sum' G(tau l) - Int_0^inf G = -2 tau Int_0^inf
            Im G(i tau t) / (e^{2 pi t} - 1) dt,

    which is numerically benign at small tau where direct subtraction loses
    every significant digit."""
    tau = cfg.tau
    side1 = _Side(cfg.material_1, cfg.separation, cfg.temperature)
    side2 = _Side(cfg.material_2, cfg.separation, cfg.temperature)

    def contour_integral(splits: int) -> float:
        t, w = _panel_nodes(_T_EDGES, splits)
        zeta = 1j * tau * t
        g, _ = _eval_G(
            kind, zeta, side1.eps(zeta), side2.eps(zeta), ns.y_quad_rel_tol, adaptive=False
        )
        kernel = np.imag(g) / np.expm1(2.0 * math.pi * t)
        return float((kernel * w).sum())

    coarse = contour_integral(2)
    fine = contour_integral(4)
    delta = -2.0 * tau * fine
    err = 2.0 * tau * abs(fine - coarse)
    return delta, err


def _zero_temperature_limit_model(model: PermittivityModel) -> PermittivityModel:
    """The material a temperature-dependent model freezes into as T -> 0."""
    if isinstance(model, DcAugmentedModel):
        return model.base  # activated conductivity vanishes
    if isinstance(model, DrudeModel) and not model.has_constant_relaxation:
        if callable(model.relaxation):
            return model
        t0, nu0 = model.relaxation[0]
        return DrudeModel(model.plasma_frequency, nu0)
    return model


def _has_temperature_dependence(model: PermittivityModel) -> bool:
    if isinstance(model, DcAugmentedModel):
        return True
    if isinstance(model, DrudeModel):
        return not model.has_constant_relaxation
    return False


def thermal_correction(
    cfg: PlateConfiguration, ns: NumericalSettings = DEFAULT_SETTINGS
) -> CorrectionResult:
    """Thermal part of the free energy, J/m^2.

    The primary value treats the material properties as frozen at the
    configuration temperature, so it is exactly the Matsubara sum minus the
    corresponding integral. For models whose properties themselves change
    with temperature, the difference from the true zero-temperature state is
    reported separately, because the two definitions genuinely differ there.
    """
    if cfg.temperature <= 0:
        raise InvalidTemperatureError(f"T must be > 0, got {cfg.temperature}")
    frozen_label = "matsubara-sum-minus-integral (material properties frozen at T)"
    tau = cfg.tau
    pf = _prefactor_F(cfg.separation)
    if tau < TAU_CONTOUR_THRESHOLD and all(
        _supports_contour(m) for m in (cfg.material_1, cfg.material_2)
    ):
        delta, derr = _contour_delta("F", cfg, ns)
        value, error = pf * delta, pf * derr
    else:
        f = free_energy(cfg, ns)
        e0 = zero_temperature_energy(cfg, ns)
        value, error = f.value - e0.value, f.error + e0.error

    alt_value = None
    alt_label = None
    if _has_temperature_dependence(cfg.material_1) or _has_temperature_dependence(
        cfg.material_2
    ):
        cold = PlateConfiguration(
            _zero_temperature_limit_model(cfg.material_1),
            _zero_temperature_limit_model(cfg.material_2),
            cfg.separation,
            cfg.temperature,
        )
        f = free_energy(cfg, ns)
        e_cold = zero_temperature_energy(cold, ns)
        alt_value = f.value - e_cold.value
        alt_label = "difference from the zero-temperature material state"
    return CorrectionResult(value, error, frozen_label, alt_value, alt_label)


def pressure_thermal_correction(
    cfg: PlateConfiguration, ns: NumericalSettings = DEFAULT_SETTINGS
) -> CorrectionResult:
    """Thermal part of the pressure, Pa, with the same routing rules as
    thermal_correction."""
    if cfg.temperature <= 0:
        raise InvalidTemperatureError(f"T must be > 0, got {cfg.temperature}")
    label = "matsubara-sum-minus-integral (material properties frozen at T)"
    tau = cfg.tau
    pf = _prefactor_P(cfg.separation)
    if tau < TAU_CONTOUR_THRESHOLD and all(
        _supports_contour(m) for m in (cfg.material_1, cfg.material_2)
    ):
        delta, derr = _contour_delta("P", cfg, ns)
        return CorrectionResult(-pf * delta, pf * derr, label)
    p = pressure(cfg, ns)
    p0 = zero_temperature_pressure(cfg, ns)
    return CorrectionResult(p.value - p0.value, p.error + p0.error, label)


def _richardson_derivative(f, x0: float, h0: float, rel_tol: float, scale_floor: float):
    """Central-difference derivative with Richardson extrapolation.

    Halves the step until successive diagonal estimates agree to rel_tol
    times a convergence scale; raises after 6 halvings without agreement.
    Returns (derivative, error_estimate, halvings_used).
    """
    rows: list[list[float]] = []
    best = None
    best_err = math.inf
    for i in range(7):
        h = h0 / 2.0**i
        d0 = (f(x0 + h) - f(x0 - h)) / (2.0 * h)
        row = [d0]
        if rows:
            prev = rows[-1]
            for j in range(1, len(prev) + 1):
                fac = 4.0**j
                row.append((fac * row[j - 1] - prev[j - 1]) / (fac - 1.0))
        rows.append(row)
        if i >= 1:
            diag = row[-1]
            prev_diag = rows[-2][-1]
            diff = abs(diag - prev_diag)
            scale = max(abs(diag), scale_floor)
            if diff < best_err:
                best, best_err = diag, diff
            if diff <= rel_tol * scale:
                return diag, diff, i
    raise DerivativeUnstableError(
        f"derivative estimates still moving after 6 halvings "
        f"(best spread {best_err:.3e} around {best:.6e})"
    )


def entropy(
    cfg: PlateConfiguration, ns: NumericalSettings = DEFAULT_SETTINGS
) -> QuantityResult:
    """Entropy per unit area S = -dF/dT, J/(K m^2), by Richardson-extrapolated
    central differences.

    The Matsubara cutoff is probed once at the lowest stencil temperature and
    then frozen, and the quadrature layout is fixed, so the difference sees a
    smooth function of T; the reported error is the final extrapolation
    spread. This differentiation is the package's largest noise source.
    """
    if cfg.temperature <= 0:
        raise InvalidTemperatureError(f"T must be > 0, got {cfg.temperature}")
    h0 = ns.diff_step_fraction * cfg.temperature
    t_low = cfg.temperature - h0
    _, _, _, l_probe = _matsubara_reduced("F", cfg.with_temperature(t_low), ns)
    l_frozen = l_probe + 2
    pf = _prefactor_F(cfg.separation)

    def f_of_T(T: float) -> float:
        reduced, *_ = _matsubara_reduced(
            "F", cfg.with_temperature(T), ns, l_max_forced=l_frozen, adaptive=False
        )
        return pf * reduced

    f_center = f_of_T(cfg.temperature)
    scale_floor = abs(f_center) / cfg.temperature
    deriv, err, _ = _richardson_derivative(
        f_of_T, cfg.temperature, h0, ns.matsubara_rel_tol, scale_floor
    )
    return QuantityResult(-deriv, err, l_frozen, 0.0, err)


def pressure_via_energy_derivative(
    cfg: PlateConfiguration, ns: NumericalSettings = DEFAULT_SETTINGS
) -> QuantityResult:
    """P = -dF/da evaluated by the same frozen-cutoff Richardson scheme;
    exists to cross-check the direct pressure sum."""
    if cfg.temperature <= 0:
        raise InvalidTemperatureError(f"T must be > 0, got {cfg.temperature}")
    a0 = cfg.separation
    h0 = ns.diff_step_fraction * a0
    _, _, _, l_probe = _matsubara_reduced("F", cfg.with_separation(a0 - h0), ns)
    l_frozen = l_probe + 2

    def f_of_a(a: float) -> float:
        reduced, *_ = _matsubara_reduced(
            "F", cfg.with_separation(a), ns, l_max_forced=l_frozen, adaptive=False
        )
        return _prefactor_F(a) * reduced

    f_center = f_of_a(a0)
    scale_floor = abs(f_center) / a0
    deriv, err, _ = _richardson_derivative(
        f_of_a, a0, h0, ns.matsubara_rel_tol, scale_floor
    )
    return QuantityResult(-deriv, err, l_frozen, 0.0, err)


def compute_all(
    cfg: PlateConfiguration, ns: NumericalSettings = DEFAULT_SETTINGS
) -> ThermalQuantities:
    """Free energy, pressure, and entropy for one configuration."""
    f = free_energy(cfg, ns)
    p = pressure(cfg, ns)
    if cfg.temperature > 0:
        s = entropy(cfg, ns)
        s_value, s_err = s.value, s.error
    else:
        s_value, s_err = 0.0, 0.0
    return ThermalQuantities(
        free_energy=f.value,
        pressure=p.value,
        entropy=s_value,
        err_free_energy=f.error,
        err_pressure=p.error,
        err_entropy=s_err,
        l_terms_used=f.terms_used,
    )


# ---------------------------------------------------------------------------
# alternative resummation for the ideal-metal pair; serves as an independent
# closed-route cross-check of the generic sum machinery in tests

def _geom0(s: float) -> float:
    return 1.0 / math.expm1(s)


def _geom1(s: float) -> float:
    return 1.0 / (4.0 * math.sinh(0.5 * s) ** 2)


def _geom2(s: float) -> float:
    e = math.exp(-s)
    return e * (1.0 + e) / (1.0 - e) ** 3


def _ideal_k_sum(tau: float, term_of, bound_coeff: float, lead: float) -> float:
    """Shared k-sum driver: the per-k terms are bounded by bound_coeff/k^4
    uniformly in tau and die exponentially once tau*k is large."""
    running = lead
    parts: list[float] = []
    k = 1
    while k < 2_000_000:
        s = tau * k
        term = term_of(tau, k, s)
        parts.append(term)
        running += term
        if s > 40.0:
            break
        if k % 64 == 0 and bound_coeff / (3.0 * k**3) <= 1e-15 * abs(running):
            break
        k += 1
    return lead + math.fsum(parts)


def ideal_metal_reduced_free_energy(tau: float) -> float:
    """reduced_F for two ideal metals by exchanging the order of the k and l
    sums, which turns each Matsubara sum into a geometric series."""
    if tau <= 0:
        raise ValueError("tau must be > 0")

    def term(t: float, k: int, s: float) -> float:
        return -2.0 * (t * t * _geom1(s) / (k * k) + t * _geom0(s) / k**3)

    return _ideal_k_sum(tau, term, 4.0, -tau * ZETA3)


def ideal_metal_reduced_pressure(tau: float) -> float:
    """reduced_P for two ideal metals by the same k-resummation."""
    if tau <= 0:
        raise ValueError("tau must be > 0")

    def term(t: float, k: int, s: float) -> float:
        return 2.0 * (
            t**3 * _geom2(s) / k + 2.0 * t * t * _geom1(s) / (k * k) + 2.0 * t * _geom0(s) / k**3
        )

    return _ideal_k_sum(tau, term, 12.0, 2.0 * tau * ZETA3)
