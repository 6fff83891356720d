"""Polylogarithms, the exponential integral, and zeta values.

Everything the closed-form asymptotics need, implemented directly: Li_2 and
Li_3 on [0, 1] and Ei on the negative axis. Arguments outside those domains
are rejected rather than analytically continued.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._constants import ZETA3
from .errors import ConvergenceFailureError

EULER_GAMMA = 0.577_215_664_901_532_861

PI2_6 = math.pi**2 / 6.0


@dataclass(frozen=True)
class PrecisionPolicy:
    """Series truncation control for the special functions.

    rel_tol is the target relative error; max_terms caps any single series
    evaluation. The defaults are tight because these values feed acceptance
    checks at the 1e-10 level.
    """

    rel_tol: float = 1e-12
    max_terms: int = 1_000_000

    def __post_init__(self) -> None:
        if not (0.0 < self.rel_tol < 1e-3):
            raise ValueError(f"rel_tol must be in (0, 1e-3), got {self.rel_tol}")
        if self.max_terms < 50:
            raise ValueError(f"max_terms must be >= 50, got {self.max_terms}")


DEFAULT_POLICY = PrecisionPolicy()


def _li_series(n: int, z: float, policy: PrecisionPolicy) -> float:
    # Direct sum of z^k / k^n with the geometric tail bound
    # z^{K+1} / ((K+1)^n (1 - z)) as the stopping rule.
    if z == 0.0:
        return 0.0
    acc = 0.0
    zk = 1.0
    for k in range(1, policy.max_terms + 1):
        zk *= z
        acc += zk / k**n
        tail = zk * z / ((k + 1) ** n * (1.0 - z))
        if tail <= policy.rel_tol * abs(acc):
            return acc
    raise ConvergenceFailureError(
        f"Li_{n} series did not reach rel_tol={policy.rel_tol} "
        f"within {policy.max_terms} terms at z={z}"
    )


def polylog(n: int, z: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Li_n(z) for n in {2, 3} and z in [0, 1].

    Arguments near 1 are routed through reflection identities so the series
    always runs at a geometric ratio of 0.5 or better; z = 1 returns the
    zeta value exactly.
    """
    if n not in (2, 3):
        raise ValueError(f"polylog order must be 2 or 3, got {n}")
    if not (0.0 <= z <= 1.0):
        raise ValueError(f"polylog argument must be in [0, 1], got {z}")
    if z == 1.0:
        return PI2_6 if n == 2 else ZETA3
    if n == 2:
        if z <= 0.5:
            return _li_series(2, z, policy)
        # Li2(z) + Li2(1-z) = pi^2/6 - ln(z) ln(1-z)
        return PI2_6 - math.log(z) * math.log1p(-z) - _li_series(2, 1.0 - z, policy)
    if z <= 0.8:
        return _li_series(3, z, policy)
    # Landen-type cubic identity; both series arguments land in (-0.25, 0.2)
    lnz = math.log(z)
    ln1mz = math.log1p(-z)
    rhs = ZETA3 + lnz**3 / 6.0 + PI2_6 * lnz - 0.5 * lnz**2 * ln1mz
    return rhs - _li_series(3, 1.0 - z, policy) - _li_alternating(3, 1.0 - 1.0 / z, policy)


def _li_alternating(n: int, z: float, policy: PrecisionPolicy) -> float:
    # Same series for z in (-1, 0]; alternating, bounded by the first
    # dropped term.
    if z == 0.0:
        return 0.0
    acc = 0.0
    zk = 1.0
    for k in range(1, policy.max_terms + 1):
        zk *= z
        acc += zk / k**n
        if abs(zk * z) / (k + 1) ** n <= policy.rel_tol * max(abs(acc), 1e-300):
            return acc
    raise ConvergenceFailureError(f"alternating Li_{n} series cap at z={z}")


_EI_SWITCH = 6.0


def _ei_series(x: float, policy: PrecisionPolicy) -> float:
    acc = EULER_GAMMA + math.log(abs(x))
    term = 1.0
    for k in range(1, policy.max_terms + 1):
        term *= x / k
        contrib = term / k
        acc += contrib
        if abs(contrib) <= 0.5 * policy.rel_tol * abs(acc) and k > abs(x):
            return acc
    raise ConvergenceFailureError(f"Ei series cap at x={x}")


def _ei_continued_fraction(x: float, policy: PrecisionPolicy) -> float:
    # Ei(x) = -E1(-x) for x < 0, with E1(z) = e^{-z} / D(z) and
    # D(z) = z+1 - 1^2/(z+3 - 2^2/(z+5 - ...)), evaluated bottom-free by
    # the modified Lentz scheme.
    z = -x
    tiny = 1e-300
    b = z + 1.0
    f = b
    c = b
    d = 0.0
    for j in range(1, 400):
        a = -(j * j)
        b += 2.0
        d = b + a * d
        if d == 0.0:
            d = tiny
        c = b + a / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-15:
            break
    return -math.exp(-z) / f


def exp_integral_ei(x: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> float:
    """Ei(x) for x < 0.

    Power series up to |x| = 6, continued fraction beyond. The asymptotics
    only ever need the negative axis; x >= 0 is a domain error.
    """
    if not x < 0.0:
        raise ValueError(f"exp_integral_ei requires x < 0, got {x}")
    if -x <= _EI_SWITCH:
        return _ei_series(x, policy)
    return _ei_continued_fraction(x, policy)


def zeta3() -> float:
    """Riemann zeta(3), pinned from an extended-precision evaluation."""
    return ZETA3
