"""Tests for the dimensionless reflection coefficients and zero-frequency rules."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from casimir import reflection as R
from casimir.errors import StaticDivergenceError
from casimir.materials import (
    STATIC_DIVERGENT,
    DcAugmentedModel,
    DrudeModel,
    IdealMetal,
    OscillatorModel,
    PlasmaModel,
    eval_eps,
)


class TestDimensionlessPoint:
    def test_valid(self):
        p = R.DimensionlessPoint(zeta=0.5, y=1.5)
        assert p.zeta == 0.5

    def test_invalid(self):
        with pytest.raises(ValueError):
            R.DimensionlessPoint(zeta=-0.1, y=1.0)
        with pytest.raises(ValueError):
            R.DimensionlessPoint(zeta=2.0, y=1.0)


class TestTm:
    def test_static_dielectric_value(self):
        # (eps0 - 1)/(eps0 + 1) for eps0 = 11.67
        p = R.DimensionlessPoint(zeta=0.0, y=3.0)
        got = R.r_tm(11.67, p)
        assert got == pytest.approx(0.842_146_803_472_770_3, rel=1e-14)
        assert got == pytest.approx(0.842147, rel=1e-6)

    def test_vacuum(self):
        assert R.r_tm(1.0, R.DimensionlessPoint(0.7, 2.0)) == 0.0
        assert R.r_te(1.0, R.DimensionlessPoint(0.7, 2.0)) == 0.0

    def test_normal_incidence_corner(self):
        # y = zeta collapses both polarizations to (sqrt(eps)-1)/(sqrt(eps)+1)
        p = R.DimensionlessPoint(zeta=2.0, y=2.0)
        want = (math.sqrt(11.67) - 1.0) / (math.sqrt(11.67) + 1.0)
        got = R.r_tm(11.67, p)
        assert got == pytest.approx(want, rel=1e-14)
        assert got == pytest.approx(0.547_115_619_398_735_8, rel=1e-14)
        assert got == pytest.approx(0.547082, rel=1e-4)

    def test_divergence_marker_at_zero(self):
        p = R.DimensionlessPoint(zeta=0.0, y=1.0)
        with pytest.raises(StaticDivergenceError):
            R.r_tm(STATIC_DIVERGENT, p)
        with pytest.raises(StaticDivergenceError):
            R.r_tm(math.inf, p)
        with pytest.raises(ValueError):
            R.r_tm(math.inf, R.DimensionlessPoint(zeta=0.5, y=1.0))


class TestTe:
    def test_zero_frequency_vanishes_for_finite_eps(self):
        assert R.r_te(11.67, R.DimensionlessPoint(0.0, 2.5)) == 0.0

    def test_corner_value(self):
        p = R.DimensionlessPoint(zeta=1.3, y=1.3)
        want = (math.sqrt(2.0) - 1.0) / (math.sqrt(2.0) + 1.0)
        got = R.r_te(2.0, p)
        assert got == pytest.approx(want, rel=1e-14)
        assert got == pytest.approx(0.171_572_875_253_810, rel=1e-12)

    def test_raw_broadcasting(self):
        y = np.linspace(1.0, 5.0, 9)
        out = R.te_raw(4.0, 1.0, y)
        assert out.shape == y.shape
        assert np.all(np.diff(out) < 0)  # decays with growing y at fixed zeta


class TestOrderingAndMonotonicity:
    @given(
        eps=st.floats(min_value=1.0 + 1e-9, max_value=1e4, allow_nan=False),
        zeta=st.floats(min_value=1e-6, max_value=50.0, allow_nan=False),
        extra=st.floats(min_value=0.0, max_value=50.0, allow_nan=False),
    )
    @settings(max_examples=300)
    def test_bounded_in_unit_interval(self, eps, zeta, extra):
        p = R.DimensionlessPoint(zeta=zeta, y=zeta + extra)
        assert 0.0 <= R.r_te(eps, p) < 1.0
        assert 0.0 <= R.r_tm(eps, p) < 1.0

    @given(
        eps=st.floats(min_value=1.0001, max_value=1e4, allow_nan=False),
        zeta=st.floats(min_value=1e-4, max_value=50.0, allow_nan=False),
        stretch=st.floats(min_value=1.05, max_value=100.0, allow_nan=False),
    )
    @settings(max_examples=300)
    def test_te_below_tm_off_corner(self, eps, zeta, stretch):
        # away from y = zeta the ordering gap is analytic, not a rounding race
        p = R.DimensionlessPoint(zeta=zeta, y=zeta * stretch)
        assert R.r_te(eps, p) < R.r_tm(eps, p)

    def test_corner_coincidence(self):
        # at y = zeta both polarizations reduce to the same normal-incidence
        # value; cancellation limits the attainable agreement when eps -> 1
        for eps in [1.0001, 2.0, 11.67, 1e3]:
            p = R.DimensionlessPoint(zeta=0.8, y=0.8)
            want = (math.sqrt(eps) - 1.0) / (math.sqrt(eps) + 1.0)
            assert R.r_tm(eps, p) == pytest.approx(want, rel=1e-10)
            assert R.r_te(eps, p) == pytest.approx(want, rel=1e-10)

    @given(
        eps=st.floats(min_value=1.5, max_value=100.0, allow_nan=False),
        bump=st.floats(min_value=0.1, max_value=50.0, allow_nan=False),
        zeta=st.floats(min_value=0.01, max_value=10.0, allow_nan=False),
        extra=st.floats(min_value=0.01, max_value=10.0, allow_nan=False),
    )
    @settings(max_examples=300)
    def test_increasing_in_eps(self, eps, bump, zeta, extra):
        p = R.DimensionlessPoint(zeta=zeta, y=zeta + extra)
        assert R.r_tm(eps + bump, p) > R.r_tm(eps, p)
        assert R.r_te(eps + bump, p) > R.r_te(eps, p)

    def test_continuous_in_zeta_for_finite_model(self):
        si = OscillatorModel((10.67,), (6.6e15,))
        y = 2.0
        vals = []
        for zeta in [1e-1, 1e-2, 1e-3, 1e-4]:
            eps = eval_eps(si, zeta * 1e17)  # any finite mapping will do here
            vals.append(R.r_tm(eps, R.DimensionlessPoint(zeta, y)))
        limit = (11.67 - 1.0) / (11.67 + 1.0)
        assert vals[-1] == pytest.approx(limit, abs=1e-4)


class TestZeroFreqRules:
    def test_ideal_metal(self):
        pair = R.zero_freq_pair(IdealMetal())
        assert pair.r_par0 == 1.0 and pair.r_perp0 == 1.0
        assert pair.is_constant

    def test_drude(self):
        pair = R.zero_freq_pair(DrudeModel(2e16, 1e13))
        assert pair.r_par0 == 1.0 and pair.r_perp0 == 0.0

    def test_dielectric(self):
        pair = R.zero_freq_pair(OscillatorModel((10.67,), (6.6e15,)))
        assert pair.r_par0 == pytest.approx(0.842_146_803_472_770_3, rel=1e-14)
        assert pair.r_perp0 == 0.0

    def test_plasma_y_dependent(self):
        # with c k_perp = omega_p, i.e. y = 2 a omega_p / c, the TE value is
        # (sqrt(2)-1)/(sqrt(2)+1)
        omega_p, a = 2e16, 1e-6
        pair = R.zero_freq_pair(PlasmaModel(omega_p), separation=a)
        assert pair.r_par0 == 1.0
        assert callable(pair.r_perp0)
        y_star = 2.0 * a * omega_p / 299_792_458.0
        got = float(pair.perp_at(y_star))
        assert got == pytest.approx((math.sqrt(2) - 1) / (math.sqrt(2) + 1), rel=1e-12)
        assert got == pytest.approx(0.171573, rel=1e-5)
        # decays toward zero as y grows past the plasma scale
        assert float(pair.perp_at(100.0 * y_star)) < 0.01

    def test_plasma_needs_separation(self):
        with pytest.raises(ValueError):
            R.zero_freq_pair(PlasmaModel(2e16))

    def test_dc_augmented_discontinuity(self):
        """The dc-augmented rule (1, 0) differs from the base dielectric's
        (r0, 0); this jump is the model-switching observable and is asserted
        exactly, never smoothed."""
        base = OscillatorModel((10.67,), (6.6e15,))
        dc = DcAugmentedModel(base=base, sigma0=19.6, gap_parameter=6500.0)
        dc_pair = R.zero_freq_pair(dc)
        base_pair = R.zero_freq_pair(base)
        assert dc_pair.r_par0 == 1.0
        assert dc_pair.r_perp0 == 0.0
        assert base_pair.r_par0 == pytest.approx(0.842_146_803_472_770_3, rel=1e-14)
        assert dc_pair.r_par0 != base_pair.r_par0

    def test_pair_validation(self):
        with pytest.raises(ValueError):
            R.ZeroFreqPair(1.2, 0.0)
        with pytest.raises(ValueError):
            R.ZeroFreqPair(0.5, -0.1)

    def test_constant_pair_sampling(self):
        pair = R.ZeroFreqPair(0.7, 0.0)
        np.testing.assert_allclose(pair.par_at(np.array([1.0, 2.0])), [0.7, 0.7])
        np.testing.assert_allclose(pair.perp_at(np.array([1.0, 2.0])), [0.0, 0.0])
