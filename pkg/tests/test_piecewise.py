"""Exactness tests for the piecewise function algebra.

Expected values are frozen from hand derivations, noted inline, before the
implementation was run.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wavecontact.piecewise import (
    IncompatiblePeriods,
    PiecewiseConstantFn,
    PiecewiseLinearFn,
    combine,
    extremum_on_interval,
    running_min,
)


def hat():
    # |x| on [-1, 1] extended by slope -1 / +1, so hat(x) = |x| everywhere
    return PiecewiseLinearFn([-1.0, 0.0, 1.0], [1.0, 0.0, 1.0],
                             left_slope=-1.0, right_slope=1.0)


def triangle():
    # periodic triangle: 0 at even integers, 1 at odd, period 2
    return PiecewiseLinearFn([0.0, 1.0, 2.0], [0.0, 1.0, 0.0], period=2.0)


class TestLinearEval:
    def test_core_and_extensions(self):
        f = hat()
        xs = np.array([-3.0, -1.0, -0.25, 0.0, 0.6, 1.0, 4.0])
        assert np.allclose(f(xs), np.abs(xs), rtol=0, atol=0)

    def test_scalar_round_trip(self):
        f = hat()
        assert isinstance(f(0.3), float)
        assert f(0.3) == 0.3

    def test_periodic_reduction(self):
        f = triangle()
        # triangle(2.5) = triangle(0.5) = 0.5, triangle(-0.5) = triangle(1.5) = 0.5
        assert f(2.5) == 0.5
        assert f(-0.5) == 0.5
        assert f(7.0) == 1.0
        assert f(-6.0) == 0.0

    def test_drift_eval(self):
        # square wave with plateaus 2, 0 on [0, 1), [1, 2): mean 1
        sq = PiecewiseConstantFn([0.0, 1.0, 2.0], [2.0, 0.0], period=2.0)
        v = sq.antiderivative(anchor=0.0, base=0.0)
        # V(0.5) = 1, V(2.5) = V(0.5) + mean * period = 3, V(-1.5) = -1
        assert v(0.5) == 1.0
        assert v(2.5) == 3.0
        assert v(-1.5) == -1.0
        assert v.drift == 1.0

    def test_seam_mismatch_rejected(self):
        with pytest.raises(ValueError):
            PiecewiseLinearFn([0.0, 1.0, 2.0], [0.0, 1.0, 0.5], period=2.0)

    def test_drift_requires_period(self):
        with pytest.raises(ValueError):
            PiecewiseLinearFn([0.0, 1.0], [0.0, 1.0], drift=1.0)


class TestStepEval:
    def test_right_continuity(self):
        f = PiecewiseConstantFn([0.0, 1.0], [5.0], left=-1.0, right=7.0)
        assert f(0.0) == 5.0
        assert f(0.0, side="left") == -1.0
        assert f(1.0) == 7.0
        assert f(1.0, side="left") == 5.0
        assert f(-0.5) == -1.0
        assert f(2.0) == 7.0

    def test_periodic_steps(self):
        sq = PiecewiseConstantFn([0.0, 1.0, 2.0], [2.0, 0.0], period=2.0)
        assert sq(0.0) == 2.0
        assert sq(1.0) == 0.0
        assert sq(2.0) == 2.0
        assert sq(-1.0) == 0.0
        assert sq(0.0, side="left") == 0.0

    def test_abs_sup(self):
        f = PiecewiseConstantFn([0.0, 1.0, 2.0], [2.0, -3.0], left=0.5, right=10.0)
        assert f.abs_sup(0.0, 2.0) == 10.0  # right value seen at x = 2
        assert f.abs_sup(0.0, 1.5) == 3.0
        assert f.abs_sup(0.25, 0.75) == 2.0
        assert f.abs_sup(-2.0, 0.5) == 2.0


class TestAntiderivative:
    def test_square_to_triangle(self):
        # plateaus +1 on [0,1), -1 on [1,2): antiderivative is the triangle wave
        sq = PiecewiseConstantFn([0.0, 1.0, 2.0], [1.0, -1.0], period=2.0)
        v = sq.antiderivative(anchor=0.0, base=0.0)
        t = triangle()
        xs = np.linspace(-5.0, 5.0, 401)
        assert np.allclose(v(xs), t(xs), rtol=0, atol=1e-15)
        assert v.drift == 0.0

    def test_anchor_offset(self):
        sq = PiecewiseConstantFn([0.0, 1.0, 2.0], [1.0, -1.0], period=2.0)
        v = sq.antiderivative(anchor=0.5, base=2.0)
        assert v(0.5) == 2.0

    def test_aperiodic_extensions(self):
        f = PiecewiseConstantFn([0.0], [], left=-1.0, right=1.0)
        v = f.antiderivative(anchor=0.0, base=0.0)
        # integral of sign is |x|
        xs = np.array([-2.0, -0.5, 0.0, 0.5, 2.0])
        assert np.allclose(v(xs), np.abs(xs), rtol=0, atol=0)


class TestDerivative:
    def test_hat_derivative(self):
        d = hat().derivative()
        assert d(-2.0) == -1.0
        assert d(-1.0) == -1.0  # right continuous at the kink
        assert d(0.0) == 1.0
        assert d(0.0, side="left") == -1.0
        assert d(5.0) == 1.0

    def test_round_trip(self):
        t = triangle()
        v = t.derivative().antiderivative(anchor=0.0, base=t(0.0))
        xs = np.linspace(-4.0, 4.0, 257)
        assert np.allclose(v(xs), t(xs), rtol=0, atol=1e-15)


class TestCompose:
    def test_reversal_and_scale(self):
        f = hat()
        h = f.compose_affine(-2.0, 1.0)  # h(x) = |1 - 2x|
        xs = np.linspace(-3.0, 3.0, 101)
        assert np.allclose(h(xs), np.abs(1.0 - 2.0 * xs), rtol=0, atol=1e-15)

    def test_periodic_scale(self):
        t = triangle()
        h = t.compose_affine(np.sqrt(2.0), 0.0)
        assert h.period == pytest.approx(np.sqrt(2.0), rel=1e-15)
        xs = np.linspace(-3.0, 3.0, 57)
        assert np.allclose(h(xs), t(np.sqrt(2.0) * xs), rtol=0, atol=1e-12)

    def test_drift_transforms(self):
        sq = PiecewiseConstantFn([0.0, 1.0, 2.0], [2.0, 0.0], period=2.0)
        v = sq.antiderivative()
        h = v.compose_affine(-1.0, 0.0)  # h(x) = V(-x), drift flips sign
        assert h.drift == -1.0
        xs = np.linspace(-6.0, 6.0, 91)
        assert np.allclose(h(xs), v(-xs), rtol=0, atol=1e-12)

    def test_shift(self):
        f = hat()
        h = f.shift(3.0)
        assert h(3.0) == 0.0
        assert h(5.0) == 2.0


class TestCombine:
    def test_aperiodic_union(self):
        f = hat()
        g = PiecewiseLinearFn([0.0], [2.0])  # constant 2
        h = combine(f, g, 2.0, 0.5)
        xs = np.linspace(-4.0, 4.0, 101)
        assert np.allclose(h(xs), 2.0 * np.abs(xs) + 1.0, rtol=0, atol=0)

    def test_periodic_alignment(self):
        t = triangle()
        s = t.shift(0.5)
        h = combine(t, s, 1.0, 1.0)
        xs = np.linspace(-3.0, 5.0, 301)
        assert np.allclose(h(xs), t(xs) + t(xs - 0.5), rtol=0, atol=1e-12)

    def test_mixed_rejected(self):
        with pytest.raises(IncompatiblePeriods):
            combine(hat(), triangle())

    def test_period_mismatch_rejected(self):
        t2 = triangle()
        t4 = PiecewiseLinearFn([0.0, 2.0, 4.0], [0.0, 1.0, 0.0], period=4.0)
        with pytest.raises(IncompatiblePeriods):
            combine(t2, t4)


class TestRunningMin:
    def test_triangle_window(self):
        # from 0.5 the triangle first rises, so the floor stays 0.5 until the
        # descending pass returns to 0.5 at x = 1.5, then follows down to 0
        r = running_min(triangle(), 0.5, 4.2)
        assert r(0.5) == 0.5
        assert r(1.0) == 0.5
        assert r(1.5) == 0.5
        assert r(1.75) == 0.25
        assert r(2.0) == 0.0
        assert r(4.2) == 0.0

    def test_exact_oracle_on_knots(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            n = rng.integers(2, 9)
            xs = np.sort(rng.uniform(-5, 5, size=n))
            xs += np.arange(n) * 1e-3  # enforce strict increase
            ys = rng.uniform(-3, 3, size=n)
            f = PiecewiseLinearFn(xs, ys, left_slope=rng.uniform(-2, 0),
                                  right_slope=rng.uniform(-1, 1))
            lo = xs[0] - rng.uniform(0, 2)
            hi = xs[-1] + rng.uniform(0.1, 2)
            r = running_min(f, lo, hi)
            # oracle: the minimum over [lo, q] of a polyline is attained at a
            # knot or at an endpoint of the window
            for q in np.linspace(lo + 1e-9, hi, 37):
                cands = [f(lo), f(q)]
                cands += [f(x) for x in xs if lo <= x <= q]
                assert r(q) == pytest.approx(min(cands), abs=1e-12)


class TestExtremum:
    def test_tie_resolves_left(self):
        f = PiecewiseLinearFn([0.0, 1.0, 2.0, 3.0], [1.0, 0.0, 5.0, 0.0])
        x, v = extremum_on_interval(f, 0.0, 3.0, mode="min")
        assert (x, v) == (1.0, 0.0)

    def test_interior_max(self):
        x, v = extremum_on_interval(triangle(), 0.25, 7.0, mode="max")
        assert v == 1.0
        assert x == 1.0  # first peak in the window

    def test_endpoint_extremum(self):
        f = hat()
        x, v = extremum_on_interval(f, 2.0, 5.0, mode="min")
        assert (x, v) == (2.0, 2.0)


class TestMaterialize:
    def test_matches_on_window(self):
        sq = PiecewiseConstantFn([0.0, 1.0, 2.0], [2.0, 0.0], period=2.0)
        v = sq.antiderivative()
        m = v.materialize(-3.3, 5.7)
        xs = np.linspace(-3.3, 5.7, 311)
        assert np.allclose(m(xs), v(xs), rtol=0, atol=1e-12)
        assert m.period is None


# hypothesis strategies for small well formed polylines

@st.composite
def polylines(draw):
    n = draw(st.integers(min_value=1, max_value=6))
    xs = sorted(draw(st.lists(st.integers(-40, 40), min_size=n, max_size=n,
                              unique=True)))
    ys = draw(st.lists(st.integers(-20, 20), min_size=n, max_size=n))
    ls = draw(st.integers(-3, 3))
    rs = draw(st.integers(-3, 3))
    return PiecewiseLinearFn(np.asarray(xs, dtype=float) / 4.0,
                             np.asarray(ys, dtype=float) / 4.0,
                             left_slope=ls, right_slope=rs)


@settings(max_examples=60, deadline=None, derandomize=True)
@given(f=polylines(), g=polylines(),
       a=st.integers(-4, 4), b=st.integers(-4, 4),
       x=st.integers(-200, 200))
def test_combine_is_pointwise_linear(f, g, a, b, x):
    h = combine(f, g, float(a), float(b))
    xq = x / 7.0
    assert h(xq) == pytest.approx(a * f(xq) + b * g(xq), abs=1e-10)


@settings(max_examples=60, deadline=None, derandomize=True)
@given(f=polylines(), a=st.sampled_from([-2.0, -1.0, -0.5, 0.5, 1.0, 3.0]),
       b=st.integers(-8, 8), x=st.integers(-100, 100))
def test_compose_affine_pointwise(f, a, b, x):
    h = f.compose_affine(a, float(b))
    xq = x / 9.0
    assert h(xq) == pytest.approx(f(a * xq + b), abs=1e-10)
