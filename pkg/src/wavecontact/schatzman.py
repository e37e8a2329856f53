"""Explicit solution field for the wave equation over a zero obstacle.

The displacement splits as u = w + (1/2) mu(K(x,t)) where w is the free
field, mu a nonnegative measure carried by the first-contact curve, and
K(x,t) the closed backward light cone of the evaluation point. Because
the carrying curve tau is 1-Lipschitz, the portion of the curve inside a
cone is a single parameter interval [z-, z+] cut out by the two monotone
maps z -> z + tau(z) and z -> z - tau(z); cone masses therefore resolve
in closed form, exactly on piecewise linear data.

Derivatives transport along characteristics: crossing the curve on an
arc that is not itself characteristic flips the sign of the incoming
characteristic derivative. Points where that rule is ambiguous (on the
curve, or on a characteristic through a kink of either the curve or the
initial data) are flagged and reported with both one sided limits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contact import (DEFAULT_TOL_SLOPE, ContactCurve, CurveVerificationError,
                      EmptyContact, classify, negativity_frontier)
from .freewave import InitialData, RiemannPair, decompose
from .piecewise import PiecewiseConstantFn

SQRT2 = np.sqrt(2.0)


class _MonotoneEnvelope:
    """Non-decreasing piecewise linear map with exact one sided inverses.

    Args:
        xs: knot abscissas, strictly increasing.
        ys: knot values, non-decreasing.
        left_slope: slope left of xs[0] (0 means a constant tail).
        right_slope: slope right of xs[-1].
        x_period: abscissa period for quasi-periodic maps.
        y_shift: value gained over one abscissa period, positive.
    """

    def __init__(self, xs, ys, left_slope, right_slope,
                 x_period=None, y_shift=None):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float).copy()
        if x_period is not None:
            if abs(ys[-1] - (ys[0] + y_shift)) > 1e-9 * (1.0 + abs(y_shift)):
                raise ValueError("envelope seam mismatch")
            ys[-1] = ys[0] + y_shift
        # coordinate changes can leave 1 ulp of non-monotonicity
        ys = np.maximum.accumulate(ys)
        self.xs = xs
        self.ys = ys
        self.left_slope = float(left_slope)
        self.right_slope = float(right_slope)
        self.x_period = x_period
        self.y_shift = y_shift

    def _reduce(self, c, upper):
        """Map c into the fundamental value band; returns (c, x shift)."""
        ys = self.ys
        k = np.floor((c - ys[0]) / self.y_shift)
        c -= k * self.y_shift
        shift = k * self.x_period
        low = c < ys[0] if upper else c <= ys[0]
        high = c >= ys[-1] if upper else c > ys[-1]
        if low:
            c += self.y_shift
            shift -= self.x_period
        elif high:
            c -= self.y_shift
            shift += self.x_period
        return c, shift

    def sup_at_most(self, c):
        """sup{z : value(z) <= c}; -inf when no z qualifies."""
        xs, ys = self.xs, self.ys
        c = float(c)
        shift = 0.0
        if self.x_period is not None:
            c, shift = self._reduce(c, upper=True)
        else:
            if c < ys[0]:
                if self.left_slope == 0.0:
                    return -np.inf
                return float(xs[0] + (c - ys[0]) / self.left_slope)
            if c >= ys[-1]:
                if self.right_slope == 0.0:
                    return np.inf
                return float(xs[-1] + (c - ys[-1]) / self.right_slope)
        idx = int(np.searchsorted(ys, c, side="right"))
        idx = min(max(idx, 1), ys.size - 1)
        y0, y1 = float(ys[idx - 1]), float(ys[idx])
        x0, x1 = float(xs[idx - 1]), float(xs[idx])
        if y1 <= y0:
            return x1 + shift
        return float(x0 + (x1 - x0) * (c - y0) / (y1 - y0)) + shift

    def inf_at_least(self, c):
        """inf{z : value(z) >= c}; +inf when no z qualifies."""
        xs, ys = self.xs, self.ys
        c = float(c)
        shift = 0.0
        if self.x_period is not None:
            c, shift = self._reduce(c, upper=False)
        else:
            if c <= ys[0]:
                if self.left_slope == 0.0:
                    return -np.inf
                return float(xs[0] + (c - ys[0]) / self.left_slope)
            if c > ys[-1]:
                if self.right_slope == 0.0:
                    return np.inf
                return float(xs[-1] + (c - ys[-1]) / self.right_slope)
        idx = int(np.searchsorted(ys, c, side="left"))
        idx = min(max(idx, 1), ys.size - 1)
        y0, y1 = float(ys[idx - 1]), float(ys[idx])
        x0, x1 = float(xs[idx - 1]), float(xs[idx])
        if y1 <= y0:
            return x0 + shift
        return float(x0 + (x1 - x0) * (c - y0) / (y1 - y0)) + shift


def _cone_envelopes(curve):
    # x + tau and x - tau along the curve are sqrt(2)*xi and -sqrt(2)*eta
    # of the staircase vertices, monotone by construction
    px = curve.seg_x
    P = curve.period
    a_env = _MonotoneEnvelope(px, SQRT2 * curve.vxi, 0.0, 2.0,
                              x_period=P, y_shift=P)
    c_env = _MonotoneEnvelope(px, -SQRT2 * curve.veta, 2.0, 0.0,
                              x_period=P, y_shift=P)
    return a_env, c_env


class ReflectionMeasure:
    """Reflection measure carried by a contact curve.

    Absolutely continuous in x with piecewise constant density
    -2 (1 - slope^2) w_t(x, curve(x)) on each affine piece of the curve;
    characteristic pieces and pieces pinned at height zero carry nothing.

    Args:
        sigma: the carrying curve (ContactCurve or EmptyContact).
        density: density in x as a PiecewiseConstantFn, or None when the
            measure vanishes identically.
        segments: per piece records (x0, x1, curve slope, density value).
        per_period_mass: mass of one period, for periodic curves.
    """

    def __init__(self, sigma, density, segments, per_period_mass=None):
        self.sigma = sigma
        self.density = density
        self.segments = list(segments)
        self.per_period_mass = per_period_mass
        if density is None:
            self.mass = None
            self._a_env = None
            self._c_env = None
        else:
            anchor = float(density.xs[0])
            self.mass = density.antiderivative(anchor=anchor, base=0.0)
            self._a_env, self._c_env = _cone_envelopes(sigma)

    @property
    def is_empty(self):
        return self.density is None

    def total_mass(self):
        if self.density is None:
            return 0.0
        if self.density.period is not None:
            raise ValueError("periodic measure: use per_period_mass")
        return float(self.mass.ys[-1] - self.mass.ys[0])

    def cone_mass(self, x, t):
        """Measure of the closed backward cone of (x, t).

        Exactly zero whenever the cone misses the curve, so adding half
        of it to the free field leaves free-region values untouched.
        """
        if self.density is None:
            return 0.0
        zp = self._a_env.sup_at_most(x + t)
        zm = self._c_env.inf_at_least(x - t)
        if not zm < zp:
            return 0.0
        return max(0.0, float(self.mass(zp) - self.mass(zm)))


def _profile_crossings(pair, x0, x1, t0, a):
    """Split points of [x0, x1] where a characteristic drawn from the
    affine curve piece t = t0 + a (x - x0) crosses a profile knot."""
    t1 = t0 + a * (x1 - x0)
    s0, s1 = x0 + t0, x1 + t1
    r0, r1 = x0 - t0, x1 - t1
    cuts = [x0, x1]
    if s1 > s0:
        for k in pair.left_moving.materialize(s0, s1).xs[1:-1]:
            cuts.append(x0 + (float(k) - s0) / (1.0 + a))
    if r1 > r0:
        for k in pair.right_moving.materialize(r0, r1).xs[1:-1]:
            cuts.append(x0 + (float(k) - r0) / (1.0 - a))
    return np.unique(np.clip(np.asarray(cuts, dtype=float), x0, x1))


def build_measure(pair: RiemannPair, sigma, *, tol: float = 1e-7):
    """Reflection measure of the free field w along a carrying curve.

    Accepts any admissible curve, not only the first-contact one. Pieces
    are subdivided where a characteristic through them crosses a knot of
    either traveling profile, so the density is exact on piecewise
    linear data. Raises ValueError when the curve dips below the
    obstacle and CurveVerificationError when a density value lands below
    -tol, which signals a curve the free field does not press against.
    """
    if getattr(sigma, "is_empty", False):
        return ReflectionMeasure(sigma, None, [])
    tscale = 1.0 + float(np.max(np.abs(sigma.seg_t)))
    if float(np.min(sigma.seg_t)) < -1e-12 * tscale:
        raise ValueError("carrying curve must stay at or above the obstacle")
    knots = [float(sigma.seg_x[0])]
    dens = []
    segments = []
    for k in range(sigma.seg_slope.size):
        x0 = float(sigma.seg_x[k])
        x1 = float(sigma.seg_x[k + 1])
        if x1 <= x0:
            continue
        a = float(sigma.seg_slope[k])
        t0 = float(sigma.seg_t[k])
        t1 = float(sigma.seg_t[k + 1])
        # pieces pinned at height zero reflect nothing: the obstacle is
        # only reached, never pressed, at time zero
        if (not sigma.active[k]) or max(t0, t1) <= 0.0:
            knots.append(x1)
            dens.append(0.0)
            segments.append((x0, x1, a, 0.0))
            continue
        for lo, hi in zip(*(lambda c: (c[:-1], c[1:]))(
                _profile_crossings(pair, x0, x1, t0, a))):
            if hi <= lo:
                continue
            xm = 0.5 * (lo + hi)
            tm = t0 + a * (xm - x0)
            fp, gp = pair.profile_slopes(xm + tm, xm - tm)
            m = -2.0 * (1.0 - a * a) * (float(fp) - float(gp))
            if m < -tol:
                raise CurveVerificationError(
                    "negative reflection density {:.3e} at x={:.6g}: the "
                    "free field does not press on this curve".format(m, xm))
            knots.append(float(hi))
            dens.append(m)
            segments.append((float(lo), float(hi), a, m))
    if sigma.period is not None:
        density = PiecewiseConstantFn(knots, dens, period=sigma.period)
        widths = np.diff(np.asarray(knots))
        ppm = float(np.sum(np.asarray(dens) * widths))
        return ReflectionMeasure(sigma, density, segments,
                                 per_period_mass=ppm)
    density = PiecewiseConstantFn(knots, dens, left=0.0, right=0.0)
    return ReflectionMeasure(sigma, density, segments)


_REGIONS = {(1, 1): "free", (-1, 1): "flipped-xi",
            (1, -1): "flipped-eta", (-1, -1): "flipped-both"}


@dataclass(frozen=True)
class TransportGradient:
    """Transported derivatives of the solution at one point.

    uxi and ueta are the derivatives along the two upward characteristic
    directions, ux and ut the Cartesian ones. At flagged points the
    plain fields hold the limit from the right in x and both one sided
    limits are attached.
    """

    uxi: float
    ueta: float
    ux: float
    ut: float
    region: str
    flagged: bool = False
    left: "TransportGradient | None" = None
    right: "TransportGradient | None" = None

    def __iter__(self):
        return iter((self.uxi, self.ueta, self.ux, self.ut))


class SolutionField:
    """Obstacle-problem solution bundled with its ingredients.

    Args:
        pair: traveling wave decomposition of the free field.
        curve: first-contact curve (or EmptyContact when the free field
            never goes negative).
        measure: reflection measure carried by the curve.
    """

    def __init__(self, pair: RiemannPair, curve, measure: ReflectionMeasure):
        self.pair = pair
        self.curve = curve
        self.measure = measure
        self.period = pair.period

    @property
    def is_free(self):
        return self.measure.is_empty

    def _check_point(self, x, t):
        if t < 0:
            raise ValueError("field evaluation requires t >= 0")
        curve = self.curve
        if not curve.is_empty and curve.valid_x is not None:
            lo, hi = curve.valid_x
            if x - t < lo or x + t > hi:
                raise ValueError(
                    "cone of (x={:g}, t={:g}) leaves the certified "
                    "window [{:g}, {:g}]".format(x, t, lo, hi))

    # -- values --------------------------------------------------------------

    def value(self, x, t):
        """u(x, t); equals the free field exactly off the influence region."""
        x = float(x)
        t = float(t)
        self._check_point(x, t)
        w = float(self.pair.value(x, t))
        dm = self.measure.cone_mass(x, t)
        if dm <= 0.0:
            return w
        return w + 0.5 * dm

    def value_on_line(self, xs, t):
        return np.array([self.value(x, t) for x in np.asarray(xs, float)])

    # -- derivatives ---------------------------------------------------------

    def gradient(self, x, t) -> TransportGradient:
        """Transported derivatives at (x, t); flagged points carry limits."""
        x = float(x)
        t = float(t)
        self._check_point(x, t)
        g = self._gradient_plain(x, t)
        if g is not None:
            return g
        left = self._one_sided(x, t, -1.0)
        right = self._one_sided(x, t, +1.0)
        return TransportGradient(right.uxi, right.ueta, right.ux, right.ut,
                                 right.region, flagged=True,
                                 left=left, right=right)

    def _gradient_plain(self, x, t):
        """Unflagged transported gradient, or None when ambiguous."""
        free = self.pair.gradient(x, t)
        if free.flagged:
            return None
        eps_xi = 1
        eps_eta = 1
        curve = self.curve
        if not curve.is_empty:
            xi = (x + t) / SQRT2
            eta = (t - x) / SQRT2
            floor = curve.floor_eta(xi)
            if eta == floor:
                return None
            if eta > floor:
                sl = curve.column_crossing_slope(xi)
                if np.isnan(sl):
                    return None
                if sl < 1.0:
                    eps_xi = -1
            ridge = curve.floor_inverse(eta)
            if xi == ridge:
                return None
            if xi > ridge:
                sl = curve.level_crossing_slope(eta)
                if np.isnan(sl):
                    return None
                if sl > -1.0:
                    eps_eta = -1
        uxi = eps_xi * SQRT2 * free.fp_right
        ueta = eps_eta * (-SQRT2) * free.gp_right
        return TransportGradient(uxi, ueta, (uxi - ueta) / SQRT2,
                                 (uxi + ueta) / SQRT2,
                                 _REGIONS[(eps_xi, eps_eta)])

    def _jump_abscissas(self, x, t):
        """Abscissas at time t where the gradient can jump, near x."""
        s = x + t
        r = x - t
        out = []
        for k in self.pair.left_moving.materialize(s - 1.0, s + 1.0).xs:
            out.append(float(k) - t)
        for k in self.pair.right_moving.materialize(r - 1.0, r + 1.0).xs:
            out.append(float(k) + t)
        curve = self.curve
        if not curve.is_empty:
            tau = curve.tau
            tmax = curve.max_tau()
            up = tau.materialize(s - tmax - 1.0, s + 1.0)
            for xv, tv in zip(up.xs, up.ys):
                out.append(float(xv) + float(tv) - t)  # same xi column
            dn = tau.materialize(r - 1.0, r + tmax + 1.0)
            for xv, tv in zip(dn.xs, dn.ys):
                out.append(float(xv) - float(tv) + t)  # same eta level
            near = tau.materialize(x - 1.0, x + 1.0)
            for i in range(near.xs.size - 1):
                t0 = float(near.ys[i])
                t1 = float(near.ys[i + 1])
                if t0 == t:
                    out.append(float(near.xs[i]))
                if (t0 - t) * (t1 - t) < 0:
                    frac = (t - t0) / (t1 - t0)
                    out.append(float(near.xs[i])
                               + frac * float(near.xs[i + 1] - near.xs[i]))
            if float(near.ys[-1]) == t:
                out.append(float(near.xs[-1]))
        return out

    def _jump_ordinates(self, x, t):
        """Times at abscissa x where the gradient can jump, near t."""
        s = x + t
        r = x - t
        out = []
        for k in self.pair.left_moving.materialize(s - 1.0, s + 1.0).xs:
            out.append(float(k) - x)
        for k in self.pair.right_moving.materialize(r - 1.0, r + 1.0).xs:
            out.append(x - float(k))
        curve = self.curve
        if not curve.is_empty:
            tau = curve.tau
            tmax = curve.max_tau()
            out.append(float(tau(x)))
            up = tau.materialize(s - tmax - 1.0, s + 1.0)
            for xv, tv in zip(up.xs, up.ys):
                out.append(float(xv) + float(tv) - x)
            dn = tau.materialize(r - 1.0, r + tmax + 1.0)
            for xv, tv in zip(dn.xs, dn.ys):
                out.append(x - float(xv) + float(tv))
        return out

    def _one_sided(self, x, t, side):
        # candidates closer than float noise are the flagged line itself,
        # not a neighboring feature; never probe below that scale
        eps = 1e-12 * (1.0 + abs(x) + abs(t))
        gaps = [abs(c - x) for c in self._jump_abscissas(x, t)
                if side * (c - x) > eps]
        step = 0.25 if not gaps else min(0.25, 0.5 * min(gaps))
        while step > eps:
            g = self._gradient_plain(x + side * step, t)
            if g is not None:
                return g
            step *= 0.5
        # the ambiguity line is tangent to the time slice (a curve piece at
        # constant t, say); report the limits from below and above in time
        tgaps = [abs(c - t) for c in self._jump_ordinates(x, t)
                 if side * (c - t) > eps]
        step = 0.25 if not tgaps else min(0.25, 0.5 * min(tgaps))
        if side < 0:
            step = min(step, 0.5 * t)
        while step > eps:
            g = self._gradient_plain(x, t + side * step)
            if g is not None:
                return g
            step *= 0.5
        raise CurveVerificationError(
            "one sided gradient did not resolve at x={:g}, t={:g}".format(x, t))


def solve(data: InitialData, x_window=None, *,
          tol_slope: float = DEFAULT_TOL_SLOPE,
          tol_contact: float = 1e-7,
          tol_measure: float = 1e-7) -> SolutionField:
    """InitialData -> SolutionField: decompose, locate, certify, weigh."""
    pair = decompose(data)
    curve = negativity_frontier(pair, x_window=x_window, tol_slope=tol_slope)
    if curve.is_empty:
        return SolutionField(pair, curve, ReflectionMeasure(curve, None, []))
    classify(curve, pair, tol_contact=tol_contact)
    measure = build_measure(pair, curve, tol=tol_measure)
    return SolutionField(pair, curve, measure)


def eval_u(field: SolutionField, x, t):
    """Solution value u(x, t)."""
    return field.value(x, t)


def transport_derivatives(field: SolutionField, x, t) -> TransportGradient:
    """(uxi, ueta, ux, ut) at (x, t), with one sided limits when flagged."""
    return field.gradient(x, t)


def _resolve_window(field, window):
    if window is not None:
        lo, hi = float(window[0]), float(window[1])
        if not hi > lo:
            raise ValueError("window needs hi > lo")
        return lo, hi
    if field.period is not None:
        lo = float(field.pair.left_moving.xs[0])
        return lo, lo + field.period
    curve = field.curve
    if not curve.is_empty and curve.valid_x is not None:
        return curve.valid_x
    raise ValueError("aperiodic field needs an explicit x window")


def lipschitz_norms(field: SolutionField, t, window=None):
    """Sup norms (|ux - ut|, |ux + ut|, |grad u|) over a window at time t.

    Exact suprema over the piecewise constant derivative cells, never a
    sample maximum. The defaults are one period for periodic fields and
    the certified window otherwise. Sign flips at reflections leave all
    three invariant, so they equal the free-field suprema over the
    shifted profile windows.
    """
    if t < 0:
        raise ValueError("field evaluation requires t >= 0")
    lo, hi = _resolve_window(field, window)
    pair = field.pair
    lip_plus = 2.0 * pair.left_moving.derivative().abs_sup(lo + t, hi + t)
    lip_minus = 2.0 * pair.right_moving.derivative().abs_sup(lo - t, hi - t)
    fb = pair.left_moving.materialize(lo + t, hi + t).xs - t
    gb = pair.right_moving.materialize(lo - t, hi - t).xs + t
    cuts = np.unique(np.clip(np.concatenate((fb, gb)), lo, hi))
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    if mids.size == 0:
        mids = np.array([0.5 * (lo + hi)])
    fp, gp = pair.profile_slopes(mids + t, mids - t)
    grad = float(np.sqrt(np.max(2.0 * fp * fp + 2.0 * gp * gp)))
    return lip_minus, lip_plus, grad


def energy(field: SolutionField, t, window=None):
    """Integral of ux^2 + ut^2 over a window at time t, exact per piece."""
    if t < 0:
        raise ValueError("field evaluation requires t >= 0")
    lo, hi = _resolve_window(field, window)

    def sq(profile, a, b):
        m = profile.materialize(a, b)
        dx = np.diff(m.xs)
        dy = np.diff(m.ys)
        return float(np.sum(dy * dy / dx))

    return 2.0 * (sq(field.pair.left_moving, lo + t, hi + t)
                  + sq(field.pair.right_moving, lo - t, hi - t))


def reflection_check(field: SolutionField, x, dt):
    """Transported u_t just before and after the contact time above x.

    Returns (before, after) at times tau(x) -+ dt. Rejects points whose
    contact is grazing: there the curve is characteristic and the
    velocity does not flip.
    """
    curve = field.curve
    if curve.is_empty:
        raise ValueError("free field: no contact happens anywhere")
    x = float(x)
    dt = float(dt)
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    seg = curve.seg_x
    xr = x
    if curve.period is not None:
        xr = x - np.floor((x - seg[0]) / curve.period) * curve.period
        xr = min(max(xr, float(seg[0])), float(seg[-1]))
    j = int(np.searchsorted(seg, xr, side="right")) - 1
    j = min(max(j, 0), curve.seg_slope.size - 1)
    if not curve.active[j]:
        raise ValueError(
            "no reflection at x={:g}: contact there is grazing (the curve "
            "is characteristic), the velocity does not flip".format(x))
    tc = float(curve.tau(x))
    if dt >= tc:
        raise ValueError("dt must stay below the contact time")
    before = field.gradient(x, tc - dt)
    after = field.gradient(x, tc + dt)
    return float(before.ut), float(after.ut)
