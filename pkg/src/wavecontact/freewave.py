"""Unconstrained wave solutions from piecewise linear initial data.

The displacement with no obstacle is w(x, t) = f(x+t) + g(x-t), where the
traveling profiles f and g are exact piecewise linear functions built from
the initial displacement and velocity. This module also computes suprema of
the negative part of w over dependence cones, which is what the obstacle
machinery consumes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from wavecontact.piecewise import (
    PiecewiseConstantFn,
    PiecewiseLinearFn,
    combine,
    extremum_on_interval,
    running_min,
)

__all__ = [
    "InvalidInitialData",
    "InitialData",
    "RiemannPair",
    "FreeGradient",
    "decompose",
    "cone_negative_sup",
    "half_plane_infimum",
]

SQRT2 = float(np.sqrt(2.0))

# absolute tolerance for detecting exact contact with an obstacle level
_ZTOL = 1e-12


class InvalidInitialData(ValueError):
    """Initial data violates the admissibility conditions; lists every violation."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def _level_intervals(u0: PiecewiseLinearFn, level: float):
    """Maximal intervals where u0 equals ``level`` identically.

    Returns (lo, hi) pairs; lo may be -inf and hi may be +inf for aperiodic
    data whose flat extensions sit on the level. Periodic data is scanned
    over its core window only (one period represents all of them).
    """
    xs, ys = u0.xs, u0.ys
    on = np.abs(ys - level) <= _ZTOL
    spans = []
    for i in range(xs.size - 1):
        if on[i] and on[i + 1]:
            spans.append([xs[i], xs[i + 1]])
    if u0.period is None:
        if on.size and on[0] and abs(u0.left_slope) <= _ZTOL:
            spans.insert(0, [-np.inf, xs[0]])
        if on[-1] and abs(u0.right_slope) <= _ZTOL:
            spans.append([xs[-1], np.inf])
    merged = []
    for lo, hi in spans:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(a, b) for a, b in merged if b > a]


def _step_min_on_open_interval(u1: PiecewiseConstantFn, lo: float, hi: float) -> float:
    """Exact minimum of the step function over the open interval (lo, hi)."""
    cands = []
    if u1.period is not None:
        p = u1.period
        if hi - lo >= p:
            return float(np.min(u1.plateaus))
        shift = float(np.floor((lo - u1.xs[0]) / p)) * p
        starts = np.concatenate((u1.xs[:-1] + shift, u1.xs[:-1] + shift + p))
        ends = np.concatenate((u1.xs[1:] + shift, u1.xs[1:] + shift + p))
        vals = np.concatenate((u1.plateaus, u1.plateaus))
    else:
        starts, ends, vals = u1.xs[:-1], u1.xs[1:], u1.plateaus
        if lo < u1.xs[0]:
            cands.append(float(u1.left))
        if hi > u1.xs[-1]:
            cands.append(float(u1.right))
    for a, b, v in zip(starts, ends, vals):
        if b > lo and a < hi:
            cands.append(float(v))
    return min(cands)


class InitialData:
    """Validated initial displacement and velocity for the obstacle problem.

    Args:
        u0: initial displacement, piecewise linear. Must be >= 0 everywhere;
            with the upper obstacle active, additionally <= 1.
        u1: initial velocity, piecewise constant. Must be >= 0 at every
            non breakpoint abscissa where u0 = 0 (and <= 0 where u0 = 1 in
            double obstacle mode): the string may not be launched into an
            obstacle it is already touching.
        upper_obstacle_active: enables the second barrier at height 1.
        label: human readable tag carried into reports.
    """

    def __init__(self, u0: PiecewiseLinearFn, u1: PiecewiseConstantFn,
                 upper_obstacle_active: bool = False, label: str = ""):
        violations = []
        if (u0.period is None) != (u1.period is None):
            violations.append("u0 and u1 must be both periodic or both aperiodic")
        elif u0.period is not None and abs(u0.period - u1.period) > 1e-9 * u0.period:
            violations.append(f"period mismatch: u0 has {u0.period}, u1 has {u1.period}")
        if u0.period is not None and u0.drift != 0.0:
            violations.append("u0 may not have a drift term")

        if np.any(u0.ys < -_ZTOL):
            i = int(np.argmin(u0.ys))
            violations.append(f"u0 < 0 at x = {u0.xs[i]} (value {u0.ys[i]})")
        if u0.period is None:
            if u0.left_slope > _ZTOL:
                violations.append("u0 < 0 on the left extension (left_slope > 0)")
            if u0.right_slope < -_ZTOL:
                violations.append("u0 < 0 on the right extension (right_slope < 0)")

        if not violations:
            for lo, hi in _level_intervals(u0, 0.0):
                m = _step_min_on_open_interval(u1, lo, hi)
                if m < -_ZTOL:
                    violations.append(
                        f"u1 >= 0 required on {{u0=0}}: min u1 = {m} on ({lo}, {hi})")

        if upper_obstacle_active and not violations:
            if np.any(u0.ys > 1.0 + _ZTOL):
                i = int(np.argmax(u0.ys))
                violations.append(f"u0 > 1 at x = {u0.xs[i]} (value {u0.ys[i]})")
            if u0.period is None:
                # any nonzero extension slope eventually leaves [0, 1]
                if u0.left_slope < -_ZTOL or u0.right_slope > _ZTOL:
                    violations.append("u0 > 1 on an extension (double obstacle mode)")
            for lo, hi in _level_intervals(u0, 1.0):
                mx = -_step_min_on_open_interval(
                    PiecewiseConstantFn(u1.xs, -u1.plateaus, left=-u1.left,
                                        right=-u1.right, period=u1.period),
                    lo, hi)
                if mx > _ZTOL:
                    violations.append(
                        f"u1 <= 0 required on {{u0=1}}: max u1 = {mx} on ({lo}, {hi})")

        if violations:
            raise InvalidInitialData(violations)
        self.u0 = u0
        self.u1 = u1
        self.upper_obstacle_active = bool(upper_obstacle_active)
        self.label = label

    @property
    def period(self):
        return self.u0.period

    def resting_intervals(self):
        """Intervals where the string starts on the obstacle with zero velocity.

        These are grazing regions: no reflection measure is generated there,
        the string simply rests until outside waves arrive. Surfaced so that
        reports can flag the degenerate case instead of deciding it silently.
        """
        out = []
        for lo, hi in _level_intervals(self.u0, 0.0):
            sub = self.u1
            mn = _step_min_on_open_interval(sub, lo, hi)
            mx = -_step_min_on_open_interval(
                PiecewiseConstantFn(sub.xs, -sub.plateaus, left=-sub.left,
                                    right=-sub.right, period=sub.period), lo, hi)
            if abs(mn) <= _ZTOL and abs(mx) <= _ZTOL:
                out.append((lo, hi))
        return out


@dataclass(frozen=True)
class FreeGradient:
    """One sided profile slopes of the free wave at a point.

    fp_* are slopes of the left moving profile at s = x + t, gp_* of the
    right moving profile at r = x - t, each from the left and the right of
    the evaluation abscissa. When both pairs agree the point is regular.
    """

    fp_left: float
    fp_right: float
    gp_left: float
    gp_right: float

    @property
    def flagged(self) -> bool:
        return self.fp_left != self.fp_right or self.gp_left != self.gp_right

    # canonical (right continuous) values
    @property
    def space(self) -> float:
        return self.fp_right + self.gp_right

    @property
    def time(self) -> float:
        return self.fp_right - self.gp_right

    @property
    def along_up_right(self) -> float:
        """Derivative along the (1,1)/sqrt(2) characteristic direction."""
        return SQRT2 * self.fp_right

    @property
    def along_up_left(self) -> float:
        """Derivative along the (-1,1)/sqrt(2) characteristic direction."""
        return -SQRT2 * self.gp_right

    def as_tuple(self):
        """(space, time, up-right characteristic, up-left characteristic)."""
        return (self.space, self.time, self.along_up_right, self.along_up_left)


class RiemannPair:
    """Traveling wave decomposition w(x,t) = left_moving(x+t) + right_moving(x-t)."""

    def __init__(self, left_moving: PiecewiseLinearFn, right_moving: PiecewiseLinearFn):
        self.left_moving = left_moving
        self.right_moving = right_moving
        self._dl = left_moving.derivative()
        self._dr = right_moving.derivative()

    @property
    def period(self):
        return self.left_moving.period

    def value(self, x, t):
        """Free displacement at (x, t); t >= 0 is required."""
        if np.any(np.asarray(t) < 0):
            raise ValueError("free wave evaluation requires t >= 0")
        return self.left_moving(np.asarray(x) + t) + self.right_moving(np.asarray(x) - t)

    def value_on_line(self, x: np.ndarray, t: float) -> np.ndarray:
        if t < 0:
            raise ValueError("free wave evaluation requires t >= 0")
        x = np.asarray(x, dtype=float)
        return self.left_moving(x + t) + self.right_moving(x - t)

    def gradient(self, x: float, t: float) -> FreeGradient:
        """One sided slope data at a single point; see FreeGradient."""
        if t < 0:
            raise ValueError("free wave evaluation requires t >= 0")
        s = x + t
        r = x - t
        return FreeGradient(
            fp_left=float(self._dl(s, side="left")),
            fp_right=float(self._dl(s)),
            gp_left=float(self._dr(r, side="left")),
            gp_right=float(self._dr(r)),
        )

    def profile_slopes(self, s, r):
        """Vectorized right continuous profile slopes at s = x+t, r = x-t."""
        return self._dl(s), self._dr(r)


def decompose(data: InitialData) -> RiemannPair:
    """Exact traveling profile pair for the given initial data.

    The profiles satisfy left(s) + right(s) = u0(s) for every s and
    left'(s) - right'(s) = u1(s) away from breakpoints, which pins them down
    up to the constant split (fixed by anchoring the velocity integral at 0).
    """
    v = data.u1.antiderivative(anchor=0.0, base=0.0)
    if v.period is not None and v.drift != 0.0:
        # a mean below float resolution of the velocity values is summation
        # noise, not intent; snap it so the pair is exactly periodic
        vel_scale = float(np.max(np.abs(data.u1.plateaus)))
        if abs(v.drift) <= 1e-13 * max(vel_scale, 1e-300):
            v = PiecewiseLinearFn(v.xs, v.ys, period=v.period, drift=0.0)
    f = combine(data.u0, v, 0.5, 0.5)
    g = combine(data.u0, v, 0.5, -0.5)
    return RiemannPair(f.simplify(), g.simplify())


def cone_negative_sup(pair: RiemannPair, x: float, t: float,
                      direction: str = "dependence") -> float:
    """Supremum of max(-w, 0) over the closed dependence cone of (x, t).

    The cone is {(x', t') : 0 <= t' <= t - |x - x'|}. In traveling
    coordinates s = x+t, r = x-t the cone is {r <= r' <= s' <= s}, so the
    minimum of w = f(s') + g(r') is min over r' of g(r') + min(f over
    [r', s]), an exact running minimum computation on polylines.
    """
    if direction != "dependence":
        raise ValueError("only the dependence cone is bounded; "
                         "influence queries are not supported")
    if t < 0:
        raise ValueError("cone apex must have t >= 0")
    s_a = x + t
    r_a = x - t
    if t == 0:
        return max(0.0, -float(pair.value(x, 0.0)))
    reflected = pair.left_moving.compose_affine(-1.0, 0.0)
    rm = running_min(reflected, -s_a, -r_a)
    min_left = rm.compose_affine(-1.0, 0.0)  # min of f over [r', s_a]
    obj = combine(pair.right_moving.materialize(r_a, s_a), min_left, 1.0, 1.0)
    _, m = extremum_on_interval(obj, r_a, s_a, mode="min")
    return max(0.0, -m)


def half_plane_infimum(pair: RiemannPair) -> float:
    """Infimum of the free wave over the whole half plane t >= 0.

    May return -inf. The sign of the result is always exact; a nonnegative
    return certifies that w never goes strictly negative, so the obstacle is
    never activated. For initial data violating the admissibility conditions
    the returned magnitude can be an underestimate on the t = 0 boundary,
    which does not affect the sign.
    """
    f, g = pair.left_moving, pair.right_moving
    if f.period is not None:
        p = f.period
        if f.drift < 0 or g.drift > 0:
            return float("-inf")
        if f.drift == 0.0 and g.drift == 0.0:
            return float(np.min(f.ys)) + float(np.min(g.ys))
        # rising f, falling g: the objective r -> g(r) + min(f over [r, r+p])
        # is exactly periodic, so one window suffices
        x0 = float(g.xs[0])
        reflected = f.compose_affine(-1.0, 0.0)
        rm = running_min(reflected, -(x0 + 2.0 * p), -x0)
        min_left = rm.compose_affine(-1.0, 0.0)
        obj = combine(g.materialize(x0, x0 + p), min_left.materialize(x0, x0 + p), 1.0, 1.0)
        return extremum_on_interval(obj, x0, x0 + p, mode="min")[1]
    if f.right_slope < 0 or g.left_slope > 0:
        return float("-inf")
    if f.right_slope + g.right_slope < 0 or f.left_slope + g.left_slope > 0:
        return float("-inf")
    k0 = min(float(f.xs[0]), float(g.xs[0])) - 1.0
    k1 = max(float(f.xs[-1]), float(g.xs[-1])) + 1.0
    reflected = f.compose_affine(-1.0, 0.0)
    rm = running_min(reflected, -k1, -k0)
    min_left = rm.compose_affine(-1.0, 0.0)
    obj = combine(g.materialize(k0, k1), min_left, 1.0, 1.0)
    return extremum_on_interval(obj, k0, k1, mode="min")[1]
