"""Exact algebra for piecewise linear and piecewise constant functions.

Every curve in this package (initial displacement, Riemann profiles, contact
fronts, mass antiderivatives) is a polyline with finitely many breakpoints,
possibly periodic, possibly with a linear growth term on top of the periodic
core. All operations here are closed form: evaluation, affine reparametrization,
linear combination, differentiation, antidifferentiation, running minimum and
windowed extrema introduce no discretization error beyond float rounding.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "IncompatiblePeriods",
    "PiecewiseLinearFn",
    "PiecewiseConstantFn",
    "combine",
    "running_min",
    "extremum_on_interval",
]

# Relative snap tolerance for seam closure of periodic data.
_SNAP = 1e-9


class IncompatiblePeriods(ValueError):
    """Raised when combining functions whose periodic structures disagree."""


def _arr(values) -> np.ndarray:
    out = np.asarray(values, dtype=float)
    if out.ndim != 1:
        raise ValueError("expected a one dimensional sequence")
    return out


class PiecewiseLinearFn:
    """Continuous piecewise linear function on the real line.

    Args:
        xs: strictly increasing breakpoint abscissas.
        ys: values at the breakpoints.
        left_slope: slope of the affine extension left of ``xs[0]``
            (aperiodic functions only).
        right_slope: slope of the affine extension right of ``xs[-1]``.
        period: if given, the breakpoints must span exactly one period and
            the function repeats, up to the ``drift`` growth term.
        drift: linear growth per unit abscissa across periods, so that
            ``f(x + period) = f(x) + drift * period``. Only meaningful with
            ``period``; the seam value ``ys[-1]`` must equal
            ``ys[0] + drift * period``.
    """

    __slots__ = ("xs", "ys", "left_slope", "right_slope", "period", "drift")

    def __init__(self, xs, ys, left_slope=0.0, right_slope=0.0,
                 period=None, drift=0.0):
        xs = _arr(xs)
        ys = _arr(ys)
        if xs.size != ys.size or xs.size == 0:
            raise ValueError("xs and ys must be equal length and nonempty")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if period is not None:
            period = float(period)
            if period <= 0:
                raise ValueError("period must be positive")
            if xs.size < 2:
                raise ValueError("periodic function needs a closed window")
            scale = max(1.0, abs(period))
            if abs((xs[-1] - xs[0]) - period) > _SNAP * scale:
                raise ValueError("breakpoints must span exactly one period")
            xs = xs.copy()
            xs[-1] = xs[0] + period
            yscale = max(1.0, float(np.max(np.abs(ys))))
            if abs(ys[-1] - (ys[0] + drift * period)) > _SNAP * yscale:
                raise ValueError("periodic seam mismatch between ys[0] and ys[-1]")
            ys = ys.copy()
            ys[-1] = ys[0] + drift * period
        elif drift != 0.0:
            raise ValueError("drift requires a period")
        self.xs = xs
        self.ys = ys
        self.left_slope = float(left_slope)
        self.right_slope = float(right_slope)
        self.period = period
        self.drift = float(drift)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        xv = np.atleast_1d(x)
        if self.period is not None:
            p = self.period
            k = np.floor((xv - self.xs[0]) / p)
            xr = np.clip(xv - k * p, self.xs[0], self.xs[-1])
            out = np.interp(xr, self.xs, self.ys) + k * (self.drift * p)
        else:
            out = np.interp(xv, self.xs, self.ys)
            lo = xv < self.xs[0]
            hi = xv > self.xs[-1]
            if np.any(lo):
                out[lo] = self.ys[0] + self.left_slope * (xv[lo] - self.xs[0])
            if np.any(hi):
                out[hi] = self.ys[-1] + self.right_slope * (xv[hi] - self.xs[-1])
        return float(out[0]) if scalar else out

    def slope_at(self, x, side="right"):
        """Slope of the segment touching ``x`` on the given side."""
        if self.period is not None:
            p = self.period
            x = x - np.floor((x - self.xs[0]) / p) * p
            # the seam behaves like an interior point of the periodic core
            if side == "left" and x <= self.xs[0]:
                x = self.xs[0] + p
        if side == "right":
            if x >= self.xs[-1]:
                return self.right_slope if self.period is None else self._seg_slope(0)
            i = int(np.searchsorted(self.xs, x, side="right"))
            if i == 0:
                return self.left_slope
            return self._seg_slope(min(i - 1, self.xs.size - 2)) if i <= self.xs.size - 1 else self.right_slope
        else:
            if x <= self.xs[0]:
                return self.left_slope if self.period is None else self._seg_slope(self.xs.size - 2)
            i = int(np.searchsorted(self.xs, x, side="left"))
            if i >= self.xs.size:
                return self.right_slope
            return self._seg_slope(max(i - 1, 0))

    def _seg_slope(self, i):
        return (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i])

    # -- calculus -----------------------------------------------------------

    def derivative(self) -> "PiecewiseConstantFn":
        """Exact derivative as a right continuous piecewise constant function."""
        if self.xs.size == 1:
            return PiecewiseConstantFn(self.xs, [], left=self.left_slope,
                                       right=self.right_slope)
        slopes = np.diff(self.ys) / np.diff(self.xs)
        if self.period is not None:
            return PiecewiseConstantFn(self.xs, slopes, period=self.period)
        return PiecewiseConstantFn(self.xs, slopes, left=self.left_slope,
                                   right=self.right_slope)

    def compose_affine(self, a: float, b: float) -> "PiecewiseLinearFn":
        """Return ``h(x) = self(a * x + b)`` with ``a != 0``."""
        a = float(a)
        b = float(b)
        if a == 0.0:
            raise ValueError("compose_affine requires a nonzero inner slope")
        nx = (self.xs - b) / a
        ny = self.ys.copy()
        if a < 0:
            nx = nx[::-1]
            ny = ny[::-1]
        if self.period is not None:
            return PiecewiseLinearFn(nx, ny, period=self.period / abs(a),
                                     drift=a * self.drift)
        if a > 0:
            ls, rs = a * self.left_slope, a * self.right_slope
        else:
            ls, rs = a * self.right_slope, a * self.left_slope
        return PiecewiseLinearFn(nx, ny, left_slope=ls, right_slope=rs)

    def shift(self, dx: float) -> "PiecewiseLinearFn":
        """Return ``h(x) = self(x - dx)``, the graph moved right by ``dx``."""
        h = self.compose_affine(1.0, -dx)
        return h

    def materialize(self, lo: float, hi: float) -> "PiecewiseLinearFn":
        """Aperiodic copy that agrees with self on [lo, hi].

        The extension slopes of the copy equal the local slopes of self just
        inside the window, so evaluation slightly outside stays consistent.
        """
        if not hi > lo:
            raise ValueError("materialize needs hi > lo")
        if self.period is None:
            inner = self.xs[(self.xs > lo) & (self.xs < hi)]
        else:
            p = self.period
            core = self.xs[:-1]
            k0 = np.floor((lo - self.xs[0]) / p)
            k1 = np.floor((hi - self.xs[0]) / p)
            ks = np.arange(k0, k1 + 1)
            inner = (core[None, :] + ks[:, None] * p).ravel()
            inner = inner[(inner > lo) & (inner < hi)]
            inner = np.unique(inner)
        nx = np.concatenate(([lo], inner, [hi]))
        nx = np.unique(nx)
        ny = self(nx)
        return PiecewiseLinearFn(nx, ny,
                                 left_slope=self.slope_at(lo, side="right"),
                                 right_slope=self.slope_at(hi, side="left"))

    def simplify(self) -> "PiecewiseLinearFn":
        """Drop interior breakpoints where the two adjacent slopes agree exactly."""
        if self.xs.size <= 2:
            return self
        xs, ys = self.xs, self.ys
        keep = [0]
        for i in range(1, xs.size - 1):
            lhs = (ys[i] - ys[i - 1]) * (xs[i + 1] - xs[i])
            rhs = (ys[i + 1] - ys[i]) * (xs[i] - xs[i - 1])
            if lhs != rhs:
                keep.append(i)
        keep.append(xs.size - 1)
        return PiecewiseLinearFn(xs[keep], ys[keep], self.left_slope,
                                 self.right_slope, self.period, self.drift)

    def __repr__(self):
        tag = f", period={self.period}" if self.period is not None else ""
        if self.drift:
            tag += f", drift={self.drift}"
        return f"PiecewiseLinearFn({self.xs.size} knots on [{self.xs[0]}, {self.xs[-1]}]{tag})"


class PiecewiseConstantFn:
    """Right continuous step function on the real line.

    Args:
        xs: strictly increasing breakpoints, length n.
        plateaus: values on the open cells between breakpoints, length n - 1.
        left: value left of ``xs[0]`` (aperiodic only).
        right: value right of ``xs[-1]`` and at ``xs[-1]`` itself.
        period: if given, breakpoints span one period and values repeat.
    """

    __slots__ = ("xs", "plateaus", "left", "right", "period")

    def __init__(self, xs, plateaus, left=0.0, right=0.0, period=None):
        xs = _arr(xs)
        plateaus = _arr(plateaus)
        if xs.size == 0 or plateaus.size != xs.size - 1:
            raise ValueError("need n breakpoints and n - 1 plateau values")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if period is not None:
            period = float(period)
            scale = max(1.0, abs(period))
            if xs.size < 2 or abs((xs[-1] - xs[0]) - period) > _SNAP * scale:
                raise ValueError("breakpoints must span exactly one period")
            xs = xs.copy()
            xs[-1] = xs[0] + period
        self.xs = xs
        self.plateaus = plateaus
        self.left = float(left)
        self.right = float(right)
        self.period = period

    def __call__(self, x, side="right"):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        xv = np.atleast_1d(x).copy()
        if self.period is not None:
            p = self.period
            xv = xv - np.floor((xv - self.xs[0]) / p) * p
            xv = np.clip(xv, self.xs[0], self.xs[-1])
            idx = np.searchsorted(self.xs, xv, side=side)
            if side == "right":
                idx = np.clip(idx, 1, self.plateaus.size)
            else:
                # left limit at the seam wraps to the last plateau
                idx = np.where(idx == 0, self.plateaus.size, idx)
                idx = np.clip(idx, 1, self.plateaus.size)
            out = self.plateaus[idx - 1]
        else:
            idx = np.searchsorted(self.xs, xv, side=side)
            out = np.empty_like(xv)
            lo = idx == 0
            hi = idx == self.xs.size
            mid = ~(lo | hi)
            out[lo] = self.left
            out[hi] = self.right
            out[mid] = self.plateaus[idx[mid] - 1]
        return float(out[0]) if scalar else out

    def antiderivative(self, anchor: float = 0.0, base: float = 0.0) -> PiecewiseLinearFn:
        """Exact antiderivative, a piecewise linear function equal to ``base`` at ``anchor``.

        For periodic input with nonzero mean the result is periodic with a
        drift equal to the mean, since the integral gains mean * period over
        each period.
        """
        widths = np.diff(self.xs)
        cums = np.concatenate(([0.0], np.cumsum(self.plateaus * widths)))
        if self.period is not None:
            drift = cums[-1] / self.period
            raw = PiecewiseLinearFn(self.xs, cums, period=self.period, drift=drift)
        else:
            raw = PiecewiseLinearFn(self.xs, cums, left_slope=self.left,
                                    right_slope=self.right)
        offset = base - raw(anchor)
        return PiecewiseLinearFn(raw.xs, raw.ys + offset, raw.left_slope,
                                 raw.right_slope, raw.period, raw.drift)

    def abs_sup(self, lo: float, hi: float) -> float:
        """Exact supremum of |self| over the closed interval [lo, hi]."""
        if not hi >= lo:
            raise ValueError("abs_sup needs hi >= lo")
        vals = [abs(self(lo)), abs(self(hi)), abs(self(lo, side="left")),
                abs(self(hi, side="left"))]
        if self.period is not None:
            if hi - lo >= self.period:
                return float(np.max(np.abs(self.plateaus)))
            p = self.period
            span = hi - lo
            lo = lo - np.floor((lo - self.xs[0]) / p) * p
            hi = lo + span
        inner = (self.xs > lo) & (self.xs < hi)
        if self.period is not None and hi > self.xs[-1]:
            inner = inner | (self.xs + self.period < hi) & (self.xs + self.period > lo)
        for x in self.xs[inner]:
            vals.append(abs(self(x)))
            vals.append(abs(self(x, side="left")))
        return float(max(vals))

    def __repr__(self):
        tag = f", period={self.period}" if self.period is not None else ""
        return f"PiecewiseConstantFn({self.plateaus.size} cells{tag})"


def combine(f: PiecewiseLinearFn, g: PiecewiseLinearFn,
            cf: float = 1.0, cg: float = 1.0) -> PiecewiseLinearFn:
    """Exact linear combination ``cf * f + cg * g``.

    Both operands must be aperiodic, or periodic with equal periods; anything
    else raises IncompatiblePeriods. Materialize one operand onto a window
    first if a mixed combination is needed.
    """
    if (f.period is None) != (g.period is None):
        raise IncompatiblePeriods("cannot combine periodic with aperiodic")
    if f.period is not None:
        p = f.period
        if abs(f.period - g.period) > _SNAP * p:
            raise IncompatiblePeriods(f"periods differ: {f.period} vs {g.period}")
        x0 = f.xs[0]
        gx = g.xs[:-1]
        gx = x0 + np.mod(gx - x0, p)
        nx = np.unique(np.concatenate((f.xs[:-1], gx)))
        nx = np.concatenate((nx, [x0 + p]))
        ny = cf * f(nx) + cg * g(nx)
        return PiecewiseLinearFn(nx, ny, period=p,
                                 drift=cf * f.drift + cg * g.drift)
    nx = np.unique(np.concatenate((f.xs, g.xs)))
    ny = cf * f(nx) + cg * g(nx)
    return PiecewiseLinearFn(nx, ny,
                             left_slope=cf * f.left_slope + cg * g.left_slope,
                             right_slope=cf * f.right_slope + cg * g.right_slope)


def running_min(f: PiecewiseLinearFn, start: float, stop: float) -> PiecewiseLinearFn:
    """Running minimum ``R(x) = min(f over [start, x])`` on [start, stop].

    The result is an aperiodic polyline valid on the requested window only.
    """
    if not stop > start:
        raise ValueError("running_min needs stop > start")
    mat = f.materialize(start, stop)
    xs, ys = mat.xs, mat.ys
    cur = ys[0]
    ox = [xs[0]]
    oy = [cur]
    for i in range(xs.size - 1):
        x0, x1 = xs[i], xs[i + 1]
        y0, y1 = ys[i], ys[i + 1]
        if y1 >= cur:
            # segment never dips below the floor so the minimum stays flat
            if oy[-1] != cur or ox[-1] != x1:
                ox.append(x1)
                oy.append(cur)
            continue
        if y0 > cur:
            slope = (y1 - y0) / (x1 - x0)
            xc = x0 + (cur - y0) / slope
            ox.append(xc)
            oy.append(cur)
        ox.append(x1)
        oy.append(y1)
        cur = y1
    ox = np.asarray(ox)
    oy = np.asarray(oy)
    keep = np.concatenate(([True], np.diff(ox) > 0))
    return PiecewiseLinearFn(ox[keep], oy[keep], left_slope=0.0,
                             right_slope=0.0).simplify()


def extremum_on_interval(f: PiecewiseLinearFn, lo: float, hi: float,
                         mode: str = "min") -> tuple[float, float]:
    """Exact extremum of f over [lo, hi]; ties resolve to the smallest abscissa.

    Returns (abscissa, value).
    """
    mat = f.materialize(lo, hi)
    if mode == "min":
        i = int(np.argmin(mat.ys))
    elif mode == "max":
        i = int(np.argmax(mat.ys))
    else:
        raise ValueError("mode must be 'min' or 'max'")
    return float(mat.xs[i]), float(mat.ys[i])
