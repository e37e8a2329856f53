"""First-contact curve extraction from the free wave's negativity set.

In characteristic coordinates xi = (x+t)/sqrt(2), eta = (t-x)/sqrt(2) the
free wave separates as w = F(xi) + G(eta) with F(xi) = f(sqrt(2) xi) and
G(eta) = g(-sqrt(2) eta), both piecewise linear. The set where the obstacle
constraint bites is the closure of {F + G < 0} restricted to t >= 0, and the
only part of it that matters is its lower-left staircase boundary

    Y(xi) = running minimum over xi' <= xi of
            inf{eta >= -xi' : G(eta) strictly dips below -F(xi')}.

Mapped back to (x, t), the staircase becomes the first-contact time tau(x)
with |tau'| <= 1: genuine contact arcs have |tau'| < 1, while characteristic
pieces (|tau'| = 1) are inactive bridges that carry no reflection.

The sweep below computes eta_min column interval by column interval, exactly,
using a segment tree over the pieces of G to locate the lowest strict dip.
Everything stays closed form: the output staircase is a polyline whose
vertices are solutions of affine equations in the input breakpoints.
"""

from __future__ import annotations

import numpy as np

from wavecontact.freewave import RiemannPair, half_plane_infimum
from wavecontact.piecewise import PiecewiseConstantFn, PiecewiseLinearFn

__all__ = [
    "CurveVerificationError",
    "EmptyContact",
    "ContactCurve",
    "negativity_frontier",
    "classify",
    "influence_membership",
]

SQRT2 = float(np.sqrt(2.0))

# default activity threshold for exact PL data; interpolated analytic data
# should pass 1e-6 instead to absorb representation error
DEFAULT_TOL_SLOPE = 1e-9


class CurveVerificationError(RuntimeError):
    """The computed curve failed an internal consistency check.

    This signals a bug in the frontier construction (or data so degenerate
    that float arithmetic cannot separate cases), never a user error.
    """


class EmptyContact:
    """The free wave never goes negative: no contact, u = w everywhere.

    Attributes:
        certificate: proven infimum of w over the half plane t >= 0
            (nonnegative by construction of this variant).
    """

    is_empty = True

    def __init__(self, certificate: float):
        self.certificate = float(certificate)

    def __repr__(self):
        return f"EmptyContact(certificate={self.certificate!r})"


class _MinTree:
    """Static segment tree answering 'first index >= lo with value < thr'."""

    def __init__(self, vals: np.ndarray):
        m = len(vals)
        n = 1
        while n < max(m, 1):
            n <<= 1
        t = np.full(2 * n, np.inf)
        t[n:n + m] = vals
        for i in range(n - 1, 0, -1):
            t[i] = min(t[2 * i], t[2 * i + 1])
        self.n = n
        self.m = m
        self.t = t

    def first_below(self, lo: int, thr: float) -> int:
        if lo < 0:
            lo = 0
        if lo >= self.m:
            return -1
        t, n = self.t, self.n
        # canonical decomposition of [lo, m) into tree nodes, left to right
        left_nodes = []
        right_nodes = []
        l = lo + n
        r = self.m + n
        while l < r:
            if l & 1:
                left_nodes.append(l)
                l += 1
            if r & 1:
                r -= 1
                right_nodes.append(r)
            l >>= 1
            r >>= 1
        for node in left_nodes + right_nodes[::-1]:
            if t[node] < thr:
                i = node
                while i < n:
                    i <<= 1
                    if not t[i] < thr:
                        i += 1
                return i - n
        return -1


def _column_dip_chunks(f_mat: PiecewiseLinearFn, g_mat: PiecewiseLinearFn,
                       xi_lo: float, xi_hi: float):
    """Exact eta_min(xi) as affine chunks over [xi_lo, xi_hi].

    Returns a list of (a, b, ha, hb): on the column interval [a, b] the
    lowest admissible strict dip of G below -F(xi) sits at the affine height
    interpolating ha -> hb. Columns covered by no chunk have no dip within
    the materialized eta range of g_mat (eta_min = +inf there, as far as
    this sweep window is concerned).

    Relies on admissibility (w >= 0 at t = 0): the dip search never needs to
    look below a column's bottom eta = -xi, because G(-xi) + F(xi) = u0 >= 0.
    """
    ex, ey = g_mat.xs, g_mat.ys
    pmin = np.minimum(ey[:-1], ey[1:])
    tree = _MinTree(pmin)
    chunks = []

    def past_bottom(b: float) -> int:
        # first piece whose top reaches the lowest column bottom -b; pieces
        # entirely below every bottom in a task can never hold its dip
        return max(0, int(np.searchsorted(ex, -b, side="left")) - 1)

    fx, fy = f_mat.xs, f_mat.ys
    for ci in range(fx.size - 1):
        x0, x1 = float(fx[ci]), float(fx[ci + 1])
        a0 = max(x0, xi_lo)
        b0 = min(x1, xi_hi)
        if not b0 > a0:
            continue
        # threshold c(xi) = -F(xi), affine on this cell
        fslope = (float(fy[ci + 1]) - float(fy[ci])) / (x1 - x0)
        y_at = lambda xi: -(float(fy[ci]) + fslope * (xi - x0))  # noqa: E731
        cslope = -fslope

        stack = [(a0, b0, past_bottom(b0))]
        while stack:
            a, b, jmin = stack.pop()
            if not b > a:
                continue
            ca, cb = y_at(a), y_at(b)
            cmax = max(ca, cb)
            jj = tree.first_below(jmin, cmax)
            if jj < 0:
                continue
            e0, e1 = float(ex[jj]), float(ex[jj + 1])
            v0, v1 = float(ey[jj]), float(ey[jj + 1])
            pm = min(v0, v1)

            # columns whose bottom -xi sits above the piece top never meet
            # this piece (nor any lower one): send them past it
            if a < -e1:
                mid = min(b, -e1)
                stack.append((a, mid, max(jj + 1, past_bottom(mid))))
                if b <= -e1:
                    continue
                a = mid
                ca = y_at(a)

            # S1 = {xi in [a,b] : c(xi) > pm} is where the piece strictly dips
            if cslope > 0:
                if cb <= pm:
                    stack.append((a, b, jj + 1))
                    continue
                if ca <= pm:
                    xs_split = a + (pm - ca) / cslope
                    stack.append((a, xs_split, jj + 1))
                    s1a, s1b = xs_split, b
                else:
                    s1a, s1b = a, b
            elif cslope < 0:
                if ca <= pm:
                    stack.append((a, b, jj + 1))
                    continue
                if cb <= pm:
                    xs_split = a + (pm - ca) / cslope
                    stack.append((xs_split, b, jj + 1))
                    s1a, s1b = a, xs_split
                else:
                    s1a, s1b = a, b
            else:
                if ca <= pm:
                    stack.append((a, b, jj + 1))
                    continue
                s1a, s1b = a, b
            if not s1b > s1a:
                continue

            q = (v1 - v0) / (e1 - e0)
            if q >= 0:
                # dip exists only right at the piece start e0, reachable by
                # columns with bottom at or below it; bottoms strictly inside
                # a non-decreasing piece see no dip (u0 >= 0 at the bottom)
                lo_keep = max(s1a, -e0)
                if -e0 > s1a:
                    stack.append((s1a, min(s1b, -e0), jj + 1))
                if s1b > lo_keep:
                    chunks.append((lo_keep, s1b, e0, e0))
            else:
                # decreasing piece: strict dip starts at the crossing
                # h(xi) = e0 + (c(xi) - v0)/q, clipped below by e0 when the
                # threshold already exceeds the piece's starting value
                def h(xi):
                    return e0 + (y_at(xi) - v0) / q

                parts = [(s1a, s1b)]
                if cslope != 0.0:
                    xc = None
                    va, vb = y_at(s1a), y_at(s1b)
                    if (va - v0) * (vb - v0) < 0:
                        xc = s1a + (v0 - va) / cslope
                    if xc is not None and s1a < xc < s1b:
                        parts = [(s1a, xc), (xc, s1b)]
                for (p, r) in parts:
                    cp, cr = y_at(p), y_at(r)
                    if cp >= v0 and cr >= v0:
                        ya, yb = e0, e0
                    else:
                        ya, yb = h(p), h(r)
                        ya = min(max(ya, e0), e1)
                        yb = min(max(yb, e0), e1)
                    # bottoms can only graze here; clamp float noise
                    ya = max(ya, -p)
                    yb = max(yb, -r)
                    chunks.append((p, r, ya, yb))
    return chunks


def _staircase_from_chunks(chunks, xi_end: float):
    """Running minimum of the chunk envelope, as staircase vertices.

    Vertical drops appear as consecutive vertices with equal xi. The curve
    starts at the first chunk entry; a trailing flat is closed at xi_end.
    """
    chunks = sorted(chunks, key=lambda c: (c[0], c[1]))
    vx: list = []
    vy: list = []

    def emit(x, y):
        if vx and vx[-1] == x and vy[-1] == y:
            return
        vx.append(x)
        vy.append(y)

    cur = np.inf
    for (a, b, ha, hb) in chunks:
        if ha < cur:
            if np.isfinite(cur):
                emit(a, cur)
            emit(a, ha)
            cur = ha
        if not b > a:
            continue
        slope = (hb - ha) / (b - a)
        if slope < 0:
            if ha <= cur and hb < cur:
                emit(a, cur)
                emit(b, hb)
                cur = hb
            elif ha > cur > hb:
                xc = a + (cur - ha) / slope
                emit(xc, cur)
                emit(b, hb)
                cur = hb
        # non-decreasing chunks only matter through their entry value
    if vx and np.isfinite(cur):
        emit(xi_end, cur)
    return _snap_staircase(np.asarray(vx), np.asarray(vy))


def _snap_staircase(vx, vy):
    """Collapse float-noise artifacts left by the chunk walk.

    Adjacent chunks that lie on one affine piece can land 1 ulp apart and
    produce spurious hairline drops or near-vertical slivers. Pairs closer
    than the snap tolerance become exact drops; drops of negligible height
    vanish. Real features at these scales are far below every tolerance
    this module promises, so the cleanup never changes a segment's type.
    """
    if vx.size == 0:
        return vx, vy
    out_x = [float(vx[0])]
    out_y = [float(vy[0])]
    for i in range(1, vx.size):
        x = float(vx[i])
        y = float(vy[i])
        lx = out_x[-1]
        ly = out_y[-1]
        dx = x - lx
        if 0.0 < dx <= 1e-12 * (1.0 + abs(x)):
            x = lx  # sliver: treat as an exact drop
            dx = 0.0
        if dx == 0.0:
            if ly - y <= 1e-12 * (1.0 + abs(y)):
                continue  # hairline drop: keep the earlier level
            if len(out_x) >= 2 and out_x[-2] == lx:
                out_y[-1] = y  # merge stacked drops at one column
                continue
        out_x.append(x)
        out_y.append(y)
    return np.asarray(out_x), np.asarray(out_y)


class ContactCurve:
    """First-contact boundary of the influence region.

    Args:
        vxi: staircase vertex abscissas in the xi coordinate, non-decreasing
            (repeats mark vertical drops).
        veta: staircase vertex ordinates, non-increasing.
        period: spatial period of tau, for periodic data.
        valid_x: (lo, hi) window where the curve is certified, for windowed
            (aperiodic) data; None means valid everywhere.
        transient: raw pre-stabilization staircase kept for inspection on
            periodic runs, as a (vxi, veta) tuple.
        tol_slope: activity threshold used to classify segments.
    """

    is_empty = False

    def __init__(self, vxi, veta, period=None, valid_x=None, transient=None,
                 tol_slope=DEFAULT_TOL_SLOPE):
        vxi = np.asarray(vxi, dtype=float)
        veta = np.asarray(veta, dtype=float)
        if vxi.size < 2:
            raise ValueError("staircase needs at least one piece")
        if np.any(np.diff(vxi) < 0) or np.any(np.diff(veta) > 0):
            raise ValueError("staircase must run right and down")
        self.vxi = vxi
        self.veta = veta
        self.period = None if period is None else float(period)
        self.valid_x = None if valid_x is None else (float(valid_x[0]),
                                                     float(valid_x[1]))
        self.transient = transient
        self.tol_slope = float(tol_slope)

        px = (vxi - veta) / SQRT2
        pt = (vxi + veta) / SQRT2
        dxi = np.diff(vxi)
        deta = np.diff(veta)
        if np.any((dxi == 0) & (deta == 0)):
            raise ValueError("degenerate staircase vertex pair")
        slopes = np.empty(dxi.size)
        drops = dxi == 0
        flats = deta == 0
        slant = ~(drops | flats)
        slopes[drops] = -1.0
        slopes[flats] = 1.0
        slopes[slant] = (dxi[slant] + deta[slant]) / (dxi[slant] - deta[slant])
        if np.any(np.diff(px) <= 0):
            raise ValueError("contact curve not graphable over x")

        if self.period is not None:
            # seam: tau is periodic, so pin the endpoint value exactly
            if abs(pt[-1] - pt[0]) > 1e-9 * (1.0 + abs(pt[0])):
                raise CurveVerificationError("periodic curve seam mismatch")
            pt = pt.copy()
            pt[-1] = pt[0]
            self.tau = PiecewiseLinearFn(px, pt, period=self.period)
            self.tau_slope = PiecewiseConstantFn(px, slopes, period=self.period)
        else:
            self.tau = PiecewiseLinearFn(px, pt, left_slope=-1.0,
                                         right_slope=1.0)
            self.tau_slope = PiecewiseConstantFn(px, slopes, left=-1.0,
                                                 right=1.0)
        self.active = np.abs(slopes) < 1.0 - self.tol_slope
        self.seg_x = px
        self.seg_t = pt
        self.seg_slope = slopes
        self.contact_wt = None
        self.classified = False

    @classmethod
    def from_graph(cls, xs, ts, period=None, valid_x=None,
                   tol_slope=DEFAULT_TOL_SLOPE):
        """Build a curve from piecewise linear graph vertices (x, t(x)).

        The 1-Lipschitz requirement on t(x) is enforced by the staircase
        monotonicity checks after the rotation to characteristic
        coordinates; violations raise ValueError.
        """
        xs = np.asarray(xs, dtype=float)
        ts = np.asarray(ts, dtype=float)
        if xs.shape != ts.shape or xs.ndim != 1:
            raise ValueError("graph vertices need matching 1d arrays")
        vxi = (xs + ts) / SQRT2
        veta = (ts - xs) / SQRT2
        return cls(vxi, veta, period=period, valid_x=valid_x,
                   tol_slope=tol_slope)

    # -- staircase views ---------------------------------------------------

    def _quasi_reduce_xi(self, xi):
        """Shift xi into the stored staircase window (periodic curves)."""
        if self.period is None:
            return xi, 0.0
        q = self.period / SQRT2
        k = np.floor((xi - self.vxi[0]) / q)
        return xi - k * q, k * q

    def floor_eta(self, xi: float) -> float:
        """Y(xi): upper semicontinuous staircase height at a column."""
        xi_r, shift = self._quasi_reduce_xi(float(xi))
        vx, vy = self.vxi, self.veta
        if xi_r < vx[0]:
            if self.period is None:
                return np.inf  # before the first contact the floor is open
            xi_r = float(vx[0])  # float guard at the band seam
        j = int(np.searchsorted(vx, xi_r, side="left"))
        if j < vx.size and vx[j] == xi_r:
            return float(vy[j]) - shift
        if j >= vx.size:
            return float(vy[-1]) - shift
        x0, x1 = vx[j - 1], vx[j]
        y0, y1 = vy[j - 1], vy[j]
        return float(y0 + (y1 - y0) * (xi_r - x0) / (x1 - x0)) - shift

    def floor_inverse(self, eta: float) -> float:
        """X(eta) = sup{xi : Y(xi) >= eta}, the inverse staircase.

        Quasi-periodic for periodic curves: X(eta - q) = X(eta) + q with
        q = period/sqrt(2). Honors the upper semicontinuous convention:
        a whole flat maps its own level to the flat's right end, a drop
        maps every level it spans to the drop column.
        """
        vx, vy = self.vxi, self.veta
        eta_r = float(eta)
        shift = 0.0
        if self.period is not None:
            q = self.period / SQRT2
            k = float(np.floor((vy[0] - eta_r) / q))
            eta_r += k * q
            shift = k * q
            if eta_r > vy[0]:  # float guard at the band boundary
                eta_r -= q
                shift -= q
            elif eta_r <= vy[-1]:
                eta_r += q
                shift += q
        else:
            if eta_r > vy[0]:
                return float(vx[0])  # vertical wing holds every higher level
            if eta_r <= vy[-1]:
                return np.inf  # trailing flat: no finite supremum
        # first index j with vy[j] < eta_r (exists: eta_r > vy[-1])
        below = int(np.searchsorted(vy[::-1], eta_r, side="left"))
        j = min(vy.size - below, vy.size - 1)
        x0, x1 = float(vx[j - 1]), float(vx[j])
        y0, y1 = float(vy[j - 1]), float(vy[j])
        if x1 == x0 or y1 == y0:
            return (x0 if x1 == x0 else x1) + shift
        return x0 + (x1 - x0) * (eta_r - y0) / (y1 - y0) + shift

    def column_crossing_slope(self, xi: float) -> float:
        """Slope of the piece an upward xi-characteristic meets at a column.

        Returns nan when the column lands exactly on a vertex or a drop,
        where the crossing is ambiguous. Beyond the last vertex of an
        aperiodic staircase the trailing wing is a flat, slope +1.
        """
        xi_r, _ = self._quasi_reduce_xi(float(xi))
        vx = self.vxi
        if xi_r < vx[0]:
            if self.period is None:
                return -1.0  # leading wing; the floor there is open anyway
            xi_r = float(vx[0])
        j = int(np.searchsorted(vx, xi_r, side="left"))
        if j < vx.size and vx[j] == xi_r:
            return np.nan
        if j >= vx.size:
            return 1.0
        return float(self.seg_slope[j - 1])

    def level_crossing_slope(self, eta: float) -> float:
        """Slope of the piece a rightward eta-characteristic meets at a level.

        Returns nan when the level equals a vertex ordinate (every flat
        level in particular). Levels above an aperiodic staircase meet the
        leading vertical wing, slope -1.
        """
        vy = self.veta
        eta_r = float(eta)
        if self.period is not None:
            q = self.period / SQRT2
            k = float(np.floor((vy[0] - eta_r) / q))
            eta_r += k * q
            if eta_r > vy[0]:  # float guard at the band boundary
                eta_r -= q
            elif eta_r <= vy[-1]:
                eta_r += q
        else:
            if eta_r > vy[0]:
                return -1.0
            if eta_r < vy[-1]:
                return 1.0  # below the trailing flat; never reached anyway
        if np.any(vy == eta_r):
            return np.nan
        below = int(np.searchsorted(vy[::-1], eta_r, side="left"))
        j = min(vy.size - below, vy.size - 1)
        return float(self.seg_slope[j - 1])

    def max_tau(self) -> float:
        """Largest first-contact time on the curve (over one period or the window)."""
        if self.period is not None:
            return float(np.max(self.seg_t))
        lo, hi = self.valid_x if self.valid_x else (self.seg_x[0], self.seg_x[-1])
        inside = self.seg_t[(self.seg_x >= lo) & (self.seg_x <= hi)]
        cands = [self.tau(lo), self.tau(hi)]
        if inside.size:
            cands.append(float(np.max(inside)))
        return float(max(cands))

    def segment_records(self):
        """Per-cell view: (x0, x1, t0, t1, slope, active) tuples."""
        for k in range(self.seg_slope.size):
            yield (float(self.seg_x[k]), float(self.seg_x[k + 1]),
                   float(self.seg_t[k]), float(self.seg_t[k + 1]),
                   float(self.seg_slope[k]), bool(self.active[k]))


def _build_curve_periodic(pair: RiemannPair, tol_slope: float):
    f, g = pair.left_moving, pair.right_moving
    cert = float(np.min(f.ys)) + float(np.min(g.ys))
    if cert >= 0:
        return EmptyContact(cert)
    q = f.period / SQRT2
    big_f = f.compose_affine(SQRT2, 0.0)
    big_g = g.compose_affine(-SQRT2, 0.0)
    xi0 = float(big_f.xs[0])
    pad = 0.01 * q
    sweep_lo, sweep_hi = xi0 - 2.0 * q, xi0 + q
    f_mat = big_f.materialize(sweep_lo - pad, sweep_hi + pad)
    g_mat = big_g.materialize(-sweep_hi - pad, -sweep_lo + q + pad)
    chunks = _column_dip_chunks(f_mat, g_mat, sweep_lo, sweep_hi)
    vx, vy = _staircase_from_chunks(chunks, sweep_hi)
    if vx.size < 2:
        raise CurveVerificationError(
            "negativity certified but no frontier found in the periodic sweep")

    probe = _CurveProbe(vx, vy)
    # quasi-periodicity between the two post-burn-in periods: Y(p+q) = Y(p)-q.
    # Probe only strictly between vertex columns: at a drop column the
    # staircase value is ambiguous under 1-ulp translation noise.
    inner = vx[(vx > xi0 - q) & (vx < xi0)]
    edges = np.unique(np.concatenate(([xi0 - q], inner, [xi0])))
    cands = np.concatenate((0.5 * (edges[1:] + edges[:-1]),
                            np.linspace(xi0 - q, xi0, 17)))
    scale = 1.0 + float(np.max(np.abs(vy)))
    xtol = 1e-9 * (1.0 + abs(xi0) + q)
    for p in cands:
        near = np.min(np.abs(vx - p)) if vx.size else np.inf
        near_t = np.min(np.abs(vx - (p + q))) if vx.size else np.inf
        if near <= xtol or near_t <= xtol:
            continue
        lhs = probe.value(p + q)
        rhs = probe.value(p) - q
        if not abs(lhs - rhs) <= 1e-7 * scale:
            raise CurveVerificationError(
                f"periodic frontier did not stabilize at xi={p}: "
                f"{lhs} vs {rhs}")

    # cut one exact quasi-period starting mid-cell, away from any vertex:
    # interpolating inside a flat is exact, inside an arc it only perturbs
    # the two half-cells' slopes at float level, so no segment changes type
    xc = _longest_cell_midpoint(vx, vy, xi0 - q, xi0)
    yc = probe.value(xc)
    y_end = probe.value(xc + q)
    if not abs(y_end - (yc - q)) <= 1e-9 * (1.0 + abs(yc)):
        raise CurveVerificationError(
            f"periodic seam mismatch at the cut point: {y_end} vs {yc - q}")
    eps = 1e-12 * (1.0 + q)
    keep = (vx > xc + eps) & (vx < xc + q - eps)
    kx = np.concatenate(([xc], vx[keep], [xc + q]))
    ky = np.concatenate(([yc], vy[keep], [yc - q]))
    # the interpolated boundary values can land 1 ulp above a stored flat
    # level; the seam check above already bounds the discrepancy
    ky = np.minimum.accumulate(ky)
    return ContactCurve(kx, ky, period=f.period, transient=(vx, vy),
                        tol_slope=tol_slope)


def _longest_cell_midpoint(vx, vy, lo: float, hi: float) -> float:
    """Midpoint of the longest non-vertical staircase cell clipped to [lo, hi]."""
    best_x = 0.5 * (lo + hi)
    best_len = 0.0
    for i in range(vx.size - 1):
        a = max(float(vx[i]), lo)
        b = min(float(vx[i + 1]), hi)
        if b - a > best_len:
            best_len = b - a
            best_x = 0.5 * (a + b)
    # the flat run-out beyond the last vertex is a legitimate cell too
    if vx[-1] < hi and hi - float(vx[-1]) > best_len:
        best_x = 0.5 * (max(float(vx[-1]), lo) + hi)
    return best_x


class _CurveProbe:
    """Evaluate a raw staircase (upper semicontinuous) without a ContactCurve."""

    def __init__(self, vx, vy):
        self.vx = vx
        self.vy = vy

    def value(self, xi: float) -> float:
        vx, vy = self.vx, self.vy
        if xi < vx[0]:
            return np.inf
        if xi >= vx[-1]:
            return float(vy[-1])
        j = int(np.searchsorted(vx, xi, side="left"))
        if vx[j] == xi:
            return float(vy[j])
        x0, x1 = vx[j - 1], vx[j]
        y0, y1 = vy[j - 1], vy[j]
        return float(y0 + (y1 - y0) * (xi - x0) / (x1 - x0))


def _build_curve_windowed(pair: RiemannPair, x_window, tol_slope: float):
    cert = half_plane_infimum(pair)
    if cert >= 0:
        return EmptyContact(cert)
    xlo, xhi = float(x_window[0]), float(x_window[1])
    if not xhi > xlo:
        raise ValueError("x_window must satisfy hi > lo")
    f, g = pair.left_moving, pair.right_moving
    big_f = f.compose_affine(SQRT2, 0.0)
    big_g = g.compose_affine(-SQRT2, 0.0)
    h0 = min(float(f.xs[0]), float(g.xs[0]), xlo)
    h1 = max(float(f.xs[-1]), float(g.xs[-1]), xhi)
    xi_lo = (h0 - 1.0) / SQRT2
    xi_hi = (h1 + 1.0) / SQRT2

    delta = 1.0
    for _ in range(60):
        f_mat = big_f.materialize(xi_lo - 1.0, xi_hi + 1.0)
        g_mat = big_g.materialize(-xi_hi - 1.0, -xi_lo + delta)
        chunks = _column_dip_chunks(f_mat, g_mat, xi_lo, xi_hi)
        vx, vy = _staircase_from_chunks(chunks, xi_hi)
        grow_left = grow_right = False
        if vx.size < 2:
            grow_left = grow_right = True
        else:
            probe = _CurveProbe(vx, vy)
            # tau at the window edges, wings included
            eta_at_xlo = _eta_at_x(vx, vy, xlo)
            xi_at_xhi = _xi_at_x(vx, vy, xhi)
            # every contact the sweep can have missed lies at eta > -xi_lo,
            # so the curve over the window must sit at or below that level
            if not eta_at_xlo <= -xi_lo:
                grow_left = True
            # an undercutting witness at window abscissas would live at
            # xi <= xi_at_xhi; it must have been swept
            if not xi_at_xhi <= xi_hi:
                grow_right = True
        if not (grow_left or grow_right):
            return ContactCurve(vx, vy, valid_x=(xlo, xhi),
                                tol_slope=tol_slope)
        span = max(xi_hi - xi_lo, 1.0)
        if grow_left:
            xi_lo -= span
        if grow_right:
            xi_hi += span
    raise CurveVerificationError(
        "frontier sweep failed to certify the requested window")


def _eta_at_x(vx, vy, x: float) -> float:
    """eta coordinate of the curve point above abscissa x (wings included)."""
    px = (vx - vy) / SQRT2
    if x <= px[0]:
        # left wing: vertical in xi, so eta grows as x recedes leftward
        return float(vy[0]) + (float(px[0]) - x) * SQRT2
    if x >= px[-1]:
        return float(vy[-1])  # right wing is flat in eta
    j = int(np.searchsorted(px, x, side="right"))
    x0, x1 = px[j - 1], px[j]
    e0, e1 = vy[j - 1], vy[j]
    lam = (x - x0) / (x1 - x0)
    return float(e0 + lam * (e1 - e0))


def _xi_at_x(vx, vy, x: float) -> float:
    """xi coordinate of the curve point above abscissa x (wings included)."""
    px = (vx - vy) / SQRT2
    if x <= px[0]:
        return float(vx[0])  # left wing is vertical in xi
    if x >= px[-1]:
        return float(vx[-1]) + (x - float(px[-1])) * SQRT2
    j = int(np.searchsorted(px, x, side="right"))
    x0, x1 = px[j - 1], px[j]
    a0, a1 = vx[j - 1], vx[j]
    lam = (x - x0) / (x1 - x0)
    return float(a0 + lam * (a1 - a0))


def negativity_frontier(pair: RiemannPair, x_window=None,
                        tol_slope: float = DEFAULT_TOL_SLOPE):
    """Contact curve of the obstacle problem, or EmptyContact.

    Args:
        pair: traveling profile decomposition of admissible initial data.
        x_window: (lo, hi) abscissa window the curve must be certified on.
            Required for aperiodic and for drifting periodic data; ignored
            for drift-free periodic data (the curve is then global).
        tol_slope: activity threshold; pass 1e-6 for interpolated analytic
            data, keep the default for exact piecewise data.

    Returns:
        ContactCurve with tau, tau_slope, activity flags and staircase
        views, or EmptyContact when w never goes strictly negative.
    """
    f = pair.left_moving
    if f.period is not None and f.drift == 0.0 and pair.right_moving.drift == 0.0:
        return _build_curve_periodic(pair, tol_slope)
    if x_window is None:
        raise ValueError("x_window is required for non-periodic data "
                         "(windowed curve validity)")
    return _build_curve_windowed(pair, x_window, tol_slope)


def classify(curve, pair: RiemannPair, tol_contact: float = 1e-7):
    """Verify active segments against the free wave and attach densities.

    On every active cell the curve must satisfy, at the cell midpoint,
    tau'(x) = -w_x/w_t, w_t <= 0 and w(x, tau(x)) = 0, all within tolerance.
    A violation raises CurveVerificationError naming the cell: it means the
    frontier construction itself is wrong, not the input.

    Returns the same curve with ``contact_wt`` filled (nan on inactive cells)
    and ``classified`` set.
    """
    if curve.is_empty:
        raise ValueError("cannot classify an empty contact set")
    wt = np.full(curve.seg_slope.size, np.nan)
    bad = []
    for k in range(curve.seg_slope.size):
        if not curve.active[k]:
            continue
        xm = 0.5 * (curve.seg_x[k] + curve.seg_x[k + 1])
        tm = 0.5 * (curve.seg_t[k] + curve.seg_t[k + 1])
        fp, gp = pair.profile_slopes(xm + tm, xm - tm)
        wxm = float(fp + gp)
        wtm = float(fp - gp)
        wt[k] = wtm
        sl = curve.seg_slope[k]
        scale = 1.0 + abs(wtm) + abs(wxm)
        if abs(sl * wtm + wxm) > 100.0 * curve.tol_slope * scale:
            bad.append((k, "slope identity", sl, wxm, wtm))
        if wtm > tol_contact:
            bad.append((k, "contact velocity sign", sl, wxm, wtm))
        res = float(pair.value(xm, tm))
        if abs(res) > tol_contact * (1.0 + abs(tm)):
            bad.append((k, "off the zero level", res, xm, tm))
    if bad:
        head = "; ".join(str(b) for b in bad[:4])
        raise CurveVerificationError(
            f"{len(bad)} active segment(s) failed verification: {head}")
    curve.contact_wt = wt
    curve.classified = True
    return curve


def influence_membership(curve, x: float, t: float, tol: float = 1e-9) -> str:
    """Locate (x, t) relative to the influence region: inside|outside|boundary."""
    if t < 0:
        raise ValueError("influence queries require t >= 0")
    if curve.is_empty:
        return "outside"
    if curve.valid_x is not None and not (curve.valid_x[0] <= x <= curve.valid_x[1]):
        raise ValueError("query abscissa outside the curve's certified window")
    d = t - float(curve.tau(x))
    if abs(d) <= tol:
        return "boundary"
    return "inside" if d > 0 else "outside"
