"""Low-level geometry: Koch snowflake polylines, Cantor sets, segment queries."""

import math

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import betainc, gamma

SQRT3 = math.sqrt(3.0)


def unit_ball_volume(n):
    """Lebesgue measure of the unit ball in R^n (n = 0 gives 1)."""
    return math.pi ** (n / 2) / gamma(n / 2 + 1)


def sphere_area(n):
    """Surface measure of the unit sphere S^{n-1} in R^n."""
    return n * unit_ball_volume(n)


def cap_fraction(cos_angle, n):
    """Fraction of S^{n-1} lying within angle arccos(cos_angle) of a pole.

    Vectorized in ``cos_angle``; valid for n >= 2.
    """
    c = np.clip(np.asarray(cos_angle, dtype=float), -1.0, 1.0)
    s2 = 1.0 - c * c
    half = 0.5 * betainc((n - 1) / 2.0, 0.5, s2)
    return np.where(c >= 0, half, 1.0 - half)


# --- Koch snowflake -----------------------------------------------------------

def koch_snowflake(depth, side=1.0):
    """Vertices of the depth-``depth`` Koch snowflake, counter-clockwise, not closed.

    Starts from the equilateral triangle (0,0), (side,0), (side/2, side*sqrt3/2)
    and grows bumps outward, so the closed polygon bounds the snowflake domain.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    pts = np.array([[0.0, 0.0], [side, 0.0], [side / 2, side * SQRT3 / 2]])
    c, s = math.cos(-math.pi / 3), math.sin(-math.pi / 3)
    rot = np.array([[c, -s], [s, c]])
    for _ in range(depth):
        a = pts
        b = np.roll(pts, -1, axis=0)
        x = a + (b - a) / 3.0
        y = a + 2.0 * (b - a) / 3.0
        z = x + (y - x) @ rot.T
        out = np.empty((4 * len(pts), 2))
        out[0::4], out[1::4], out[2::4], out[3::4] = a, x, z, y
        pts = out
    return pts


def koch_centroid(side=1.0):
    return np.array([side / 2, side * SQRT3 / 6])


class Polygon:
    """Closed polygon with vectorized membership and boundary-distance queries."""

    def __init__(self, vertices, n_bins=512):
        self.vertices = np.asarray(vertices, dtype=float)
        self.a = self.vertices
        self.b = np.roll(self.vertices, -1, axis=0)
        self.seg_len = np.hypot(*(self.b - self.a).T)
        self.max_seg = float(self.seg_len.max())
        self._tree = cKDTree(self.vertices)
        # y-buckets of edges for ray casting
        ylo = np.minimum(self.a[:, 1], self.b[:, 1])
        yhi = np.maximum(self.a[:, 1], self.b[:, 1])
        self._y0 = float(ylo.min())
        self._y1 = float(yhi.max())
        self._nb = n_bins
        h = (self._y1 - self._y0) / n_bins or 1.0
        self._h = h
        lo_bin = np.clip(((ylo - self._y0) / h).astype(int), 0, n_bins - 1)
        hi_bin = np.clip(((yhi - self._y0) / h).astype(int), 0, n_bins - 1)
        self._buckets = [[] for _ in range(n_bins)]
        for i, (l, u) in enumerate(zip(lo_bin, hi_bin)):
            for k in range(l, u + 1):
                self._buckets[k].append(i)
        self._buckets = [np.array(bk, dtype=int) for bk in self._buckets]

    @property
    def bounds(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def contains(self, points):
        """Even-odd rule; points exactly on an edge may fall either way."""
        p = np.atleast_2d(np.asarray(points, dtype=float))
        inside = np.zeros(len(p), dtype=bool)
        in_range = (p[:, 1] >= self._y0) & (p[:, 1] <= self._y1)
        bins = np.clip(((p[:, 1] - self._y0) / self._h).astype(int), 0, self._nb - 1)
        for k in np.unique(bins[in_range]):
            sel = np.nonzero(in_range & (bins == k))[0]
            edges = self._buckets[k]
            if len(edges) == 0:
                continue
            ax, ay = self.a[edges, 0], self.a[edges, 1]
            bx, by = self.b[edges, 0], self.b[edges, 1]
            px = p[sel, 0][:, None]
            py = p[sel, 1][:, None]
            straddle = (ay > py) != (by > py)
            with np.errstate(divide="ignore", invalid="ignore"):
                xcross = ax + (py - ay) * (bx - ax) / (by - ay)
            crossings = np.count_nonzero(straddle & (px < xcross), axis=1)
            inside[sel] = crossings % 2 == 1
        return inside

    def distance(self, points, k=8):
        """Distance to the polygon boundary (exact up to floating point).

        Exact segment distances are evaluated for edges adjacent to the k
        nearest vertices; the result never exceeds the true distance by more
        than half the longest edge.
        """
        p = np.atleast_2d(np.asarray(points, dtype=float))
        k = min(k, len(self.vertices))
        _, idx = self._tree.query(p, k=k)
        idx = np.atleast_2d(idx).reshape(len(p), k)
        m = len(self.vertices)
        cand = np.concatenate([idx, (idx - 1) % m], axis=1)
        a = self.a[cand]
        b = self.b[cand]
        return segment_distance(p[:, None, :], a, b).min(axis=1)


def segment_distance(p, a, b):
    """Distance from points p to segments [a, b]; broadcasts over leading axes."""
    d = b - a
    dd = np.sum(d * d, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(dd > 0, np.sum((p - a) * d, axis=-1) / dd, 0.0)
    t = np.clip(t, 0.0, 1.0)
    proj = a + t[..., None] * d
    return np.linalg.norm(p - proj, axis=-1)


def segment_length_in_ball(a, b, center, radius):
    """Length of each segment [a_i, b_i] inside the open ball B(center, radius)."""
    d = b - a
    f = a - center
    A = np.sum(d * d, axis=-1)
    B = 2.0 * np.sum(f * d, axis=-1)
    C = np.sum(f * f, axis=-1) - radius * radius
    disc = B * B - 4 * A * C
    out = np.zeros(len(a))
    ok = (disc > 0) & (A > 0)
    sq = np.sqrt(disc[ok])
    t1 = np.clip((-B[ok] - sq) / (2 * A[ok]), 0.0, 1.0)
    t2 = np.clip((-B[ok] + sq) / (2 * A[ok]), 0.0, 1.0)
    out[ok] = (t2 - t1) * np.sqrt(A[ok])
    return out


# --- Cantor sets --------------------------------------------------------------

def cantor_offsets(ratio, parts):
    if parts < 2 or not (0 < ratio) or ratio * parts > 1:
        raise ValueError("need parts >= 2 and 0 < ratio <= 1/parts")
    return np.arange(parts) * (1.0 - ratio) / (parts - 1)


def cantor_depth(ratio, tol=1e-15):
    """Recursion depth at which cells are below ``tol`` in length."""
    return int(math.ceil(math.log(tol) / math.log(ratio)))


def cantor_cdf(x, ratio=1 / 3, parts=2):
    """Distribution function of the natural self-similar measure on [0, 1].

    Exact up to ratio**depth (machine precision by default).
    """
    x = np.asarray(x, dtype=float)
    offs = cantor_offsets(ratio, parts)
    y = np.clip(x, 0.0, 1.0).copy()
    out = np.zeros_like(y)
    scale = np.ones_like(y)
    live = np.ones(y.shape, dtype=bool)
    for _ in range(cantor_depth(ratio)):
        # index of the last cell whose left end is <= y
        j = np.clip(np.searchsorted(offs, y, side="right") - 1, 0, parts - 1)
        left = offs[j]
        in_cell = y < left + ratio
        out += np.where(live, scale * (j + np.where(in_cell, 0.0, 1.0)) / parts, 0.0)
        live &= in_cell
        y = np.where(in_cell, (y - left) / ratio, 0.0)
        scale = scale / parts
        if not live.any():
            break
    # y == 1 exactly inside the last cell maps to full mass of that cell
    return out


def cantor_sample(n, rng, ratio=1 / 3, parts=2, depth=30):
    """Points of the Cantor set drawn from its natural measure via random IFS addresses."""
    offs = cantor_offsets(ratio, parts)
    digits = rng.integers(0, parts, size=(n, depth))
    scales = ratio ** np.arange(depth)
    return offs[digits] @ scales, digits


def ternary_digits(x, depth):
    """First ``depth`` base-3 digits of x in [0, 1)."""
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape + (depth,), dtype=int)
    y = x.copy()
    for k in range(depth):
        y = y * 3.0
        d = np.floor(y)
        out[..., k] = d
        y -= d
    return out
