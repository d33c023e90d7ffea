"""Doubling constants and dimension exponents (s, sigma, delta) from ball-measure data.

Balls are centred only at the sample points of E. Exponents come from log-log
least squares pooled over all centres; the reported constant band certifies
the corresponding power bound over the sampled radius range only.
"""

import csv
from dataclasses import dataclass, field
import json

import numpy as np
from scipy.spatial.distance import pdist

from .errors import DegenerateMeasureError, FitFailureError
from .spaces import BallSpec, ball_measure

DIRECTIONS = ("lower", "upper", "decay")
DEFAULT_RADII = 16


@dataclass(frozen=True)
class MeasureTable:
    """Ball measures mu(B(x_i, r_j)) with their absolute error bounds."""

    centers: np.ndarray
    radii: np.ndarray
    values: np.ndarray
    errors: np.ndarray

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            write_measure_rows(fh, self)


def write_measure_rows(fh, table):
    w = csv.writer(fh)
    dim = table.centers.shape[1]
    w.writerow([f"x{i}" for i in range(dim)] + ["r", "measure", "error"])
    for i, c in enumerate(table.centers):
        for j, r in enumerate(table.radii):
            w.writerow([*map(float, c), float(r), float(table.values[i, j]), float(table.errors[i, j])])


@dataclass(frozen=True)
class DoublingReport:
    constant_estimate: float
    uncertainty: float
    worst_ball: BallSpec
    radius_range: tuple
    table: MeasureTable = field(repr=False, default=None)

    def to_dict(self):
        return {"constant_estimate": self.constant_estimate, "uncertainty": self.uncertainty,
                "worst_ball": {"center": list(self.worst_ball.center), "radius": self.worst_ball.radius},
                "radius_range": list(self.radius_range)}


@dataclass(frozen=True)
class DimensionFit:
    exponent: float
    constant_band: tuple
    residual: float
    radius_range: tuple
    direction: str
    n_centers: int = 0
    table: MeasureTable = field(repr=False, default=None)

    def to_dict(self):
        return {"exponent": self.exponent, "constant_band": list(self.constant_band),
                "residual": self.residual, "radius_range": list(self.radius_range),
                "direction": self.direction, "n_centers": self.n_centers}

    def to_json(self):
        return json.dumps(self.to_dict())


def sample_diameter(points):
    P = np.atleast_2d(points)
    if len(P) < 2:
        return 0.0
    if len(P) > 2000:
        P = P[np.linspace(0, len(P) - 1, 2000).astype(int)]
    return float(pdist(P).max())


def default_r0(points):
    """Largest admissible radius: diam(E) / 10."""
    return sample_diameter(points) / 10.0


def default_radii(points, count=DEFAULT_RADII, lo=1e-4, hi=1e-1):
    """``count`` log-spaced radii in [lo, hi] * diam(E), decreasing."""
    d = sample_diameter(points)
    if d == 0:
        raise ValueError("sample diameter is zero; supply radii explicitly")
    return np.geomspace(hi * d, lo * d, count)


def measure_table(space, measure_id, E_sample, radii, target_rel_error=1e-2, seed=0, threads=1):
    C = np.atleast_2d(np.asarray(E_sample, float))
    if C.shape[1] != space.dim:
        C = C.reshape(-1, space.dim)
    R = np.asarray(radii, float)
    vals = np.empty((len(C), len(R)))
    errs = np.empty_like(vals)
    for i, c in enumerate(C):
        for j, r in enumerate(R):
            est = ball_measure(space, measure_id, BallSpec(c, r), target_rel_error,
                               seed=seed + 7919 * i + j, threads=threads)
            vals[i, j], errs[i, j] = est.value, est.error
    return MeasureTable(C, R, vals, errs)


def doubling_constant(space, measure_id, E_sample, radii=None, target_rel_error=1e-2, seed=0, threads=1):
    """Max over sampled (x, r) of mu(B(x, 2r)) / mu(B(x, r)).

    Raises :class:`DegenerateMeasureError` naming the first ball of zero measure.
    """
    E = np.atleast_2d(np.asarray(E_sample, float))
    if E.size == 0:
        raise ValueError("E_sample must be nonempty")
    R = np.asarray(default_radii(E) if radii is None else radii, float)
    grid = np.concatenate([R, 2 * R])
    t = measure_table(space, measure_id, E, grid, target_rel_error, seed, threads)
    k = len(R)
    small, big = t.values[:, :k], t.values[:, k:]
    zero = np.argwhere(small <= 0)
    if len(zero):
        i, j = zero[0]
        ball = BallSpec(E[i], R[j])
        raise DegenerateMeasureError(f"ball B({list(ball.center)}, {ball.radius:g}) has zero measure", ball)
    ratio = big / small
    i, j = np.unravel_index(np.argmax(ratio), ratio.shape)
    rel = t.errors[i, k + j] / big[i, j] + t.errors[i, j] / small[i, j]
    return DoublingReport(max(float(ratio[i, j]), 1.0), float(ratio[i, j] * rel),
                          BallSpec(E[i], R[j]), (float(R.min()), float(R.max())), t)


def _check_radii(R):
    if len(R) < 8:
        raise FitFailureError("need at least 8 radii", {"count": len(R)})
    if R.max() / R.min() < 100 * (1 - 1e-9):
        raise FitFailureError("radii must span at least two decades",
                              {"r_min": float(R.min()), "r_max": float(R.max())})


def fit_exponents(space, measure_id, E_sample, radii=None, direction="lower",
                  target_rel_error=1e-2, seed=0, threads=1, table=None):
    """Fit the exponent s (direction="lower"), sigma ("upper") or delta ("decay").

    lower/upper: pooled least squares of log mu(B(x, r)) on log r, with a
    constant band [min, max] of mu(B(x, r)) / r^exponent over the data.
    decay: least squares through the origin of log(mu(B(x, r'))/mu(B(x, r)))
    on log(r'/r) over all radius pairs r' < r, band of ratio / (r'/r)^delta.
    """
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    E = np.atleast_2d(np.asarray(E_sample, float))
    R = np.asarray(default_radii(E) if radii is None else radii, float)
    _check_radii(R)
    t = table or measure_table(space, measure_id, E, R, target_rel_error, seed, threads)
    order = np.argsort(t.radii)
    R, V, Er = t.radii[order], t.values[:, order], t.errors[:, order]
    if np.any(V <= 0):
        i, j = np.argwhere(V <= 0)[0]
        raise FitFailureError("zero ball measure in fit data",
                              {"center": t.centers[i].tolist(), "r": float(R[j])})
    drops = V[:, :-1] - V[:, 1:] - (Er[:, :-1] + Er[:, 1:])
    if np.any(drops > 1e-12 * V[:, 1:]):
        i, j = np.argwhere(drops > 1e-12 * V[:, 1:])[0]
        raise FitFailureError("ball measure decreases with radius beyond error bars",
                              {"center": t.centers[i].tolist(), "r": float(R[j]), "r_next": float(R[j + 1]),
                               "values": [float(V[i, j]), float(V[i, j + 1])]})
    rr = (float(R.min()), float(R.max()))
    if direction == "decay":
        a, b = np.triu_indices(len(R), k=1)  # a < b so R[a] < R[b]
        lx = np.log(R[a] / R[b])
        ly = np.log(V[:, a] / V[:, b])
        X = np.broadcast_to(lx, ly.shape).ravel()
        Y = ly.ravel()
        delta = float(X @ Y / (X @ X))
        resid = Y - delta * X
        band = np.exp(ly - delta * lx)
        return DimensionFit(delta, (float(band.min()), float(band.max())),
                            float(np.sqrt(np.mean(resid ** 2))), rr, direction, len(E), t)
    lx = np.broadcast_to(np.log(R), V.shape).ravel()
    ly = np.log(V).ravel()
    A = np.column_stack([lx, np.ones_like(lx)])
    (slope, icpt), *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - A @ np.array([slope, icpt])
    band = np.exp(ly - slope * lx)
    return DimensionFit(float(slope), (float(band.min()), float(band.max())),
                        float(np.sqrt(np.mean(resid ** 2))), rr, direction, len(E), t)
