"""Equal-radius ball coverings by greedy maximal packing, with overlap certificates.

A maximal family of centers with pairwise distances >= r has pairwise disjoint
half-radius balls and full radius balls covering the sample. Overlap of the
dilated balls is bounded through the doubling property of the ambient measure.
"""

import csv
from dataclasses import dataclass
import json
import math

import numpy as np

from .spaces import Metric

GRID_INDEX_THRESHOLD = 10_000


@dataclass(frozen=True)
class CoverFamily:
    centers: np.ndarray
    radius: float
    dilation: float = 1.0
    source_sample_size: int = 0
    metric: Metric = Metric()

    def __len__(self):
        return len(self.centers)

    def to_dict(self):
        return {"r": self.radius, "lambda": self.dilation,
                "centers": self.centers.tolist(), "source_sample_size": self.source_sample_size}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, doc, metric=Metric()):
        return cls(np.asarray(doc["centers"], float), float(doc["r"]),
                   float(doc.get("lambda", 1.0)), int(doc.get("source_sample_size", 0)), metric)


@dataclass(frozen=True)
class OverlapReport:
    max_overlap: int
    probe_count: int
    guaranteed_bound: int | None = None
    counts: np.ndarray | None = None

    def write_csv(self, path, probes):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            dim = np.atleast_2d(probes).shape[1]
            w.writerow([f"x{i}" for i in range(dim)] + ["overlap"])
            for p, c in zip(np.atleast_2d(probes), self.counts):
                w.writerow([*map(float, p), int(c)])


def _as_points(sample):
    pts = np.asarray(sample, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    return pts


def build_cover(sample, r, metric=Metric(), order="lexicographic", dilation=1.0):
    """Greedy maximal r-separated subset of ``sample``.

    Points are scanned in ``order`` ("lexicographic" or "input"); a point is
    accepted as a center iff its distance to every accepted center is >= r.
    """
    pts = _as_points(sample)
    if len(pts) == 0:
        raise ValueError("sample must be nonempty")
    if not r > 0:
        raise ValueError("r must be > 0")
    if order == "lexicographic":
        idx = np.lexsort(pts.T[::-1])
    elif order == "input":
        idx = np.arange(len(pts))
    else:
        raise ValueError(f"unknown order {order!r}")
    if len(pts) > GRID_INDEX_THRESHOLD and metric.exponent == 1.0:
        chosen = _greedy_grid(pts, idx, r)
    else:
        chosen = _greedy_naive(pts, idx, r, metric)
    return CoverFamily(pts[chosen], float(r), float(dilation), len(pts), metric)


def _greedy_naive(pts, idx, r, metric):
    centers = np.empty_like(pts)
    k = 0
    chosen = []
    for i in idx:
        if k == 0 or metric.dist(centers[:k], pts[i]).min() >= r:
            centers[k] = pts[i]
            k += 1
            chosen.append(i)
    return np.array(chosen, dtype=int)


def _greedy_grid(pts, idx, r):
    # cells of side r: any center within distance < r lies in a neighbouring cell
    cells = {}
    chosen = []
    dim = pts.shape[1]
    offsets = np.array(np.meshgrid(*[[-1, 0, 1]] * dim, indexing="ij")).reshape(dim, -1).T
    keys = np.floor(pts / r).astype(np.int64)
    for i in idx:
        key = keys[i]
        ok = True
        for off in offsets:
            bucket = cells.get(tuple(key + off))
            if bucket and np.linalg.norm(pts[bucket] - pts[i], axis=1).min() < r:
                ok = False
                break
        if ok:
            cells.setdefault(tuple(key), []).append(i)
            chosen.append(i)
    return np.array(chosen, dtype=int)


def measure_overlap(cover, dilation, probes, chunk=4096):
    """Max over probes of the number of dilated balls B(x_i, dilation*r) containing the probe."""
    if dilation < 0.5:
        raise ValueError("dilation must be >= 1/2")
    P = _as_points(probes)
    if len(P) == 0:
        raise ValueError("probes must be nonempty")
    rad = dilation * cover.radius
    counts = np.empty(len(P), dtype=int)
    for s in range(0, len(P), chunk):
        block = P[s:s + chunk]
        d = cover.metric.dist(block[:, None, :], cover.centers[None, :, :])
        counts[s:s + chunk] = np.count_nonzero(d < rad, axis=1)
    return OverlapReport(int(counts.max()), len(P), None, counts)


def default_probes(cover, sample, per_axis=50):
    """The cover's own sample plus a uniform grid over its bounding box."""
    S = _as_points(sample)
    lo, hi = S.min(axis=0), S.max(axis=0)
    axes = [np.linspace(l, h, per_axis) for l, h in zip(lo, hi)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, S.shape[1])
    return np.concatenate([S, grid])


def guaranteed_overlap_bound(model, dilation):
    """Upper bound for the overlap of {dilation * B_i} when the balls B_i / 2 are disjoint.

    ``model`` is one of
      ("geometric", M)            every ball of radius dilation*r is covered by M balls of radius r/2;
      ("lebesgue", n)             Lebesgue measure on R^n, bound (4*dilation+1)^n;
      ("measure", C_mu[, k])      doubling measure, bound C_mu^k with k = ceil(log2(4*dilation+1)).
    """
    if dilation < 0.5:
        raise ValueError("dilation must be >= 1/2")
    kind, *args = model
    if kind == "geometric":
        M = int(args[0])
        if M < 1:
            raise ValueError("covering number must be >= 1")
        return M
    if kind == "lebesgue":
        n = int(args[0])
        return int(math.floor((4 * dilation + 1) ** n + 1e-9))
    if kind == "measure":
        c_mu = float(args[0])
        if c_mu < 1:
            raise ValueError("doubling constant C_mu must be >= 1")
        k = int(args[1]) if len(args) > 1 else math.ceil(math.log2(4 * dilation + 1) - 1e-12)
        return int(math.floor(c_mu ** k + 1e-9))
    raise ValueError(f"unknown doubling model {kind!r}")
