"""Stratified Monte Carlo integration over a box with deterministic per-stratum streams."""

from concurrent.futures import ThreadPoolExecutor
import itertools

import numpy as np

from .errors import BudgetExceededError

Z99 = 2.5758293035489004  # two-sided 99% normal quantile


def _strata(lo, hi, per_axis):
    lo = np.asarray(lo, float)
    hi = np.asarray(hi, float)
    edges = [np.linspace(l, h, per_axis + 1) for l, h in zip(lo, hi)]
    cells = []
    for idx in itertools.product(range(per_axis), repeat=len(lo)):
        a = np.array([edges[k][i] for k, i in enumerate(idx)])
        b = np.array([edges[k][i + 1] for k, i in enumerate(idx)])
        cells.append((a, b))
    return cells


class _Stratum:
    def __init__(self, lo, hi, seed, index):
        self.lo, self.hi = lo, hi
        self.volume = float(np.prod(hi - lo))
        self.rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
        self.n = 0
        self.s1 = 0.0
        self.s2 = 0.0

    def draw(self, f, m):
        x = self.lo + (self.hi - self.lo) * self.rng.random((m, len(self.lo)))
        v = np.asarray(f(x), dtype=float)
        self.n += m
        self.s1 += float(v.sum())
        self.s2 += float(np.dot(v, v))

    def moments(self):
        mean = self.s1 / self.n
        var = max(self.s2 / self.n - mean * mean, 0.0)
        return self.volume * mean, self.volume ** 2 * var / max(self.n - 1, 1)


def integrate(f, lo, hi, target_rel_error=1e-2, seed=0, budget=10**7,
              min_samples=4096, per_axis=None, threads=1, raise_on_budget=True):
    """Integrate ``f`` over the box [lo, hi] by stratified sampling.

    Sample counts double per stratum until the 99% half-width divided by the
    estimate is at most ``target_rel_error`` or ``budget`` total samples are
    spent. Returns ``(value, half_width, n_samples)``; a zero integrand after
    the first round returns ``(0.0, 0.0, n)``.
    """
    dim = len(lo)
    if per_axis is None:
        per_axis = {1: 16, 2: 4, 3: 2}.get(dim, 1)
    strata = [_Stratum(a, b, seed, i) for i, (a, b) in enumerate(_strata(lo, hi, per_axis))]
    m = max(min_samples // len(strata), 16)
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        while True:
            if pool is None:
                for s in strata:
                    s.draw(f, m)
            else:
                list(pool.map(lambda s: s.draw(f, m), strata))
            total = sum(s.n for s in strata)
            parts = [s.moments() for s in strata]
            value = sum(p[0] for p in parts)
            half = Z99 * np.sqrt(sum(p[1] for p in parts))
            if value == 0.0:
                return 0.0, 0.0, total
            if half <= target_rel_error * abs(value):
                return value, half, total
            if total + 2 * m * len(strata) > budget:
                if raise_on_budget:
                    raise BudgetExceededError(
                        f"Monte Carlo relative error {half / abs(value):.3g} above "
                        f"target {target_rel_error} after {total} samples",
                        best_estimate=(value, half, total))
                return value, half, total
            m *= 2
    finally:
        if pool is not None:
            pool.shutdown()
