"""Greedy ball coverings of a random planar cloud and their overlap."""

# %%
import numpy as np

from sobembed import build_cover, guaranteed_overlap_bound, measure_overlap
from sobembed.covering import default_probes

rng = np.random.default_rng(0)
pts = rng.random((1000, 2))

# %% centres are r-separated, so half-radius balls are disjoint and full balls cover the cloud
for r in (0.05, 0.1, 0.2):
    for order in ("input", "lexicographic"):
        cover = build_cover(pts, r, order=order)
        rep = measure_overlap(cover, 2.0, default_probes(cover, pts))
        print(f"r={r:<5} order={order:<13} centres={len(cover):4d}  overlap at lambda=2: {rep.max_overlap}")

# %% the volume-counting bound that any such cover must respect
print("guaranteed bound, Lebesgue R^2, lambda=2:", guaranteed_overlap_bound(("lebesgue", 2), 2.0))
print("guaranteed bound, doubling C=4, lambda=2:", guaranteed_overlap_bound(("measure", 4.0), 2.0))
