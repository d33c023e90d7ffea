"""Theta scans for the weights |x| log(1/|x|) and its reciprocal in the plane."""

# %%
import numpy as np

from sobembed import EmbeddingQuery, classify, theta_scan
from sobembed.scenarios import optimal_weight_space

space = optimal_weight_space()

# %% at q = 2 the local constant decays like 1/log(1/r), so the embedding is compact
radii = np.geomspace(1e-1, 1e-6, 16)
q2 = EmbeddingQuery(2, 2, 1, 1, "w", "v", ((0.0, 0.0),), truncation_supported=True, measure_density=True)
scan = theta_scan(space, q2, radii)
for r, t in zip(radii, scan.theta_values):
    print(f"r={r:9.2e}  Theta={t:.5f}  Theta*log(1/r)={t * np.log(1 / r):.4f}")
print("q=2 verdict:", classify(scan, q2).verdict)

# %% at q = 2.5 the power r^(-1/10) wins over the log only far below r = 1e-6
q25 = EmbeddingQuery(2, 2.5, 1, 1, "w", "v", ((0.0, 0.0),), truncation_supported=True, measure_density=True)
for lo, n in ((1e-6, 16), (1e-80, 40)):
    v = classify(theta_scan(space, q25, np.geomspace(1e-1, lo, n)), q25)
    print(f"q=2.5 on [{lo:g}, 0.1]: {v.verdict}")
