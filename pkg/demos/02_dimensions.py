"""Recovering dimension exponents from ball measures."""

# %%
import math

import numpy as np

from sobembed import Domain, MeasureSpec, SpaceModel, doubling_constant, fit_exponents, sample_region

radii = np.geomspace(1e-1, 1e-4, 16)

# %% Lebesgue measure in the plane: s = sigma = 2, doubling constant 4
plane = SpaceModel(2, measures=[MeasureSpec("leb", "lebesgue")])
E = np.random.default_rng(1).random((16, 2))
print("s     =", fit_exponents(plane, "leb", E, radii, "lower").exponent)
print("sigma =", fit_exponents(plane, "leb", E, radii, "upper").exponent)
print("C_mu  =", doubling_constant(plane, "leb", E, radii).constant_estimate)

# %% a weight |x_1|^(-1/2) seen from centres on the hyperplane x_1 = 0 has s = 1.5
hyper = SpaceModel(2, measures=[MeasureSpec("h", "hyperplane-weight", {"theta": 0.5})])
E = np.column_stack([np.zeros(16), np.linspace(0, 1, 16)])
print("hyperplane s =", fit_exponents(hyper, "h", E, radii, "lower").exponent)

# %% the natural measure on the middle-thirds Cantor set decays with exponent log 2 / log 3
cantor = SpaceModel(1, domain=Domain("cantor"), measures=[MeasureSpec("c", "self-similar")])
E = sample_region(cantor, n=32, seed=3)
fit = fit_exponents(cantor, "c", E, radii, "decay")
print(f"cantor delta = {fit.exponent:.4f} (log2/log3 = {math.log(2) / math.log(3):.4f})")
