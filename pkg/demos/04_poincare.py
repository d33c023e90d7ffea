"""Discrete Poincare checks, truncation and Hajlasz pairs on [0, 1]."""

# %%
import numpy as np

from sobembed import BallSpec, check_pi, hajlasz_check, truncate, two_weight_pi_check
from sobembed.poincare import DiscreteField

ball = BallSpec((0.5,), 0.5)

# %% u(x) = x with g = 1: mean oscillation 1/4 against diameter 1
for n in (100, 1000, 10000):
    f = DiscreteField.from_function(lambda x: x[:, 0], 0.0, 1.0, n, g=1.0)
    print(n, check_pi(f, ball).ratio)

# %% truncations of a kinked function; a narrow level band acts like a step and can beat the untruncated ratio
u = lambda x: np.interp(x[:, 0], [0, 0.3, 0.6, 1], [0, 1, -0.5, 0.2])
f = DiscreteField.from_function(u, 0.0, 1.0, 2000)
print("untruncated:", check_pi(f, ball).ratio)
for l, k in ((-0.2, 0.5), (0.4, 0.45), (0.49, 0.5)):
    print(f"levels ({l}, {k}):", check_pi(truncate(f, l, k), ball).ratio)

# %% two-weight form with q' = 1.5 < q = 2
print("two-weight:", two_weight_pi_check(f, ball, p=1, q_prime=1.5, q=2, theta_at_r=2 ** -0.5).ratio)

# %% pointwise Hajlasz inequality |u(x)-u(y)| <= |x-y| (g(x)+g(y))
for g in (0.5, 0.4):
    lin = DiscreteField.from_function(lambda x: x[:, 0], 0.0, 1.0, 200, g=g)
    print(f"g={g}: max violation {hajlasz_check(lin):+.4f}")
