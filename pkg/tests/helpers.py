import numpy as np

from sobembed.poincare import DiscreteField
from sobembed.spaces import Domain, MeasureSpec, SpaceModel


def random_pl_field(rng, n=2000, max_knots=8):
    """Random piecewise-linear function on [0, 1] with central-difference gradient."""
    k = int(rng.integers(2, max_knots + 1))
    xs = np.r_[0.0, np.sort(rng.random(k)), 1.0]
    ys = rng.standard_normal(k + 2)
    return DiscreteField.from_function(lambda x: np.interp(x[:, 0], xs, ys), 0.0, 1.0, n)


def lebesgue_plane():
    return SpaceModel(2, measures=[MeasureSpec("leb", "lebesgue")])


def lebesgue_line():
    return SpaceModel(1, measures=[MeasureSpec("leb", "lebesgue")])


def unit_interval():
    return SpaceModel(1, domain=Domain("box", {"lo": [0.0], "hi": [1.0]}),
                      measures=[MeasureSpec("leb", "lebesgue")])


def optimal_weight():
    return SpaceModel(2, measures=[
        MeasureSpec("w", "radial-weight", {"profile": "xlogx"}),
        MeasureSpec("v", "radial-weight", {"profile": "reciprocal-log"}),
    ])


def cantor_space():
    return SpaceModel(1, domain=Domain("cantor"), measures=[MeasureSpec("c", "self-similar")])
