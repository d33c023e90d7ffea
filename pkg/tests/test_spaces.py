import json
import math

import numpy as np
import pytest
from scipy import integrate

from helpers import cantor_space, lebesgue_plane, optimal_weight
from sobembed import (BallSpec, BudgetExceededError, Domain, MeasureSpec, Metric, SpaceModel, SpaceSpecError,
                      ball_measure, distance_to_boundary, sample_region)
from sobembed import geometry

# quad of 2 pi t * t log(1/t) over (0, 0.1), computed independently and frozen
XLOGX_MASS_01 = 0.005520654642408044


def test_unit_disc_is_pi():
    assert ball_measure(lebesgue_plane(), "leb", BallSpec((3.0, -1.0), 1.0)).value == pytest.approx(math.pi, rel=1e-12)


def test_lebesgue_scaling():
    for n in (1, 2, 3, 4):
        sp = SpaceModel(n, measures=[MeasureSpec("leb", "lebesgue")])
        c = np.zeros(n)
        a = ball_measure(sp, "leb", BallSpec(c, 0.3)).value
        b = ball_measure(sp, "leb", BallSpec(c, 0.6)).value
        assert b / a == pytest.approx(2 ** n, rel=1e-12)


def test_xlogx_mass_against_quadrature():
    v = ball_measure(optimal_weight(), "w", BallSpec((0.0, 0.0), 0.1)).value
    assert v == pytest.approx(XLOGX_MASS_01, rel=1e-9)
    oracle, _ = integrate.quad(lambda t: 2 * math.pi * t * t * math.log(1 / t), 0, 0.1, epsabs=1e-15)
    assert XLOGX_MASS_01 == pytest.approx(oracle, rel=1e-12)


def test_off_center_radial_ball_matches_polar_quadrature():
    c, r = np.array([0.05, 0.0]), 0.03
    v = ball_measure(optimal_weight(), "w", BallSpec(c, r), 1e-6).value
    w = lambda rho: rho * math.log(1 / rho)
    oracle, _ = integrate.dblquad(lambda t, phi: w(math.hypot(c[0] + t * math.cos(phi), t * math.sin(phi))) * t,
                                  0, 2 * math.pi, 0, r, epsabs=1e-14)
    assert v == pytest.approx(oracle, rel=1e-6)


def test_cantor_quarter_mass_by_interval_counting():
    # mass of [0, 1/4] from the 2^10 level-10 intervals, each carrying 2^-10
    depth = 10
    left = np.array([0.0])
    for _ in range(depth):
        left = np.concatenate([left / 3, left / 3 + 2 / 3])
    w = 3.0 ** -depth
    frac = np.clip((0.25 - left) / w, 0, 1)
    oracle = frac.sum() / 2 ** depth
    v = ball_measure(cantor_space(), "c", BallSpec((0.0,), 0.25)).value
    assert v == pytest.approx(oracle, abs=2 ** -9)
    assert v == pytest.approx(1 / 3, abs=1e-9)  # cdf evaluated to finite digit depth


def test_cantor_samples_have_binary_ternary_digits():
    pts = sample_region(cantor_space(), n=200, seed=4)[:, 0]
    digits = geometry.ternary_digits(pts, 12)
    assert set(np.unique(digits)) <= {0, 2}


def test_cusp_membership_and_distance():
    sp = SpaceModel(3, domain=Domain("cusp", {"gamma": 2.0}), measures=[MeasureSpec("leb", "lebesgue")])
    assert sp.domain.contains([(0.0, 0.0, 0.5)])[0]
    assert not sp.domain.contains([(0.3, 0.0, 0.5)])[0]
    ts = np.linspace(0, 1, 2_000_001)
    brute = np.hypot(ts ** 2, ts - 0.5).min()
    assert distance_to_boundary(sp, (0.0, 0.0, 0.5)) == pytest.approx(brute, abs=1e-6)
    pts = sample_region(sp, n=500, seed=1)
    assert sp.domain.contains(pts).all()
    with pytest.raises(ValueError):
        distance_to_boundary(sp, (0.9, 0.0, 0.1))


def test_koch_distance_stable_in_depth():
    x = geometry.koch_centroid(1.0)
    d = [distance_to_boundary(SpaceModel(2, domain=Domain("koch", {"depth": k}),
                                         measures=[MeasureSpec("leb", "lebesgue")]), x) for k in (4, 5, 6)]
    assert abs(d[1] - d[0]) <= 3.0 ** -4
    assert abs(d[2] - d[1]) <= 3.0 ** -5


def test_monotone_in_radius():
    sp = optimal_weight()
    vals = [ball_measure(sp, "v", BallSpec((0.02, 0.01), r), 1e-4).value for r in np.geomspace(1e-3, 0.3, 12)]
    assert np.all(np.diff(vals) > 0)


def _box():
    return SpaceModel(2, domain=Domain("box", {"lo": [0, 0], "hi": [1, 1]}), measures=[MeasureSpec("leb", "lebesgue")])


def test_monte_carlo_seed_determinism():
    b = BallSpec((0.1, 0.5), 0.2)
    a1 = ball_measure(_box(), "leb", b, 1e-2, seed=3)
    a2 = ball_measure(_box(), "leb", b, 1e-2, seed=3)
    assert a1 == a2
    assert a1.method == "monte-carlo"


def test_monte_carlo_error_bars_cover_closed_form():
    # disc crossing the left edge of the unit box, with d = distance from centre to the edge
    rng = np.random.default_rng(11)
    hits = 0
    for i in range(100):
        r = rng.uniform(0.05, 0.3)
        d = rng.uniform(0.0, r)
        exact = math.pi * r * r - (r * r * math.acos(d / r) - d * math.sqrt(r * r - d * d))
        est = ball_measure(_box(), "leb", BallSpec((d, 0.5), r), 1e-2, seed=i)
        hits += abs(est.value - exact) <= 3 * est.error
    assert hits >= 95


def test_budget_exceeded_carries_best_estimate():
    with pytest.raises(BudgetExceededError) as info:
        ball_measure(_box(), "leb", BallSpec((0.1, 0.5), 0.2), 1e-5, budget=10_000)
    assert info.value.best_estimate.value > 0


def test_ball_outside_cantor_is_zero():
    est = ball_measure(cantor_space(), "c", BallSpec((0.5,), 0.1))
    assert est.value == 0.0 and est.zero


@pytest.mark.parametrize("doc, field", [
    ({"measures": []}, "dim"),
    ({"dim": 2, "measures": [{"id": "a", "kind": "foo"}]}, "measures[0].kind"),
    ({"dim": 2, "measures": [{"kind": "lebesgue"}]}, "measures[0].id"),
    ({"dim": 2, "metric": {"kind": "taxicab"}, "measures": []}, "metric.kind"),
    ({"dim": 2, "domain": {"kind": "cusp", "params": {"gamma": 0.5}}, "measures": []}, "domain.params.gamma"),
    ({"dim": 2, "measures": [{"id": "h", "kind": "hyperplane-weight", "params": {"theta": 1.5}}]},
     "measures[0].params.theta"),
])
def test_space_json_errors_name_the_field(doc, field):
    with pytest.raises(SpaceSpecError) as info:
        SpaceModel.from_json(json.dumps(doc))
    assert info.value.field == field


def test_space_round_trip():
    sp = optimal_weight()
    assert SpaceModel.from_dict(sp.to_dict()) == sp


def test_snowflake_metric_radius():
    sp = SpaceModel(1, metric=Metric("snowflake", 0.5), measures=[MeasureSpec("leb", "lebesgue")])
    # metric ball of radius r is the euclidean ball of radius r^2
    assert ball_measure(sp, "leb", BallSpec((0.0,), 0.3)).value == pytest.approx(2 * 0.09)


def test_cantor_ninth_ball_is_one_level_two_cell():
    assert ball_measure(cantor_space(), "c", BallSpec((0.0,), 1 / 9)).value == pytest.approx(0.25, abs=1e-9)


def test_sample_region_examples():
    box = SpaceModel(2, domain=Domain("box", {"lo": [0, 0], "hi": [1, 1]}), measures=[MeasureSpec("leb", "lebesgue")])
    pts = sample_region(box, n=4, seed=7)
    assert pts.shape == (4, 2) and np.all((pts >= 0) & (pts <= 1))
    c = sample_region(cantor_space(), n=100, seed=1)[:, 0]
    assert len(c) == 100 and not np.any(geometry.ternary_digits(c, 15) == 1)
    cusp = SpaceModel(2, domain=Domain("cusp", {"gamma": 2.0}), measures=[MeasureSpec("leb", "lebesgue")])
    x = sample_region(cusp, n=50, seed=3)
    assert np.all((np.abs(x[:, 0]) < x[:, 1] ** 2) & (x[:, 1] ** 2 < 1))
    assert distance_to_boundary(box, (0.5, 0.5)) == 0.5
