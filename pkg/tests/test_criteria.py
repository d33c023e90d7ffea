import math

import numpy as np
import pytest

from helpers import lebesgue_plane, optimal_weight
from sobembed import (EmbeddingQuery, MeasureSpec, SpaceModel, HypothesisViolation, RangeError, ThetaScan, classify, critical_exponents,
                      cusp_exponent, distance_weight_criterion, theta_scan)
from sobembed.criteria import sobolev_conjugate

RADII = np.geomspace(1e-1, 1e-4, 10)
E2 = ((0.0, 0.0), (1.0, 2.0))
KOCH_D = math.log(4) / math.log(3)


def _leb(p, q, alpha=1.0, **kw):
    query = EmbeddingQuery(p, q, alpha, 1.0, "leb", "leb", E2, **kw)
    return theta_scan(lebesgue_plane(), query, RADII), query


def test_lebesgue_theta_constant():
    scan, _ = _leb(1, 2)
    assert np.allclose(scan.theta_values, math.pi ** -0.5, rtol=1e-12)


@pytest.mark.parametrize("p, q, alpha", [(1, 2, 1), (2, 2, 1), (1, 4, 1), (2, 3, 0.5)])
def test_lebesgue_slope_is_dimension_balance(p, q, alpha):
    # rho^alpha (pi rho^2)^(1/q) / (pi rho^2)^(1/p) has exponent alpha + 2/q - 2/p
    scan, _ = _leb(p, q, alpha)
    expect = alpha + 2 / q - 2 / p
    assert np.polyfit(np.log(RADII), np.log(scan.profile), 1)[0] == pytest.approx(expect, abs=1e-9)
    if expect >= 0:
        assert scan.fitted_log_slope == pytest.approx(expect, abs=1e-9)


def test_theta_nondecreasing_in_r():
    q = EmbeddingQuery(2, 2.5, 1, 1, "w", "v", ((0.0, 0.0), (0.01, 0.0)), True, True)
    scan = theta_scan(optimal_weight(), q, np.geomspace(1e-1, 1e-6, 12))
    assert np.all(np.diff(scan.theta_values) <= 0)  # radii decrease along the grid
    assert np.all(scan.theta_values >= scan.profile)


def test_optimal_weight_theta_log_decay():
    q = EmbeddingQuery(2, 2, 1, 1, "w", "v", ((0.0, 0.0),), True, True)
    R = np.geomspace(1e-1, 1e-6, 16)
    scan = theta_scan(optimal_weight(), q, R)
    band = scan.theta_values * np.log(1 / R)
    assert band.max() / band.min() < 1.25
    assert classify(scan, q).verdict == "Compact"


def test_verdict_table():
    v = classify(*_leb(2, 2))
    assert (v.verdict, v.compact) == ("Compact", True)
    v = classify(*_leb(1, 2))
    assert (v.verdict, v.bounded, v.compact) == ("Bounded", True, None)
    v = classify(*_leb(1, 2, measure_density=True))
    assert (v.verdict, v.compact) == ("NotCompact", False)
    assert v.certificate["kind"] == "bump" and v.certificate["lambda"] == 2.0
    v = classify(*_leb(1, 2, truncation_supported=False))
    assert v.verdict == "Compact" and v.below_q
    v = classify(*_leb(1, 4, measure_density=True))
    assert (v.verdict, v.bounded) == ("NotBounded", False)
    assert v.certificate["radius"] == pytest.approx(RADII[-1])
    v = classify(*_leb(1, 4))
    assert v.verdict == "Inconclusive" and "density" in v.diagnostic


def test_zero_scan_is_inconclusive():
    z = np.zeros(10)
    scan = ThetaScan(RADII, z, 0.0, 0.0, z, np.zeros((10, 1)), z)
    v = classify(scan, EmbeddingQuery(1, 2))
    assert v.verdict == "Inconclusive" and v.diagnostic


def test_zero_nu_on_cantor_complement():
    sp = SpaceModel(1, measures=[MeasureSpec("leb", "lebesgue"), MeasureSpec("c", "self-similar")])
    q = EmbeddingQuery(1, 2, 1, 1, "leb", "c", ((0.5,),))
    v = classify(theta_scan(sp, q, np.geomspace(0.1, 1e-3, 8)), q)
    assert v.verdict == "Inconclusive"


def test_mismatched_query_rejected():
    scan, _ = _leb(1, 2)
    with pytest.raises(ValueError):
        classify(scan, EmbeddingQuery(1, 3, 1, 1, "leb", "leb", E2))


def test_theta_scan_rejects_increasing_radii():
    with pytest.raises(ValueError):
        theta_scan(lebesgue_plane(), EmbeddingQuery(1, 2, 1, 1, "leb", "leb", E2), RADII[::-1])


def test_critical_exponent_examples():
    ce = critical_exponents(3, 2, 1, 2)
    assert ce.q_compact_sup == 4.0 and ce.q_bounded_sup == 4.0
    assert ce.admits_compact(3.9) and not ce.admits_compact(4.0) and ce.admits_bounded(4.0)
    assert critical_exponents(2, KOCH_D, 1, 2).q_compact_sup == math.inf
    assert critical_exponents(1.0, 1.0, 1, 3).q_bounded_sup == math.inf
    with pytest.raises(ValueError):
        critical_exponents(2, 2, 1, 0.5)


def test_distance_weight_examples():
    rng = np.random.default_rng(3)
    for _ in range(200):
        s, sigma, p = rng.uniform(0.5, 4), rng.uniform(0.5, 4), rng.uniform(1, 3)
        q = p + rng.uniform(0.01, 5)
        if sigma <= s - p:
            continue
        assert distance_weight_criterion(s, sigma, 0, 0, p, q)["compact"] == (q * (s - p) < sigma * p)
    out = distance_weight_criterion(2, KOCH_D, 0.5, 0.0, 2, 3)
    assert out == {"compact": True, "bounded": True}
    assert 2 * KOCH_D - 1.5 == pytest.approx(1.0237, abs=1e-4)
    assert distance_weight_criterion(2.5, 1.0, 0.2, 0.0, 2, 1.5)["compact"]
    with pytest.raises(HypothesisViolation):
        distance_weight_criterion(5, 1, 0, 0, 2, 3)


def test_cusp_exponent_examples():
    assert cusp_exponent(2, 2, -4, -4, 2, 2) == 2.0
    assert cusp_exponent(3, 1.5, 0, 0, 2, 3) == pytest.approx(0.75, abs=1e-15)
    # independent evaluation of gamma + (beta + n gamma)/q - (alpha + n gamma)/p
    n, g, a, b, p, q = 4, 2.5, 0.3, -0.7, 1.5, 2.0
    assert cusp_exponent(n, g, a, b, p, q) == pytest.approx(g + (b + n * g) / q - (a + n * g) / p)
    for a in (-1.0, 0.0, 2.0):
        assert cusp_exponent(3, 3.0, a, a, 2, 2) == pytest.approx(3.0)
    with pytest.raises(RangeError):
        cusp_exponent(3, 2, 0, 0, 2, 7)
    with pytest.raises(RangeError):
        cusp_exponent(3, 1.0, 0, 0, 2, 2)
    assert sobolev_conjugate(3, 2) == 6.0 and sobolev_conjugate(2, 2) == math.inf


def test_scan_csv_and_dict():
    scan, _ = _leb(1, 2)
    rows = scan.to_csv().splitlines()
    assert rows[0] == "r,theta,profile,rel_error" and len(rows) == 11
    assert scan.to_dict()["sup_over_range"] == pytest.approx(math.pi ** -0.5)
