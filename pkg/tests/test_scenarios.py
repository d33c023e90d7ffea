import json
import math

import numpy as np
import pytest

from sobembed import RangeError, run_scenario
from sobembed.scenarios import KOCH_DIM, SCENARIOS, chunk_lipschitz_band, koch_covering_dimension
from sobembed.spaces import chunk_measure


def test_lipschitz_trace_q_star():
    rep = run_scenario("lipschitz-trace", {"n": 3, "p": 2})
    assert rep.quantities["q_star"] == 4.0 and rep.passed
    assert run_scenario("lipschitz-trace", {"n": 3, "p": 2, "q": 3.5}).verdict == "Compact"
    assert run_scenario("lipschitz-trace", {"n": 3, "p": 2, "q": 4}).verdict == "Bounded"
    assert run_scenario("lipschitz-trace", {"n": 3, "p": 2, "q": 4.5}).verdict == "Inconclusive"
    assert run_scenario("lipschitz-trace", {"n": 2, "p": 3}).quantities["q_star"] == math.inf


def test_koch_trace_threshold():
    rep = run_scenario("koch-trace", {"p": 1.5, "alpha": 0})
    assert rep.quantities["q_star"] == pytest.approx(3 * math.log(4) / math.log(3), rel=1e-12)
    assert rep.quantities["q_star"] == pytest.approx(3.786, abs=1e-3)
    assert abs(rep.quantities["fitted_sigma"] - KOCH_DIM) <= 0.05
    assert rep.passed


def test_koch_range_error_names_constraint():
    with pytest.raises(RangeError, match="alpha < d \\+ p - 2"):
        run_scenario("koch-trace", {"p": 1.5, "alpha": 1.0})
    with pytest.raises(RangeError):
        run_scenario("koch-trace", {"p": 1.5, "alpha": -0.1})


def test_koch_depth_convergence_monotone():
    d = [koch_covering_dimension(k) for k in range(1, 9)]
    assert np.all(np.diff(d) < 0) and np.all(np.array(d) > KOCH_DIM)
    for k, x in enumerate(d, start=1):
        assert x - KOCH_DIM == pytest.approx(1 / k, rel=1e-9)


def test_optimal_weight_scenario():
    rep = run_scenario("optimal-weight")
    assert rep.verdict == "q=2: Compact, q=2.5: NotBounded" and rep.passed
    lo, hi = rep.quantities["theta_log_band"]
    assert 0 < lo and hi <= 4 * lo


def test_cusp_scenario_default():
    rep = run_scenario("cusp")
    q = rep.quantities
    assert q["theta"] == 2.0 and q["p_star"] == math.inf and rep.verdict == "Bounded"
    assert 0 < q["mu_comparability_band"][0] <= q["mu_comparability_band"][1] < 10
    lo, hi = q["T_k_lipschitz_band"]
    assert 0 < lo <= hi < 10


def test_cusp_counterexample_threshold():
    base = {"n": 2, "gamma": 5, "p": 2, "kmax": 3}
    assert run_scenario("cusp", {**base, "q": 1.2}).quantities["counterexample_fails_embedding"]
    assert not run_scenario("cusp", {**base, "q": 1.5}).quantities["counterexample_fails_embedding"]
    assert run_scenario("cusp", {**base, "q": 1.2}).quantities["counterexample_q_threshold"] == pytest.approx(4 / 3)


def test_cusp_range_errors():
    with pytest.raises(RangeError):
        run_scenario("cusp", {"gamma": 1.0})
    with pytest.raises(RangeError):
        run_scenario("cusp", {"n": 3, "p": 2, "q": 7})


def test_chunk_measures_tile_the_cusp():
    # levels 1..K cover 2^-K < x_n < 1, where the 2-D cusp has area 2 (1 - 2^-3K) / 3
    n, g, K = 2, 2.0, 14
    tot = 0.0
    for k in range(1, K + 1):
        jk = math.ceil(2.0 ** (k * (g - 1)) - 1e-12)
        tot += sum(chunk_measure(n, g, 0.0, k, j) for j in range(1, jk + 1))
    assert tot == pytest.approx(2 * (1 - 2.0 ** (-3 * K)) / 3, rel=1e-10)


def test_chunk_lipschitz_band_bounded():
    for k in (1, 3, 5):
        lo, hi = chunk_lipschitz_band(3, 2.0, k, 1)
        assert 0.05 < lo <= hi < 20


def test_hajlasz_general_measure():
    rep = run_scenario("hajlasz-general-measure")
    assert rep.verdict == "Compact" and rep.passed


@pytest.mark.parametrize("sid", SCENARIOS)
def test_verdicts_stable_under_seed(sid):
    a, b = run_scenario(sid, seed=0), run_scenario(sid, seed=11)
    assert a.verdict == b.verdict


def test_report_serialises():
    rep = run_scenario("cusp", {"kmax": 2})
    doc = json.loads(rep.to_json())
    assert doc["scenario"] == "cusp" and doc["citation"]
    assert "np.float64" not in rep.to_text()


def test_unknown_scenario():
    with pytest.raises(ValueError):
        run_scenario("nope")
