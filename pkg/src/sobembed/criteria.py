"""Local Poincare constant scans, embedding classification and closed-form exponents."""

import csv
from dataclasses import dataclass, field
import io
import json
import math

import numpy as np

from .errors import DegenerateMeasureError, HypothesisViolation, RangeError
from .spaces import BallSpec, ball_measure

VERDICTS = ("Compact", "Bounded", "NotCompact", "NotBounded", "Inconclusive")
SLOPE_MIN = 0.05
MIN_DECADES = 2.0


@dataclass(frozen=True)
class EmbeddingQuery:
    p: float
    q: float
    alpha: float = 1.0
    lam: float = 1.0
    mu_id: str = "mu"
    nu_id: str = "nu"
    E: tuple = ((0.0,),)
    truncation_supported: bool = True
    measure_density: bool = False

    def __post_init__(self):
        if not self.p >= 1 or not self.q >= 1:
            raise ValueError("p and q must be >= 1")
        if not self.alpha > 0:
            raise ValueError("alpha must be > 0")
        if not self.lam >= 1:
            raise ValueError("lambda must be >= 1")
        E = np.atleast_2d(np.asarray(self.E, float))
        object.__setattr__(self, "E", tuple(map(tuple, E.tolist())))

    @property
    def points(self):
        return np.asarray(self.E, float)

    def key(self):
        return (self.p, self.q, self.alpha, self.lam, self.mu_id, self.nu_id, self.E)

    def to_dict(self):
        return {"p": self.p, "q": self.q, "alpha": self.alpha, "lambda": self.lam,
                "mu": self.mu_id, "nu": self.nu_id, "E": [list(x) for x in self.E],
                "truncation_supported": self.truncation_supported,
                "measure_density": self.measure_density}


@dataclass(frozen=True)
class ThetaScan:
    """Theta_{q,lambda} on a decreasing radius grid.

    ``profile[j]`` is the sup over sampled centres at radius ``radii[j]`` alone;
    ``theta_values[j]`` is the sup of ``profile`` over all grid radii <= radii[j].
    """

    radii: np.ndarray
    theta_values: np.ndarray
    fitted_log_slope: float
    sup_over_range: float
    profile: np.ndarray
    argmax_centers: np.ndarray
    rel_error: np.ndarray
    query_key: tuple = field(repr=False, default=None)

    @property
    def decades(self):
        return float(math.log10(self.radii.max() / self.radii.min()))

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "theta", "profile", "rel_error"])
        for row in zip(self.radii, self.theta_values, self.profile, self.rel_error):
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()

    def to_dict(self):
        return {"radii": self.radii.tolist(), "theta": self.theta_values.tolist(),
                "profile": self.profile.tolist(), "rel_error": self.rel_error.tolist(),
                "fitted_log_slope": self.fitted_log_slope, "sup_over_range": self.sup_over_range,
                "argmax_centers": self.argmax_centers.tolist()}


@dataclass(frozen=True)
class EmbeddingVerdict:
    verdict: str
    basis: str
    evidence: object = None
    certificate: dict | None = None
    bounded: bool | None = None
    compact: bool | None = None
    below_q: bool = False
    diagnostic: str = ""

    def to_dict(self):
        ev = self.evidence.to_dict() if hasattr(self.evidence, "to_dict") else self.evidence
        return {"verdict": self.verdict, "basis": self.basis, "bounded": self.bounded,
                "compact": self.compact, "below_q": self.below_q, "certificate": self.certificate,
                "diagnostic": self.diagnostic, "evidence": ev}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def log_slope(radii, values):
    """Least-squares slope of log(values) on log(radii) over positive values."""
    r = np.asarray(radii, float)
    v = np.asarray(values, float)
    ok = v > 0
    if ok.sum() < 2:
        return 0.0
    return float(np.polyfit(np.log(r[ok]), np.log(v[ok]), 1)[0])


def theta_scan(space, query, radii, target_rel_error=1e-2, seed=0, threads=1):
    """Evaluate rho^alpha nu(B(x,rho))^(1/q) / mu(B(x,lam*rho))^(1/p) on the grid.

    ``radii`` must be strictly decreasing. Centres are the points of ``query.E``.
    """
    R = np.asarray(radii, float)
    if R.ndim != 1 or len(R) < 2 or np.any(np.diff(R) >= 0) or R.min() <= 0:
        raise ValueError("radii must be a strictly decreasing grid of positive numbers")
    E = query.points
    prof = np.zeros(len(R))
    rel = np.zeros(len(R))
    arg = np.zeros((len(R), E.shape[1]))
    for j, rho in enumerate(R):
        for i, x in enumerate(E):
            s = seed + 104729 * j + i
            mu = ball_measure(space, query.mu_id, BallSpec(x, query.lam * rho), target_rel_error, s, threads=threads)
            if mu.value <= 0:
                raise DegenerateMeasureError(
                    f"mu(B({list(map(float, x))}, {query.lam * rho:g})) estimated zero", BallSpec(x, query.lam * rho))
            nu = ball_measure(space, query.nu_id, BallSpec(x, rho), target_rel_error, s + 1, threads=threads)
            val = rho ** query.alpha * nu.value ** (1 / query.q) / mu.value ** (1 / query.p)
            if val > prof[j] or i == 0:
                prof[j] = val
                arg[j] = x
                rel[j] = nu.rel_error / query.q + mu.rel_error / query.p
    # radii decrease, so the sup over rho <= r accumulates from the end
    theta = np.maximum.accumulate(prof[::-1])[::-1]
    return ThetaScan(R, theta, log_slope(R, theta), float(theta.max()), prof, arg, rel, query.key())


def _divergent(scan):
    prof = scan.profile
    if np.all(prof <= 0):
        return False
    tail = len(prof) // 2
    slope = log_slope(scan.radii[tail:], prof[tail:])
    return slope <= -SLOPE_MIN and prof[-1] >= 2 * prof[prof > 0].min()


def _decays(scan):
    t = scan.theta_values
    return (scan.fitted_log_slope >= SLOPE_MIN and scan.decades >= MIN_DECADES - 1e-9
            and t[-1] < t[0] / 2)


def _certificate(scan, query, j):
    lam = query.lam if query.lam > 1 else 2.0
    return {"kind": "bump", "center": scan.argmax_centers[j].tolist(), "radius": float(scan.radii[j]),
            "lambda": lam, "p": query.p, "q": query.q, "ratio": float(scan.profile[j])}


def classify(scan, query):
    """Classify the embedding from a Theta scan and the query flags."""
    if scan.query_key is not None and scan.query_key != query.key():
        raise ValueError("scan was produced under a different query")
    if np.all(scan.theta_values <= 0):
        return EmbeddingVerdict("Inconclusive", "degenerate scan", scan,
                                diagnostic="all Theta values are zero: nu vanishes on the sampled balls")
    if _divergent(scan):
        j = len(scan.profile) - 1
        if query.measure_density:
            return EmbeddingVerdict("NotBounded", "necessity of the sup-Theta condition under measure density",
                                    scan, _certificate(scan, query, j), bounded=False, compact=False)
        return EmbeddingVerdict("Inconclusive", "Theta grows toward small radii but measure density not declared",
                                scan, diagnostic="necessity requires measure density")
    if not query.truncation_supported:
        return EmbeddingVerdict("Compact", "sup Theta finite: compact into L^q' for every q' < q",
                                scan, bounded=True, compact=True, below_q=True)
    if _decays(scan):
        return EmbeddingVerdict("Compact", "Theta(r) -> 0 with truncation: compact into L^q",
                                scan, bounded=True, compact=True)
    if query.measure_density:
        j = int(np.argmax(scan.profile[len(scan.profile) // 2:])) + len(scan.profile) // 2
        return EmbeddingVerdict("NotCompact", "sup Theta finite without decay: bounded; "
                                "non-decay under measure density rules out compactness",
                                scan, _certificate(scan, query, j), bounded=True, compact=False)
    return EmbeddingVerdict("Bounded", "sup Theta finite with truncation: bounded into L^q",
                            scan, bounded=True, compact=None)


# --- closed-form exponents ------------------------------------------------------

@dataclass(frozen=True)
class CriticalExponents:
    s: float
    sigma: float
    alpha: float
    p: float
    q_compact_sup: float
    q_bounded_sup: float

    def admits_compact(self, q):
        return q * (self.s - self.alpha * self.p) < self.sigma * self.p

    def admits_bounded(self, q):
        return q * (self.s - self.alpha * self.p) <= self.sigma * self.p

    def to_dict(self):
        f = lambda v: "inf" if math.isinf(v) else v
        return {"q_compact_sup": f(self.q_compact_sup), "q_bounded_sup": f(self.q_bounded_sup)}


def critical_exponents(s, sigma, alpha, p):
    """Thresholds for q(s - alpha p) < sigma p (compact) and <= (bounded)."""
    if not (s > 0 and sigma > 0 and alpha > 0):
        raise ValueError("s, sigma and alpha must be > 0")
    if not p >= 1:
        raise ValueError("p must be >= 1")
    d = s - alpha * p
    q = sigma * p / d if d > 0 else math.inf
    return CriticalExponents(s, sigma, alpha, p, q, q)


def distance_weight_criterion(s, sigma, alpha, beta, p, q):
    """Compact/bounded flags for d(x)^alpha dmu into L^q(d(x)^beta dnu)."""
    if not sigma > s - p:
        raise HypothesisViolation(f"need sigma > s - p, got sigma={sigma}, s-p={s - p}")
    if q > p:
        lhs = q * (s - p)
        rhs = sigma * p + min(beta * p - alpha * q, 0.0)
        return {"compact": lhs < rhs, "bounded": lhs <= rhs}
    ok = s - p < sigma + beta - alpha
    return {"compact": ok, "bounded": ok}


def sobolev_conjugate(n, p):
    return math.inf if p >= n else n * p / (n - p)


def cusp_exponent(n, gamma, alpha, beta, p, q):
    """theta = gamma + (beta + n gamma)/q - (alpha + n gamma)/p for the cusp weights x_n^alpha, x_n^beta."""
    if not gamma > 1:
        raise RangeError("cusp exponent gamma must be > 1")
    if q > sobolev_conjugate(n, p):
        raise RangeError(f"q = {q} exceeds the Sobolev conjugate np/(n-p) = {sobolev_conjugate(n, p)}")
    return gamma + (beta + n * gamma) / q - (alpha + n * gamma) / p
