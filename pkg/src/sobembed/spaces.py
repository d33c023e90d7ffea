"""Metric measure spaces with ball-measure oracles.

A :class:`SpaceModel` bundles a metric on R^n, a domain region and a catalog of
named measures. :func:`ball_measure` returns exact values where a closed form
is known, deterministic quadrature for radial and hyperplane weights off their
singular sets, and stratified Monte Carlo otherwise.
"""

from dataclasses import dataclass, field
from functools import cached_property
import json
import math
import warnings

import numpy as np
from scipy import integrate as spi
from scipy.optimize import minimize_scalar
from scipy.special import beta as beta_fn, exp1

from . import geometry, montecarlo
from .errors import BudgetExceededError, SpaceSpecError

METRIC_KINDS = ("euclidean", "snowflake")
DOMAIN_KINDS = ("full", "box", "cusp", "koch", "cantor", "dset")
DSET_KINDS = ("hyperplane", "koch", "cantor")
MEASURE_KINDS = ("lebesgue", "radial-weight", "hyperplane-weight", "distance-weight",
                 "coordinate-power", "self-similar", "hausdorff")
RADIAL_PROFILES = ("power", "xlogx", "reciprocal-log")


@dataclass(frozen=True)
class Metric:
    kind: str = "euclidean"
    exponent: float = 1.0

    def __post_init__(self):
        if self.kind not in METRIC_KINDS:
            raise SpaceSpecError("metric.kind", f"unknown kind {self.kind!r}")
        if self.kind == "euclidean" and self.exponent != 1.0:
            raise SpaceSpecError("metric.exponent", "euclidean metric takes no exponent")
        if not 0 < self.exponent <= 1:
            raise SpaceSpecError("metric.exponent", "snowflake exponent must lie in (0, 1]")

    def dist(self, x, y):
        """Pairwise-broadcast distance; last axis holds coordinates."""
        d = np.linalg.norm(np.asarray(x, float) - np.asarray(y, float), axis=-1)
        return d if self.exponent == 1.0 else d ** self.exponent

    def euclidean_radius(self, r):
        """Euclidean radius of the metric ball of radius r."""
        return r if self.exponent == 1.0 else r ** (1.0 / self.exponent)


@dataclass(frozen=True)
class BallSpec:
    center: tuple
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in np.atleast_1d(self.center)))
        if not self.radius > 0:
            raise ValueError(f"ball radius must be > 0, got {self.radius}")

    @property
    def point(self):
        return np.array(self.center)

    def scaled(self, factor):
        return BallSpec(self.center, self.radius * factor)


@dataclass(frozen=True)
class MeasureEstimate:
    value: float
    error: float
    method: str
    n_samples: int = 0
    seed: int | None = None
    zero: bool = False

    @property
    def rel_error(self):
        return self.error / self.value if self.value > 0 else 0.0


@dataclass(frozen=True)
class Domain:
    """Region of R^n: full space, box, cusp, Koch snowflake interior, Cantor set or d-set."""

    kind: str = "full"
    params: dict = field(default_factory=dict)

    def validate(self, dim):
        p = self.params
        if self.kind not in DOMAIN_KINDS:
            raise SpaceSpecError("domain.kind", f"unknown kind {self.kind!r}")
        if self.kind == "box":
            lo, hi = np.asarray(p.get("lo", [0.0] * dim)), np.asarray(p.get("hi", [1.0] * dim))
            if lo.shape != (dim,) or hi.shape != (dim,) or np.any(hi <= lo):
                raise SpaceSpecError("domain.params", "box needs lo < hi of length dim")
        elif self.kind == "cusp":
            if not p.get("gamma", 0) > 1:
                raise SpaceSpecError("domain.params.gamma", "cusp exponent must be > 1")
            if dim < 2:
                raise SpaceSpecError("dim", "cusp needs dim >= 2")
        elif self.kind == "koch":
            if dim != 2:
                raise SpaceSpecError("dim", "koch domain lives in R^2")
        elif self.kind == "cantor":
            if dim != 1:
                raise SpaceSpecError("dim", "cantor domain lives in R^1")
            try:
                geometry.cantor_offsets(p.get("ratio", 1 / 3), p.get("parts", 2))
            except ValueError as exc:
                raise SpaceSpecError("domain.params", str(exc)) from None
        elif self.kind == "dset":
            s = p.get("set")
            if s not in DSET_KINDS:
                raise SpaceSpecError("domain.params.set", f"unknown d-set {s!r}")
            if s == "koch" and dim != 2:
                raise SpaceSpecError("dim", "koch curve lives in R^2")
            if s == "cantor" and dim != 1:
                raise SpaceSpecError("dim", "cantor set lives in R^1")

    # geometry caches
    @cached_property
    def polygon(self):
        if self.kind == "koch" or self.params.get("set") == "koch":
            side = self.params.get("side", 1.0)
            return geometry.Polygon(geometry.koch_snowflake(self.params.get("depth", 7), side))
        return None

    @property
    def gamma(self):
        return float(self.params["gamma"])

    @property
    def cantor(self):
        return float(self.params.get("ratio", 1 / 3)), int(self.params.get("parts", 2))

    def bounds(self, dim):
        """Bounding box (lo, hi) of the region, or None if unbounded."""
        k, p = self.kind, self.params
        if k == "box":
            return np.asarray(p.get("lo", [0.0] * dim), float), np.asarray(p.get("hi", [1.0] * dim), float)
        if k == "cusp":
            return np.r_[-np.ones(dim - 1), 0.0], np.ones(dim)
        if k == "koch" or (k == "dset" and p.get("set") == "koch"):
            return self.polygon.bounds
        if k == "cantor" or (k == "dset" and p.get("set") == "cantor"):
            return np.zeros(1), np.ones(1)
        if k == "dset" and p.get("set") == "hyperplane":
            axis = p.get("axis", 0)
            lo = np.asarray(p.get("lo", [0.0] * dim), float)
            hi = np.asarray(p.get("hi", [1.0] * dim), float)
            lo[axis] = hi[axis] = 0.0
            return lo, hi
        return None

    def contains(self, points, tol=1e-12):
        x = np.atleast_2d(np.asarray(points, dtype=float))
        k, p = self.kind, self.params
        if k == "full":
            return np.ones(len(x), dtype=bool)
        if k == "box":
            lo, hi = self.bounds(x.shape[1])
            return np.all((x >= lo) & (x <= hi), axis=1)
        if k == "cusp":
            xn = x[:, -1]
            rad = np.linalg.norm(x[:, :-1], axis=1)
            with np.errstate(invalid="ignore"):
                top = np.where(xn > 0, np.abs(xn) ** self.gamma, 0.0)
            return (xn > 0) & (rad < top) & (top < 1)
        if k == "koch":
            return self.polygon.contains(x)
        if k == "cantor" or (k == "dset" and p.get("set") == "cantor"):
            return _in_cantor(x[:, 0], *self.cantor)
        if k == "dset":
            if p["set"] == "hyperplane":
                return np.abs(x[:, p.get("axis", 0)]) <= tol
            return self.polygon.distance(x) <= max(tol, 1e-9)
        raise SpaceSpecError("domain.kind", f"unknown kind {k!r}")


def _in_cantor(x, ratio, parts, depth=None):
    offs = geometry.cantor_offsets(ratio, parts)
    depth = depth or min(geometry.cantor_depth(ratio, 1e-12), 40)
    y = np.asarray(x, float).copy()
    ok = (y >= -1e-12) & (y <= 1 + 1e-12)
    y = np.clip(y, 0, 1)
    for _ in range(depth):
        j = np.clip(np.searchsorted(offs, y, side="right") - 1, 0, parts - 1)
        left = offs[j]
        inside = y <= left + ratio + 1e-12
        ok &= inside
        y = np.clip((y - left) / ratio, 0, 1)
    return ok


@dataclass(frozen=True)
class MeasureSpec:
    id: str
    kind: str
    params: dict = field(default_factory=dict)

    def validate(self, dim, where="measures"):
        k, p = self.kind, self.params
        if k not in MEASURE_KINDS:
            raise SpaceSpecError(f"{where}.kind", f"unknown kind {k!r}")
        if k == "radial-weight":
            prof = p.get("profile")
            if prof not in RADIAL_PROFILES:
                raise SpaceSpecError(f"{where}.params.profile", f"unknown radial profile {prof!r}")
            if prof == "power" and not p.get("theta", 0.0) > -dim:
                raise SpaceSpecError(f"{where}.params.theta", "power weight needs theta > -dim")
            if prof != "power":
                cut = p.get("cutoff", 0.5)
                if not 0 < cut < 1:
                    raise SpaceSpecError(f"{where}.params.cutoff", "log profiles need 0 < cutoff < 1")
            if prof == "reciprocal-log" and dim < 2:
                raise SpaceSpecError(f"{where}.params.profile", "reciprocal-log weight is not locally integrable in R^1")
        elif k == "hyperplane-weight":
            th = p.get("theta")
            if th is None or not 0 < th < 1:
                raise SpaceSpecError(f"{where}.params.theta", "hyperplane weight needs 0 < theta < 1")
        elif k == "distance-weight":
            a, a0 = p.get("alpha"), p.get("alpha0", 0.0)
            if a is None or not a > a0:
                raise SpaceSpecError(f"{where}.params.alpha", f"distance weight needs alpha > alpha0 = {a0}")
        elif k == "coordinate-power":
            if "theta" not in p:
                raise SpaceSpecError(f"{where}.params.theta", "coordinate-power needs theta")
        elif k == "hausdorff":
            if p.get("set") not in DSET_KINDS:
                raise SpaceSpecError(f"{where}.params.set", f"unknown d-set {p.get('set')!r}")

    # --- radial weights ---
    def radial_density(self, rho):
        """Weight as a function of distance to the weight's center."""
        p = self.params
        prof = p["profile"]
        rho = np.asarray(rho, float)
        if prof == "power":
            th = p.get("theta", 0.0)
            cut = p.get("cutoff")
            with np.errstate(divide="ignore"):
                w = rho ** th
            if cut is not None:
                w = np.where(rho < cut, w, cut ** th)
            return w
        cut = p.get("cutoff", 0.5)
        r = np.minimum(rho, cut)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(r > 0, r * np.log(1.0 / r), 0.0)
        if prof == "xlogx":
            return w
        with np.errstate(divide="ignore"):
            return 1.0 / w

    def radial_mass(self, t, dim):
        """Closed-form measure of B(center, t) for a radial weight."""
        p = self.params
        prof = p["profile"]
        if t <= 0:
            return 0.0
        S = geometry.sphere_area(dim)
        if prof == "power":
            th = p.get("theta", 0.0)
            cut = p.get("cutoff")
            inner = min(t, cut) if cut is not None else t
            m = S * inner ** (dim + th) / (dim + th)
            if cut is not None and t > cut:
                m += cut ** th * geometry.unit_ball_volume(dim) * (t ** dim - cut ** dim)
            return float(m)
        cut = p.get("cutoff", 0.5)
        inner = min(t, cut)
        L = math.log(1.0 / inner)
        if prof == "xlogx":
            m = S * inner ** (dim + 1) / (dim + 1) * (L + 1.0 / (dim + 1))
        else:
            m = S * float(exp1((dim - 1) * L))
        if t > cut:
            m += float(self.radial_density(cut)) * geometry.unit_ball_volume(dim) * (t ** dim - cut ** dim)
        return float(m)

    @property
    def weight_center(self):
        return self.params.get("center")


@dataclass(frozen=True)
class SpaceModel:
    dim: int
    metric: Metric = Metric()
    domain: Domain = Domain()
    measures: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (isinstance(self.dim, int) and self.dim >= 1):
            raise SpaceSpecError("dim", "dim must be an integer >= 1")
        self.domain.validate(self.dim)
        meas = self.measures
        if isinstance(meas, (list, tuple)):
            seen = {}
            for i, m in enumerate(meas):
                if m.id in seen:
                    raise SpaceSpecError(f"measures[{i}].id", f"duplicate measure id {m.id!r}")
                seen[m.id] = m
            meas = seen
            object.__setattr__(self, "measures", meas)
        for i, (mid, m) in enumerate(meas.items()):
            m.validate(self.dim, where=f"measures[{i}]")

    def measure(self, measure_id):
        try:
            return self.measures[measure_id]
        except KeyError:
            raise SpaceSpecError("measure_id", f"unknown measure id {measure_id!r}") from None

    @classmethod
    def from_dict(cls, doc):
        if not isinstance(doc, dict):
            raise SpaceSpecError("<root>", "space description must be a JSON object")
        for key in ("dim", "measures"):
            if key not in doc:
                raise SpaceSpecError(key, "missing required field")
        met = doc.get("metric", {"kind": "euclidean"})
        if not isinstance(met, dict) or "kind" not in met:
            raise SpaceSpecError("metric.kind", "missing required field")
        if met["kind"] not in METRIC_KINDS:
            raise SpaceSpecError("metric.kind", f"unknown kind {met['kind']!r}")
        metric = Metric(met["kind"], float(met.get("exponent", 1.0)))
        dom = doc.get("domain", {"kind": "full"})
        if not isinstance(dom, dict) or "kind" not in dom:
            raise SpaceSpecError("domain.kind", "missing required field")
        domain = Domain(dom["kind"], dict(dom.get("params", {})))
        if not isinstance(doc["measures"], list):
            raise SpaceSpecError("measures", "must be a list")
        measures = []
        for i, m in enumerate(doc["measures"]):
            for key in ("id", "kind"):
                if key not in m:
                    raise SpaceSpecError(f"measures[{i}].{key}", "missing required field")
            measures.append(MeasureSpec(str(m["id"]), m["kind"], dict(m.get("params", {}))))
        dim = doc["dim"]
        if not isinstance(dim, int):
            raise SpaceSpecError("dim", "dim must be an integer >= 1")
        return cls(dim, metric, domain, measures)

    @classmethod
    def from_json(cls, text_or_path):
        text = str(text_or_path)
        if not text.lstrip().startswith("{"):
            with open(text) as fh:
                text = fh.read()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpaceSpecError("<root>", f"invalid JSON: {exc}") from None
        return cls.from_dict(doc)

    def to_dict(self):
        return {
            "dim": self.dim,
            "metric": {"kind": self.metric.kind, "exponent": self.metric.exponent},
            "domain": {"kind": self.domain.kind, "params": self.domain.params},
            "measures": [{"id": m.id, "kind": m.kind, "params": m.params} for m in self.measures.values()],
        }


# --- ball measures ------------------------------------------------------------

def ball_measure(space, measure_id, ball, target_rel_error=1e-3, seed=0,
                 budget=10**7, threads=1):
    """Measure of ``ball`` under ``space.measures[measure_id]`` restricted to the domain.

    Dispatches to closed forms (Lebesgue, origin-centred radial weights,
    hyperplane weights centred on the hyperplane, self-similar Cantor measure,
    flat Hausdorff measure), to adaptive quadrature for radial and hyperplane
    weights elsewhere and for the Koch curve measure, and to stratified Monte
    Carlo for everything else. A ball missing the region returns a zero
    estimate with ``zero=True``. Raises :class:`BudgetExceededError` when
    Monte Carlo cannot meet ``target_rel_error`` within ``budget`` samples.
    """
    if not 0 < target_rel_error < 1:
        raise ValueError("target_rel_error must lie in (0, 1)")
    m = space.measure(measure_id)
    c = np.asarray(ball.center, float)
    if c.shape != (space.dim,):
        raise ValueError(f"ball center has dimension {c.size}, space has {space.dim}")
    r = space.metric.euclidean_radius(ball.radius)
    dom = space.domain
    n = space.dim
    k = m.kind

    if k == "self-similar" or (k == "hausdorff" and m.params.get("set") == "cantor"):
        ratio, parts = _cantor_params(space, m)
        v = float(geometry.cantor_cdf(c[0] + r, ratio, parts) - geometry.cantor_cdf(c[0] - r, ratio, parts))
        return _exact(v)

    if k == "hausdorff":
        return _hausdorff_measure(space, m, c, r)

    if dom.kind in ("cantor", "dset"):
        # absolutely continuous measures vanish on null sets
        return MeasureEstimate(0.0, 0.0, "closed-form", zero=True)

    unrestricted = dom.kind == "full" or (dom.kind == "box" and _ball_in_box(c, r, dom, n))
    if dom.kind == "box" and n == 1 and k == "lebesgue":
        lo, hi = dom.bounds(1)
        v = max(0.0, min(c[0] + r, hi[0]) - max(c[0] - r, lo[0]))
        return _exact(v)

    if unrestricted:
        if k == "lebesgue":
            return _exact(geometry.unit_ball_volume(n) * r ** n)
        if k == "radial-weight":
            return _radial_ball(m, c, r, n)
        if k == "hyperplane-weight":
            return _hyperplane_ball(m, c, r, n)

    return _mc_ball(space, m, c, r, target_rel_error, seed, budget, threads)


def _exact(v):
    v = float(v)
    return MeasureEstimate(v, 0.0, "closed-form", zero=v == 0.0)


def _cantor_params(space, m):
    if "ratio" in m.params or "parts" in m.params:
        return float(m.params.get("ratio", 1 / 3)), int(m.params.get("parts", 2))
    return space.domain.cantor


def _ball_in_box(c, r, dom, n):
    lo, hi = dom.bounds(n)
    return bool(np.all(c - r >= lo) and np.all(c + r <= hi))


def _radial_ball(m, c, r, n):
    w0 = np.asarray(m.weight_center if m.weight_center is not None else np.zeros(n), float)
    a = float(np.linalg.norm(c - w0))
    if a == 0.0:
        return _exact(m.radial_mass(r, n))
    if n == 1:
        lo, hi = c[0] - w0[0] - r, c[0] - w0[0] + r
        half = lambda t: 0.5 * m.radial_mass(abs(t), 1)
        if lo >= 0:
            v = half(hi) - half(lo)
        elif hi <= 0:
            v = half(lo) - half(hi)
        else:
            v = half(hi) + half(lo)
        return _exact(v)
    inner = max(r - a, 0.0)
    base = m.radial_mass(inner, n) if inner > 0 else 0.0
    lo, hi = abs(a - r), a + r
    S = geometry.sphere_area(n)

    def integrand(t):
        cos = (t * t + a * a - r * r) / (2.0 * t * a)
        return float(m.radial_density(t)) * t ** (n - 1) * float(geometry.cap_fraction(cos, n))

    pts = [p for p in (m.params.get("cutoff"),) if p is not None and lo < p < hi]
    shell, err = _quad(integrand, lo, hi, pts)
    return MeasureEstimate(float(base + S * shell), float(S * err), "quadrature")


def _hyperplane_ball(m, c, r, n):
    th = m.params["theta"]
    axis = m.params.get("axis", 0)
    c1 = c[axis]
    wn = geometry.unit_ball_volume(n - 1)
    if c1 == 0.0:
        return _exact(wn * r ** (n - th) * beta_fn((1 - th) / 2, (n + 1) / 2))

    def slice_vol(t):
        return wn * max(r * r - (t - c1) ** 2, 0.0) ** ((n - 1) / 2)

    lo, hi = c1 - r, c1 + r
    total, err = 0.0, 0.0
    # integrate |t|^-theta * slice on each side of the hyperplane with an algebraic weight
    if hi > 0:
        a = max(lo, 0.0)
        if a == 0.0:
            v, e = spi.quad(slice_vol, 0.0, hi, weight="alg", wvar=(-th, 0.0), epsabs=0, epsrel=1e-11, limit=200)
        else:
            v, e = _quad(lambda t: t ** -th * slice_vol(t), a, hi)
        total, err = total + v, err + e
    if lo < 0:
        b = min(hi, 0.0)
        if b == 0.0:
            v, e = spi.quad(lambda s: slice_vol(-s), 0.0, -lo, weight="alg", wvar=(-th, 0.0), epsabs=0, epsrel=1e-11, limit=200)
        else:
            v, e = _quad(lambda s: s ** -th * slice_vol(-s), -b, -lo)
        total, err = total + v, err + e
    return MeasureEstimate(float(total), float(err), "quadrature")


def _quad(f, a, b, points=()):
    with warnings.catch_warnings():
        # roundoff warnings are reflected in the returned error estimate
        warnings.simplefilter("ignore", spi.IntegrationWarning)
        return _quad_raw(f, a, b, points)


def _quad_raw(f, a, b, points):
    if points:
        v, e = spi.quad(f, a, b, points=list(points), epsabs=0, epsrel=1e-11, limit=200)
    else:
        v, e = spi.quad(f, a, b, epsabs=0, epsrel=1e-11, limit=200)
    return v, e


def _hausdorff_measure(space, m, c, r):
    s = m.params["set"]
    n = space.dim
    if s == "hyperplane":
        axis = m.params.get("axis", 0)
        h = abs(c[axis])
        if h >= r:
            return MeasureEstimate(0.0, 0.0, "closed-form", zero=True)
        return _exact(geometry.unit_ball_volume(n - 1) * (r * r - h * h) ** ((n - 1) / 2))
    # Koch curve natural measure, normalized to total mass 1, from the depth-k polyline
    depth = m.params.get("depth", space.domain.params.get("depth", 7))
    side = m.params.get("side", space.domain.params.get("side", 1.0))
    verts = _koch_vertices(depth, side)
    a = verts
    b = np.roll(verts, -1, axis=0)
    lengths = geometry.segment_length_in_ball(a, b, c, r)
    seg = side * 3.0 ** -depth
    total = 3.0 * 4 ** depth * seg
    v = float(lengths.sum() / total)
    partial = np.count_nonzero((lengths > 0) & (lengths < seg * (1 - 1e-12)))
    # every partially covered segment carries mass 1/N and sits in a cell of that mass
    err = 2.0 * (partial + 2) / (3.0 * 4 ** depth)
    return MeasureEstimate(v, err, "quadrature", zero=(v == 0.0))


_KOCH_CACHE = {}


def _koch_vertices(depth, side):
    key = (int(depth), float(side))
    if key not in _KOCH_CACHE:
        _KOCH_CACHE[key] = geometry.koch_snowflake(*key)
    return _KOCH_CACHE[key]


def density(space, m, x):
    """Pointwise density of an absolutely continuous measure (restricted to the domain)."""
    x = np.atleast_2d(x)
    k = m.kind
    if k == "lebesgue":
        w = np.ones(len(x))
    elif k == "radial-weight":
        w0 = np.asarray(m.weight_center if m.weight_center is not None else np.zeros(space.dim), float)
        w = m.radial_density(np.linalg.norm(x - w0, axis=1))
    elif k == "hyperplane-weight":
        with np.errstate(divide="ignore"):
            w = np.abs(x[:, m.params.get("axis", 0)]) ** -m.params["theta"]
    elif k == "coordinate-power":
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(x[:, -1] > 0, np.abs(x[:, -1]) ** m.params["theta"], 0.0)
    elif k == "distance-weight":
        inside = space.domain.contains(x)
        w = np.zeros(len(x))
        if inside.any():
            w[inside] = distance_to_boundary_many(space, x[inside]) ** m.params["alpha"]
        return w
    else:
        raise SpaceSpecError("measure.kind", f"{k!r} has no density")
    return np.where(space.domain.contains(x), w, 0.0)


def _mc_ball(space, m, c, r, tol, seed, budget, threads):
    n = space.dim
    lo, hi = c - r, c + r
    b = space.domain.bounds(n)
    if b is not None:
        lo, hi = np.maximum(lo, b[0]), np.minimum(hi, b[1])
        if np.any(hi <= lo):
            return MeasureEstimate(0.0, 0.0, "monte-carlo", 0, seed, zero=True)

    def f(x):
        inball = np.linalg.norm(x - c, axis=1) < r
        out = np.zeros(len(x))
        if inball.any():
            out[inball] = density(space, m, x[inball])
        return out

    try:
        v, half, used = montecarlo.integrate(f, lo, hi, tol, seed, budget, threads=threads)
    except BudgetExceededError as exc:
        v, half, used = exc.best_estimate
        raise BudgetExceededError(str(exc), MeasureEstimate(v, half, "monte-carlo", used, seed)) from None
    return MeasureEstimate(float(v), float(half), "monte-carlo", int(used), seed, zero=v == 0.0)


def chunk_measure(n, gamma, theta, k, j):
    """Closed-form measure of the cusp chunk Omega_{k,j} under x_n^theta dx.

    The chunk is {x in cusp : 2^-k + (j-1) 2^(-k gamma) < x_n < 2^-k + j 2^(-k gamma)},
    clipped to x_n < 1.
    """
    a = 2.0 ** -k + (j - 1) * 2.0 ** (-k * gamma)
    b = min(2.0 ** -k + j * 2.0 ** (-k * gamma), 1.0)
    if b <= a:
        return 0.0
    e = theta + (n - 1) * gamma
    wn = geometry.unit_ball_volume(n - 1)
    if abs(e + 1) < 1e-14:
        return wn * math.log(b / a)
    return wn * (b ** (e + 1) - a ** (e + 1)) / (e + 1)


# --- sampling and distances ---------------------------------------------------

def sample_region(space, region=None, n=1, seed=0):
    """``n`` points of ``region`` (default: the space's domain), deterministic in ``seed``.

    Cantor sets are sampled through random IFS addresses (natural measure),
    cusps through their exact x_n marginal, Koch domains and boxes uniformly.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    region = region or space.domain
    if isinstance(region, dict):
        region = Domain(region["kind"], dict(region.get("params", {})))
    region.validate(space.dim)
    rng = np.random.default_rng(seed)
    dim = space.dim
    k, p = region.kind, region.params
    if k == "full":
        raise ValueError("cannot sample an unbounded region; pass a box region")
    if k == "box":
        lo, hi = region.bounds(dim)
        return lo + (hi - lo) * rng.random((n, dim))
    if k == "cantor" or (k == "dset" and p.get("set") == "cantor"):
        pts, _ = geometry.cantor_sample(n, rng, *region.cantor)
        return pts[:, None]
    if k == "cusp":
        g = region.gamma
        e = (dim - 1) * g  # x_n marginal density ~ x_n^e on (0, 1)
        xn = rng.random(n) ** (1.0 / (e + 1))
        v = rng.standard_normal((n, dim - 1))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        rad = xn ** g * rng.random(n) ** (1.0 / (dim - 1))
        return np.column_stack([v * rad[:, None], xn])
    if k == "koch":
        lo, hi = region.polygon.bounds
        out = []
        got = 0
        while got < n:
            cand = lo + (hi - lo) * rng.random((2 * (n - got) + 16, 2))
            cand = cand[region.polygon.contains(cand)]
            out.append(cand)
            got += len(cand)
        return np.concatenate(out)[:n]
    if k == "dset":
        if p["set"] == "hyperplane":
            lo, hi = region.bounds(dim)
            return lo + (hi - lo) * rng.random((n, dim))
        poly = region.polygon
        seg = rng.integers(0, len(poly.a), n)
        t = rng.random(n)[:, None]
        return poly.a[seg] + t * (poly.b[seg] - poly.a[seg])
    raise ValueError(f"region {k!r} is empty or unsupported")


def distance_to_boundary(space, x):
    """Distance from x to the complement of the domain.

    Exact for boxes and cusps; for the Koch domain, computed against the
    polyline boundary at the domain's recursion depth (error <= side * 3^-depth).
    """
    x = np.asarray(x, float)
    if not space.domain.contains(x[None])[0]:
        raise ValueError(f"point {x.tolist()} lies outside the domain")
    return float(distance_to_boundary_many(space, x[None])[0])


def distance_to_boundary_many(space, x):
    dom = space.domain
    x = np.atleast_2d(np.asarray(x, float))
    if dom.kind == "full":
        return np.full(len(x), np.inf)
    if dom.kind == "box":
        lo, hi = dom.bounds(space.dim)
        return np.minimum(x - lo, hi - x).min(axis=1)
    if dom.kind == "koch":
        return dom.polygon.distance(x)
    if dom.kind == "cusp":
        rho = np.linalg.norm(x[:, :-1], axis=1)
        return np.array([_cusp_distance(r, z, dom.gamma) for r, z in zip(rho, x[:, -1])])
    raise ValueError(f"no boundary distance for domain {dom.kind!r}")


def _cusp_distance(rho, z, g):
    """Distance in the meridian half-plane from (rho, z) to the cusp boundary.

    The boundary consists of the profile curve rho = t^g (0 <= t <= 1) and the
    top disc z = 1, rho <= 1.
    """
    f = lambda t: math.hypot(t ** g - rho, t - z)
    ts = np.linspace(0.0, 1.0, 2001)
    vals = np.hypot(ts ** g - rho, ts - z)
    i = int(np.argmin(vals))
    a, b = ts[max(i - 1, 0)], ts[min(i + 1, len(ts) - 1)]
    res = minimize_scalar(f, bounds=(a, b), method="bounded", options={"xatol": 1e-13})
    curve = min(float(res.fun), float(vals[i]))
    top = abs(1.0 - z) if rho <= 1 else math.hypot(rho - 1, 1 - z)
    return min(curve, top)
