"""Discrete Poincare checks, Maz'ya truncation, Hajlasz pairs and bump certificates.

Fields live on cell-centred regular grids; integrals are masked Riemann sums
with node mass = cell volume x density at the node. A cell containing the
centre of a radial weight gets the closed-form mass of the ball with the cell's
volume instead, which keeps integrable singularities finite and accurate.
"""

import csv
from dataclasses import dataclass, field, replace
import math

import numpy as np
from scipy import integrate as spi

from . import geometry
from .errors import DegenerateMeasureError, RangeError
from .spaces import BallSpec, ball_measure, density


@dataclass(frozen=True)
class DiscreteField:
    """Values u and gradient surrogate g on a cell-centred grid (or a scattered node set)."""

    points: np.ndarray          # (N, dim) node coordinates
    u: np.ndarray               # (N,)
    g: np.ndarray               # (N,) nonnegative
    h: float                    # grid spacing
    mask: np.ndarray = None     # (N,) region membership
    shape: tuple = None         # grid shape when the nodes form a lattice

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, float))
        if pts.shape[0] == 1 and np.ndim(self.points) == 1:
            pts = pts.T
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "u", np.asarray(self.u, float).ravel())
        object.__setattr__(self, "g", np.asarray(self.g, float).ravel())
        m = np.ones(len(pts), bool) if self.mask is None else np.asarray(self.mask, bool).ravel()
        object.__setattr__(self, "mask", m)
        if not self.h > 0:
            raise ValueError("grid spacing h must be > 0")
        if not (len(self.u) == len(self.g) == len(pts) == len(m)):
            raise ValueError("points, u, g and mask must have matching lengths")
        if np.any(self.g < 0):
            raise ValueError("gradient surrogate g must be nonnegative")
        if not np.all(np.isfinite(self.u[m])):
            raise ValueError("u must be finite on masked nodes")

    @property
    def dim(self):
        return self.points.shape[1]

    @property
    def cell_volume(self):
        return self.h ** self.dim

    @classmethod
    def from_function(cls, u, lo, hi, n, g=None, mask=None):
        """Sample ``u`` at the cell centres of an n-per-axis grid on the box [lo, hi].

        ``g`` may be an array, a callable, or None for central differences of u.
        ``mask`` may be a callable on points; differences become one-sided at its edge.
        """
        lo = np.atleast_1d(np.asarray(lo, float))
        hi = np.atleast_1d(np.asarray(hi, float))
        hs = (hi - lo) / n
        if not np.allclose(hs, hs[0]):
            raise ValueError("grid must be square: use a box with equal side lengths")
        axes = [l + (np.arange(n) + 0.5) * hs[0] for l in lo]
        pts = np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, len(lo))
        vals = np.asarray(u(pts) if callable(u) else u, float).ravel()
        msk = np.ones(len(pts), bool) if mask is None else np.asarray(mask(pts) if callable(mask) else mask, bool).ravel()
        shape = (n,) * len(lo)
        if g is None:
            gv = grid_gradient(vals.reshape(shape), msk.reshape(shape), hs[0]).ravel()
        else:
            gv = np.asarray(g(pts) if callable(g) else np.broadcast_to(g, vals.shape), float).ravel()
        return cls(pts, vals, gv, float(hs[0]), msk, shape)

    @classmethod
    def from_csv(cls, path, h=None):
        """Read columns x0..x{d-1}, u and optionally g; g defaults to central differences on a 1-D grid."""
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        if not rows:
            raise ValueError(f"{path}: no rows")
        xs = sorted(k for k in rows[0] if k.startswith("x"))
        pts = np.array([[float(r[k]) for k in xs] for r in rows])
        u = np.array([float(r["u"]) for r in rows])
        if h is None:
            diffs = np.diff(np.unique(pts[:, 0]))
            h = float(diffs.min()) if len(diffs) else 1.0
        if "g" in rows[0] and rows[0]["g"] != "":
            g = np.array([float(r["g"]) for r in rows])
            return cls(pts, u, g, h)
        if pts.shape[1] != 1:
            raise ValueError("gradient column g required for multi-dimensional CSV fields")
        order = np.argsort(pts[:, 0])
        g = np.empty_like(u)
        g[order] = grid_gradient(u[order], np.ones(len(u), bool), h)
        return cls(pts, u, g, h, shape=(len(u),))


def grid_gradient(u, mask, h):
    """|grad u| by central differences, one-sided where a neighbour is off the mask."""
    u = np.asarray(u, float)
    mask = np.asarray(mask, bool)
    sq = np.zeros_like(u)
    for ax in range(u.ndim):
        fwd = np.full_like(u, np.nan)
        bwd = np.full_like(u, np.nan)
        sl_hi = [slice(None)] * u.ndim
        sl_lo = [slice(None)] * u.ndim
        sl_hi[ax], sl_lo[ax] = slice(1, None), slice(None, -1)
        sl_hi, sl_lo = tuple(sl_hi), tuple(sl_lo)
        ok = mask[sl_hi] & mask[sl_lo]
        d = np.where(ok, (u[sl_hi] - u[sl_lo]) / h, np.nan)
        fwd[sl_lo] = d
        bwd[sl_hi] = d
        both = ~np.isnan(fwd) & ~np.isnan(bwd)
        deriv = np.where(both, 0.5 * (fwd + bwd), np.where(np.isnan(fwd), bwd, fwd))
        sq += np.nan_to_num(deriv) ** 2
    return np.where(mask, np.sqrt(sq), 0.0)


def node_masses(field, space=None, measure_id=None):
    """Measure carried by each masked node: cell volume x density, closed form at radial centres."""
    vol = field.cell_volume
    if space is None or measure_id is None:
        return np.where(field.mask, vol, 0.0)
    m = space.measure(measure_id)
    w = np.asarray(density(space, m, field.points), float)
    if m.kind == "radial-weight":
        c0 = np.asarray(m.weight_center if m.weight_center is not None else np.zeros(field.dim), float)
        inside = np.all(np.abs(field.points - c0) <= field.h / 2, axis=1)
        if inside.any():
            r_eq = (vol / geometry.unit_ball_volume(field.dim)) ** (1.0 / field.dim)
            w = w.copy()
            w[inside] = m.radial_mass(r_eq, field.dim) / vol / inside.sum()
    if not np.all(np.isfinite(w[field.mask])):
        raise DegenerateMeasureError("density is infinite at a grid node; shift the grid")
    return np.where(field.mask, w * vol, 0.0)


@dataclass(frozen=True)
class PIReport:
    lhs: float
    rhs: float
    ratio: float
    ball: BallSpec
    params: dict = field(default_factory=dict)

    def to_dict(self):
        return {"lhs": self.lhs, "rhs": self.rhs, "ratio": self.ratio,
                "ball": {"center": list(self.ball.center), "radius": self.ball.radius}, **self.params}


def _ratio(lhs, rhs):
    if rhs > 0:
        return lhs / rhs
    return 0.0 if lhs == 0 else math.inf


def _in_ball(field, ball, factor=1.0):
    d = np.linalg.norm(field.points - ball.point, axis=1)
    return (d < ball.radius * factor) & field.mask


def check_pi(field, ball, mu_id=None, p=1.0, alpha=1.0, lam=1.0, space=None, masses=None):
    """Oscillation mean over B against diam(B)^alpha times the p-mean of g^p over lam*B."""
    m = node_masses(field, space, mu_id) if masses is None else masses
    inB = _in_ball(field, ball)
    if not inB.any() or m[inB].sum() <= 0:
        raise ValueError(f"ball {ball} contains no grid nodes of positive mass")
    inL = _in_ball(field, ball, lam)
    mB = m[inB]
    uB = field.u[inB] - field.u[inB][0]  # centring keeps constant fields exactly zero
    avg = float(mB @ uB / mB.sum())
    lhs = float(mB @ np.abs(uB - avg) / mB.sum())
    mL = m[inL]
    rhs = float((2 * ball.radius) ** alpha * (mL @ field.g[inL] ** p / mL.sum()) ** (1 / p))
    return PIReport(lhs, rhs, _ratio(lhs, rhs), ball, {"p": p, "alpha": alpha, "lambda": lam})


def two_weight_pi_check(field, ball, E_mask=None, mu_id=None, nu_id=None, p=1.0, q_prime=1.0, q=2.0,
                        alpha=1.0, lam=1.0, theta_at_r=1.0, truncation=False, space=None):
    """(int_{B cap E} |u - u_{B,mu}|^q' dnu)^(1/q') against
    theta * nu(B cap E)^(1/q' - 1/q) / (q - q') * (int_{2 lam B} g^p dmu)^(1/p).

    With ``truncation=True`` the endpoint q' = q is admitted and the 1/(q - q')
    factor is dropped.
    """
    if not q > p:
        raise RangeError("two-weight check needs q > p")
    if q_prime > q or (q_prime == q and not truncation):
        raise RangeError("q' must be < q (or = q for truncation-supported fields)")
    if q_prime < 1:
        raise RangeError("q' must be >= 1")
    mu = node_masses(field, space, mu_id)
    nu = node_masses(field, space, nu_id)
    E = field.mask if E_mask is None else (np.asarray(E_mask, bool).ravel() & field.mask)
    inB = _in_ball(field, ball)
    if not inB.any() or mu[inB].sum() <= 0:
        raise ValueError(f"ball {ball} contains no grid nodes of positive mass")
    ref = field.u[inB][0]
    avg = float(mu[inB] @ (field.u[inB] - ref) / mu[inB].sum())
    sel = inB & E
    lhs = float((nu[sel] @ np.abs(field.u[sel] - ref - avg) ** q_prime) ** (1 / q_prime))
    nuBE = float(nu[sel].sum())
    in2L = _in_ball(field, ball, 2 * lam)
    grad = float((mu[in2L] @ field.g[in2L] ** p) ** (1 / p))
    factor = 1.0 if q_prime == q else 1.0 / (q - q_prime)
    rhs = theta_at_r * nuBE ** (1 / q_prime - 1 / q) * factor * grad
    return PIReport(lhs, rhs, _ratio(lhs, rhs), ball,
                    {"p": p, "q_prime": q_prime, "q": q, "alpha": alpha, "lambda": lam, "theta": theta_at_r})


def truncate(field, l, k, cell_average=True):
    """The pair (max(l, min(u, k)), g * 1{l < u < k}) on the same nodes and mask.

    With ``cell_average`` the indicator is replaced by its mean over the node's
    cell, assuming u is linear there with slope g; a level band thinner than
    one cell then still carries its share of g. Otherwise the indicator is
    evaluated at the node.
    """
    if not l < k:
        raise ValueError("truncation levels need l < k")
    u = np.clip(field.u, l, k)
    inside = (field.u > l) & (field.u < k)
    if cell_average:
        half = 0.5 * field.g * field.h
        lo, hi = field.u - half, field.u + half
        span = hi - lo
        with np.errstate(divide="ignore", invalid="ignore"):
            frac = np.clip(np.minimum(hi, k) - np.maximum(lo, l), 0.0, None) / span
        frac = np.where(span > 0, frac, inside)
    else:
        frac = inside
    g = field.g * frac
    return replace(field, u=u, g=g)


def hajlasz_check(field, alpha=1.0, pair_sample=None, seed=0, chunk=2048):
    """Max of |u(x)-u(y)| - d(x,y)^alpha (g(x)+g(y)) over node pairs (exhaustive when pair_sample is None)."""
    idx = np.nonzero(field.mask)[0]
    P, u, g = field.points[idx], field.u[idx], field.g[idx]
    n = len(idx)
    if pair_sample is not None:
        if pair_sample < 1:
            raise ValueError("pair_sample must be >= 1")
        if pair_sample < n * (n - 1) // 2:
            rng = np.random.default_rng(seed)
            i = rng.integers(0, n, pair_sample)
            j = rng.integers(0, n, pair_sample)
            d = np.linalg.norm(P[i] - P[j], axis=1)
            return float(np.max(np.abs(u[i] - u[j]) - d ** alpha * (g[i] + g[j])))
    worst = -math.inf
    for s in range(0, n, chunk):
        a = slice(s, s + chunk)
        d = np.linalg.norm(P[a, None, :] - P[None, :, :], axis=-1)
        viol = np.abs(u[a, None] - u[None, :]) - d ** alpha * (g[a, None] + g[None, :])
        worst = max(worst, float(viol.max()))
    return worst


@dataclass(frozen=True)
class BumpCertificate:
    field: DiscreteField
    a: float
    g_norm_p: float
    u_on_B: float
    u_norm_p: float
    mu_lamB: float
    ball: BallSpec
    lam: float
    p: float
    ratio: float | None = None

    def to_dict(self):
        return {"a": self.a, "g_norm_p": self.g_norm_p, "u_on_B": self.u_on_B, "u_norm_p": self.u_norm_p,
                "mu_lambda_B": self.mu_lamB, "lambda": self.lam, "p": self.p, "ratio": self.ratio,
                "ball": {"center": list(self.ball.center), "radius": self.ball.radius}}


def bump_certificate(space, mu_id, ball, lam, p, nu_id=None, q=None, n_grid=200, target_rel_error=1e-6, seed=0):
    """Plateau function a (1 - dist(x, B)/((lam-1) r))_+ with g = 1_{lam B} / mu(lam B)^(1/p).

    ``u_norm_p`` is computed by the layer-cake formula against the ball-measure
    oracle; ``ratio`` (when ``nu_id`` and ``q`` are given) is the certificate
    lower bound a nu(B)^(1/q) / ((lam-1) ||g||_p) = r nu(B)^(1/q) / mu(lam B)^(1/p).
    """
    if not lam > 1:
        raise ValueError("bump certificate needs lam > 1")
    r = ball.radius
    c = ball.point
    muL = ball_measure(space, mu_id, ball.scaled(lam), target_rel_error, seed).value
    if muL <= 0:
        raise DegenerateMeasureError(f"mu(lam B) = 0 for B = {ball}", ball.scaled(lam))
    a = (lam - 1) * r / muL ** (1 / p)
    # ||g||_p^p = mu(lam B) / mu(lam B) with the same oracle value
    g_norm = (muL / muL) ** (1 / p)

    def level_mass(s):
        rad = r + (lam - 1) * r * (1 - s / a)
        return ball_measure(space, mu_id, BallSpec(c, rad), target_rel_error, seed).value

    integral, _ = spi.quad(lambda s: p * s ** (p - 1) * level_mass(s), 0.0, a, epsabs=0, epsrel=1e-10, limit=200)
    u_norm = integral ** (1 / p)

    half = lam * r * 1.05
    def u(x):
        dist = np.maximum(np.linalg.norm(x - c, axis=1) - r, 0.0)
        return a * np.maximum(1 - dist / ((lam - 1) * r), 0.0)

    def g(x):
        return np.where(np.linalg.norm(x - c, axis=1) < lam * r, muL ** (-1 / p), 0.0)

    fld = DiscreteField.from_function(u, c - half, c + half, n_grid, g=g)
    ratio = None
    if nu_id is not None and q is not None:
        nuB = ball_measure(space, nu_id, ball, target_rel_error, seed + 1).value
        ratio = a * nuB ** (1 / q) / ((lam - 1) * g_norm)
    return BumpCertificate(fld, float(a), float(g_norm), float(a), float(u_norm), float(muL), ball, lam, p, ratio)
