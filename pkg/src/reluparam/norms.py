"""Norms of shallow ReLU realizations on a box.

The Lipschitz seminorm and the infimum of ``|f|`` are computed exactly from
the chamber decomposition.  Hölder and Sobolev-Slobodeckij norms have no
closed form for these functions and are estimated (grid lower bound and
Monte Carlo respectively).  The closed-form integrals and norm comparison
factors used in the analysis of the latter two norms live here as well.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from .errors import DomainError, OrderViolation
from .geometry import (
    PATTERN_CAP,
    Chamber,
    _LP_OPTIONS,
    _partition,
    enumerate_chambers,
)
from .network import BoxDomain, ShallowNet, euclid_norm, evaluate, vec_norm
from .rng import uniform_blocks


# -- special functions ------------------------------------------------------

def _half_integer_gamma(k: int) -> tuple[Fraction, int]:
    """Gamma(k/2) = r * sqrt(pi)**s with rational r and s in {0, 1}."""
    if k <= 0:
        raise DomainError("Gamma(k/2) needs k >= 1")
    if k % 2 == 0:
        return Fraction(math.factorial(k // 2 - 1)), 0
    r = Fraction(1)
    x = Fraction(1, 2)
    while x < Fraction(k, 2):
        r *= x
        x += 1
    return r, 1


def gamma_fn(x: float) -> float:
    """Gamma function, exact recurrence at positive half-integers."""
    twice = 2 * x
    if twice == int(twice) and twice >= 1:
        r, s = _half_integer_gamma(int(twice))
        return float(r) * math.sqrt(math.pi) ** s
    return math.gamma(x)


def _sphere_factor(d: int) -> float:
    """2 * pi^(d/2) / Gamma(d/2), the surface area of the unit sphere in R^d.

    The sqrt(pi) factors of numerator and denominator cancel symbolically.
    """
    r, s = _half_integer_gamma(d)
    # pi^(d/2) = pi^(d//2) * sqrt(pi)^(d%2), and d%2 == s
    return 2 * math.pi ** (d // 2) / float(r)


def ball_integral(d: int, r: float, gamma: float) -> float:
    """Integral of ``|x|^gamma`` over the ball of radius ``r`` in ``R^d``.

    Equals ``2 pi^(d/2) r^(d+gamma) / ((d+gamma) Gamma(d/2))``.

    Raises
    ------
    DomainError
        If ``gamma <= -d`` (the integral diverges) or ``r <= 0``.
    """
    if gamma <= -d:
        raise DomainError(f"integral diverges for gamma={gamma} <= -d={-d}")
    if not r > 0:
        raise DomainError("radius must be positive")
    return _sphere_factor(d) * r ** (d + gamma) / (d + gamma)


def box_double_integral_bound(d: int, a: float, b: float, gamma: float) -> float:
    """Upper bound for the integral of ``|x - y|^gamma`` over pairs in ``[a,b]^d``.

    The inner integral is bounded by the ball of radius ``sqrt(d)(b-a)``, giving
    ``2 pi^(d/2) d^((d+gamma)/2) (b-a)^(2d+gamma) / ((d+gamma) Gamma(d/2))``.
    """
    if gamma <= -d:
        raise DomainError(f"integral diverges for gamma={gamma} <= -d={-d}")
    if not b > a:
        raise DomainError("need a < b")
    w = b - a
    return _sphere_factor(d) * d ** ((d + gamma) / 2) * w ** (2 * d + gamma) / (d + gamma)


def holder_comparison_factor(d: int, a: float, b: float, gamma: float, lam: float) -> float:
    """Constant bounding the gamma-Hölder norm by the lam-Hölder norm on the box."""
    if not 0 <= gamma <= lam <= 1:
        raise OrderViolation(f"need 0 <= gamma <= lam <= 1, got {gamma}, {lam}")
    return max(1.0, (math.sqrt(d) * (b - a)) ** (lam - gamma))


def sobolev_comparison_factor(d: int, a: float, b: float, gamma: float, lam: float,
                              p: float, q: float) -> float:
    """Constant bounding the W^{gamma,p} norm by the W^{lam,q} norm on the box."""
    if not gamma < lam:
        raise OrderViolation(f"need gamma < lam, got {gamma}, {lam}")
    if not 1 <= p < q:
        raise OrderViolation(f"need 1 <= p < q, got {p}, {q}")
    e = (lam - gamma) * q * p / (q - p)
    w = b - a
    second = _sphere_factor(d) * d ** (e / 2) * w ** (d + e) / e
    return max(w ** d, second) ** ((q - p) / (q * p))


def param_lip_upper(p) -> float:
    """Squared Euclidean norm of the parameters, an upper bound for the
    Lipschitz constant of the realization on any box."""
    return euclid_norm(p) ** 2


def param_lipnorm_upper(p, box: BoxDomain, A=None) -> float:
    """Upper bound ``|p| + (2 + max(|a|,|b|) sqrt(d)) |p|^2`` for the Lipschitz norm."""
    n = euclid_norm(p)
    return n + (2 + max(abs(box.a), abs(box.b)) * math.sqrt(box.d)) * n * n


# -- exact Lipschitz quantities --------------------------------------------

@dataclass(frozen=True)
class HolderEstimate:
    value: float
    sup_term: float
    quotient_term: float
    gamma: float
    v: float
    grid_n: int
    method: str
    n_pairs: int
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class SobolevEstimate:
    value: float
    stderr: float
    lp_term: float
    seminorm_term: float
    lp_integral: float
    lp_integral_se: float
    gagliardo_integral: float
    gagliardo_integral_se: float
    gamma: float
    p: float
    n_samples: int
    seed: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True, eq=False)
class NormReport:
    """Exact Lipschitz-type norm data, optionally with Hölder/Sobolev estimates."""

    lip_seminorm: float
    inf_abs: float
    argmin: np.ndarray
    lipnorm_A: float
    reference: str
    holder: Optional[HolderEstimate] = None
    sobolev: Optional[SobolevEstimate] = None
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "lip_seminorm": self.lip_seminorm,
            "inf_abs": self.inf_abs,
            "argmin": np.asarray(self.argmin).tolist(),
            "lipnorm_A": self.lipnorm_A,
            "reference": self.reference,
            "holder": None if self.holder is None else self.holder.to_dict(),
            "sobolev": None if self.sobolev is None else self.sobolev.to_dict(),
            "meta": dict(self.meta),
        }


def lipschitz_seminorm(net: ShallowNet, box: BoxDomain, chambers=None,
                       pattern_cap: int = PATTERN_CAP) -> tuple[float, Chamber]:
    """Exact Lipschitz constant of the realization on the box.

    The realization is continuous and affine on each chamber and the box is
    convex, so the constant is the largest gradient norm over chambers.

    Returns
    -------
    L : float
    witness : Chamber
        The first chamber (in pattern order) attaining the maximum.
    """
    if chambers is None:
        chambers = enumerate_chambers(net, box, pattern_cap)
    norms = [vec_norm(c.gradient) for c in chambers]
    k = int(np.argmax(norms))
    return norms[k], chambers[k]


def _chamber_constraints(net: ShallowNet, part, pattern):
    rows, rhs = [], []
    for i in part.A2:
        nrm = vec_norm(net.w[i])
        s = 1.0 if pattern[i] == 1 else -1.0
        # s * (b_i + <w_i, x>) >= 0
        rows.append(-s * net.w[i] / nrm)
        rhs.append(s * net.b[i] / nrm)
    return (np.array(rows), np.array(rhs)) if rows else (None, None)


def _min_abs_on_chamber(net: ShallowNet, box: BoxDomain, part, ch: Chamber):
    y = ch.interior_point
    fy = ch.value(y)
    if fy == 0:
        return 0.0, y.copy()
    s = 1.0 if fy > 0 else -1.0
    A, r = _chamber_constraints(net, part, ch.pattern)
    res = linprog(s * ch.gradient, A_ub=A, b_ub=r, bounds=[(box.a, box.b)] * box.d,
                  method="highs-ds", options=_LP_OPTIONS)
    if res.status != 0:
        # the chamber has positive volume, so this only happens on solver trouble
        return abs(fy), y.copy()
    x = np.clip(res.x, box.a, box.b)
    fx = ch.value(x)
    if s * fx <= 0:
        t = fy / (fy - fx)
        z = np.clip(y + t * (x - y), box.a, box.b)
        return 0.0, z
    return abs(fx), x


def inf_abs_on_set(net: ShallowNet, box: BoxDomain, A=None, chambers=None,
                   pattern_cap: int = PATTERN_CAP) -> tuple[float, np.ndarray]:
    """Infimum of ``|f|`` over the reference set and a point attaining it.

    Parameters
    ----------
    A : None, "box" or array_like of shape (m, d)
        ``None`` uses the reference set of ``box``; ``"box"`` forces the whole
        box; an array is treated as a finite point list.

    Notes
    -----
    Over the whole box, ``|f|`` is minimized on each chamber by one linear
    program that pushes the affine piece towards zero from the side of its
    value at the chamber's interior point; a sign change means the infimum is
    zero and the zero on the connecting segment is returned.  Ties go to the
    first chamber in pattern order.
    """
    pts = _reference_points(box, A)
    if pts is not None:
        vals = np.abs(evaluate(net, pts))
        k = int(np.argmin(vals))
        return float(vals[k]), pts[k].copy()
    if chambers is None:
        chambers = enumerate_chambers(net, box, pattern_cap)
    part = _partition(net, box)
    results = []
    for ch in chambers:
        val, z = _min_abs_on_chamber(net, box, part, ch)
        if val == 0.0:
            return 0.0, z
        results.append((val, z))
    m = min(r[0] for r in results)
    val, z = next(r for r in results if r[0] <= m + 1e-12 * (1.0 + m))
    return float(abs(evaluate(net, z))), z


def _reference_points(box: BoxDomain, A):
    if isinstance(A, str):
        if A != "box":
            raise DomainError(f"unknown reference set {A!r}")
        return None
    if A is None:
        return None if box.whole_box else np.array(box.points)
    return np.array(box.with_points(A).points)


def lipnorm(net: ShallowNet, box: BoxDomain, A=None, chambers=None,
            pattern_cap: int = PATTERN_CAP) -> NormReport:
    """Lipschitz-type norm: infimum of ``|f|`` over the reference set plus the
    Lipschitz constant over the box."""
    if chambers is None:
        chambers = enumerate_chambers(net, box, pattern_cap)
    L, _ = lipschitz_seminorm(net, box, chambers)
    val, z = inf_abs_on_set(net, box, A, chambers)
    pts = _reference_points(box, A)
    ref = "box" if pts is None else f"points[{len(pts)}]"
    return NormReport(L, val, z, val + L, ref,
                      meta={"a": box.a, "b": box.b, "d": box.d, "n_chambers": len(chambers)})


# -- estimators -------------------------------------------------------------

def _grid(box: BoxDomain, n: int) -> np.ndarray:
    axis = np.linspace(box.a, box.b, n)
    mesh = np.meshgrid(*([axis] * box.d), indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


def _max_quotient_all_pairs(pts: np.ndarray, f: np.ndarray,
                            gamma: float) -> tuple[float, int]:
    best = 0.0
    m = len(pts)
    chunk = max(1, 4_000_000 // m)
    count = 0
    for s in range(0, m, chunk):
        xs, fs = pts[s:s + chunk], f[s:s + chunk]
        # pairs (i, j) with i in this chunk and j > i
        dist = np.sqrt(((xs[:, None, :] - pts[None, s:, :]) ** 2).sum(-1))
        df = np.abs(fs[:, None] - f[None, s:])
        mask = np.triu(np.ones(dist.shape, dtype=bool), k=1)
        mask &= dist > 0
        if not mask.any():
            continue
        q = df[mask] / dist[mask] ** gamma if gamma > 0 else df[mask]
        best = max(best, float(q.max()))
        count += int(mask.sum())
    return best, count


def holder_norm_estimate(net: ShallowNet, box: BoxDomain, gamma: float, v: float,
                         grid_n: int = 101, n_pairs: int = 100_000, seed: int = 0,
                         max_grid_dim: int = 3) -> HolderEstimate:
    """Grid lower bound of the gamma-Hölder norm with sup taken over ``[a, v]^d``.

    For ``d <= max_grid_dim`` the sup term uses every grid point in
    ``[a, v]^d`` and the quotient term every pair of grid points, so refining
    the grid by nesting can only increase the estimate.  In higher dimension
    ``n_pairs`` uniform random pairs are used instead.
    """
    if not 0 <= gamma <= 1:
        raise DomainError("gamma must lie in [0, 1]")
    if not box.a <= v <= box.b:
        raise DomainError("v must lie in [a, b]")
    if grid_n < 2:
        raise DomainError("grid_n must be at least 2")
    if box.d <= max_grid_dim:
        pts = _grid(box, grid_n)
        f = evaluate(net, pts)
        inside = np.all(pts <= v, axis=1)
        sup_term = float(np.max(np.abs(f[inside])))
        quot, count = _max_quotient_all_pairs(pts, f, gamma)
        return HolderEstimate(sup_term + quot, sup_term, quot, gamma, v, grid_n,
                              "grid", count)
    draws = np.concatenate(list(uniform_blocks(seed, n_pairs, 2 * box.d, box.a, box.b)))
    x, y = draws[:, :box.d], draws[:, box.d:]
    fx, fy = evaluate(net, x), evaluate(net, y)
    sub = x[np.all(x <= v, axis=1)]
    corner = np.full((1, box.d), box.a)
    sub = np.vstack([corner, sub])
    sup_term = float(np.max(np.abs(evaluate(net, sub))))
    dist = np.linalg.norm(x - y, axis=1)
    ok = dist > 0
    diff = np.abs(fx - fy)[ok]
    quot = float(np.max(diff / dist[ok] ** gamma)) if ok.any() else 0.0
    return HolderEstimate(sup_term + quot, sup_term, quot, gamma, v, grid_n,
                          "sampled", int(ok.sum()), seed)


def sobolev_slobodeckij_estimate(net: ShallowNet, box: BoxDomain, gamma: float, p: float,
                                 n_samples: int = 1_000_000, seed: int = 0) -> SobolevEstimate:
    """Monte Carlo estimate of the W^{gamma,p} norm on the box.

    Both the L^p integral and the Gagliardo double integral are estimated with
    uniform samples (points and point pairs).  The same seed always gives the
    same sample, so estimates for different networks share their random
    numbers.

    Returns
    -------
    SobolevEstimate
        ``value`` is ``I1^(1/p) + I2^(1/p)``; ``stderr`` propagates the sample
        standard errors of the two integrals through the ``1/p`` powers.
    """
    if not 0 <= gamma < 1:
        raise DomainError("gamma must lie in [0, 1)")
    if p < 1:
        raise DomainError("p must be at least 1")
    d = box.d
    vol = box.width ** d
    kexp = gamma * p + d
    s1 = s1sq = s2 = s2sq = 0.0
    for blk in uniform_blocks(seed, n_samples, 2 * d, box.a, box.b):
        x, y = blk[:, :d], blk[:, d:]
        fx, fy = evaluate(net, x), evaluate(net, y)
        t1 = np.abs(fx) ** p
        dist = np.linalg.norm(x - y, axis=1)
        t2 = np.abs(fx - fy) ** p / dist ** kexp
        s1 += float(t1.sum())
        s1sq += float((t1 * t1).sum())
        s2 += float(t2.sum())
        s2sq += float((t2 * t2).sum())
    n = n_samples
    m1, m2 = s1 / n, s2 / n
    se1 = math.sqrt(max(s1sq / n - m1 * m1, 0.0) / max(n - 1, 1))
    se2 = math.sqrt(max(s2sq / n - m2 * m2, 0.0) / max(n - 1, 1))
    I1, I1se = vol * m1, vol * se1
    I2, I2se = vol * vol * m2, vol * vol * se2
    T1, T2 = I1 ** (1 / p), I2 ** (1 / p)
    dT1 = T1 / (p * I1) * I1se if I1 > 0 else 0.0
    dT2 = T2 / (p * I2) * I2se if I2 > 0 else 0.0
    return SobolevEstimate(T1 + T2, math.hypot(dT1, dT2), T1, T2, I1, I1se, I2, I2se,
                           gamma, p, n_samples, seed)
