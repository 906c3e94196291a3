"""Network families showing which parameter/norm relations cannot hold.

Three families indexed by ``n``:

* shrinking slope: one neuron ``x -> max(x_1 - a, 0) / n``; its norm goes to
  zero like ``1/n`` while every parameter vector realizing it has norm at
  least ``n^(-1/2)``.
* staircase: ``h`` unit ramps plus the output bias ``n``; the norm grows like
  ``n`` and so does every realizing parameter vector, because the output bias
  is pinned to the value at the lower corner.
* spike: one steep neuron with a small bump of height ``1/n`` at the upper
  corner.  Hölder and Sobolev-Slobodeckij norms go to zero while every
  realizing parameter vector blows up like ``n^(q/2)``.

Lower bounds are only reported from these closed forms, never from a search
over parameter vectors (a search can only bound the minimum from above).
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, InfeasibleQ
from .network import BoxDomain, ShallowNet, neuron_scale, permute_neurons
from .norms import holder_norm_estimate, lipnorm, sobolev_slobodeckij_estimate
from .reparam import reparameterize

SHRINKING_SLOPE = "ShrinkingSlope"
STAIRCASE = "Staircase"
SPIKE = "Spike"
KINDS = (SHRINKING_SLOPE, STAIRCASE, SPIKE)


def spike_exponent(gamma: float, p: float, d: int) -> float:
    """Half of the largest admissible steepness exponent.

    The spike needs ``gamma q < 1 - gamma`` and ``(p - d) q < d``.  Constraints
    that hold for every ``q > 0`` (``gamma = 0`` or ``p <= d``) are dropped;
    if both drop, ``q = 1``.
    """
    if not 0 <= gamma < 1:
        raise InfeasibleQ(f"no positive exponent exists for gamma={gamma}")
    caps = []
    if gamma > 0:
        caps.append((1 - gamma) / gamma)
    if p > d:
        caps.append(d / (p - d))
    return 0.5 * min(caps) if caps else 1.0


def _check_q(q: float, gamma: float, p: float, d: int):
    if not q > 0 or not gamma * q < 1 - gamma or not (p - d) * q < d:
        raise InfeasibleQ(f"q={q} violates gamma*q < 1-gamma or (p-d)*q < d")


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    n: int
    d: int = 1
    h: int = 1
    a: float = 0.0
    b: float = 1.0
    q: Optional[float] = None
    gamma: Optional[float] = None
    p: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown family {self.kind!r}")
        if self.n < 1 or self.d < 1 or self.h < 1:
            raise DomainError("n, d and h must be positive")
        if not self.a < self.b:
            raise DomainError("need a < b")
        if self.kind == SPIKE:
            if self.gamma is None or self.p is None:
                raise DomainError("spike family needs gamma and p")
            if self.q is None:
                object.__setattr__(self, "q", spike_exponent(self.gamma, self.p, self.d))
            _check_q(self.q, self.gamma, self.p, self.d)

    @property
    def box(self) -> BoxDomain:
        return BoxDomain(self.a, self.b, self.d)

    def build(self) -> ShallowNet:
        if self.kind == SHRINKING_SLOPE:
            return shrinking_slope_family(self.n, self.d, self.h, self.a, self.b)
        if self.kind == STAIRCASE:
            return staircase_family(self.n, self.d, self.h, self.a, self.b)
        return spike_family(self.n, self.d, self.h, self.a, self.b, self.gamma, self.p, self.q)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def shrinking_slope_family(n: int, d: int = 1, h: int = 1, a: float = 0.0,
                           b: float = 1.0) -> ShallowNet:
    """Single ramp ``x -> max(x_1 - a, 0) / n``; the other neurons are zero."""
    w = np.zeros((h, d))
    bias = np.zeros(h)
    v = np.zeros(h)
    w[0, 0] = 1.0
    bias[0] = -a
    v[0] = 1.0 / n
    return ShallowNet(w, bias, v, 0.0)


def staircase_family(n: int, d: int = 1, h: int = 1, a: float = 0.0,
                     b: float = 1.0) -> ShallowNet:
    """``h`` unit ramps in ``x_1`` with evenly spaced kinks, output bias ``n``."""
    w = np.zeros((h, d))
    w[:, 0] = 1.0
    i = np.arange(1, h + 1)
    bias = -a - i * (b - a) / (h + 1)
    return ShallowNet(w, bias, np.ones(h), float(n))


def spike_family(n: int, d: int = 1, h: int = 1, a: float = 0.0, b: float = 1.0,
                 gamma: float = 0.5, p: float = 2.0, q: Optional[float] = None) -> ShallowNet:
    """Bump of height ``1/n`` at the corner ``(b, ..., b)`` with slope ``n^q``.

    The realization is ``max(n^q sum(x) + 1/n - n^q d b, 0)``.
    """
    if q is None:
        q = spike_exponent(gamma, p, d)
    _check_q(q, gamma, p, d)
    s = float(n) ** q
    w = np.zeros((h, d))
    bias = np.zeros(h)
    v = np.zeros(h)
    w[0, :] = s
    bias[0] = 1.0 / n - s * d * b
    v[0] = 1.0
    return ShallowNet(w, bias, v, 0.0)


def lower_bound_any_reparam(family: FamilySpec) -> float:
    """Proven lower bound on the Euclidean norm of every parameter vector
    realizing the family member on its box."""
    n = family.n
    if family.kind == SHRINKING_SLOPE:
        return n ** -0.5
    if family.kind == STAIRCASE:
        return float(n)
    return n ** (family.q / 2) * family.d ** 0.25


@dataclass(frozen=True)
class DivergenceRow:
    n: int
    lower_bound: float
    norm: float
    ratios: dict
    extra_norms: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"n": self.n, "lower_bound": self.lower_bound, "norm": self.norm,
                "ratios": dict(self.ratios), "extra_norms": dict(self.extra_norms)}


def _default_grid(d: int) -> int:
    return {1: 8193, 2: 129, 3: 33}.get(d, 2)


def divergence_report(kind: str, n_list: Sequence[int], exponents: Sequence[float],
                      gamma: float = 0.5, v: Optional[float] = None, p: float = 2.0,
                      d: int = 1, h: int = 1, a: float = 0.0, b: float = 1.0,
                      grid_n: Optional[int] = None, n_samples: int = 1_000_000,
                      seed: int = 0, q: Optional[float] = None) -> list[DivergenceRow]:
    """Lower bound, norm and ``lower_bound / norm^e`` for each ``n``.

    For the shrinking-slope and staircase families ``norm`` is the exact
    Lipschitz-type norm over the whole box.  For the spike family it is the
    grid Hölder estimate (exponent ``gamma``, sup over ``[a, v]^d``) and the
    Sobolev-Slobodeckij estimate is reported in ``extra_norms`` with its own
    ratios under keys ``"sobolev@e"``.
    """
    for e in exponents:
        if e < 0:
            raise DomainError("exponents must be nonnegative")
    rows = []
    for n in sorted(int(k) for k in n_list):
        spec = FamilySpec(kind, n, d, h, a, b, q=q,
                          gamma=gamma if kind == SPIKE else None,
                          p=p if kind == SPIKE else None)
        net = spec.build()
        lb = lower_bound_any_reparam(spec)
        if kind == SPIKE:
            vv = b if v is None else v
            g = _default_grid(d) if grid_n is None else grid_n
            hol = holder_norm_estimate(net, spec.box, gamma, vv, g, seed=seed).value
            sob = sobolev_slobodeckij_estimate(net, spec.box, gamma, p, n_samples, seed)
            ratios = {f"holder@{e:g}": lb / hol ** e for e in exponents}
            ratios.update({f"sobolev@{e:g}": lb / sob.value ** e for e in exponents})
            rows.append(DivergenceRow(n, lb, hol, ratios,
                                      {"sobolev": sob.value, "sobolev_stderr": sob.stderr,
                                       "q": spec.q}))
        else:
            norm = lipnorm(net, spec.box).lipnorm_A
            rows.append(DivergenceRow(n, lb, norm, {f"ratio@{e:g}": lb / norm ** e
                                                    for e in exponents}))
    return rows


def report_csv(rows: Sequence[DivergenceRow]) -> str:
    """Rows as CSV text with columns n, lower_bound, norm, extra norms, ratios."""
    if not rows:
        return "n,lower_bound,norm\n"
    extra = list(rows[0].extra_norms)
    ratio_keys = list(rows[0].ratios)
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["n", "lower_bound", "norm", *extra, *ratio_keys])
    for r in rows:
        wr.writerow([r.n, repr(r.lower_bound), repr(r.norm),
                     *[repr(r.extra_norms[k]) for k in extra],
                     *[repr(r.ratios[k]) for k in ratio_keys]])
    return buf.getvalue()


def report_json(rows: Sequence[DivergenceRow], meta: Optional[dict] = None) -> str:
    return json.dumps({"meta": meta or {}, "rows": [r.to_dict() for r in rows]},
                      indent=2, sort_keys=True)


def staircase_bias_invariance_check(n: int, trials: int, seed: int, d: int = 1, h: int = 3,
                                    a: float = 0.0, b: float = 1.0,
                                    reparam_tol: float = 1e-9) -> bool:
    """Check that realization-preserving transforms keep the staircase's output bias.

    Each trial rescales every neuron by a random positive factor, permutes the
    neurons at random and reparameterizes the result.  The transforms must
    leave the output bias exactly ``n``; the reparameterization must keep it
    within ``reparam_tol``.
    """
    if trials < 1:
        raise DomainError("trials must be positive")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    base = staircase_family(n, d, h, a, b)
    box = BoxDomain(a, b, d)
    ok = abs(reparameterize(base, box).net.c - n) <= reparam_tol
    for _ in range(trials):
        net = base
        for i in range(h):
            net = neuron_scale(net, i, math.exp(rng.uniform(-6.0, 6.0)))
        net = permute_neurons(net, rng.permutation(h))
        ok &= net.c == n
        ok &= abs(reparameterize(net, box).net.c - n) <= reparam_tol
    return bool(ok)
