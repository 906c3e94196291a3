"""Bounded reparameterization of shallow ReLU networks.

Given a network on a box, :func:`reparameterize` builds a second parameter
vector with the same realization on the box whose entries are bounded by the
Lipschitz constant ``L`` and the minimum of ``|f|``:

    max|theta'| <= max(max(2, |a| sqrt(d), |b| sqrt(d)) sqrt(L),
                       inf|f| + 2 h (b - a) sqrt(d) L).

The construction rescales every kink-carrying neuron to incoming norm
``sqrt(L)``, merges neurons that share a kink, and collapses everything that is
affine on the box (always-active neurons plus one side of every kink group)
into a single neuron that stays active on the whole box.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DimMismatch, DomainError, InternalCaseViolation, PatternCapExceeded
from .geometry import (
    PATTERN_CAP,
    NeuronClassification,
    classify_neurons,
    enumerate_chambers,
)
from .network import (
    BoxDomain,
    ShallowNet,
    euclid_norm,
    evaluate,
    flatten,
    max_norm,
    param_count,
    row_norms,
    vec_norm,
)
from .norms import inf_abs_on_set, lipnorm, lipschitz_seminorm
from .rng import uniform_blocks

TAU_CERT = 1e-7

CONSTANT = "ConstantL0"
AFFINE_ONLY = "AffineOnly"
GROUPED = "Grouped"
FULL_RESCALE = "FullRescale"


@dataclass(frozen=True, eq=False)
class ReparamResult:
    """Output network and the intermediate quantities of the construction."""

    net: ShallowNet
    case: str
    L: float
    inf_abs: float
    z: np.ndarray
    pattern_z: Optional[tuple]
    u: np.ndarray
    unit_u: np.ndarray
    q: np.ndarray
    classification: Optional[NeuronClassification]
    bound_rhs: float
    chambers: list = field(default=None, repr=False)

    def to_dict(self, base: int = 0) -> dict:
        """Plain-data view; neuron indices are shifted by ``base``."""
        return {
            "case": self.case,
            "L": self.L,
            "inf_abs": self.inf_abs,
            "z": self.z.tolist(),
            "pattern_z": None if self.pattern_z is None else list(self.pattern_z),
            "u": self.u.tolist(),
            "unit_u": self.unit_u.tolist(),
            "q": self.q.tolist(),
            "classification": None if self.classification is None
            else self.classification.to_dict(base),
            "bound_rhs": self.bound_rhs,
            "max_abs_param": max_norm(flatten(self.net)),
            "euclid_norm_param": euclid_norm(flatten(self.net)),
        }


def bound_from_constants(L: float, inf_abs: float, box: BoxDomain, h: int) -> float:
    """Right side of the parameter bound for given ``L`` and ``inf|f|``."""
    rd = math.sqrt(box.d)
    first = max(2.0, abs(box.a) * rd, abs(box.b) * rd) * math.sqrt(L)
    second = inf_abs + 2 * h * box.width * rd * L
    return max(first, second)


def bound_rhs(net: ShallowNet, box: BoxDomain, pattern_cap: int = PATTERN_CAP) -> float:
    """Bound on the largest parameter of the reparameterized network,
    computed from the exact Lipschitz constant and minimum of ``|f|`` on the box."""
    chambers = enumerate_chambers(net, box, pattern_cap)
    L, _ = lipschitz_seminorm(net, box, chambers)
    inf_abs, _ = inf_abs_on_set(net, box, "box", chambers)
    return bound_from_constants(L, inf_abs, box, net.hidden_dim)


def _lower_corner(direction: np.ndarray, box: BoxDomain) -> np.ndarray:
    # box corner minimizing <direction, x>; zero coordinates take the lower end
    return np.where(direction >= 0, box.a, box.b).astype(float)


def _affine_neuron(u: np.ndarray, L: float, box: BoxDomain):
    """Neuron that is active on the whole box and realizes ``<u, x - q>``."""
    nu = vec_norm(u)
    rL = math.sqrt(L)
    unit = rL * u / nu if nu > 0 else np.zeros_like(u)
    q = _lower_corner(unit, box)
    return unit, 0.0 - float(unit @ q), nu / rL, q


def reparameterize(net: ShallowNet, box: BoxDomain,
                   pattern_cap: int = PATTERN_CAP) -> ReparamResult:
    """Realization-preserving parameters with explicitly bounded entries.

    Parameters
    ----------
    net : ShallowNet
    box : BoxDomain
        The reference set of ``box`` is ignored; the construction always uses
        the whole box.

    Returns
    -------
    ReparamResult
        ``case`` is one of ``"ConstantL0"`` (Lipschitz constant numerically
        zero), ``"AffineOnly"`` (no kink crosses the box), ``"Grouped"`` (some
        neurons are merged or collapsed) and ``"FullRescale"`` (every neuron
        has its own kink in the box).

    Raises
    ------
    PatternCapExceeded
        If too many distinct kinks cross the box.
    """
    box = box.as_whole_box()
    d, h = net.input_dim, net.hidden_dim
    chambers = enumerate_chambers(net, box, pattern_cap)
    L, _ = lipschitz_seminorm(net, box, chambers)
    inf_abs, z = inf_abs_on_set(net, box, "box", chambers)
    rhs = bound_from_constants(L, inf_abs, box, h)
    fz = evaluate(net, z)
    zeros = np.zeros(d)
    # noise floor of a sum of v_i w_i; unlike |theta|^2 it ignores neuron rescaling
    tau_L = 1e-12 * (1 + float(np.abs(net.v) @ row_norms(net.w)))

    if L <= tau_L:
        out = ShallowNet(np.zeros((h, d)), np.zeros(h), np.zeros(h), fz)
        return ReparamResult(out, CONSTANT, L, inf_abs, z, None, zeros, zeros,
                             zeros.copy(), None, rhs, chambers)

    cls = classify_neurons(net, box, z)
    n_groups = cls.n_groups
    rL = math.sqrt(L)
    W = np.zeros((h, d))
    B = np.zeros(h)
    V = np.zeros(h)
    A1 = list(cls.A1)

    if n_groups == h:
        if cls.A1 or cls.A3:
            raise InternalCaseViolation("every neuron has its own kink but A1/A3 is nonempty")
        norms = row_norms(net.w)
        W = rL * net.w / norms[:, None]
        B = rL * net.b / norms
        V = net.v * norms / rL
        out = ShallowNet(W, B, V, net.c)
        return ReparamResult(out, FULL_RESCALE, L, inf_abs, z, cls.pattern_of_z, zeros,
                             zeros, zeros.copy(), cls, rhs, chambers)

    u = net.v[A1] @ net.w[A1] if A1 else np.zeros(d)
    for s, g in enumerate(cls.groups):
        m = g.representative
        nm = vec_norm(net.w[m])
        # orient so that z lies on the inactive side of the merged neuron
        sign = 1.0 if cls.pattern_of_z[m] == 0 else -1.0
        W[s] = sign * rL * net.w[m] / nm
        B[s] = sign * rL * net.b[m] / nm
        members = list(g.members)
        V[s] = float(net.v[members] @ row_norms(net.w[members])) / rL
        if g.active_at_z:
            act = list(g.active_at_z)
            u = u + net.v[act] @ net.w[act]
    unit, bias, outw, q = _affine_neuron(u, L, box)
    W[n_groups] = unit
    B[n_groups] = bias
    V[n_groups] = outw
    c = fz + float(u @ (q - z))
    out = ShallowNet(W, B, V, c)
    case = AFFINE_ONLY if n_groups == 0 else GROUPED
    return ReparamResult(out, case, L, inf_abs, z, cls.pattern_of_z, u, unit, q, cls,
                         rhs, chambers)


@dataclass(frozen=True)
class Certificate:
    """Both sides of the parameter/norm inequalities for one network.

    ``K = max(2, |a| sqrt(d), |b| sqrt(d), 2 h (b-a) sqrt(d))`` and with
    ``D = d h + 2 h + 1`` the chain constants are ``c = sqrt(D) K`` and
    ``C = 8 sqrt(D) K^2``.
    """

    lipnorm_A: float
    max_abs_param: float
    lhs: float
    middle: float
    rhs: float
    K: float
    c: float
    C: float
    bound_rhs: float
    explicit_rhs: float
    weak_lhs: float
    weak_middle: float
    weak_rhs: float
    case: str
    passes: dict

    @property
    def passed(self) -> bool:
        return all(self.passes.values())

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out["passes"] = dict(self.passes)
        out["passed"] = self.passed
        return out


def chain_constants(d: int, h: int, a: float, b: float) -> tuple[float, float, float]:
    """``K``, ``c = sqrt(D) K`` and ``C = 8 sqrt(D) K^2`` for the given shape and box."""
    rd = math.sqrt(d)
    K = max(2.0, abs(a) * rd, abs(b) * rd, 2 * h * (b - a) * rd)
    rD = math.sqrt(param_count(d, h))
    return K, rD * K, 8 * rD * K * K


def _leq(x: float, y: float, tol: float) -> bool:
    return x <= y * (1 + tol)


def certify(net: ShallowNet, box: BoxDomain, A=None, tol: float = TAU_CERT,
            pattern_cap: int = PATTERN_CAP) -> Certificate:
    """Reparameterize ``net`` and check every bound relating the new parameters
    to the Lipschitz-type norm of the realization.

    Checked inequalities (each with relative tolerance ``tol``):

    * ``theorem``: ``max|theta'| <= bound_rhs``
    * ``explicit``: ``max|theta'| <= K max(n^(1/2), n)``
    * ``combined_left``: ``|theta'| <= c max(n^(1/2), n)``
    * ``combined_right``: ``c max(n^(1/2), n) <= C max(|theta'|^(1/2), |theta'|^2)``
    * ``weak_left`` / ``weak_right``: ``max(1, |theta'|) <= c max(1, n) <= C max(1, |theta'|^2)``

    where ``n`` is the norm over the reference set ``A``.
    """
    res = reparameterize(net, box, pattern_cap)
    rep = lipnorm(net, box, A, res.chambers)
    n = rep.lipnorm_A
    K, c, C = chain_constants(net.input_dim, net.hidden_dim, box.a, box.b)
    p = flatten(res.net)
    mx, nrm = max_norm(p), euclid_norm(p)
    mn = max(math.sqrt(n), n)
    explicit_rhs = K * mn
    middle = c * mn
    rhs = C * max(math.sqrt(nrm), nrm * nrm)
    weak_lhs = max(1.0, nrm)
    weak_mid = c * max(1.0, n)
    weak_rhs = C * max(1.0, nrm * nrm)
    passes = {
        "theorem": _leq(mx, res.bound_rhs, tol),
        "explicit": _leq(mx, explicit_rhs, tol),
        "combined_left": _leq(nrm, middle, tol),
        "combined_right": _leq(middle, rhs, tol),
        "weak_left": _leq(weak_lhs, weak_mid, tol),
        "weak_right": _leq(weak_mid, weak_rhs, tol),
    }
    return Certificate(n, mx, nrm, middle, rhs, K, c, C, res.bound_rhs, explicit_rhs,
                       weak_lhs, weak_mid, weak_rhs, res.case, passes)


def global_min_box(a: float, b: float, h: int, L: float, sup_f: float) -> float:
    """Side length of a parameter box guaranteed to contain a global minimizer
    of the squared-error risk when fitting a target with Lipschitz constant
    ``L`` and sup norm ``sup_f`` on ``[a, b]^d`` with ``h`` hidden neurons.

    ``C = max(max(2, |a|, |b|) sqrt(h L), (2 (b-a) h^2 + h) L + sup_f)``
    """
    if not b > a:
        raise DomainError("need a < b")
    if L < 0 or sup_f < 0:
        raise DomainError("L and sup_f must be nonnegative")
    if h < 1 or int(h) != h:
        raise DomainError("h must be a positive integer")
    first = max(2.0, abs(a), abs(b)) * math.sqrt(h) * math.sqrt(L)
    second = (2 * (b - a) * h * h + h) * L + sup_f
    return max(first, second)


def equivalence_points(net1: ShallowNet, net2: ShallowNet, box: BoxDomain,
                       n_samples: int = 1000, seed: int = 0) -> np.ndarray:
    """Points used to compare two realizations: seeded uniform samples, the box
    corners (up to dimension 12) and the interior point of every chamber of
    both networks."""
    if net1.input_dim != box.d or net2.input_dim != box.d:
        raise DimMismatch("networks and box must share the input dimension")
    parts = [np.concatenate(list(uniform_blocks(seed, n_samples, box.d, box.a, box.b)))
             if n_samples > 0 else np.zeros((0, box.d))]
    if box.d <= 12:
        parts.append(box.corners())
    whole = box.as_whole_box()
    for net in (net1, net2):
        try:
            parts.append(np.array([c.interior_point for c in enumerate_chambers(net, whole)]))
        except PatternCapExceeded:
            pass
    return np.vstack(parts)


def verify_equivalence(net1: ShallowNet, net2: ShallowNet, box: BoxDomain,
                       n_samples: int = 1000, seed: int = 0) -> float:
    """Largest absolute difference of the two realizations over
    :func:`equivalence_points`."""
    pts = equivalence_points(net1, net2, box, n_samples, seed)
    return float(np.max(np.abs(evaluate(net1, pts) - evaluate(net2, pts))))
