"""Kink hyperplanes, neuron classification and the chamber decomposition of a box.

Each hidden neuron splits space along its kink ``b_i + <w_i, x> = 0``.  On the
box the realization is affine on every chamber of the resulting arrangement.
Chambers are found by a depth-first search over the distinct kinks that cross
the open box; every candidate region is certified by a small linear program
that maximizes the radius of a ball fitting inside the region and the box
(a Chebyshev center).  Distances are true Euclidean distances, so the radius
is invariant under rescaling a neuron.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linprog

from .errors import (
    DegenerateNormal,
    DimMismatch,
    InfeasibleGeometry,
    NoInteriorPoint,
    PatternCapExceeded,
)
from .network import BoxDomain, ShallowNet, row_norms, vec_norm

TAU_GEOM = 1e-9
TAU_VOL = 1e-9
PATTERN_CAP = 20

_LP_OPTIONS = {
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
}


@dataclass(frozen=True, eq=False)
class Hyperplane:
    """The affine function ``x -> b + <w, x>`` and its zero set."""

    w: np.ndarray
    b: float

    def __post_init__(self):
        w = np.array(self.w, dtype=float).reshape(-1)
        w.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "b", float(self.b))

    @property
    def degenerate(self) -> bool:
        return not np.any(self.w)

    def __call__(self, x):
        return np.asarray(x, dtype=float) @ self.w + self.b


@dataclass(frozen=True, eq=False)
class Chamber:
    """One positive-volume cell of the kink arrangement inside the box.

    ``pattern[i]`` is 1 when neuron ``i`` is active in the cell.  The ball of
    radius ``slack`` around ``interior_point`` lies in the box and on the
    prescribed side of every kink.
    """

    pattern: tuple
    interior_point: np.ndarray
    slack: float
    gradient: np.ndarray
    offset: float

    def value(self, x):
        return np.asarray(x, dtype=float) @ self.gradient + self.offset

    def to_dict(self) -> dict:
        return {
            "pattern": list(self.pattern),
            "interior_point": self.interior_point.tolist(),
            "slack": self.slack,
            "gradient": self.gradient.tolist(),
            "offset": self.offset,
        }


@dataclass(frozen=True)
class KinkGroup:
    """Neurons of A2 whose kinks coincide on the box.

    ``orientations[k]`` is +1 when member ``k`` has its active side on the same
    side as the representative and -1 otherwise.  ``inactive_at_z`` and
    ``active_at_z`` split the members according to the chamber of a reference
    point (empty if no reference point was given).
    """

    representative: int
    members: tuple
    orientations: tuple
    inactive_at_z: tuple = ()
    active_at_z: tuple = ()


@dataclass(frozen=True)
class NeuronClassification:
    A1: tuple
    A2: tuple
    A3: tuple
    groups: tuple
    z: Optional[tuple] = None
    pattern_of_z: Optional[tuple] = None

    @property
    def n_groups(self) -> int:
        return len(self.groups)

    def to_dict(self, base: int = 0) -> dict:
        """Plain-data view; neuron indices are shifted by ``base``."""
        def idx(seq):
            return [int(i) + base for i in seq]

        return {
            "A1": idx(self.A1),
            "A2": idx(self.A2),
            "A3": idx(self.A3),
            "groups": [
                {
                    "representative": g.representative + base,
                    "members": idx(g.members),
                    "orientations": list(g.orientations),
                    "inactive_at_z": idx(g.inactive_at_z),
                    "active_at_z": idx(g.active_at_z),
                }
                for g in self.groups
            ],
        }


@dataclass(frozen=True, eq=False)
class IsolationWitness:
    """A point on each kink whose ``radius``-ball misses every other kink."""

    kinks: tuple
    points: np.ndarray
    radius: float


def _check_dim(d: int, box: BoxDomain):
    if d != box.d:
        raise DimMismatch(f"dimension {d} does not match box dimension {box.d}")


def _neuron_scale(w: np.ndarray, b: float, box: BoxDomain) -> float:
    # magnitude the affine map can reach on the box; tolerances are relative to it
    return abs(b) + float(np.sum(np.abs(w))) * max(abs(box.a), abs(box.b))


def affine_range_on_box(h: Hyperplane, box: BoxDomain) -> tuple[float, float]:
    """Exact minimum and maximum of ``b + <w, x>`` over the closed box."""
    _check_dim(h.w.size, box)
    lo = h.b + float(np.sum(np.where(h.w >= 0, h.w * box.a, h.w * box.b)))
    hi = h.b + float(np.sum(np.where(h.w >= 0, h.w * box.b, h.w * box.a)))
    return lo, hi


def same_kink(h1: Hyperplane, h2: Hyperplane, box: Optional[BoxDomain] = None,
              tol: float = TAU_GEOM) -> Optional[int]:
    """Compare two kinks.

    Returns +1 if the hyperplanes coincide with the same active side, -1 if
    they coincide with opposite active sides and ``None`` otherwise.

    Raises
    ------
    DegenerateNormal
        If either normal is zero.
    """
    n1, n2 = vec_norm(h1.w), vec_norm(h2.w)
    if n1 == 0 or n2 == 0:
        raise DegenerateNormal("same_kink needs nonzero normals")
    if h1.w.size != h2.w.size:
        raise DimMismatch("hyperplanes live in different dimensions")
    u1 = np.append(h1.w / n1, h1.b / n1)
    u2 = np.append(h2.w / n2, h2.b / n2)
    scale = tol * max(1.0, abs(u1[-1]), abs(u2[-1]))
    if np.max(np.abs(u1 - u2)) <= scale:
        return 1
    if np.max(np.abs(u1 + u2)) <= scale:
        return -1
    return None


@dataclass(frozen=True)
class _Partition:
    A1: tuple
    A2: tuple
    A3: tuple
    groups: tuple                    # KinkGroup without z split
    normals: np.ndarray = field(repr=False)   # unit normal of each group representative
    offsets: np.ndarray = field(repr=False)   # offset / ||w|| of each representative


def _partition(net: ShallowNet, box: BoxDomain, tol: float = TAU_GEOM) -> _Partition:
    _check_dim(net.input_dim, box)
    A1, A2, A3 = [], [], []
    for i in range(net.hidden_dim):
        w, b = net.w[i], float(net.b[i])
        if not np.any(w):
            (A1 if b >= 0 else A3).append(i)
            continue
        lo, hi = affine_range_on_box(Hyperplane(w, b), box)
        s = tol * _neuron_scale(w, b, box)
        if lo >= -s:
            A1.append(i)
        elif hi <= s:
            A3.append(i)
        else:
            A2.append(i)
    members: list[list[int]] = []
    orients: list[list[int]] = []
    for i in A2:
        hi_ = Hyperplane(net.w[i], net.b[i])
        for k, grp in enumerate(members):
            rep = grp[0]
            sign = same_kink(Hyperplane(net.w[rep], net.b[rep]), hi_, box, tol)
            if sign is not None:
                grp.append(i)
                orients[k].append(sign)
                break
        else:
            members.append([i])
            orients.append([1])
    groups = tuple(KinkGroup(g[0], tuple(g), tuple(o)) for g, o in zip(members, orients))
    reps = [g.representative for g in groups]
    if reps:
        norms = row_norms(net.w[reps])
        normals = net.w[reps] / norms[:, None]
        offsets = net.b[reps] / norms
    else:
        normals = np.zeros((0, net.input_dim))
        offsets = np.zeros(0)
    return _Partition(tuple(A1), tuple(A2), tuple(A3), groups, normals, offsets)


def _pattern_from_sides(part: _Partition, h: int, sides: Sequence[int]) -> tuple:
    pat = [0] * h
    for i in part.A1:
        pat[i] = 1
    for g, s in zip(part.groups, sides):
        for i, o in zip(g.members, g.orientations):
            pat[i] = s if o == 1 else 1 - s
    return tuple(pat)


def _true_slack(x: np.ndarray, normals: np.ndarray, offsets: np.ndarray,
                box: BoxDomain) -> float:
    t = min(float(np.min(x - box.a)), float(np.min(box.b - x)))
    if normals.shape[0]:
        t = min(t, float(np.min(normals @ x + offsets)))
    return t


def _chebyshev(normals: np.ndarray, offsets: np.ndarray, box: BoxDomain,
               eq: Optional[tuple] = None) -> tuple[Optional[np.ndarray], float]:
    """Largest ball inside the box and inside ``{x : <n_k, x> + o_k >= 0}``.

    Rows of ``normals`` are unit vectors.  With ``eq = (n, o)`` the center is
    additionally constrained to the hyperplane ``<n, x> + o = 0``; the ball is
    then the ball of that hyperplane's points around the center, but the
    distance constraints are the full-space ones.
    Returns the center and the certified radius (recomputed from the center).
    """
    d = box.d
    m = normals.shape[0]
    eye = np.eye(d)
    A = np.vstack([
        np.hstack([-normals, np.ones((m, 1))]),
        np.hstack([-eye, np.ones((d, 1))]),
        np.hstack([eye, np.ones((d, 1))]),
    ])
    rhs = np.concatenate([offsets, np.full(d, -box.a), np.full(d, box.b)])
    cost = np.zeros(d + 1)
    cost[-1] = -1.0
    kw = {}
    if eq is not None:
        kw["A_eq"] = np.append(eq[0], 0.0)[None, :]
        kw["b_eq"] = np.array([-eq[1]])
    res = linprog(cost, A_ub=A, b_ub=rhs, bounds=[(box.a, box.b)] * d + [(None, box.width)],
                  method="highs-ds", options=_LP_OPTIONS, **kw)
    if res.status != 0:
        return None, -np.inf
    x = np.clip(res.x[:d], box.a, box.b)
    if eq is not None:
        # project back onto the hyperplane to remove solver drift
        x = x - (eq[0] @ x + eq[1]) * eq[0]
    return x, _true_slack(x, normals, offsets, box)


def _signed_rows(part: _Partition, idx: Sequence[int], sides: Sequence[int]):
    s = np.where(np.asarray(sides) == 1, 1.0, -1.0)
    idx = list(idx)
    return part.normals[idx] * s[:, None], part.offsets[idx] * s


def _search_regions(part: _Partition, box: BoxDomain, tau: float,
                    order: Sequence[int], eq: Optional[tuple] = None,
                    root: Optional[tuple] = None):
    """Depth-first search over sides of the kinks listed in ``order``.

    Returns ``(sides, center, radius)`` for every leaf region whose certified
    radius exceeds ``tau``.  Interior nodes reuse the parent's witness when it
    lies strictly on one side of the next kink, so only the other side costs
    a linear program.  Leaves always get a fresh Chebyshev center so that the
    result does not depend on the search path.
    """
    order = list(order)
    n = len(order)
    out = []
    if root is None:
        if eq is None:
            x0 = np.full(box.d, 0.5 * (box.a + box.b))
            root = (x0, 0.5 * box.width)
        else:
            x0, t0 = _chebyshev(np.zeros((0, box.d)), np.zeros(0), box, eq)
            if x0 is None or t0 <= tau:
                return out
            root = (x0, t0)
    if n == 0:
        x, t = (root if eq is not None else
                _chebyshev(np.zeros((0, box.d)), np.zeros(0), box))
        if x is not None and t > tau:
            out.append(((), x, t))
        return out

    def solve(sides):
        nrm, off = _signed_rows(part, order[:len(sides)], sides)
        return _chebyshev(nrm, off, box, eq)

    def visit(sides, x, t):
        k = len(sides)
        j = order[k]
        dist = float(part.normals[j] @ x + part.offsets[j])
        for s in (0, 1):
            child = sides + (s,)
            signed = dist if s == 1 else -dist
            if k + 1 == n:
                cx, ct = solve(child)
                if cx is not None and ct > tau:
                    out.append((child, cx, ct))
            elif signed > tau:
                visit(child, x, min(t, signed))
            else:
                cx, ct = solve(child)
                if cx is not None and ct > tau:
                    visit(child, cx, ct)

    visit((), *root)
    return out


def _tau_vol(box: BoxDomain, tau_vol: float) -> float:
    return tau_vol * box.width


def _make_chamber(net: ShallowNet, pattern: tuple, x: np.ndarray, t: float) -> Chamber:
    act = np.asarray(pattern, dtype=bool)
    grad = net.v[act] @ net.w[act] if act.any() else np.zeros(net.input_dim)
    offset = net.c + float(net.v[act] @ net.b[act]) if act.any() else net.c
    x = np.array(x, dtype=float)
    x.setflags(write=False)
    grad = np.array(grad, dtype=float)
    grad.setflags(write=False)
    return Chamber(pattern, x, float(t), grad, float(offset))


def enumerate_chambers(net: ShallowNet, box: BoxDomain, pattern_cap: int = PATTERN_CAP,
                       tau_vol: float = TAU_VOL) -> list[Chamber]:
    """All positive-volume chambers of the kink arrangement inside the box.

    Neurons that are always active (inactive) on the box are fixed before the
    search, and coinciding kinks are searched once.  The list is sorted
    lexicographically by activation pattern.

    Raises
    ------
    PatternCapExceeded
        If more than ``pattern_cap`` distinct kinks cross the open box.
    """
    part = _partition(net, box)
    if len(part.groups) > pattern_cap:
        raise PatternCapExceeded(
            f"{len(part.groups)} distinct kinks cross the box (cap {pattern_cap})")
    tau = _tau_vol(box, tau_vol)
    leaves = _search_regions(part, box, tau, range(len(part.groups)))
    if not leaves:
        raise InfeasibleGeometry("no positive-volume chamber found")
    chambers = [_make_chamber(net, _pattern_from_sides(part, net.hidden_dim, s), x, t)
                for s, x, t in leaves]
    chambers.sort(key=lambda c: c.pattern)
    return chambers


def chamber_of_point(net: ShallowNet, z, box: BoxDomain, tau_vol: float = TAU_VOL,
                     tol: float = TAU_GEOM) -> Chamber:
    """A positive-volume chamber whose closure contains ``z``.

    Kinks passing through ``z`` (within tolerance) leave a choice; among the
    admissible patterns the one with the largest certified slack wins, and
    ties go to the lexicographically largest pattern.
    """
    z = np.asarray(z, dtype=float).reshape(-1)
    _check_dim(z.size, box)
    part = _partition(net, box, tol)
    fixed: dict[int, int] = {}
    free: list[int] = []
    for k, g in enumerate(part.groups):
        r = g.representative
        pre = float(net.w[r] @ z + net.b[r])
        if abs(pre) <= tol * _neuron_scale(net.w[r], float(net.b[r]), box):
            free.append(k)
        else:
            fixed[k] = 1 if pre > 0 else 0
    tau = _tau_vol(box, tau_vol)
    ngr = len(part.groups)
    best = None
    for choice in itertools.product((1, 0), repeat=len(free)):
        sides = dict(fixed)
        sides.update(zip(free, choice))
        sv = tuple(sides[k] for k in range(ngr))
        if ngr:
            nrm, off = _signed_rows(part, range(ngr), sv)
        else:
            nrm, off = np.zeros((0, box.d)), np.zeros(0)
        x, t = _chebyshev(nrm, off, box)
        if x is None or t <= tau:
            continue
        pat = _pattern_from_sides(part, net.hidden_dim, sv)
        if best is None or t > best[2] * (1 + 1e-9) or (
                t >= best[2] * (1 - 1e-9) and pat > best[0]):
            best = (pat, x, t)
    if best is None:
        raise InfeasibleGeometry(f"no positive-volume chamber contains z={z.tolist()}")
    return _make_chamber(net, *best)


def classify_neurons(net: ShallowNet, box: BoxDomain, z=None) -> NeuronClassification:
    """Split neurons into always active (A1), kink crossing the open box (A2)
    and inactive on the open box (A3), and group A2 by coinciding kinks.

    When a reference point ``z`` is given each group is further split by the
    activation of its members in the chamber of ``z``.
    """
    part = _partition(net, box)
    if z is None:
        return NeuronClassification(part.A1, part.A2, part.A3, part.groups)
    z = np.asarray(z, dtype=float).reshape(-1)
    ch = chamber_of_point(net, z, box)
    groups = []
    for g in part.groups:
        d0 = tuple(i for i in g.members if ch.pattern[i] == 0)
        d1 = tuple(i for i in g.members if ch.pattern[i] == 1)
        groups.append(KinkGroup(g.representative, g.members, g.orientations, d0, d1))
    return NeuronClassification(part.A1, part.A2, part.A3, tuple(groups),
                                tuple(z.tolist()), ch.pattern)


def distinct_kinks(net: ShallowNet, box: BoxDomain) -> list[Hyperplane]:
    """One hyperplane per group of coinciding kinks crossing the open box."""
    part = _partition(net, box)
    return [Hyperplane(net.w[g.representative], net.b[g.representative]) for g in part.groups]


def isolation_points(kinks: Sequence[Hyperplane], box: BoxDomain, safety: float = 0.9,
                     tau_vol: float = TAU_VOL) -> IsolationWitness:
    """For each kink, a point on it that is as far as possible from the other
    kinks and from the boundary of the box.

    The returned radius is ``safety`` times the smallest optimum over kinks.

    Raises
    ------
    NoInteriorPoint
        If some kink only touches the box boundary.
    DegenerateNormal
        If some kink has a zero normal.
    """
    kinks = list(kinks)
    if not kinks:
        return IsolationWitness((), np.zeros((0, box.d)), float(0.5 * box.width))
    for h in kinks:
        _check_dim(h.w.size, box)
        if h.degenerate:
            raise DegenerateNormal("kink with zero normal")
    norms = np.array([vec_norm(h.w) for h in kinks])
    normals = np.array([h.w for h in kinks]) / norms[:, None]
    offsets = np.array([h.b for h in kinks]) / norms
    part = _Partition((), (), (), (), normals, offsets)
    tau = _tau_vol(box, tau_vol)
    points, radii = [], []
    for s in range(len(kinks)):
        others = [k for k in range(len(kinks)) if k != s]
        leaves = _search_regions(part, box, tau, others, eq=(normals[s], offsets[s]))
        if not leaves:
            raise NoInteriorPoint(f"kink {s} does not pass through the open box")
        _, x, t = max(leaves, key=lambda leaf: leaf[2])
        points.append(x)
        radii.append(t)
    pts = np.array(points)
    pts.setflags(write=False)
    return IsolationWitness(tuple(kinks), pts, safety * float(min(radii)))


def check_isolation(witness: IsolationWitness, box: BoxDomain, tol: float = TAU_GEOM) -> bool:
    """Verify the defining properties of an isolation witness."""
    eps = witness.radius
    if witness.kinks and not eps > 0:
        return False
    for s, (h, p) in enumerate(zip(witness.kinks, witness.points)):
        if abs(h(p)) > tol * max(1.0, _neuron_scale(h.w, h.b, box)):
            return False
        if np.any(p - eps < box.a) or np.any(p + eps > box.b):
            return False
        for k, other in enumerate(witness.kinks):
            if k != s and abs(other(p)) / vec_norm(other.w) <= eps:
                return False
    return True
