"""Shallow ReLU networks, their flat parameter layout, and the box domain.

A network with ``d`` inputs and ``h`` hidden units computes

    N(x) = c + sum_i v_i * max(b_i + <w_i, x>, 0)

and is stored as a frozen :class:`ShallowNet`.  The flat parameter vector
(length ``d*h + 2*h + 1``) lists the hidden weights row by row, then the hidden
biases, then the output weights, then the output bias.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DimMismatch,
    InvalidBox,
    InvalidPermutation,
    LengthMismatch,
    NonFiniteValue,
    NonpositiveScale,
)


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=float, copy=True)
    out.setflags(write=False)
    return out


def param_count(d: int, h: int) -> int:
    """Length of the flat parameter vector for ``d`` inputs and ``h`` neurons."""
    return d * h + 2 * h + 1


@dataclass(frozen=True, eq=False)
class ShallowNet:
    """Immutable one-hidden-layer ReLU network.

    Attributes
    ----------
    w : ndarray, shape (h, d)
        Hidden weights, row ``i`` belongs to neuron ``i``.
    b : ndarray, shape (h,)
        Hidden biases.
    v : ndarray, shape (h,)
        Output weights.
    c : float
        Output bias.
    """

    w: np.ndarray
    b: np.ndarray
    v: np.ndarray
    c: float

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        if w.ndim != 2:
            raise DimMismatch(f"hidden weights must be a 2-D array, got shape {w.shape}")
        h, d = w.shape
        if h < 1 or d < 1:
            raise DimMismatch("need at least one input and one hidden neuron")
        b = np.asarray(self.b, dtype=float).reshape(-1)
        v = np.asarray(self.v, dtype=float).reshape(-1)
        if b.shape != (h,) or v.shape != (h,):
            raise DimMismatch(f"biases/output weights must have length {h}")
        c = float(self.c)
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))
                and np.all(np.isfinite(v)) and np.isfinite(c)):
            raise NonFiniteValue("network parameters must be finite")
        object.__setattr__(self, "w", _frozen(w))
        object.__setattr__(self, "b", _frozen(b))
        object.__setattr__(self, "v", _frozen(v))
        object.__setattr__(self, "c", c)

    @property
    def input_dim(self) -> int:
        return self.w.shape[1]

    @property
    def hidden_dim(self) -> int:
        return self.w.shape[0]

    def __eq__(self, other):
        if not isinstance(other, ShallowNet):
            return NotImplemented
        return (self.w.shape == other.w.shape
                and np.array_equal(self.w, other.w)
                and np.array_equal(self.b, other.b)
                and np.array_equal(self.v, other.v)
                and self.c == other.c)

    __hash__ = None

    def __repr__(self):
        return f"ShallowNet(d={self.input_dim}, h={self.hidden_dim}, c={self.c!r})"

    @classmethod
    def zeros(cls, d: int, h: int) -> "ShallowNet":
        return cls(np.zeros((h, d)), np.zeros(h), np.zeros(h), 0.0)


@dataclass(frozen=True, eq=False)
class BoxDomain:
    """The cube ``[a, b]^d`` together with the reference set used by the
    Lipschitz-type norm.

    ``points`` is ``None`` when the reference set is the whole box, otherwise
    an ``(m, d)`` array of points inside the box.
    """

    a: float
    b: float
    d: int
    points: Optional[np.ndarray] = None

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (np.isfinite(a) and np.isfinite(b)) or not a < b:
            raise InvalidBox(f"need finite a < b, got a={a}, b={b}")
        d = int(self.d)
        if d < 1 or d != self.d:
            raise InvalidBox(f"dimension must be a positive integer, got {self.d}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)
        if self.points is not None:
            pts = np.asarray(self.points, dtype=float)
            if pts.ndim == 1 and d == 1:
                pts = pts.reshape(-1, 1)
            if pts.ndim != 2 or pts.shape[1] != d:
                raise DimMismatch(f"reference points must have shape (m, {d})")
            if pts.shape[0] == 0:
                raise InvalidBox("reference set must be nonempty")
            if not np.all(np.isfinite(pts)) or np.any(pts < a) or np.any(pts > b):
                raise InvalidBox("reference points must lie in the box")
            object.__setattr__(self, "points", _frozen(pts))

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def whole_box(self) -> bool:
        return self.points is None

    def with_points(self, points) -> "BoxDomain":
        return BoxDomain(self.a, self.b, self.d, points)

    def as_whole_box(self) -> "BoxDomain":
        return BoxDomain(self.a, self.b, self.d)

    def corners(self) -> np.ndarray:
        """All ``2^d`` corners, in binary order (coordinate 0 varies slowest)."""
        bits = (np.arange(2 ** self.d)[:, None] >> np.arange(self.d - 1, -1, -1)) & 1
        return np.where(bits == 1, self.b, self.a).astype(float)

    def contains(self, x, tol: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.a - tol) and np.all(x <= self.b + tol))


def flatten(net: ShallowNet) -> np.ndarray:
    """Flat parameter vector of ``net`` (weights, biases, output weights, output bias)."""
    return np.concatenate([net.w.reshape(-1), net.b, net.v, [net.c]])


def unflatten(p, d: int, h: int) -> ShallowNet:
    """Inverse of :func:`flatten`.

    Raises
    ------
    LengthMismatch
        If ``len(p) != d*h + 2*h + 1``.
    """
    p = np.asarray(p, dtype=float).reshape(-1)
    n = param_count(d, h)
    if p.size != n:
        raise LengthMismatch(f"expected {n} parameters for d={d}, h={h}, got {p.size}")
    dh = d * h
    return ShallowNet(p[:dh].reshape(h, d), p[dh:dh + h], p[dh + h:dh + 2 * h], p[-1])


def _as_points(net: ShallowNet, x) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    d = net.input_dim
    if x.ndim == 0:
        x = x.reshape(1)
    if x.ndim == 1:
        if x.shape[0] != d:
            raise DimMismatch(f"point has dimension {x.shape[0]}, network expects {d}")
        return x[None, :], True
    if x.ndim != 2 or x.shape[1] != d:
        raise DimMismatch(f"points must have shape (n, {d}), got {x.shape}")
    return x, False


def preactivations(net: ShallowNet, x) -> np.ndarray:
    """Hidden pre-activations ``b_i + <w_i, x>`` for a batch of points, shape (n, h)."""
    pts, _ = _as_points(net, x)
    return pts @ net.w.T + net.b


def evaluate(net: ShallowNet, x):
    """Realization of ``net`` at ``x``.

    Parameters
    ----------
    net : ShallowNet
    x : array_like
        A single point of shape ``(d,)`` or a batch of shape ``(n, d)``.

    Returns
    -------
    float or ndarray
        Scalar for a single point, shape ``(n,)`` for a batch.
    """
    pts, single = _as_points(net, x)
    out = net.c + np.maximum(pts @ net.w.T + net.b, 0.0) @ net.v
    return float(out[0]) if single else out


def evaluate_params(theta, d: int, h: int, x) -> float:
    """Evaluate directly from the flat parameter vector, one scalar at a time."""
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if theta.size != param_count(d, h):
        raise LengthMismatch("parameter vector length does not match (d, h)")
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != d:
        raise DimMismatch("point dimension does not match d")
    total = theta[-1]
    for i in range(h):
        pre = theta[d * h + i]
        for j in range(d):
            pre += theta[i * d + j] * x[j]
        total += theta[d * h + h + i] * max(pre, 0.0)
    return float(total)


def row_norms(a) -> np.ndarray:
    """Euclidean norm of each row, scaled first so tiny or huge entries
    neither underflow nor overflow."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    m = np.max(np.abs(a), axis=1) if a.shape[1] else np.zeros(a.shape[0])
    safe = np.where(m > 0, m, 1.0)
    return m * np.sqrt(np.sum((a / safe[:, None]) ** 2, axis=1))


def vec_norm(x) -> float:
    x = np.asarray(x, dtype=float).reshape(-1)
    return float(row_norms(x[None, :])[0]) if x.size else 0.0


def euclid_norm(p) -> float:
    return vec_norm(p)


def max_norm(p) -> float:
    p = np.asarray(p, dtype=float).reshape(-1)
    return float(np.max(np.abs(p))) if p.size else 0.0


def neuron_scale(net: ShallowNet, i: int, lam: float) -> ShallowNet:
    """Scale neuron ``i`` (0-based) by ``lam > 0`` without changing the realization.

    The incoming weights and bias are multiplied by ``lam`` and the outgoing
    weight is divided by it.
    """
    lam = float(lam)
    if not lam > 0 or not np.isfinite(lam):
        raise NonpositiveScale(f"scale must be a positive finite number, got {lam}")
    if not 0 <= i < net.hidden_dim:
        raise IndexError(f"neuron index {i} out of range")
    w, b, v = net.w.copy(), net.b.copy(), net.v.copy()
    w[i] *= lam
    b[i] *= lam
    v[i] /= lam
    return ShallowNet(w, b, v, net.c)


def permute_neurons(net: ShallowNet, sigma: Sequence[int]) -> ShallowNet:
    """Reorder neurons: neuron ``k`` of the result is neuron ``sigma[k]`` of ``net``.

    ``sigma`` is a 0-based permutation of ``range(h)``.
    """
    sigma = np.asarray(sigma)
    h = net.hidden_dim
    if sigma.shape != (h,) or not np.issubdtype(sigma.dtype, np.integer) \
            or not np.array_equal(np.sort(sigma), np.arange(h)):
        raise InvalidPermutation(f"not a permutation of 0..{h - 1}: {sigma.tolist()}")
    return ShallowNet(net.w[sigma], net.b[sigma], net.v[sigma], net.c)


def inverse_permutation(sigma: Sequence[int]) -> np.ndarray:
    sigma = np.asarray(sigma)
    inv = np.empty_like(sigma)
    inv[sigma] = np.arange(sigma.size)
    return inv


def random_net(rng: np.random.Generator, d: int, h: int, scale: float = 5.0) -> ShallowNet:
    """Network with every parameter drawn uniformly from ``[-scale, scale]``."""
    p = rng.uniform(-scale, scale, size=param_count(d, h))
    return unflatten(p, d, h)
