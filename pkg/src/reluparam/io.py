"""JSON serialization of networks, point sets and reports.

Two network layouts are accepted wherever a network is read:

    {"d": 2, "h": 3, "w": [[...], ...], "b": [...], "v": [...], "c": 0.5}
    {"d": 2, "h": 3, "theta": [...]}

A document that wraps a network under the key ``"net"`` (as written by the
command line tool) is accepted as well.  Floats are written with ``repr``,
i.e. the shortest decimal string that round-trips.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import FormatError, ReluParamError
from .network import ShallowNet, flatten, unflatten


def _plain(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (tuple, set)):
        return list(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, two-space indent, trailing newline)."""
    return json.dumps(obj, default=_plain, sort_keys=True, indent=2, allow_nan=False) + "\n"


def net_to_dict(net: ShallowNet, form: str = "structured") -> dict:
    d, h = net.input_dim, net.hidden_dim
    if form == "flat":
        return {"d": d, "h": h, "theta": flatten(net).tolist()}
    if form != "structured":
        raise ValueError(f"unknown form {form!r}")
    return {"d": d, "h": h, "w": net.w.tolist(), "b": net.b.tolist(),
            "v": net.v.tolist(), "c": net.c}


def _int_field(obj: dict, key: str) -> int:
    val = obj.get(key)
    if isinstance(val, bool) or not isinstance(val, int) or val < 1:
        raise FormatError(f"field {key!r} must be a positive integer")
    return val


def net_from_dict(obj) -> ShallowNet:
    """Parse either network layout (or a wrapper with a ``"net"`` key)."""
    if not isinstance(obj, dict):
        raise FormatError("network document must be a JSON object")
    if "net" in obj and isinstance(obj["net"], dict):
        return net_from_dict(obj["net"])
    d, h = _int_field(obj, "d"), _int_field(obj, "h")
    try:
        if "theta" in obj:
            return unflatten(np.asarray(obj["theta"], dtype=float), d, h)
        missing = [k for k in ("w", "b", "v", "c") if k not in obj]
        if missing:
            raise FormatError(f"missing fields {missing}")
        w = np.asarray(obj["w"], dtype=float)
        if w.shape != (h, d):
            raise FormatError(f"w must have shape ({h}, {d}), got {w.shape}")
        net = ShallowNet(w, obj["b"], obj["v"], obj["c"])
    except ReluParamError:
        raise
    except (TypeError, ValueError) as exc:
        raise FormatError(f"malformed network: {exc}") from exc
    if net.hidden_dim != h or net.input_dim != d:
        raise FormatError("declared d/h do not match the arrays")
    return net


def read_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise FormatError(f"{path}: cannot read ({exc})") from exc


def read_net(path) -> ShallowNet:
    return net_from_dict(read_json(path))


def read_points(path) -> np.ndarray:
    """Point list from JSON (a list of points or ``{"points": [...]}``)."""
    obj = read_json(path)
    if isinstance(obj, dict):
        obj = obj.get("points")
    try:
        pts = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{path}: malformed point list") from exc
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if pts.ndim != 2 or pts.size == 0:
        raise FormatError(f"{path}: expected a nonempty list of points")
    return pts


def write_text(path, text: str):
    Path(path).write_text(text)
