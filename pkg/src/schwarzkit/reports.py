"""The uniform inequality record and its JSON encoding."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOL, Tolerance


def fmt17(value: float) -> str:
    """17 significant digits; enough to round-trip any double."""
    return format(float(value), ".17g")


def dumps(obj, indent: int | None = 2) -> str:
    """JSON with every float written to 17 significant digits.

    Non-finite floats become ``null``.  Keys keep insertion order so equal
    inputs always give byte-identical text.
    """
    out: list[str] = []
    _encode(obj, out, indent, 0)
    return "".join(out)


def _encode(obj, out, indent, level):
    if obj is None or isinstance(obj, bool):
        out.append("null" if obj is None else ("true" if obj else "false"))
    elif isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(fmt17(obj) if math.isfinite(obj) else "null")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        _container(list(obj.items()), "{", "}", out, indent, level, keyed=True)
    elif isinstance(obj, (list, tuple)):
        _container(list(obj), "[", "]", out, indent, level, keyed=False)
    else:
        raise TypeError(f"cannot encode {type(obj).__name__}")


def _container(items, open_, close, out, indent, level, keyed):
    if not items:
        out.append(open_ + close)
        return
    # short lists of scalars stay on one line, e.g. [re, im] pairs
    flat = indent is None or (not keyed and all(not isinstance(i, (dict, list, tuple)) for i in items))
    out.append(open_)
    for n, item in enumerate(items):
        if n:
            out.append(", " if flat else ",")
        if not flat:
            out.append("\n" + " " * (indent * (level + 1)))
        if keyed:
            key, item = item
            out.append(json.dumps(str(key)) + ": ")
        _encode(item, out, indent, level + 1)
    if not flat:
        out.append("\n" + " " * (indent * level))
    out.append(close)


def complex_pairs(values) -> list[list[float]]:
    return [[float(v.real), float(v.imag)] for v in np.asarray(values, dtype=np.complex128)]


@dataclass(frozen=True)
class BoundReport:
    """One instance of an inequality ``lhs >= rhs``.

    ``satisfied`` means ``gap >= -slack`` and ``equality`` means
    ``|gap| <= slack``; the slack is ``tol.abs_eps + tol.rel_eps * scale``
    where ``scale`` is the largest of ``|lhs|``, ``|rhs|`` and the natural
    magnitude of the terms before cancellation.
    """

    label: str
    lhs: float
    rhs: float
    gap: float
    satisfied: bool
    equality: bool

    @classmethod
    def from_sides(cls, label: str, lhs: float, rhs: float, tol: Tolerance = DEFAULT_TOL,
                   scale: float = 0.0) -> "BoundReport":
        lhs, rhs = float(lhs), float(rhs)
        gap = lhs - rhs
        slack = tol.slack(lhs, rhs, float(scale))
        return cls(label, lhs, rhs, gap, bool(gap >= -slack), bool(abs(gap) <= slack))

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "satisfied": self.satisfied,
            "equality": self.equality,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return dumps(self.to_dict(), indent)

    @classmethod
    def from_dict(cls, data: dict) -> "BoundReport":
        return cls(str(data["label"]), float(data["lhs"]), float(data["rhs"]), float(data["gap"]),
                   bool(data["satisfied"]), bool(data["equality"]))


def judge(lhs, rhs, scale, tol: Tolerance = DEFAULT_TOL):
    """Vectorized :meth:`BoundReport.from_sides`: ``(gap, slack, satisfied, equality)``."""
    lhs = np.asarray(lhs, dtype=np.float64)
    rhs = np.asarray(rhs, dtype=np.float64)
    gap = lhs - rhs
    slack = tol.slack_array(lhs, rhs, scale)
    return gap, slack, gap >= -slack, np.abs(gap) <= slack
