"""Vantage-point tree over complex lines, searched with the metric ``d_p``.

Pruning is only correct because ``d_p`` satisfies the triangle inequality,
so agreement with a linear scan doubles as a test of that inequality.

The tree is stored flat: node ``i`` holds a vantage point ``vp[i]``, a
radius ``mu[i]`` and the indices of its ``inside`` (distance <= mu) and
``outside`` (distance > mu) children, ``-1`` for none.  Node 0 is the root.

The search loop computes distances with a short uncompensated formula and
prunes with a small slack; the surviving candidates are then re-measured
with :func:`schwarzkit.metrics.d_p`'s batched form, so reported distances
match a linear scan exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from ._accel import jit
from .core import DEFAULT_TOL, Tolerance, as_cvector, require_nonzero, same_dim
from .errors import DimensionMismatchError, FormatError, ParameterError, ValidationError
from .metrics import check_p, dist, pair_stats
from .reports import dumps

# covers the gap between the search-loop distance and the compensated one
PRUNE_SLACK = 1e-9
FILE_FORMAT = "schwarzkit.vpindex"


@dataclass(frozen=True, eq=False)
class VPIndex:
    p: float
    points: np.ndarray  # (size, dim) unit rows; row i is the point with id i
    vp: np.ndarray
    mu: np.ndarray
    inside: np.ndarray
    outside: np.ndarray
    dim: int | None = None

    @property
    def size(self) -> int:
        return int(self.vp.size)

    def __len__(self) -> int:
        return self.size


def distances(points: np.ndarray, q: np.ndarray, p: float) -> np.ndarray:
    """``d_p`` from each row of ``points`` to ``q``; the reference values."""
    if len(points) == 0:
        return np.zeros(0)
    Q = np.broadcast_to(q, points.shape)
    return dist(pair_stats(points, Q), p)


def _unit_rows(points):
    vs = same_dim(*points)
    require_nonzero(*((f"point {i}", v) for i, v in enumerate(vs)))
    P = np.stack([v.data for v in vs])
    return P / np.sqrt(kernels.sqnorm(P))[:, None]


def build(points, p: float = 2.0) -> VPIndex:
    """Build the tree; ids are input positions, the vantage is the first id of each part."""
    p = check_p(p)
    points = list(points)
    if not points:
        empty = np.zeros(0, dtype=np.int64)
        return VPIndex(p, np.zeros((0, 0), dtype=np.complex128), empty, np.zeros(0), empty, empty)
    P = _unit_rows(points)
    n = len(P)
    vp = np.full(n, -1, dtype=np.int64)
    mu = np.zeros(n)
    inside = np.full(n, -1, dtype=np.int64)
    outside = np.full(n, -1, dtype=np.int64)
    # explicit stack: degenerate data can make the tree as deep as n
    todo = [(0, np.arange(n))]
    next_node = 1
    while todo:
        node, ids = todo.pop()
        v, rest = ids[0], ids[1:]
        vp[node] = v
        if rest.size == 0:
            continue
        d = distances(P[rest], P[v], p)
        mu[node] = np.sort(d)[(rest.size - 1) // 2]
        near, far = rest[d <= mu[node]], rest[d > mu[node]]
        for child, part in ((inside, near), (outside, far)):
            if part.size:
                child[node] = next_node
                todo.append((next_node, part))
                next_node += 1
    return VPIndex(p, P, vp, mu, inside, outside, P.shape[1])


# ------------------------------------------------------------------ search


@jit
def _line_dist(P, i, q, p):
    coef = 0j
    for j in range(q.size):
        coef += P[i, j] * q[j].conjugate()
    s2 = 0.0
    for j in range(q.size):
        r = P[i, j] - coef * q[j]
        s2 += r.real * r.real + r.imag * r.imag
    s2 = min(max(s2, 0.0), 1.0)
    if s2 < 0.5:
        v = -math.expm1(0.5 * p * math.log1p(-s2))
    else:
        c2 = coef.real * coef.real + coef.imag * coef.imag
        v = 1.0 - min(c2, 1.0) ** (0.5 * p)
    return max(v, 0.0) ** (1.0 / p)


@jit
def _search(P, vp, mu, inside, outside, q, p, k, radius, slack):
    """Candidates for a k-NN (``k > 0``) or a range query (``k == 0``).

    Returns ``(ids, dists, visits)``; every true answer is among the ids.
    """
    n = vp.size
    stack_node = np.empty(n, dtype=np.int64)
    stack_bound = np.empty(n)
    cand = np.empty(n, dtype=np.int64)
    cand_d = np.empty(n)
    best = np.full(max(k, 1), np.inf)  # sorted k smallest distances so far
    ncand = 0
    visits = 0
    stack_node[0] = 0
    stack_bound[0] = 0.0
    top = 1
    while top > 0:
        top -= 1
        node = stack_node[top]
        reach = best[k - 1] if k > 0 else radius
        if stack_bound[top] > reach + slack:
            continue
        d = _line_dist(P, vp[node], q, p)
        visits += 1
        if d <= reach + slack:
            cand[ncand] = vp[node]
            cand_d[ncand] = d
            ncand += 1
            if k > 0 and d < best[k - 1]:
                m = k - 1
                while m > 0 and best[m - 1] > d:
                    best[m] = best[m - 1]
                    m -= 1
                best[m] = d
        # push the far side first so the side holding q is searched first
        a, b = inside[node], outside[node]
        ba, bb = d - mu[node], mu[node] - d
        if d > mu[node]:
            a, b = b, a
            ba, bb = bb, ba
        if b >= 0:
            stack_node[top] = b
            stack_bound[top] = bb
            top += 1
        if a >= 0:
            stack_node[top] = a
            stack_bound[top] = ba
            top += 1
    if k > 0:
        keep = cand_d[:ncand] <= best[k - 1] + slack
        return cand[:ncand][keep], cand_d[:ncand][keep], visits
    return cand[:ncand], cand_d[:ncand], visits


def _query(index: VPIndex, q):
    q = as_cvector(q)
    require_nonzero(("q", q))
    if index.dim is not None and q.dim != index.dim:
        raise DimensionMismatchError(f"index holds dimension {index.dim}, query has {q.dim}")
    return q.data / math.sqrt(float(kernels.sqnorm(q.data[None])[0]))


def _run(index, qn, k, radius):
    return _search(index.points, index.vp, index.mu, index.inside, index.outside,
                   np.ascontiguousarray(qn), index.p, k, radius, PRUNE_SLACK)


def _finish(index, qn, ids):
    d = distances(index.points[ids], qn, index.p)
    order = np.lexsort((ids, d))
    return [(int(ids[i]), float(d[i])) for i in order]


def query_nn(index: VPIndex, q, k: int, return_visits: bool = False):
    """The ``min(k, size)`` nearest ids with distances, ascending; ties go to the smaller id."""
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ParameterError(f"k must be a positive integer, got {k!r}")
    qn = _query(index, q)
    if index.size == 0:
        return ([], 0) if return_visits else []
    ids, _, visits = _run(index, qn, int(min(k, index.size)), 0.0)
    out = _finish(index, qn, ids)[:k]
    return (out, int(visits)) if return_visits else out


def range_tol(tol: Tolerance = DEFAULT_TOL) -> float:
    """Absolute allowance added to the radius of a range query."""
    return tol.slack(1.0)


def query_range(index: VPIndex, q, r: float, tol: Tolerance = DEFAULT_TOL, return_visits: bool = False):
    """Every id with ``d_p <= r + tol``, sorted by distance then id."""
    r = float(r)
    if not 0.0 <= r <= 1.0:
        raise ParameterError(f"radius must lie in [0, 1], got {r!r}")
    qn = _query(index, q)
    if index.size == 0:
        return ([], 0) if return_visits else []
    reach = r + range_tol(tol)
    ids, _, visits = _run(index, qn, 0, reach)
    out = [(i, d) for i, d in _finish(index, qn, ids) if d <= reach]
    return (out, int(visits)) if return_visits else out


def linear_scan(index: VPIndex, q, k: int | None = None, r: float | None = None,
                tol: Tolerance = DEFAULT_TOL):
    """Brute-force answer to the same queries, for checking the tree."""
    qn = _query(index, q)
    ids = np.arange(index.size)
    out = _finish(index, qn, ids)
    if k is not None:
        return out[:k]
    return [(i, d) for i, d in out if d <= r + range_tol(tol)]


# ------------------------------------------------------------------ checks


def audit(index: VPIndex, slack: float = PRUNE_SLACK) -> None:
    """Check the structural invariants; raises :class:`ValidationError`."""
    n = index.size
    arrays = (index.vp, index.mu, index.inside, index.outside)
    if any(a.shape != (n,) for a in arrays) or index.points.shape[0] != n:
        raise ValidationError("node arrays and point table disagree in length")
    if n == 0:
        return
    if sorted(index.vp.tolist()) != list(range(n)):
        raise ValidationError("every point id must be the vantage of exactly one node")
    parents = np.zeros(n, dtype=np.int64)
    for child in (index.inside, index.outside):
        bad = (child < -1) | (child >= n) | (child == 0)
        if np.any(bad):
            raise ValidationError(f"node {int(np.argmax(bad))} has an invalid child index")
        np.add.at(parents, child[child >= 0], 1)
    if parents[0] != 0 or np.any(parents[1:] != 1):
        raise ValidationError("nodes do not form a single tree rooted at node 0")
    norms = np.sqrt(np.sum(np.abs(index.points) ** 2, axis=1))
    if np.any(np.abs(norms - 1.0) > DEFAULT_TOL.slack(1.0)):
        raise ValidationError("stored points must have unit norm")
    # subtree members, then the partition rule at every node
    members = [None] * n
    order = []
    todo = [0]
    while todo:
        node = todo.pop()
        order.append(node)
        todo.extend(c for c in (index.inside[node], index.outside[node]) if c >= 0)
    if len(order) != n:
        raise ValidationError("tree is not connected")
    for node in reversed(order):
        parts = [np.array([index.vp[node]])]
        parts += [members[c] for c in (index.inside[node], index.outside[node]) if c >= 0]
        members[node] = np.concatenate(parts)
    for node in range(n):
        v = index.points[index.vp[node]]
        for child, near in ((index.inside[node], True), (index.outside[node], False)):
            if child < 0:
                continue
            d = distances(index.points[members[child]], v, index.p)
            ok = d <= index.mu[node] + slack if near else d > index.mu[node] - slack
            if not np.all(ok):
                side = "inside" if near else "outside"
                raise ValidationError(f"node {node}: {side} subtree breaks the radius {float(index.mu[node])!r}")


# ---------------------------------------------------------------- file I/O


def to_dict(index: VPIndex) -> dict:
    nodes = [
        {"vp": int(index.vp[i]), "mu": float(index.mu[i]),
         "inside": int(index.inside[i]) if index.inside[i] >= 0 else None,
         "outside": int(index.outside[i]) if index.outside[i] >= 0 else None}
        for i in range(index.size)
    ]
    points = [[[float(z.real), float(z.imag)] for z in row] for row in index.points]
    return {"format": FILE_FORMAT, "version": 1, "p": index.p, "dim": index.dim,
            "size": index.size, "points": points, "nodes": nodes}


def save(index: VPIndex, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(to_dict(index)) + "\n")


def _field(obj, key, kind, where):
    if key not in obj:
        raise FormatError(f"missing field {key!r}", where)
    value = obj[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise FormatError(f"field {key!r} has the wrong type", where)
    return value


def from_dict(obj) -> VPIndex:
    if not isinstance(obj, dict) or obj.get("format") != FILE_FORMAT:
        raise FormatError(f"not a {FILE_FORMAT} document", "top level")
    try:
        p = check_p(_field(obj, "p", (int, float), "top level"))
    except ParameterError as exc:
        raise FormatError(str(exc), "field 'p'") from None
    size = _field(obj, "size", int, "top level")
    raw_points = _field(obj, "points", list, "top level")
    raw_nodes = _field(obj, "nodes", list, "top level")
    if len(raw_points) != size or len(raw_nodes) != size:
        raise FormatError(f"size is {size} but found {len(raw_points)} points and {len(raw_nodes)} nodes",
                          "top level")
    dim = obj.get("dim")
    if size == 0:
        return build([], p)
    if not isinstance(dim, int) or dim < 1:
        raise FormatError("dim must be a positive integer", "field 'dim'")
    P = np.zeros((size, dim), dtype=np.complex128)
    for i, row in enumerate(raw_points):
        where = f"points[{i}]"
        if not isinstance(row, list) or len(row) != dim:
            raise FormatError(f"expected {dim} entries", where)
        for j, pair in enumerate(row):
            ok = isinstance(pair, list) and len(pair) == 2 and all(
                isinstance(c, (int, float)) and not isinstance(c, bool) for c in pair)
            if not ok:
                raise FormatError("entry must be a [re, im] pair of numbers", f"{where}[{j}]")
            P[i, j] = complex(pair[0], pair[1])
    if not np.all(np.isfinite(P)):
        raise FormatError("non-finite coordinate", "points")
    vp = np.empty(size, dtype=np.int64)
    mu = np.empty(size)
    inside = np.empty(size, dtype=np.int64)
    outside = np.empty(size, dtype=np.int64)
    for i, node in enumerate(raw_nodes):
        where = f"nodes[{i}]"
        if not isinstance(node, dict):
            raise FormatError("node must be an object", where)
        vp[i] = _field(node, "vp", int, where)
        mu[i] = _field(node, "mu", (int, float), where)
        for arr, key in ((inside, "inside"), (outside, "outside")):
            value = node.get(key)
            arr[i] = -1 if value is None else _field(node, key, int, where)
    if not np.all(np.isfinite(mu)) or np.any(mu < 0):
        raise FormatError("radii must be finite and nonnegative", "nodes")
    index = VPIndex(p, P, vp, mu, inside, outside, dim)
    try:
        audit(index)
    except ValidationError as exc:
        raise FormatError(str(exc), "nodes") from None
    return index


def load(path) -> VPIndex:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    return from_dict(obj)
