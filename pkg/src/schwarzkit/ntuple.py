"""Determinant lower bounds on the Cauchy-Schwarz gap for n-tuples of complex numbers.

Three choices of the unit vector e are covered:

* any unit e (``general_e_bound``);
* each standard basis vector, keeping the best one (``basis_max_bound``);
* the uniform vector ``e_k = 1/sqrt(n)``, which turns the bound into one
  about means and centered second moments (``mean_bound``).  The quadratic
  form of this last bound is Walker's inequality.

Reported indices ``m`` are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .core import DEFAULT_TOL, CVector, Tolerance, same_dim
from .errors import DimensionMismatchError, ParameterError
from .metrics import check_p, dist_pow, pair_stats
from .refinements import MetricParams, det2_bound, detp_bound
from .reports import BoundReport


class Family(str, Enum):
    GENERAL_E = "general_e"
    BASIS_MAX = "basis_max"
    UNIFORM_E = "uniform_e"


class Order(str, Enum):
    P_FORM = "p"
    QUADRATIC = "quadratic"
    P2_SIMPLE = "p2"


@dataclass(frozen=True)
class NTupleReport:
    base: BoundReport
    family: Family
    argmax_m: int | None = None

    def __post_init__(self):
        if (self.argmax_m is not None) != (self.family is Family.BASIS_MAX):
            raise ValueError("argmax_m is set exactly for the basis-max family")

    def to_dict(self) -> dict:
        out = self.base.to_dict()
        out["family"] = self.family.value
        if self.argmax_m is not None:
            out["argmax_m"] = self.argmax_m
        return out


def _tuples(*seqs) -> tuple[CVector, ...]:
    lengths = {len(s) for s in seqs}
    if len(lengths) > 1:
        raise DimensionMismatchError(f"tuples must have equal lengths, got {sorted(lengths)}")
    return same_dim(*seqs)


def _order(order, allowed):
    order = Order(order)
    if order not in allowed:
        raise ParameterError(f"order {order.value!r} is not available here")
    return order


# ------------------------------------------------------------ batched sides


def _tail_sums(A2):
    """``sum_{k != m} A2[:, k]`` for every m, without subtracting from the total."""
    before = np.cumsum(A2, axis=1) - A2
    after = np.cumsum(A2[:, ::-1], axis=1)[:, ::-1] - A2
    return before + after


def _dist_from_parts(head2, tail2, p):
    """Distance to a unit direction from the squared component along it and the rest."""
    total = head2 + tail2
    with np.errstate(divide="ignore", invalid="ignore"):
        return kernels.root(kernels.one_minus_pow(head2 / total, tail2 / total, p), p)


def basis_max_sides(X, Y, p: float, order: Order):
    """``(lhs, rhs, scale, argmax)`` where ``argmax`` is the 0-based best m."""
    order = Order(order)
    nx2 = kernels.sqnorm(X)
    ny2 = kernels.sqnorm(Y)
    ax2 = np.abs(X) ** 2
    ay2 = np.abs(Y) ** 2
    tx2 = _tail_sums(ax2)
    ty2 = _tail_sums(ay2)
    live = (nx2 > 0.0) & (ny2 > 0.0)
    xy = pair_stats(X, Y)
    if order is Order.QUADRATIC:
        scale = nx2 * ny2
        lhs = np.where(live, scale * xy.sin2, 0.0)
        det = np.sqrt(ax2) * np.sqrt(ty2) - np.sqrt(ay2) * np.sqrt(tx2)
        per_m = det * det
    else:
        if order is Order.P2_SIMPLE:
            p = 2.0
        scale = np.sqrt(nx2 * ny2) ** p
        lhs = np.where(live, scale * dist_pow(xy, p), 0.0)
        det = _dist_from_parts(ay2, ty2, p) - _dist_from_parts(ax2, tx2, p)
        per_m = scale[:, None] * np.abs(det) ** p
    per_m = np.where(live[:, None], per_m, 0.0)
    best = np.argmax(per_m, axis=1)
    rhs = np.take_along_axis(per_m, best[:, None], axis=1)[:, 0]
    return lhs, rhs, scale, best


def mean_sides(X, Y, p: float, order: Order):
    """Bound with ``e_k = 1/sqrt(n)``, written in means and centered moments."""
    order = Order(order)
    n = X.shape[1]
    nx2 = kernels.sqnorm(X)
    ny2 = kernels.sqnorm(Y)
    mx = X.mean(axis=1)
    my = Y.mean(axis=1)
    # two-pass centered moments are nonnegative by construction
    cx = np.mean(np.abs(X - mx[:, None]) ** 2, axis=1)
    cy = np.mean(np.abs(Y - my[:, None]) ** 2, axis=1)
    live = (nx2 > 0.0) & (ny2 > 0.0)
    xy = pair_stats(X, Y)
    if order is Order.QUADRATIC:
        scale = nx2 * ny2
        lhs = np.where(live, scale * xy.sin2, 0.0)
        det = np.abs(mx) * np.sqrt(cy) - np.abs(my) * np.sqrt(cx)
        return lhs, float(n) ** 2 * det * det, scale
    scale = np.sqrt(nx2 * ny2) ** p
    lhs = np.where(live, scale * dist_pow(xy, p), 0.0)
    det = _dist_from_parts(np.abs(my) ** 2, cy, p) - _dist_from_parts(np.abs(mx) ** 2, cx, p)
    rhs = np.where(live, scale * np.abs(det) ** p, 0.0)
    return lhs, rhs, scale


# ----------------------------------------------------------- single reports


def general_e_bound(x, y, e, p: float = 2.0, order: Order = Order.P_FORM,
                    tol: Tolerance = DEFAULT_TOL) -> NTupleReport:
    """Any unit e.  ``P_FORM`` is the p-power determinant bound, ``QUADRATIC`` the squared one."""
    order = _order(order, (Order.P_FORM, Order.QUADRATIC))
    x, y, e = _tuples(x, y, e)
    if order is Order.P_FORM:
        base = detp_bound(x, y, e, MetricParams(p), tol)
    else:
        base = det2_bound(x, y, e, tol=tol)
    return NTupleReport(base, Family.GENERAL_E)


def basis_max_bound(x, y, p: float = 2.0, order: Order = Order.P_FORM,
                    tol: Tolerance = DEFAULT_TOL) -> NTupleReport:
    """Best standard basis vector ``e = delta_m``; ``argmax_m`` is 1-based, ties go to the smallest m."""
    order = Order(order)
    if order is Order.P_FORM:
        p = check_p(p)
    x, y = _tuples(x, y)
    lhs, rhs, scale, best = basis_max_sides(x.data[None], y.data[None], p, order)
    label = f"basis_max[{order.value}" + (f",p={p:g}]" if order is Order.P_FORM else "]")
    base = BoundReport.from_sides(label, lhs[0], rhs[0], tol, scale[0])
    return NTupleReport(base, Family.BASIS_MAX, int(best[0]) + 1)


def mean_bound(x, y, p: float = 2.0, order: Order = Order.P_FORM,
               tol: Tolerance = DEFAULT_TOL) -> NTupleReport:
    order = _order(order, (Order.P_FORM, Order.QUADRATIC))
    if order is Order.P_FORM:
        p = check_p(p)
    x, y = _tuples(x, y)
    lhs, rhs, scale = mean_sides(x.data[None], y.data[None], p, order)
    label = f"mean[{order.value}" + (f",p={p:g}]" if order is Order.P_FORM else "]")
    return NTupleReport(BoundReport.from_sides(label, lhs[0], rhs[0], tol, scale[0]), Family.UNIFORM_E)

