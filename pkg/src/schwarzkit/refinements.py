"""Refinements of the Schwarz inequality as bound reports.

All right-hand sides built from a 2x2 determinant use its absolute value
before taking the p-th power.  The bound comes from
``|d(x,e) - d(y,e)| <= d(x,y)`` raised to the power p, so the sign of the
determinant carries no information, and a signed odd or fractional power
would be undefined or wrong.

Each bound also has a ``*_sides`` function that works on ``(T, n)``
batches and returns ``(lhs, rhs, scale)`` arrays; the harness uses these
directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from . import kernels
from .core import DEFAULT_TOL, Tolerance, require_nonzero, require_unit, same_dim
from .errors import ParameterError
from .metrics import check_p, dist, dist_pow, pair_stats
from .reports import BoundReport


class Mode(str, Enum):
    MODULUS = "modulus"  # |<.,.>|
    REAL_PART = "real"  # |Re<.,.>|


@dataclass(frozen=True)
class MetricParams:
    p: float = 2.0
    mode: Mode = Mode.MODULUS

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        try:
            object.__setattr__(self, "p", check_p(self.p))
        except (TypeError, ValueError) as exc:
            raise ParameterError(str(exc)) from None


# ------------------------------------------------------------ batched sides


def schwarz_sides(X, Y):
    nxy = np.sqrt(kernels.sqnorm(X) * kernels.sqnorm(Y))
    return nxy, np.abs(kernels.cdot(X, Y)), nxy


def quad_sides(X, Y, Z):
    """``(||x||^2||z||^2 - |<x,z>|^2)(||y||^2||z||^2 - |<y,z>|^2)`` against
    ``|<x,y>||z||^2 - <x,z><z,y>|^2``.

    With ``x' = x - proj_z x`` and ``y'`` likewise, the left side is
    ``||z||^4 ||x'||^2 ||y'||^2`` and the right side ``||z||^4 |<x',y'>|^2``.
    Both are evaluated in that form.
    """
    nz2 = kernels.sqnorm(Z)
    _, Rx = kernels.residual(X, Z)
    _, Ry = kernels.residual(Y, Z)
    z4 = nz2 * nz2
    lhs = z4 * kernels.sqnorm(Rx) * kernels.sqnorm(Ry)
    rhs = z4 * np.abs(kernels.cdot(Rx, Ry)) ** 2
    return lhs, rhs, z4 * kernels.sqnorm(X) * kernels.sqnorm(Y)


def rs_sides(X, Y, E):
    """``(a, b, c)`` with ``a >= b >= c``; ``a`` doubles as the scale."""
    a = np.sqrt(kernels.sqnorm(X) * kernels.sqnorm(Y))
    _, Rx = kernels.residual(X, E)
    # <x,y> - <x,e><e,y> = <x - <x,e>e, y> for unit e
    b = np.abs(kernels.cdot(Rx, Y)) + np.abs(kernels.cdot(X, E) * kernels.cdot(E, Y))
    c = np.abs(kernels.cdot(X, Y))
    return a, b, c


def detp_sides(X, Y, E, p: float, real: bool = False):
    """``||x||^p||y||^p - u^p`` against ``|det|^p``, with
    ``det = ||x|| (||y||^p - t^p)^(1/p) - ||y|| (||x||^p - s^p)^(1/p)``.

    Factoring ``||x|| ||y||`` out of the determinant leaves the difference of
    the distances of x and y to e, which is what gets evaluated.
    """
    N = (np.sqrt(kernels.sqnorm(X) * kernels.sqnorm(Y))) ** p
    lhs = N * dist_pow(pair_stats(X, Y, real), p)
    det = dist(pair_stats(Y, E, real), p) - dist(pair_stats(X, E, real), p)
    return lhs, N * np.abs(det) ** p, N


def det2_sides(X, Y, E, real: bool = False):
    """``||x||^2||y||^2 - u^2`` against
    ``(s (||y||^2 - t^2)^(1/2) - t (||x||^2 - s^2)^(1/2))^2``."""
    N2 = kernels.sqnorm(X) * kernels.sqnorm(Y)
    xe = pair_stats(X, E, real)
    ye = pair_stats(Y, E, real)
    det = np.abs(xe.cos) * np.sqrt(ye.sin2) - np.abs(ye.cos) * np.sqrt(xe.sin2)
    live = N2 > 0.0  # x = 0 or y = 0: both sides vanish
    lhs = np.where(live, N2 * pair_stats(X, Y, real).sin2, 0.0)
    return lhs, np.where(live, N2 * det * det, 0.0), N2


# ----------------------------------------------------------- single reports


def _one(*values):
    return tuple(float(v[0]) for v in values)


def schwarz_bound(x, y, tol: Tolerance = DEFAULT_TOL) -> BoundReport:
    """The plain inequality ``||x|| ||y|| >= |<x,y>|``."""
    x, y = same_dim(x, y)
    lhs, rhs, scale = _one(*schwarz_sides(x.data[None], y.data[None]))
    return BoundReport.from_sides("schwarz", lhs, rhs, tol, scale)


def quad_refinement(x, y, z, tol: Tolerance = DEFAULT_TOL) -> BoundReport:
    x, y, z = same_dim(x, y, z)
    lhs, rhs, scale = _one(*quad_sides(x.data[None], y.data[None], z.data[None]))
    return BoundReport.from_sides("quad", lhs, rhs, tol, scale)


class RSChain(NamedTuple):
    a: float
    b: float
    c: float
    upper: BoundReport  # a >= b
    lower: BoundReport  # b >= c


def rs_chain(x, y, e, tol: Tolerance = DEFAULT_TOL) -> RSChain:
    """``||x|| ||y|| >= |<x,y> - <x,e><e,y>| + |<x,e><e,y>| >= |<x,y>|`` for unit e."""
    x, y, e = same_dim(x, y, e)
    require_unit(e, tol)
    a, b, c = _one(*rs_sides(x.data[None], y.data[None], e.data[None]))
    return RSChain(a, b, c,
                   BoundReport.from_sides("rs_upper", a, b, tol, a),
                   BoundReport.from_sides("rs_lower", b, c, tol, a))


def detp_bound(x, y, e, params: MetricParams = MetricParams(), tol: Tolerance = DEFAULT_TOL) -> BoundReport:
    x, y, e = same_dim(x, y, e)
    require_nonzero(("x", x), ("y", y))
    require_unit(e, tol)
    real = params.mode is Mode.REAL_PART
    lhs, rhs, scale = _one(*detp_sides(x.data[None], y.data[None], e.data[None], params.p, real))
    return BoundReport.from_sides(f"detp[{params.mode.value},p={params.p:g}]", lhs, rhs, tol, scale)


def det2_bound(x, y, e, mode: Mode = Mode.MODULUS, tol: Tolerance = DEFAULT_TOL) -> BoundReport:
    """Quadratic determinant bound; also defined for zero x or y (both sides vanish).

    When ``<x,e>`` vanishes (or its real part, in real mode) the label gets a
    ``:bessel`` suffix: the bound is then Bessel's inequality for the
    orthonormal pair ``{e, x/||x||}``.
    """
    mode = Mode(mode)
    x, y, e = same_dim(x, y, e)
    require_unit(e, tol)
    X, Y, E = x.data[None], y.data[None], e.data[None]
    lhs, rhs, scale = _one(*det2_sides(X, Y, E, mode is Mode.REAL_PART))
    s = kernels.cdot(X, E)[0]
    s = abs(s.real) if mode is Mode.REAL_PART else abs(s)
    label = f"det2[{mode.value}]"
    if np.any(x.data) and s <= tol.slack(np.sqrt(scale)):
        label += ":bessel"
    return BoundReport.from_sides(label, lhs, rhs, tol, scale)
