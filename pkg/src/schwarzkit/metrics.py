"""Distances and angles between complex lines, and the triangle-type
inequalities they satisfy.

Two families of metrics are provided for ``p >= 2``::

    d_p(x, y)     = (1 - |<x,y>|^p / (||x||^p ||y||^p)) ** (1/p)
    delta_p(x, y) = (1 - |Re<x,y>|^p / (||x||^p ||y||^p)) ** (1/p)

``d_p`` only depends on the complex lines through x and y.  ``delta_p``
treats the space as real, so x and ix are at distance 1.

``1 - cos^p`` is never formed by subtraction.  The sine is taken from the
residual of x after projecting out y, which keeps nearly parallel pairs
accurate to full relative precision; at ``p = 10`` the naive formula loses
every digit there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .core import DEFAULT_TOL, Tolerance, require_nonzero, same_dim
from .errors import ConsistencyError, ParameterError
from .reports import BoundReport


class AngleKind(str, Enum):
    PSI = "psi"  # arccos |<x,y>| / (||x|| ||y||), in [0, pi/2]
    PHI = "phi"  # arccos Re<x,y> / (||x|| ||y||), in [0, pi]


class TriangleKind(str, Enum):
    LIN_PSI = "lin_psi"
    KREIN = "krein"
    WZ_SIN_PSI = "wz_sin_psi"
    SIN_PHI = "sin_phi"
    DP = "dp"
    DELTAP = "deltap"
    COS_LOWER = "cos_lower"


REAL_KINDS = frozenset({TriangleKind.KREIN, TriangleKind.SIN_PHI, TriangleKind.DELTAP})
P_KINDS = frozenset({TriangleKind.DP, TriangleKind.DELTAP})


@dataclass(frozen=True)
class AngleValue:
    radians: float
    kind: AngleKind


@dataclass(frozen=True)
class PairStats:
    """Batched cosine data for the pair (a, b).

    ``cos`` is ``|<a,b>|/(||a|| ||b||)`` in modulus mode and the signed
    ``Re<a,b>/(||a|| ||b||)`` in real mode; ``sin2`` comes from the residual.
    """

    cos: np.ndarray
    cos2: np.ndarray
    sin2: np.ndarray


def pair_stats(A, B, real: bool = False) -> PairStats:
    coef, R = kernels.residual(A, B, real)
    na2 = kernels.sqnorm(A)
    nb2 = kernels.sqnorm(B)
    res2 = kernels.sqnorm(R)
    with np.errstate(divide="ignore", invalid="ignore"):
        sin2 = np.clip(res2 / na2, 0.0, 1.0)
        ratio = np.sqrt(nb2 / na2)
        cos = (coef.real if real else np.abs(coef)) * ratio
        cos = np.clip(cos, -1.0, 1.0)
    return PairStats(cos, cos * cos, sin2)


def check_p(p: float) -> float:
    p = float(p)
    if not p >= 2.0:
        raise ParameterError(f"p must be >= 2, got {p!r}")
    return p


def dist_pow(stats: PairStats, p: float):
    """``1 - cos^p``, i.e. the p-th power of the distance."""
    return kernels.one_minus_pow(stats.cos2, stats.sin2, p)


def dist(stats: PairStats, p: float):
    return kernels.root(dist_pow(stats, p), p)


def sin_of(stats: PairStats):
    return np.sqrt(stats.sin2)


def angle_of(stats: PairStats):
    # atan2 keeps small angles accurate where arccos of a rounded cosine does not
    return np.arctan2(np.sqrt(stats.sin2), stats.cos)


def _pair(x, y, real):
    x, y = same_dim(x, y)
    require_nonzero(("x", x), ("y", y))
    return pair_stats(x.data[None], y.data[None], real)


def d_p(x, y, p: float = 2.0) -> float:
    p = check_p(p)
    return float(dist(_pair(x, y, False), p)[0])


def delta_p(x, y, p: float = 2.0) -> float:
    p = check_p(p)
    return float(dist(_pair(x, y, True), p)[0])


def angle(x, y, kind: AngleKind = AngleKind.PSI, tol: Tolerance = DEFAULT_TOL) -> AngleValue:
    kind = AngleKind(kind)
    stats = _pair(x, y, kind is AngleKind.PHI)
    c2, s2 = float(stats.cos2[0]), float(stats.sin2[0])
    if abs(c2 + s2 - 1.0) > tol.slack(1.0) * 1e3:
        raise ConsistencyError(f"cos^2 + sin^2 = {c2 + s2!r}; cosine data is inconsistent")
    return AngleValue(float(angle_of(stats)[0]), kind)


def triangle_sides(kind: TriangleKind, xy: PairStats, xz: PairStats, zy: PairStats, p: float = 2.0):
    """``(sum, single, scale)`` for the triangle-type inequality ``single <= sum``.

    Modulus-mode stats are expected for the PSI/DP/COS kinds, real-mode stats
    for KREIN, SIN_PHI and DELTAP.  For COS_LOWER ``sum`` is ``cos Psi_xy``
    and ``single`` is ``cos(Psi_xz + Psi_zy)`` expanded.
    """
    kind = TriangleKind(kind)
    if kind in (TriangleKind.LIN_PSI, TriangleKind.KREIN):
        single, legs = angle_of(xy), angle_of(xz) + angle_of(zy)
    elif kind in (TriangleKind.WZ_SIN_PSI, TriangleKind.SIN_PHI):
        single, legs = sin_of(xy), sin_of(xz) + sin_of(zy)
    elif kind in P_KINDS:
        single, legs = dist(xy, p), dist(xz, p) + dist(zy, p)
    else:
        legs = xy.cos
        single = xz.cos * zy.cos - sin_of(xz) * sin_of(zy)
    return legs, single, np.ones_like(legs)


def triangle_check(kind, x, y, z, p: float = 2.0, tol: Tolerance = DEFAULT_TOL) -> BoundReport:
    """Check one triangle-type inequality on the triple, with z the middle point.

    The returned report has ``lhs`` = the sum over the two legs through z and
    ``rhs`` = the direct term between x and y.
    """
    kind = TriangleKind(kind)
    if kind in P_KINDS:
        p = check_p(p)
    x, y, z = same_dim(x, y, z)
    require_nonzero(("x", x), ("y", y), ("z", z))
    real = kind in REAL_KINDS
    X, Y, Z = x.data[None], y.data[None], z.data[None]
    legs, single, scale = triangle_sides(kind, pair_stats(X, Y, real), pair_stats(X, Z, real),
                                         pair_stats(Z, Y, real), p)
    label = f"{kind.value}[p={p:g}]" if kind in P_KINDS else kind.value
    return BoundReport.from_sides(label, legs[0], single[0], tol, scale[0])


def pi_range_ok(xz: PairStats, zy: PairStats):
    """Mask of triples where ``Psi_xz + Psi_zy <= pi`` (cosine is monotone there)."""
    return angle_of(xz) + angle_of(zy) <= math.pi
