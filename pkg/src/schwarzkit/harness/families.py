"""Every inequality the suite checks, with its batched and plain evaluators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .. import kernels
from ..metrics import TriangleKind, dist, dist_pow, pair_stats, triangle_sides
from ..ntuple import Order, basis_max_sides, mean_sides
from ..projections import projection_sides
from ..refinements import quad_sides, rs_sides, schwarz_sides
from . import plain


@dataclass
class Block:
    """A batch of trials at one dimension, with shared intermediate results cached."""

    X: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    E: np.ndarray
    U: np.ndarray  # (T, dim, dim) with zero columns past each trial's rank
    _memo: dict = field(default_factory=dict, repr=False)

    def memo(self, key, make):
        if key not in self._memo:
            self._memo[key] = make()
        return self._memo[key]

    def rows(self, name):
        return getattr(self, name.upper())

    def stats(self, pair: str, real: bool = False):
        a, b = pair
        return self.memo(("stats", pair, real), lambda: pair_stats(self.rows(a), self.rows(b), real))

    def norms2(self):
        return self.memo("norms2", lambda: (kernels.sqnorm(self.X), kernels.sqnorm(self.Y)))

    def projection(self):
        return self.memo("projection", lambda: projection_sides(self.X, self.Y, self.U))

    def rs(self):
        return self.memo("rs", lambda: rs_sides(self.X, self.Y, self.E))


@dataclass(frozen=True)
class FamilySpec:
    key: str
    inputs: str  # letters of the inputs used, from "xyzeU"
    sides: Callable[[Block], tuple]
    plain: Callable[..., tuple]


def _triangle(kind, p=2.0):
    real = kind in (TriangleKind.KREIN, TriangleKind.SIN_PHI, TriangleKind.DELTAP)

    def sides(b):
        return triangle_sides(kind, b.stats("xy", real), b.stats("xz", real), b.stats("zy", real), p)

    return sides


def _detp(p, real):
    def sides(b):
        nx2, ny2 = b.norms2()
        N = np.sqrt(nx2 * ny2) ** p
        lhs = N * dist_pow(b.stats("xy", real), p)
        det = dist(b.stats("ye", real), p) - dist(b.stats("xe", real), p)
        return lhs, N * np.abs(det) ** p, N

    return sides


def _det2(real):
    def sides(b):
        nx2, ny2 = b.norms2()
        N2 = nx2 * ny2
        xe, ye = b.stats("xe", real), b.stats("ye", real)
        det = np.abs(xe.cos) * np.sqrt(ye.sin2) - np.abs(ye.cos) * np.sqrt(xe.sin2)
        return N2 * b.stats("xy", real).sin2, N2 * det * det, N2

    return sides


def _pick(fn, *idx):
    return lambda b: tuple(fn(b)[i] for i in idx)


def _basis_max(p, order):
    return lambda b: basis_max_sides(b.X, b.Y, p, order)[:3]


def _mean(p, order):
    return lambda b: mean_sides(b.X, b.Y, p, order)


def family_table(p_values) -> list[FamilySpec]:
    """All families in report order; p-dependent ones once per ``p``."""
    T = TriangleKind
    specs = [
        FamilySpec("schwarz", "xy", lambda b: schwarz_sides(b.X, b.Y), plain.schwarz),
        FamilySpec("projection", "xyU", _pick(Block.projection, 0, 1, 4), plain.projection),
        FamilySpec("projection_chain", "xyU", _pick(Block.projection, 2, 3, 4), plain.projection_chain),
        FamilySpec("projection_floor", "xyU",
                   lambda b: (b.projection()[3], np.zeros_like(b.projection()[3]), b.projection()[4]),
                   plain.projection_floor),
        FamilySpec("quad", "xyz", lambda b: quad_sides(b.X, b.Y, b.Z), plain.quad),
        FamilySpec("rs_upper", "xye", _pick(Block.rs, 0, 1, 0), plain.rs_upper),
        FamilySpec("rs_lower", "xye", _pick(Block.rs, 1, 2, 0), plain.rs_lower),
        FamilySpec("lin_psi", "xyz", _triangle(T.LIN_PSI), plain.lin_psi),
        FamilySpec("krein", "xyz", _triangle(T.KREIN), plain.krein),
        FamilySpec("wz_sin_psi", "xyz", _triangle(T.WZ_SIN_PSI), plain.wz_sin_psi),
        FamilySpec("sin_phi", "xyz", _triangle(T.SIN_PHI), plain.sin_phi),
        FamilySpec("cos_lower", "xyz", _triangle(T.COS_LOWER), plain.cos_lower),
    ]
    for p in p_values:
        tag = f"[p={p:g}]"
        specs += [
            FamilySpec(f"dp{tag}", "xyz", _triangle(T.DP, p), _with(plain.dp, p=p)),
            FamilySpec(f"deltap{tag}", "xyz", _triangle(T.DELTAP, p), _with(plain.deltap, p=p)),
            FamilySpec(f"detp_modulus{tag}", "xye", _detp(p, False), _with(plain.detp, p=p)),
            FamilySpec(f"detp_real{tag}", "xye", _detp(p, True), _with(plain.detp, p=p, real=True)),
        ]
    specs += [
        FamilySpec("det2_modulus", "xye", _det2(False), plain.det2),
        FamilySpec("det2_real", "xye", _det2(True), _with(plain.det2, real=True)),
    ]
    for p in p_values:
        tag = f"[p={p:g}]"
        specs += [
            FamilySpec(f"general_e{tag}", "xye", _detp(p, False), _with(plain.detp, p=p)),
            FamilySpec(f"basis_max{tag}", "xy", _basis_max(p, Order.P_FORM), _with(plain.basis_max, p=p)),
            FamilySpec(f"mean{tag}", "xy", _mean(p, Order.P_FORM), _with(plain.mean, p=p)),
        ]
    specs += [
        FamilySpec("general_e_quadratic", "xye", _det2(False), plain.det2),
        FamilySpec("basis_max_quadratic", "xy", _basis_max(2.0, Order.QUADRATIC),
                   _with(plain.basis_max, p=2.0, quadratic=True)),
        FamilySpec("basis_max_p2", "xy", _basis_max(2.0, Order.P2_SIMPLE), _with(plain.basis_max, p=2.0)),
        FamilySpec("mean_quadratic", "xy", _mean(2.0, Order.QUADRATIC), plain.walker),
    ]
    return specs


def _with(fn, **kw):
    def bound(*args):
        return fn(*args, **kw)

    bound.__name__ = fn.__name__
    return bound
