"""Orthogonal projections given by orthonormal families, and the bound
``||x|| ||y|| >= <Px,x>^1/2 <Py,y>^1/2 + |<x,y> - <Px,y>|`` with its chain."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .core import DEFAULT_TOL, CVector, Tolerance, as_cvector, same_dim
from .errors import DimensionMismatchError, ValidationError
from .reports import BoundReport

GRAM_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Projector:
    """``P x = sum_j <x, u_j> u_j`` for an orthonormal family ``u_1..u_k``.

    Storing the family instead of a matrix makes ``P = P^2 = P*`` hold by
    construction.  ``dim`` is ``None`` for the empty family (``P = 0``), which
    then acts on vectors of any dimension.
    """

    basis: tuple[CVector, ...]
    dim: int | None

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self, dim: int | None = None) -> np.ndarray:
        """Columns ``u_j`` as a ``(dim, rank)`` array."""
        n = self.dim if self.dim is not None else dim
        if n is None:
            raise ValueError("the zero projector needs an explicit dimension")
        if not self.basis:
            return np.zeros((n, 0), dtype=np.complex128)
        return np.stack([u.data for u in self.basis], axis=1)

    def _check(self, x: CVector) -> None:
        if self.dim is not None and x.dim != self.dim:
            raise DimensionMismatchError(f"projector acts on dimension {self.dim}, vector has {x.dim}")


def make_projector(family: Sequence, tol_gram: float = GRAM_TOL) -> Projector:
    """Validate an orthonormal family; ``|<u_i,u_j> - delta_ij| <= tol_gram`` for all pairs."""
    if not family:
        return Projector((), None)
    basis = same_dim(*family)
    U = np.stack([u.data for u in basis])
    k = len(basis)
    left = np.repeat(U, k, axis=0)
    right = np.tile(U, (k, 1))
    gram = kernels.cdot(left, right).reshape(k, k)
    off = np.abs(gram - np.eye(k))
    i, j = np.unravel_index(np.argmax(off), off.shape)
    if off[i, j] > tol_gram:
        raise ValidationError(
            f"family is not orthonormal: <u_{i},u_{j}> = {complex(gram[i, j])!r} "
            f"differs from {int(i == j)} by {off[i, j]:.3g}"
        )
    return Projector(basis, basis[0].dim)


def _coefficients(X, U):
    """``a[t, j] = <x_t, u_{t,j}>`` for a batch of families ``U`` of shape (T, n, k)."""
    T, n, k = U.shape
    if k == 0:
        return np.zeros((T, 0), dtype=np.complex128)
    Xr = np.repeat(X, k, axis=0)
    Ur = np.ascontiguousarray(U.transpose(0, 2, 1)).reshape(T * k, n)
    return kernels.cdot(Xr, Ur).reshape(T, k)


def apply_rows(U, X):
    a = _coefficients(X, U)
    return np.einsum("tk,tnk->tn", a, U)


def apply(P: Projector, x) -> CVector:
    x = as_cvector(x)
    P._check(x)
    U = P.matrix(x.dim)[None]
    return CVector(apply_rows(U, x.data[None])[0])


def quadratic_form(P: Projector, x) -> float:
    """``<Px, x> = sum_j |<x, u_j>|^2``, nonnegative by construction."""
    x = as_cvector(x)
    P._check(x)
    a = _coefficients(x.data[None], P.matrix(x.dim)[None])
    return float(kernels.sqnorm(a)[0])


def projection_sides(X, Y, U):
    """Both sides of the projection bound and of its chain, batched.

    Returns ``(lhs_a, rhs_a, lhs_b, rhs_b, scale)`` with ``scale = ||x|| ||y||``.
    """
    a = _coefficients(X, U)
    b = _coefficients(Y, U)
    pxx = kernels.sqnorm(a)
    pyy = kernels.sqnorm(b)
    pxy = kernels.cdot(a, b)
    nxy = np.sqrt(kernels.sqnorm(X) * kernels.sqnorm(Y))
    # <x,y> - <Px,y> = <(I-P)x, y>, evaluated on the residual to avoid cancellation
    off = np.abs(kernels.cdot(X - np.einsum("tk,tnk->tn", a, U), Y))
    geo = np.sqrt(np.maximum(pxx, 0.0)) * np.sqrt(np.maximum(pyy, 0.0))
    xy = np.abs(kernels.cdot(X, Y))
    return nxy, geo + off, nxy - xy, geo - np.abs(pxy), nxy


def projection_bound(P: Projector, x, y, tol: Tolerance = DEFAULT_TOL) -> tuple[BoundReport, BoundReport]:
    """Reports for the projection bound (A) and its chain refinement of Schwarz (B).

    B's right side is itself nonnegative up to ``tol``; see
    :func:`projection_floor`.
    """
    x, y = same_dim(x, y)
    P._check(x)
    U = P.matrix(x.dim)[None]
    la, ra, lb, rb, scale = (float(v[0]) for v in projection_sides(x.data[None], y.data[None], U))
    return (
        BoundReport.from_sides("projection", la, ra, tol, scale),
        BoundReport.from_sides("projection_chain", lb, rb, tol, scale),
    )


def projection_floor(chain: BoundReport, scale: float, tol: Tolerance = DEFAULT_TOL) -> BoundReport:
    """``rhs_B >= 0``: the geometric mean dominates ``|<Px,y>|``."""
    return BoundReport.from_sides("projection_floor", chain.rhs, 0.0, tol, scale)
