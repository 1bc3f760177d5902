"""Batched numeric kernels.

Every kernel takes complex128 arrays of shape ``(T, n)`` (T independent rows
of length n) and works row by row.  Each kernel has a loop form compiled by
numba and a vectorized numpy form; ``cdot``, ``sqnorm`` and ``residual``
dispatch to one of them according to :mod:`schwarzkit._accel`.

Sums use Dot2 (TwoProduct via Dekker splitting, then TwoSum), so every
inner product is as accurate as if computed in twice the working precision.
"""

from __future__ import annotations

import numpy as np

from ._accel import NUMBA_ENABLED, njit

_SPLIT = 134217729.0  # 2**27 + 1
# a residual sweep stops once it would move R by less than half an ulp
_NEGLIGIBLE = 2.0**-106
MAX_SWEEPS = 6


def _acc(p, s, a, b):
    # one Dot2 step: (p, s) += a*b, with the rounding errors of the product
    # and the running sum carried in s
    h = a * b
    c = _SPLIT * a
    ah = c - (c - a)
    al = a - ah
    c = _SPLIT * b
    bh = c - (c - b)
    bl = b - bh
    r = al * bl - (((h - ah * bh) - al * bh) - ah * bl)
    x = p + h
    z = x - p
    q = (p - (x - z)) + (h - z)
    return x, s + (q + r)


_acc_nb = njit(_acc)


# ---------------------------------------------------------------- loop forms


def _cdot_loops(X, Y):
    T, n = X.shape
    out = np.empty(T, dtype=np.complex128)
    for t in range(T):
        pr = 0.0
        sr = 0.0
        pi = 0.0
        si = 0.0
        for k in range(n):
            xr = X[t, k].real
            xi = X[t, k].imag
            yr = Y[t, k].real
            yi = Y[t, k].imag
            pr, sr = _acc_nb(pr, sr, xr, yr)
            pr, sr = _acc_nb(pr, sr, xi, yi)
            pi, si = _acc_nb(pi, si, xi, yr)
            pi, si = _acc_nb(pi, si, -xr, yi)
        out[t] = complex(pr + sr, pi + si)
    return out


def _sqnorm_loops(X):
    T, n = X.shape
    out = np.empty(T, dtype=np.float64)
    for t in range(T):
        p = 0.0
        s = 0.0
        for k in range(n):
            xr = X[t, k].real
            xi = X[t, k].imag
            p, s = _acc_nb(p, s, xr, xr)
            p, s = _acc_nb(p, s, xi, xi)
        out[t] = p + s
    return out


def _residual_loops(A, Z, real):
    T, n = A.shape
    coef = np.empty(T, dtype=np.complex128)
    R = np.empty_like(A)
    for t in range(T):
        p = 0.0
        s = 0.0
        for k in range(n):
            zr = Z[t, k].real
            zi = Z[t, k].imag
            p, s = _acc_nb(p, s, zr, zr)
            p, s = _acc_nb(p, s, zi, zi)
        nz2 = p + s
        for k in range(n):
            R[t, k] = A[t, k]
        if nz2 == 0.0:
            coef[t] = 0.0
            continue
        tr = 0.0
        ti = 0.0
        for sweep in range(MAX_SWEEPS):
            pr = 0.0
            sr = 0.0
            pi = 0.0
            si = 0.0
            for k in range(n):
                ar = R[t, k].real
                ai = R[t, k].imag
                zr = Z[t, k].real
                zi = Z[t, k].imag
                pr, sr = _acc_nb(pr, sr, ar, zr)
                pr, sr = _acc_nb(pr, sr, ai, zi)
                pi, si = _acc_nb(pi, si, ai, zr)
                pi, si = _acc_nb(pi, si, -ar, zi)
            cr = (pr + sr) / nz2
            ci = 0.0 if real else (pi + si) / nz2
            if sweep >= 2:
                p = 0.0
                s = 0.0
                for k in range(n):
                    p, s = _acc_nb(p, s, R[t, k].real, R[t, k].real)
                    p, s = _acc_nb(p, s, R[t, k].imag, R[t, k].imag)
                if (cr * cr + ci * ci) * nz2 <= _NEGLIGIBLE * (p + s):
                    break
            for k in range(n):
                zr = Z[t, k].real
                zi = Z[t, k].imag
                # src - c*z with exact products, so the residual keeps its
                # relative accuracy however much cancels
                xr, er = _acc_nb(R[t, k].real, 0.0, -cr, zr)
                xr, er = _acc_nb(xr, er, ci, zi)
                xi, ei = _acc_nb(R[t, k].imag, 0.0, -cr, zi)
                xi, ei = _acc_nb(xi, ei, -ci, zr)
                R[t, k] = complex(xr + er, xi + ei)
            tr += cr
            ti += ci
        coef[t] = complex(tr, ti)
    return coef, R


_cdot_nb = njit(_cdot_loops)
_sqnorm_nb = njit(_sqnorm_loops)
_residual_nb = njit(_residual_loops)


# --------------------------------------------------------------- numpy forms


def _cdot_np(X, Y):
    T, n = X.shape
    Xr, Xi, Yr, Yi = X.real, X.imag, Y.real, Y.imag
    pr = np.zeros(T)
    sr = np.zeros(T)
    pi = np.zeros(T)
    si = np.zeros(T)
    for k in range(n):
        pr, sr = _acc(pr, sr, Xr[:, k], Yr[:, k])
        pr, sr = _acc(pr, sr, Xi[:, k], Yi[:, k])
        pi, si = _acc(pi, si, Xi[:, k], Yr[:, k])
        pi, si = _acc(pi, si, -Xr[:, k], Yi[:, k])
    return (pr + sr) + 1j * (pi + si)


def _sqnorm_np(X):
    T, n = X.shape
    Xr, Xi = X.real, X.imag
    p = np.zeros(T)
    s = np.zeros(T)
    for k in range(n):
        p, s = _acc(p, s, Xr[:, k], Xr[:, k])
        p, s = _acc(p, s, Xi[:, k], Xi[:, k])
    return p + s


def _residual_np(A, Z, real):
    nz2 = _sqnorm_np(Z)
    R = A.copy()
    tr = np.zeros(A.shape[0])
    ti = np.zeros(A.shape[0])
    rows = np.flatnonzero(nz2 > 0.0)
    for sweep in range(MAX_SWEEPS):
        if rows.size == 0:
            break
        Rs, Zs, n2 = R[rows], Z[rows], nz2[rows]
        c = _cdot_np(Rs, Zs)
        cr = c.real / n2
        ci = np.zeros_like(cr) if real else c.imag / n2
        if sweep >= 2:
            go = (cr * cr + ci * ci) * n2 > _NEGLIGIBLE * _sqnorm_np(Rs)
            rows, Rs, Zs, cr, ci = rows[go], Rs[go], Zs[go], cr[go], ci[go]
        Zr, Zi = Zs.real, Zs.imag
        xr, er = _acc(Rs.real, 0.0, -cr[:, None], Zr)
        xr, er = _acc(xr, er, ci[:, None], Zi)
        xi, ei = _acc(Rs.imag, 0.0, -cr[:, None], Zi)
        xi, ei = _acc(xi, ei, -ci[:, None], Zr)
        R[rows] = (xr + er) + 1j * (xi + ei)
        tr[rows] += cr
        ti[rows] += ci
    return tr + 1j * ti, R


# ------------------------------------------------------------------ dispatch


def _rows(a):
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a (rows, n) array, got shape {a.shape}")
    return np.ascontiguousarray(a)


def cdot(X, Y):
    """Row-wise compensated inner product ``sum_k X[t,k] * conj(Y[t,k])``."""
    X, Y = _rows(X), _rows(Y)
    if NUMBA_ENABLED:
        return _cdot_nb(X, Y)
    return _cdot_np(X, Y)


def sqnorm(X):
    """Row-wise compensated squared norm."""
    X = _rows(X)
    if NUMBA_ENABLED:
        return _sqnorm_nb(X)
    return _sqnorm_np(X)


def residual(A, Z, real=False):
    """Split each row of ``A`` as ``coef * Z + R`` with ``R`` orthogonal to ``Z``.

    With ``real=True`` orthogonality is taken in the real inner product
    ``Re<.,.>`` and ``coef`` is real.  Rows of ``Z`` equal to zero give
    ``coef = 0`` and ``R = A``.  Each sweep subtracts ``c * Z`` with exact
    products; sweeps repeat (at least two, at most ``MAX_SWEEPS``) until
    the next one would be negligible, so ``R`` keeps full relative
    accuracy even when ``A`` is nearly or exactly parallel to ``Z``.
    """
    A, Z = _rows(A), _rows(Z)
    if NUMBA_ENABLED:
        return _residual_nb(A, Z, bool(real))
    return _residual_np(A, Z, bool(real))


def one_minus_pow(cos2, sin2, p):
    """Accurate ``1 - cos**p`` from ``cos**2`` and ``sin**2 = 1 - cos**2``.

    Small ``sin2`` goes through ``expm1/log1p`` so nearly parallel inputs keep
    full relative accuracy; otherwise ``cos2`` is used directly.
    """
    cos2 = np.clip(np.asarray(cos2, dtype=np.float64), 0.0, 1.0)
    sin2 = np.clip(np.asarray(sin2, dtype=np.float64), 0.0, 1.0)
    half = 0.5 * float(p)
    with np.errstate(divide="ignore", invalid="ignore"):
        small = -np.expm1(half * np.log1p(-np.minimum(sin2, 0.5)))
        large = 1.0 - cos2**half
    return np.clip(np.where(sin2 < 0.5, small, large), 0.0, 1.0)


def root(values, p):
    """``values ** (1/p)`` for nonnegative inputs."""
    return np.asarray(values, dtype=np.float64) ** (1.0 / float(p))
