"""Second evaluator for re-checking reported violations.

Nothing here is shared with the library code.  Inputs are converted to
exact rationals, so every inner product, norm and Gram-type expression is
exact; square roots, powers and angles are then taken in 50-digit
arithmetic.  Each inequality is written out in its textbook form.  A
violation this evaluator agrees with is a real counterexample, not a
rounding artifact of either implementation.

Functions take lists of Python complex numbers (``U`` is a list of
columns) and return ``(lhs, rhs, scale)`` as high-precision numbers with
the same meaning as the batched evaluators.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

DIGITS = 50
ONE = mpmath.mpf(1)
workdps = mpmath.mp.workdps


def exact(x):
    return [(Fraction(z.real), Fraction(z.imag)) for z in x]


def ip(x, y):
    """Exact ``<x, y> = sum x_k conj(y_k)`` as a (re, im) pair."""
    re = sum(a[0] * b[0] + a[1] * b[1] for a, b in zip(x, y))
    im = sum(a[1] * b[0] - a[0] * b[1] for a, b in zip(x, y))
    return re, im


def nrm2(x):
    return sum(a[0] * a[0] + a[1] * a[1] for a in x)


def abs2(c):
    return c[0] * c[0] + c[1] * c[1]


def csub(a, b):
    return a[0] - b[0], a[1] - b[1]


def cmul(a, b):
    return a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]


def cdiv_real(a, r):
    return a[0] / r, a[1] / r


def mp(q):
    return mpmath.mpf(q.numerator) / q.denominator


def sqrt(q):
    return mpmath.sqrt(mp(q))


def cos2(x, y, real=False):
    """Squared cosine, exact: ``|<x,y>|^2`` (or ``Re<x,y>^2``) over ``||x||^2 ||y||^2``."""
    c = ip(x, y)
    num = c[0] * c[0] if real else abs2(c)
    return num / (nrm2(x) * nrm2(y))


def one_minus_pow(s2, p):
    """``1 - (1 - s2)^(p/2)`` from the exact squared sine."""
    return -mpmath.expm1(mpmath.mpf(p) / 2 * mpmath.log1p(-mp(s2)))


def root(v, p):
    return v ** (ONE / p) if v > 0 else mpmath.mpf(0)


def dist(x, y, p, real=False):
    return root(one_minus_pow(1 - cos2(x, y, real), p), p)


def psi(x, y):
    return mpmath.acos(mpmath.sqrt(mp(cos2(x, y))))


def phi(x, y):
    return mpmath.acos(mp(ip(x, y)[0]) / sqrt(nrm2(x) * nrm2(y)))


# ------------------------------------------------------------- families


def _convert(arg):
    if not isinstance(arg, list):
        return arg
    if arg and isinstance(arg[0], list):
        return [exact(col) for col in arg]
    return exact(arg)


def _run(fn):
    def wrapped(*args, **kw):
        with workdps(DIGITS):
            return fn(*(_convert(a) for a in args), **kw)

    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


@_run
def schwarz(x, y):
    s = sqrt(nrm2(x) * nrm2(y))
    return s, sqrt(abs2(ip(x, y))), s


def _proj_parts(x, y, U):
    ax = [ip(x, u) for u in U]
    ay = [ip(y, u) for u in U]
    pxx = sum(abs2(a) for a in ax)
    pyy = sum(abs2(b) for b in ay)
    pxy = ip(ax, ay)
    return pxx, pyy, pxy


@_run
def projection(x, y, U):
    pxx, pyy, pxy = _proj_parts(x, y, U)
    s = sqrt(nrm2(x) * nrm2(y))
    return s, sqrt(pxx) * sqrt(pyy) + sqrt(abs2(csub(ip(x, y), pxy))), s


def _chain(x, y, U):
    pxx, pyy, pxy = _proj_parts(x, y, U)
    s = sqrt(nrm2(x) * nrm2(y))
    return s - sqrt(abs2(ip(x, y))), sqrt(pxx) * sqrt(pyy) - sqrt(abs2(pxy)), s


projection_chain = _run(_chain)


@_run
def projection_floor(x, y, U):
    _, rhs, s = _chain(x, y, U)
    return rhs, mpmath.mpf(0), s


@_run
def quad(x, y, z):
    nx2, ny2, nz2 = nrm2(x), nrm2(y), nrm2(z)
    lhs = (nx2 * nz2 - abs2(ip(x, z))) * (ny2 * nz2 - abs2(ip(y, z)))
    xy = ip(x, y)
    rhs = abs2(csub((xy[0] * nz2, xy[1] * nz2), cmul(ip(x, z), ip(z, y))))
    return mp(lhs), mp(rhs), mp(nx2 * ny2 * nz2 * nz2)


def _rs(x, y, e):
    # <x,e><e,y> / ||e||^2 is the exact projection term for the stored e
    w = cdiv_real(cmul(ip(x, e), ip(e, y)), nrm2(e))
    xy = ip(x, y)
    a = sqrt(nrm2(x) * nrm2(y))
    return a, sqrt(abs2(csub(xy, w))) + sqrt(abs2(w)), sqrt(abs2(xy))


@_run
def rs_upper(x, y, e):
    a, b, _ = _rs(x, y, e)
    return a, b, a


@_run
def rs_lower(x, y, e):
    a, b, c = _rs(x, y, e)
    return b, c, a


@_run
def lin_psi(x, y, z):
    return psi(x, z) + psi(z, y), psi(x, y), ONE


@_run
def krein(x, y, z):
    return phi(x, z) + phi(z, y), phi(x, y), ONE


@_run
def wz_sin_psi(x, y, z):
    return mpmath.sin(psi(x, z)) + mpmath.sin(psi(z, y)), mpmath.sin(psi(x, y)), ONE


@_run
def sin_phi(x, y, z):
    return mpmath.sin(phi(x, z)) + mpmath.sin(phi(z, y)), mpmath.sin(phi(x, y)), ONE


@_run
def cos_lower(x, y, z):
    return mpmath.cos(psi(x, y)), mpmath.cos(psi(x, z) + psi(z, y)), ONE


@_run
def dp(x, y, z, p):
    return dist(x, z, p) + dist(z, y, p), dist(x, y, p), ONE


@_run
def deltap(x, y, z, p):
    return dist(x, z, p, True) + dist(z, y, p, True), dist(x, y, p, True), ONE


def _detp(nx2, ny2, cxy2, cxe2, cye2, p):
    """``||x||^p||y||^p - u^p`` against ``|det|^p`` from exact squared norms and cosines.

    ``||y||^p - t^p = ||y||^p (1 - cos^p)``, and likewise for x, so the
    determinant is ``||x|| ||y|| ((1 - cos_ye^p)^(1/p) - (1 - cos_xe^p)^(1/p))``.
    """
    N = sqrt(nx2 * ny2) ** p
    lhs = N * one_minus_pow(1 - cxy2, p)
    det = root(one_minus_pow(1 - cye2, p), p) - root(one_minus_pow(1 - cxe2, p), p)
    return lhs, N * abs(det) ** p, N


def _det2(nx2, ny2, xy2, xe2, ye2, ne2):
    """``||x||^2||y||^2 - u^2`` against ``(s (||y||^2 - t^2)^1/2 - t (||x||^2 - s^2)^1/2)^2``.

    ``s^2 = xe2 / ne2`` and ``t^2 = ye2 / ne2`` are exact, which also covers
    a stored e whose norm is not exactly one.
    """
    if nx2 == 0 or ny2 == 0:
        z = mpmath.mpf(0)
        return z, z, z
    s2, t2 = xe2 / ne2, ye2 / ne2
    det = sqrt(s2) * sqrt(ny2 - t2) - sqrt(t2) * sqrt(nx2 - s2)
    return mp(nx2 * ny2 - xy2), det * det, mp(nx2 * ny2)


def _sq(c, real):
    return c[0] * c[0] if real else abs2(c)


@_run
def detp(x, y, e, p, real=False):
    return _detp(nrm2(x), nrm2(y), cos2(x, y, real), cos2(x, e, real), cos2(y, e, real), p)


@_run
def det2(x, y, e, real=False):
    return _det2(nrm2(x), nrm2(y), _sq(ip(x, y), real), _sq(ip(x, e), real), _sq(ip(y, e), real), nrm2(e))


@_run
def basis_max(x, y, p, quadratic=False):
    nx2, ny2, xy = nrm2(x), nrm2(y), ip(x, y)
    sides = []
    for a, b in zip(x, y):  # e = delta_m: <x,e> = x_m
        if quadratic:
            sides.append(_det2(nx2, ny2, abs2(xy), abs2(a), abs2(b), 1))
        else:
            sides.append(_detp(nx2, ny2, abs2(xy) / (nx2 * ny2), abs2(a) / nx2, abs2(b) / ny2, p))
    lhs, _, scale = sides[0]
    return lhs, max(r for _, r, _ in sides), scale


@_run
def mean(x, y, p):
    """Uniform e: ``|<x,e>|^2 = |sum x|^2 / n``."""
    n = len(x)
    nx2, ny2 = nrm2(x), nrm2(y)
    sx = (sum(a[0] for a in x), sum(a[1] for a in x))
    sy = (sum(b[0] for b in y), sum(b[1] for b in y))
    return _detp(nx2, ny2, abs2(ip(x, y)) / (nx2 * ny2), abs2(sx) / (n * nx2), abs2(sy) / (n * ny2), p)


@_run
def walker(x, y):
    """Means and centered second moments, written out."""
    n = len(x)
    mx = (sum(a[0] for a in x) / n, sum(a[1] for a in x) / n)
    my = (sum(b[0] for b in y) / n, sum(b[1] for b in y) / n)
    cx = sum(abs2(csub(a, mx)) for a in x) / n
    cy = sum(abs2(csub(b, my)) for b in y) / n
    nx2, ny2 = nrm2(x), nrm2(y)
    det = sqrt(abs2(mx)) * sqrt(cy) - sqrt(abs2(my)) * sqrt(cx)
    return mp(nx2 * ny2 - abs2(ip(x, y))), n * n * det * det, mp(nx2 * ny2)
