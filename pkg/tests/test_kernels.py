"""The compiled and numpy kernels must agree bit for bit and be accurate."""

import os
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from conftest import gaussian
from schwarzkit import kernels
from schwarzkit._accel import NUMBA_AVAILABLE

pytestmark = pytest.mark.skipif(not NUMBA_AVAILABLE, reason="numba not installed")


def _batch(rng, rows, dim):
    A = gaussian(rng, (rows, dim))
    Z = gaussian(rng, (rows, dim))
    lam = gaussian(rng, (rows, 1))
    A[::4] = lam[::4] * Z[::4]  # parallel
    A[1::4] = Z[1::4] + 1e-10 * A[1::4]  # nearly parallel
    Z[::37] = 0.0
    return A, Z


@pytest.mark.parametrize("dim", [1, 2, 5, 16])
def test_backends_identical(rng, dim):
    A, Z = _batch(rng, 400, dim)
    assert np.array_equal(kernels._cdot_nb(A, Z), kernels._cdot_np(A, Z))
    assert np.array_equal(kernels._sqnorm_nb(A), kernels._sqnorm_np(A))
    for real in (False, True):
        c1, R1 = kernels._residual_nb(A, Z, real)
        c2, R2 = kernels._residual_np(A, Z, real)
        assert np.array_equal(c1, c2) and np.array_equal(R1, R2)


def _exact_sin2(a, z):
    fa = [(Fraction(v.real), Fraction(v.imag)) for v in a]
    fz = [(Fraction(v.real), Fraction(v.imag)) for v in z]
    re = sum(p[0] * q[0] + p[1] * q[1] for p, q in zip(fa, fz))
    im = sum(p[1] * q[0] - p[0] * q[1] for p, q in zip(fa, fz))
    na = sum(p[0] ** 2 + p[1] ** 2 for p in fa)
    nz = sum(q[0] ** 2 + q[1] ** 2 for q in fz)
    return 1 - (re * re + im * im) / (na * nz)


def test_residual_keeps_relative_accuracy(rng):
    for t in range(200):
        z = gaussian(rng, 6)
        a = complex(*rng.standard_normal(2)) * z + (1e-10 if t % 2 else 0.0) * gaussian(rng, 6)
        _, R = kernels.residual(a[None], z[None])
        got = kernels.sqnorm(R)[0] / kernels.sqnorm(a[None])[0]
        want = float(_exact_sin2(a, z))
        assert abs(got - want) <= 1e-14 * want


def test_residual_one_dimensional_is_negligible(rng):
    z = gaussian(rng, (500, 1))
    A = gaussian(rng, (500, 1)) * z
    _, R = kernels.residual(A, z)
    assert np.max(kernels.sqnorm(R) / kernels.sqnorm(A)) < 1e-150


def test_residual_real_mode_projects_real_part():
    A = np.array([[1j, 0.0]])
    Z = np.array([[1.0, 0.0]])
    coef, R = kernels.residual(A, Z, real=True)
    assert coef[0] == 0 and np.array_equal(R, A)
    coef, R = kernels.residual(A, Z, real=False)
    assert coef[0] == 1j and np.all(R == 0)


def test_one_minus_pow_small_angle():
    # 1 - cos^10 for sin^2 = 1e-30 is 5e-30; the naive form gives 0
    assert kernels.one_minus_pow(1.0, 1e-30, 10)[()] == pytest.approx(5e-30, rel=1e-12)
    assert kernels.one_minus_pow(0.0, 1.0, 3)[()] == 1.0


def test_disable_flag_selects_numpy_backend():
    code = "from schwarzkit import backend_name; print(backend_name())"
    env = dict(os.environ, SCHWARZKIT_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
    env["SCHWARZKIT_DISABLE_NUMBA"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numba"
