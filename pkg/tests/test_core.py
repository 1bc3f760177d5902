import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import S, entries, same_dim, vectors
from oracles import ip, nrm
from schwarzkit import (
    CVector,
    DimensionMismatchError,
    Tolerance,
    ValidationError,
    ZeroVectorError,
    inner,
    norm,
    normalize,
)
from schwarzkit.core import require_unit
from schwarzkit.errors import ParameterError

TOL = Tolerance()


def test_inner_examples():
    assert inner([1, 0], [0, 1]) == 0
    assert inner([1j, 1], [1j, 1]) == 2
    assert inner([1 + 1j, 2], [1, 1j]) == 1 - 1j


def test_inner_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        inner([1, 2], [1, 2, 3])


def test_norm_examples():
    assert norm([0, 0, 0]) == 0
    assert norm([3, 4]) == 5
    assert norm([1j]) == 1


def test_normalize_examples():
    assert normalize([2, 0]) == CVector([1, 0])
    v = normalize([1, 1])
    assert v.data == pytest.approx([S, S], rel=1e-15)
    with pytest.raises(ZeroVectorError):
        normalize([0, 0])


def test_cvector_rejects_bad_entries():
    with pytest.raises(ValidationError):
        CVector([])
    with pytest.raises(ValidationError):
        CVector([1, float("nan")])
    with pytest.raises(ValidationError):
        CVector([[1, 2]])


def test_cvector_is_read_only():
    v = CVector([1, 2])
    with pytest.raises(ValueError):
        v.data[0] = 5


def test_cvector_arithmetic():
    v = CVector([1, 1j])
    assert 2 * v == CVector([2, 2j])
    assert v + v - v == v
    assert -v == CVector([-1, -1j])
    assert len(v) == 2 and list(v) == [1, 1j] and v[1] == 1j
    assert hash(v) == hash(CVector([1, 1j]))
    with pytest.raises(DimensionMismatchError):
        v + CVector([1])


@pytest.mark.parametrize("rel,abs_", [(-1e-9, 0.0), (0.0, 1e-2), (float("nan"), 0.0)])
def test_tolerance_bounds(rel, abs_):
    with pytest.raises(ValidationError):
        Tolerance(rel, abs_)


def test_require_unit():
    require_unit(CVector([S, S]))
    with pytest.raises(ParameterError):
        require_unit(CVector([1, 1]))


@given(same_dim(2, nonzero=False))
def test_schwarz_inequality(xy):
    x, y = xy
    n = norm(x) * norm(y)
    assert abs(inner(x, y)) <= n + TOL.slack(n)


@given(same_dim(2, nonzero=False))
def test_inner_matches_oracle_and_is_hermitian(xy):
    x, y = xy
    scale = nrm(x) * nrm(y)
    assert abs(inner(x, y) - ip(x, y)) <= 1e-12 * max(scale, 1.0)
    assert abs(inner(x, y) - inner(y, x).conjugate()) <= TOL.slack(scale)


@given(vectors(nonzero=False), entries)
def test_norm_homogeneous(x, lam):
    scaled = [lam * c for c in x]
    assert norm(scaled) == pytest.approx(abs(lam) * norm(x), rel=1e-9, abs=1e-12)


@given(vectors())
def test_normalize_gives_unit(x):
    assert abs(norm(normalize(x)) - 1.0) <= 1e-9


def test_compensated_inner_is_exact_on_cancellation():
    # naive summation returns 0 here; the exact value is 2
    x = [1e16, 1.0, -1e16, 1.0]
    assert inner(x, [1.0] * 4) == 2.0


def test_norm_survives_extreme_magnitudes():
    assert math.isclose(norm([1e-200, 1e-200]), math.sqrt(2) * 1e-200)
    assert math.isclose(norm([3e200, 4e200j]), 5e200)
    assert norm(normalize([1e-300, 0])) == pytest.approx(1.0, rel=1e-15)
