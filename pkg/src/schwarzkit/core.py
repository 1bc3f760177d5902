"""Complex vectors, the standard inner product, and the comparison tolerance."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import DimensionMismatchError, ParameterError, ValidationError, ZeroVectorError


@dataclass(frozen=True)
class Tolerance:
    """Slack used when comparing the two sides of an exact inequality.

    Two quantities are compared with ``abs_eps + rel_eps * scale`` where
    ``scale`` is the largest magnitude involved (see :meth:`slack`).
    """

    rel_eps: float = 1e-9
    abs_eps: float = 1e-12

    def __post_init__(self):
        for name in ("rel_eps", "abs_eps"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1e-3) or math.isnan(value):
                raise ValidationError(f"{name} must lie in [0, 1e-3], got {value!r}")

    def slack(self, *values: float) -> float:
        scale = max((abs(v) for v in values), default=0.0)
        return self.abs_eps + self.rel_eps * scale

    def slack_array(self, *arrays):
        scale = np.abs(np.asarray(arrays[0], dtype=np.float64))
        for a in arrays[1:]:
            scale = np.maximum(scale, np.abs(np.asarray(a, dtype=np.float64)))
        return self.abs_eps + self.rel_eps * scale

    def to_dict(self) -> dict:
        return {"rel_eps": self.rel_eps, "abs_eps": self.abs_eps}


DEFAULT_TOL = Tolerance()


class CVector:
    """Immutable finite-dimensional complex vector.

    Entries are validated once, here: at least one entry, all finite.
    """

    __slots__ = ("_data",)

    def __init__(self, entries: Iterable[complex] | np.ndarray):
        data = np.array(entries, dtype=np.complex128)
        if data.ndim != 1:
            raise ValidationError(f"a vector needs a flat list of entries, got shape {data.shape}")
        if data.size == 0:
            raise ValidationError("a vector needs at least one entry")
        if not np.all(np.isfinite(data)):
            raise ValidationError("vector entries must be finite (no NaN/Inf)")
        data.flags.writeable = False
        self._data = data

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def dim(self) -> int:
        return self._data.size

    @property
    def entries(self) -> tuple[complex, ...]:
        return tuple(complex(v) for v in self._data)

    def __len__(self) -> int:
        return self.dim

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, k):
        return complex(self._data[k])

    def __array__(self, dtype=None, copy=None):
        return self._data if dtype is None else self._data.astype(dtype)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CVector):
            return NotImplemented
        return self.dim == other.dim and bool(np.array_equal(self._data, other._data))

    def __hash__(self) -> int:
        return hash(self._data.tobytes())

    def __mul__(self, scalar: complex) -> "CVector":
        return CVector(self._data * complex(scalar))

    __rmul__ = __mul__

    def __add__(self, other: "CVector") -> "CVector":
        _same_dim(self, other)
        return CVector(self._data + other._data)

    def __sub__(self, other: "CVector") -> "CVector":
        _same_dim(self, other)
        return CVector(self._data - other._data)

    def __neg__(self) -> "CVector":
        return CVector(-self._data)

    def __repr__(self) -> str:
        return f"CVector({list(self.entries)!r})"


def as_cvector(value) -> CVector:
    return value if isinstance(value, CVector) else CVector(value)


def _same_dim(*vectors: CVector) -> None:
    dims = {v.dim for v in vectors}
    if len(dims) > 1:
        raise DimensionMismatchError(f"incompatible operands: dimensions {sorted(dims)}")


def same_dim(*vectors) -> tuple[CVector, ...]:
    """Coerce to :class:`CVector` and require a common dimension."""
    out = tuple(as_cvector(v) for v in vectors)
    _same_dim(*out)
    return out


def rows(*vectors: CVector) -> list[np.ndarray]:
    """Each vector as a one-row batch for the kernels."""
    return [v.data[None, :] for v in vectors]


def inner(x, y) -> complex:
    """``<x, y> = sum_k x_k * conj(y_k)``, linear in x and conjugate-linear in y."""
    x, y = same_dim(x, y)
    return complex(kernels.cdot(x.data[None, :], y.data[None, :])[0])


def norm(x, tol: Tolerance = DEFAULT_TOL) -> float:
    x = as_cvector(x)
    data = x.data
    top = float(np.max(np.abs(data)))
    # rescale by a power of two (exact) when squares would under- or overflow
    shift = 0 if top == 0.0 or 1e-150 < top < 1e150 else math.frexp(top)[1]
    if shift:
        data = np.ldexp(data.real, -shift) + 1j * np.ldexp(data.imag, -shift)
    ip = kernels.cdot(data[None, :], data[None, :])[0]
    if abs(ip.imag) > tol.abs_eps:  # pragma: no cover - imaginary part cancels exactly
        raise ArithmeticError(f"<x,x> has imaginary part {ip.imag!r}")
    return math.ldexp(math.sqrt(max(ip.real, 0.0)), shift)


def normalize(x, tol: Tolerance = DEFAULT_TOL) -> CVector:
    x = as_cvector(x)
    n = norm(x, tol)
    if n == 0.0:
        raise ZeroVectorError("cannot normalize the zero vector: direction undefined")
    return CVector(x.data / n)


def require_nonzero(*named: tuple[str, CVector]) -> None:
    for name, v in named:
        if not np.any(v.data):
            raise ZeroVectorError(f"{name} must be nonzero")


def require_unit(e: CVector, tol: Tolerance = DEFAULT_TOL, name: str = "e") -> None:
    n = norm(e, tol)
    if abs(n - 1.0) > tol.slack(1.0):
        raise ParameterError(f"{name} must have unit norm, got norm {n!r}")


def stack(vectors: Sequence[CVector]) -> np.ndarray:
    vectors = same_dim(*vectors)
    return np.stack([v.data for v in vectors])
