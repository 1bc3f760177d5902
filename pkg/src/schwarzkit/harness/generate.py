"""Seeded random inputs.

Trial ``t`` at dimension ``d`` draws from its own stream seeded with
``mix(seed, d, t)``, so a trial can be replayed alone and the split of work
across processes never changes what is drawn.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum

import numpy as np

from .. import kernels
from ..core import CVector

MASK64 = (1 << 64) - 1
DEGENERATE_RATE = 0.1
NEAR_PARALLEL = 1e-10


def splitmix64(x: int) -> int:
    """One output of the SplitMix64 generator started at ``x``."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def mix(seed: int, dim: int, trial: int) -> int:
    """Sub-seed of trial ``trial`` at dimension ``dim``."""
    h = splitmix64(seed & MASK64)
    h = splitmix64(h ^ (dim & MASK64))
    return splitmix64(h ^ (trial & MASK64))


def stream(subseed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(subseed))


class Field(str, Enum):
    REAL = "real"
    COMPLEX = "complex"


class Draw(IntEnum):
    GAUSSIAN = 0
    SCALED_COPY = 1
    BASIS = 2
    NEAR_PARALLEL = 3


def _gaussian(rng, dim, field):
    re = rng.standard_normal(dim)
    if field is Field.REAL:
        return re + 0j
    return re + 1j * rng.standard_normal(dim)


def draw_vector(dim: int, rng: np.random.Generator, field: Field, previous=()) -> tuple[np.ndarray, Draw]:
    """A Gaussian vector, or with probability 0.1 a degenerate one.

    The degenerate kinds are a scaled copy of an earlier vector in
    ``previous``, a standard basis vector, and an earlier vector moved by a
    relative ``1e-10``.  Without earlier vectors only the basis kind is used.
    """
    field = Field(field)
    v = _gaussian(rng, dim, field)
    if rng.random() >= DEGENERATE_RATE:
        return v, Draw.GAUSSIAN
    kind = Draw(int(rng.integers(1, 4))) if previous else Draw.BASIS
    if kind is Draw.BASIS:
        out = np.zeros(dim, dtype=np.complex128)
        out[rng.integers(dim)] = 1.0
        return out, kind
    src = previous[int(rng.integers(len(previous)))]
    if kind is Draw.SCALED_COPY:
        lam = rng.standard_normal() + (0.0 if field is Field.REAL else 1j * rng.standard_normal())
        return lam * src, kind
    size = np.sqrt(kernels.sqnorm(src[None])[0] / kernels.sqnorm(v[None])[0])
    return src + NEAR_PARALLEL * size * v, kind


def gen_vector(dim: int, rng: np.random.Generator, field: Field = Field.COMPLEX, previous=()) -> CVector:
    """Public form of :func:`draw_vector`.

    A zero vector (a zero multiple of an earlier draw) cannot come out of
    a continuous draw, so the result is always a valid :class:`CVector`.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    return CVector(draw_vector(dim, rng, field, [np.asarray(p) for p in previous])[0])


@dataclass(frozen=True)
class Trial:
    dim: int
    index: int
    subseed: int
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    e: np.ndarray  # unit norm
    U: np.ndarray  # (dim, rank) orthonormal columns
    kinds: tuple[Draw, Draw, Draw, Draw]  # how x, y, z, e were drawn


def draw_trial(seed: int, dim: int, index: int, field: Field) -> Trial:
    field = Field(field)
    subseed = mix(seed, dim, index)
    rng = stream(subseed)
    drawn, kinds = [], []
    for _ in range(4):
        v, kind = draw_vector(dim, rng, field, drawn)
        drawn.append(v)
        kinds.append(kind)
    x, y, z, e = drawn
    e = e / np.sqrt(kernels.sqnorm(e[None])[0])
    rank = int(rng.integers(0, dim + 1))
    G = _gaussian(rng, dim * rank, field).reshape(dim, rank)
    U = np.linalg.qr(G)[0] if rank else np.zeros((dim, 0), dtype=np.complex128)
    return Trial(dim, index, subseed, x, y, z, e, U, tuple(kinds))
