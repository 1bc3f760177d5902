"""Run every family over seeded random trials and aggregate the results.

Trials are evaluated in fixed blocks of consecutive indices.  Each block
yields one :class:`FamilyStats` per family and blocks are merged in a fixed
order, so the report does not depend on how many processes ran the blocks.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..core import DEFAULT_TOL, Tolerance
from ..errors import ParameterError
from ..reports import complex_pairs, dumps
from .families import Block, FamilySpec, family_table
from .generate import MASK64, Draw, Field, Trial, draw_trial

SCHEMA = "schwarzkit.suite/1"
THREADS_ENV = "SCHWARZKIT_THREADS"


@dataclass(frozen=True)
class TrialConfig:
    dims: tuple[int, ...]
    trials_per_dim: int
    seed: int = 0
    p_values: tuple[float, ...] = (2.0,)
    scalar_field: Field = Field.COMPLEX
    tol: Tolerance = DEFAULT_TOL
    block_size: int = 2048

    def __post_init__(self):
        dims = tuple(self.dims)
        if not dims or any(not isinstance(d, (int, np.integer)) or d < 1 for d in dims):
            raise ParameterError(f"dims must be a nonempty list of positive integers, got {list(dims)}")
        if not isinstance(self.trials_per_dim, (int, np.integer)) or self.trials_per_dim < 1:
            raise ParameterError(f"trials_per_dim must be >= 1, got {self.trials_per_dim!r}")
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed <= MASK64:
            raise ParameterError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        p_values = tuple(float(p) for p in self.p_values)
        if not p_values or any(not p >= 2.0 or math.isinf(p) for p in p_values):
            raise ParameterError(f"p values must be finite and >= 2, got {list(p_values)}")
        if self.block_size < 1:
            raise ParameterError("block_size must be positive")
        object.__setattr__(self, "dims", tuple(int(d) for d in dims))
        object.__setattr__(self, "trials_per_dim", int(self.trials_per_dim))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "p_values", p_values)
        object.__setattr__(self, "scalar_field", Field(self.scalar_field))

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "trials_per_dim": self.trials_per_dim,
            "seed": self.seed,
            "p_values": list(self.p_values),
            "scalar_field": self.scalar_field.value,
            "tol": self.tol.to_dict(),
            "block_size": self.block_size,
        }


@dataclass
class FamilyStats:
    trials: int = 0
    violations: int = 0
    confirmed_violations: int = 0
    numerical_disagreements: int = 0
    errors: int = 0
    degenerate_trials: int = 0
    equality_hits: int = 0
    worst_gap: float = math.inf  # smallest gap / max(|lhs|, |rhs|, scale)
    worst_at: tuple[int, int] | None = None
    max_tightness: float = -math.inf  # largest rhs / lhs with lhs above the slack
    tightness_at: tuple[int, int] | None = None
    witness: dict | None = None

    def merge(self, other: "FamilyStats") -> "FamilyStats":
        """Order-independent: sums add, extremes keep the smaller (dim, trial) on ties."""
        out = FamilyStats()
        for name in ("trials", "violations", "confirmed_violations", "numerical_disagreements",
                     "errors", "degenerate_trials", "equality_hits"):
            setattr(out, name, getattr(self, name) + getattr(other, name))
        a = (self.worst_gap, self.worst_at or (math.inf,))
        b = (other.worst_gap, other.worst_at or (math.inf,))
        src = self if a <= b else other
        out.worst_gap, out.worst_at, out.witness = src.worst_gap, src.worst_at, src.witness
        a = (-self.max_tightness, self.tightness_at or (math.inf,))
        b = (-other.max_tightness, other.tightness_at or (math.inf,))
        src = self if a <= b else other
        out.max_tightness, out.tightness_at = src.max_tightness, src.tightness_at
        return out

    def to_dict(self) -> dict:
        at = self.tightness_at
        return {
            "trials": self.trials,
            "violations": self.violations,
            "confirmed_violations": self.confirmed_violations,
            "numerical_disagreements": self.numerical_disagreements,
            "errors": self.errors,
            "degenerate_trials": self.degenerate_trials,
            "equality_hits": self.equality_hits,
            "worst_gap": self.worst_gap if self.worst_at else None,
            "max_tightness": self.max_tightness if at else None,
            "max_tightness_at": {"dim": at[0], "trial": at[1]} if at else None,
            "witness": self.witness,
        }


# ------------------------------------------------------------- evaluation

_VECTOR_INPUTS = "xyze"


def _witness(trial: Trial, spec: FamilySpec, lhs, rhs, gap) -> dict:
    inputs = {}
    for name in spec.inputs:
        if name == "U":
            inputs["U"] = [complex_pairs(col) for col in trial.U.T]
        else:
            inputs[name] = complex_pairs(getattr(trial, name))
    return {"dim": trial.dim, "trial": trial.index, "subseed": trial.subseed,
            "lhs": float(lhs), "rhs": float(rhs), "gap": float(gap), "inputs": inputs}


def _plain_args(trial: Trial, spec: FamilySpec):
    args = []
    for name in spec.inputs:
        if name == "U":
            args.append([[complex(v) for v in col] for col in trial.U.T])
        else:
            args.append([complex(v) for v in getattr(trial, name)])
    return args


def recheck(trial: Trial, spec: FamilySpec, tol: Tolerance) -> bool:
    """True when the plain evaluator also finds the inequality violated."""
    try:
        lhs, rhs, scale = spec.plain(*_plain_args(trial, spec))
        gap = float(lhs - rhs)
        sizes = [float(v) for v in (lhs, rhs, scale)]
    except (ArithmeticError, ValueError, TypeError):
        return False
    if not all(math.isfinite(v) for v in sizes + [gap]):
        return False
    return gap < -tol.slack(*sizes)


def _block_stats(spec: FamilySpec, trials: list[Trial], sides, tol: Tolerance) -> FamilyStats:
    T = len(trials)
    lhs, rhs, scale = (np.broadcast_to(np.asarray(v, dtype=np.float64), (T,)) for v in sides)
    st = FamilyStats(trials=T)
    finite = np.isfinite(lhs) & np.isfinite(rhs) & np.isfinite(scale)
    st.errors = int(T - finite.sum())
    size = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), np.abs(scale))
    gap = lhs - rhs
    slack = tol.abs_eps + tol.rel_eps * size
    with np.errstate(invalid="ignore"):
        viol = finite & (gap < -slack)
        st.equality_hits = int(np.sum(finite & (np.abs(gap) <= slack)))
    letters = [c for c in spec.inputs if c in _VECTOR_INPUTS]
    st.degenerate_trials = sum(
        any(t.kinds[_VECTOR_INPUTS.index(c)] is not Draw.GAUSSIAN for c in letters) for t in trials)
    for i in np.flatnonzero(viol):
        st.violations += 1
        if recheck(trials[i], spec, tol):
            st.confirmed_violations += 1
        else:
            st.numerical_disagreements += 1
    if finite.any():
        with np.errstate(divide="ignore", invalid="ignore"):
            rel = np.where(size > 0, gap / size, 0.0)
        i = int(np.argmin(np.where(finite, rel, np.inf)))
        st.worst_gap = float(rel[i])
        st.worst_at = (trials[i].dim, trials[i].index)
        st.witness = _witness(trials[i], spec, lhs[i], rhs[i], gap[i])
        tight = finite & (lhs > slack)
        if tight.any():
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(tight, rhs / np.where(tight, lhs, 1.0), -np.inf)
            j = int(np.argmax(ratio))
            st.max_tightness = float(ratio[j])
            st.tightness_at = (trials[j].dim, trials[j].index)
    return st


def make_block(trials: list[Trial]) -> Block:
    dim = trials[0].dim
    U = np.zeros((len(trials), dim, dim), dtype=np.complex128)
    for i, t in enumerate(trials):
        U[i, :, : t.U.shape[1]] = t.U
    return Block(*(np.stack([getattr(t, n) for t in trials]) for n in _VECTOR_INPUTS), U)


def run_block(config: TrialConfig, dim: int, start: int, stop: int) -> dict[str, FamilyStats]:
    trials = [draw_trial(config.seed, dim, t, config.scalar_field) for t in range(start, stop)]
    block = make_block(trials)
    out = {}
    for spec in family_table(config.p_values):
        with np.errstate(all="ignore"):
            sides = spec.sides(block)
        out[spec.key] = _block_stats(spec, trials, sides, config.tol)
    return out


def _run_block_args(args):
    return run_block(*args)


# ----------------------------------------------------------------- driver


def resolve_workers(requested: int | None = None) -> int:
    """Worker count: ``requested`` capped by ``SCHWARZKIT_THREADS`` (0 or unset means no cap)."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    try:
        cap = int(raw) if raw else 0
    except ValueError:
        raise ParameterError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if cap < 0:
        raise ParameterError(f"{THREADS_ENV} must be >= 0, got {cap}")
    auto = os.cpu_count() or 1
    n = auto if requested is None or requested <= 0 else requested
    return max(1, min(n, cap) if cap else n)


@dataclass
class SuiteReport:
    config: TrialConfig
    families: dict[str, FamilyStats]
    elapsed: float = 0.0
    workers: int = field(default=1, compare=False)

    def total(self, name: str) -> int:
        return sum(getattr(s, name) for s in self.families.values())

    @property
    def confirmed_violations(self) -> int:
        return self.total("confirmed_violations")

    @property
    def passed(self) -> bool:
        return self.confirmed_violations == 0

    def summary(self) -> dict:
        evaluations = self.total("trials")
        return {
            "families": len(self.families),
            "trials": len(self.config.dims) * self.config.trials_per_dim,
            "evaluations": evaluations,
            "violations": self.total("violations"),
            "confirmed_violations": self.confirmed_violations,
            "numerical_disagreements": self.total("numerical_disagreements"),
            "errors": self.total("errors"),
            "degenerate_trials": self.total("degenerate_trials"),
            "equality_hits": self.total("equality_hits"),
            "equality_rate": self.total("equality_hits") / evaluations if evaluations else 0.0,
            "passed": self.passed,
        }

    def to_dict(self, include_elapsed: bool = True) -> dict:
        out = {
            "schema": SCHEMA,
            "config": self.config.to_dict(),
            "summary": self.summary(),
            "families": {k: s.to_dict() for k, s in self.families.items()},
        }
        if include_elapsed:
            out["elapsed"] = self.elapsed
        return out

    def to_json(self, include_elapsed: bool = True) -> str:
        return dumps(self.to_dict(include_elapsed))


def blocks(config: TrialConfig) -> list[tuple[int, int, int]]:
    n, b = config.trials_per_dim, config.block_size
    return [(d, s, min(s + b, n)) for d in config.dims for s in range(0, n, b)]


def run_suite(config: TrialConfig, workers: int | None = 1) -> SuiteReport:
    """Evaluate every family on every trial.

    ``workers=1`` runs in this process; anything else uses that many
    processes (``None`` or 0 for automatic), capped by ``SCHWARZKIT_THREADS``.
    The report is identical either way apart from ``elapsed``.
    """
    t0 = time.perf_counter()
    work = blocks(config)
    n = 1 if workers == 1 else resolve_workers(workers)
    n = min(n, len(work))
    if n <= 1:
        parts = [run_block(config, *w) for w in work]
    else:
        with ProcessPoolExecutor(max_workers=n) as pool:
            parts = list(pool.map(_run_block_args, [(config, *w) for w in work]))
    families: dict[str, FamilyStats] = {s.key: FamilyStats() for s in family_table(config.p_values)}
    for part in parts:
        for key, st in part.items():
            families[key] = families[key].merge(st)
    return SuiteReport(config, families, time.perf_counter() - t0, n)
