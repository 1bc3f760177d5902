"""Seeded randomized verification of every inequality in the package."""

from .generate import Draw, Field, draw_trial, gen_vector, mix, splitmix64, stream
from .suite import FamilyStats, SuiteReport, TrialConfig, resolve_workers, run_suite

__all__ = [
    "Draw", "Field", "FamilyStats", "SuiteReport", "TrialConfig", "draw_trial", "gen_vector",
    "mix", "resolve_workers", "run_suite", "splitmix64", "stream",
]
