import json
import os
import subprocess
import sys

import numpy as np
import pytest

from schwarzkit import ParameterError
from schwarzkit.harness import (
    Draw,
    FamilyStats,
    Field,
    TrialConfig,
    draw_trial,
    gen_vector,
    mix,
    resolve_workers,
    run_suite,
    splitmix64,
    stream,
)
from schwarzkit.harness import families as families_mod
from schwarzkit.harness import plain
from schwarzkit.harness import suite as suite_mod
from schwarzkit.harness.families import FamilySpec
from schwarzkit.harness.suite import make_block


def test_splitmix64_reference_values():
    # first outputs of SplitMix64 seeded with 0
    assert splitmix64(0) == 0xE220A8397B1DCDAF
    assert splitmix64(0x9E3779B97F4A7C15) == 0x6E789E6AA1B965F4


def test_subseeds_are_distinct():
    seeds = {mix(42, d, t) for d in (1, 2, 3) for t in range(1000)}
    assert len(seeds) == 3000


@pytest.mark.parametrize("kwargs", [
    dict(dims=[], trials_per_dim=1),
    dict(dims=[0], trials_per_dim=1),
    dict(dims=[2], trials_per_dim=0),
    dict(dims=[2], trials_per_dim=1, p_values=[1.5]),
    dict(dims=[2], trials_per_dim=1, p_values=[]),
    dict(dims=[2], trials_per_dim=1, seed=-1),
    dict(dims=[2], trials_per_dim=1, seed=1 << 64),
])
def test_config_validation(kwargs):
    with pytest.raises(ParameterError):
        TrialConfig(**kwargs)


def test_gen_vector_real_field_and_determinism():
    for seed in range(50):
        v = gen_vector(5, stream(seed), Field.REAL)
        assert np.all(v.data.imag == 0.0)
        assert gen_vector(5, stream(seed)) == gen_vector(5, stream(seed))


def test_degenerate_draws_appear_at_the_documented_rate():
    kinds = [k for t in range(4000) for k in draw_trial(1, 3, t, Field.COMPLEX).kinds]
    rate = sum(k is not Draw.GAUSSIAN for k in kinds) / len(kinds)
    assert 0.08 < rate < 0.12
    assert {Draw.SCALED_COPY, Draw.BASIS, Draw.NEAR_PARALLEL} <= set(kinds)


def test_trial_shapes():
    t = draw_trial(3, 4, 11, Field.REAL)
    assert t.x.shape == (4,) and np.isclose(np.linalg.norm(t.e), 1.0)
    assert np.allclose(t.U.conj().T @ t.U, np.eye(t.U.shape[1]))
    assert np.all(t.U.imag == 0)


def test_dimension_one_has_no_confirmed_violations():
    report = run_suite(TrialConfig([1], 100, seed=7))
    assert report.passed and report.summary()["errors"] == 0


def test_report_is_deterministic():
    cfg = TrialConfig([2, 3], 300, seed=5, p_values=(2, 3))
    a, b = run_suite(cfg), run_suite(cfg)
    assert a.to_json(include_elapsed=False) == b.to_json(include_elapsed=False)
    assert a.elapsed > 0 and "elapsed" in a.to_dict()


def test_block_size_does_not_change_report():
    base = dict(dims=[2, 4], trials_per_dim=500, seed=9, p_values=(2, 10))
    a = run_suite(TrialConfig(**base, block_size=500)).to_dict(False)
    b = run_suite(TrialConfig(**base, block_size=64)).to_dict(False)
    del a["config"]["block_size"], b["config"]["block_size"]
    assert a == b


def test_serial_and_parallel_agree():
    cfg = TrialConfig([2, 3], 600, seed=11, block_size=200)
    a = run_suite(cfg, workers=1)
    b = run_suite(cfg, workers=2)
    assert a.to_json(include_elapsed=False) == b.to_json(include_elapsed=False)


def test_merge_is_order_independent():
    cfg = TrialConfig([3], 900, seed=2, block_size=300)
    parts = [suite_mod.run_block(cfg, 3, s, s + 300) for s in (0, 300, 600)]
    key = "quad"
    a, b, c = (p[key] for p in parts)
    assert a.merge(b).merge(c).to_dict() == c.merge(a).merge(b).to_dict()
    assert a.merge(b.merge(c)).to_dict() == b.merge(c).merge(a).to_dict()
    assert FamilyStats().merge(a).to_dict() == a.to_dict()


def test_resolve_workers(monkeypatch):
    monkeypatch.setenv("SCHWARZKIT_THREADS", "3")
    assert resolve_workers(8) == 3
    assert resolve_workers(2) == 2
    monkeypatch.setenv("SCHWARZKIT_THREADS", "0")
    assert resolve_workers(None) == (os.cpu_count() or 1)
    monkeypatch.setenv("SCHWARZKIT_THREADS", "many")
    with pytest.raises(ParameterError):
        resolve_workers()


def _inject(monkeypatch, spec):
    real_table = families_mod.family_table
    monkeypatch.setattr(suite_mod, "family_table", lambda ps: real_table(ps) + [spec])


def test_injected_bug_is_confirmed(monkeypatch):
    # reversed Schwarz: |<x,y>| >= ||x|| ||y|| fails on almost every trial
    def plain_reversed(x, y):
        lhs, rhs, scale = plain.schwarz(x, y)
        return rhs, lhs, scale

    def sides(b):
        lhs, rhs, scale = families_mod.schwarz_sides(b.X, b.Y)
        return rhs, lhs, scale

    _inject(monkeypatch, FamilySpec("reversed", "xy", sides, plain_reversed))
    report = run_suite(TrialConfig([3], 200, seed=1))
    st = report.families["reversed"]
    assert st.confirmed_violations > 150 and st.worst_gap < 0
    assert not report.passed
    w = st.witness
    assert set(w["inputs"]) == {"x", "y"} and w["gap"] < 0


def test_noise_only_violation_is_a_disagreement(monkeypatch):
    # batched evaluator is wrong, plain one is right: not a confirmed violation
    def sides(b):
        lhs, rhs, scale = families_mod.schwarz_sides(b.X, b.Y)
        return lhs, lhs * (1 + 1e-6), scale

    _inject(monkeypatch, FamilySpec("noisy", "xy", sides, plain.schwarz))
    report = run_suite(TrialConfig([2], 50, seed=1))
    st = report.families["noisy"]
    assert st.violations == 50 and st.numerical_disagreements == 50
    assert report.passed


@pytest.mark.parametrize("field", list(Field))
def test_plain_evaluator_agrees_with_batched(field):
    specs = families_mod.family_table((2.0, 3.0, 10.0))
    for dim in (1, 2, 5):
        trials = [draw_trial(21, dim, t, field) for t in range(30)]
        block = make_block(trials)
        for spec in specs:
            with np.errstate(all="ignore"):
                lhs, rhs, scale = (np.broadcast_to(np.asarray(v, float), (30,)) for v in spec.sides(block))
            for i, t in enumerate(trials):
                pl, pr, ps = (float(v) for v in spec.plain(*suite_mod._plain_args(t, spec)))
                size = max(abs(pl), abs(pr), abs(ps), 1e-300)
                assert abs(lhs[i] - pl) <= 1e-9 * size + 1e-12, (spec.key, dim, i)
                assert abs(rhs[i] - pr) <= 1e-9 * size + 1e-12, (spec.key, dim, i)


def test_equality_coverage_and_tightness():
    report = run_suite(TrialConfig([2, 3, 4], 2000, seed=42, p_values=(2, 3, 10)))
    assert report.passed
    for key, st in report.families.items():
        assert st.degenerate_trials / st.trials >= 0.01, key
        assert st.max_tightness <= 1 + 1e-9, key
    assert report.summary()["equality_rate"] >= 0.01


def test_json_schema():
    report = run_suite(TrialConfig([2], 50, seed=3))
    data = json.loads(report.to_json())
    assert data["schema"] == "schwarzkit.suite/1"
    assert set(data) == {"schema", "config", "summary", "families", "elapsed"}
    fam = data["families"]["schwarz"]
    assert {"trials", "violations", "confirmed_violations", "worst_gap", "max_tightness", "witness"} <= set(fam)
    assert len(data["families"]) == 12 + 4 + 2 + 3 + 4


def test_numpy_backend_gives_identical_report():
    code = ("from schwarzkit.harness import TrialConfig, run_suite;"
            "print(run_suite(TrialConfig([1, 3], 300, seed=8, p_values=(2, 10))).to_json(False))")
    outs = []
    for flag in ("0", "1"):
        env = dict(os.environ, SCHWARZKIT_DISABLE_NUMBA=flag)
        outs.append(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                                   text=True, check=True).stdout)
    assert outs[0] == outs[1]
