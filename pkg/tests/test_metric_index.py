import json

import numpy as np
import pytest

from conftest import gaussian
from oracles import d_p as d_p_oracle
from schwarzkit import FormatError, ParameterError, ValidationError, ZeroVectorError
from schwarzkit.errors import DimensionMismatchError
from schwarzkit.metric_index import (
    audit,
    build,
    from_dict,
    linear_scan,
    load,
    query_nn,
    query_range,
    save,
    to_dict,
)


def _points(rng, n, dim):
    return list(gaussian(rng, (n, dim)))


def _clustered(rng, n, dim, centers=8):
    C = gaussian(rng, (centers, dim))
    return list(C[rng.integers(0, centers, n)] + 0.05 * gaussian(rng, (n, dim)))


def test_empty_index():
    index = build([])
    assert index.size == 0
    assert query_nn(index, [1, 0], 3) == []
    assert query_range(index, [1, 0], 1.0) == []
    audit(index)


def test_single_point():
    index = build([[1 + 1j, 0]])
    assert index.size == 1
    audit(index)
    [(i, d)] = query_nn(index, [0, 1], 4)
    assert i == 0 and d == pytest.approx(1.0)


def test_build_errors():
    with pytest.raises(ZeroVectorError):
        build([[1, 0], [0, 0]])
    with pytest.raises(ParameterError):
        build([[1, 0]], p=1.5)
    with pytest.raises(DimensionMismatchError):
        build([[1, 0], [1, 0, 0]])


def test_query_errors(rng):
    index = build(_points(rng, 10, 3))
    with pytest.raises(ZeroVectorError):
        query_nn(index, [0, 0, 0], 1)
    with pytest.raises(DimensionMismatchError):
        query_nn(index, [1, 0], 1)
    with pytest.raises(ParameterError):
        query_nn(index, [1, 0, 0], 0)
    with pytest.raises(ParameterError):
        query_range(index, [1, 0, 0], 1.5)


def test_audit_after_build(rng):
    index = build(_points(rng, 64, 4), p=2)
    assert index.size == 64
    audit(index)
    broken = to_dict(index)
    broken["nodes"][0]["mu"] = 0.0
    with pytest.raises(FormatError, match="breaks the radius 0.0"):
        from_dict(broken)
    index.mu[0] = 0.0
    with pytest.raises(ValidationError):
        audit(index)


def test_stored_distances_match_oracle(rng):
    pts = _points(rng, 40, 3)
    index = build(pts, p=3)
    q = gaussian(rng, 3)
    for i, d in query_nn(index, q, 40):
        assert d ** 3 == pytest.approx(d_p_oracle(pts[i], q, 3) ** 3, abs=1e-12)


def test_projective_query_finds_the_point(rng):
    pts = _points(rng, 100, 4)
    index = build(pts)
    for i in (0, 17, 99):
        [(j, d)] = query_nn(index, (2 - 3j) * pts[i], 1)
        assert j == i and d <= 1e-7


@pytest.mark.parametrize("p", [2, 3])
def test_nn_matches_linear_scan(rng, p):
    index = build(_points(rng, 256, 8), p)
    for _ in range(100):
        q = gaussian(rng, 8)
        assert query_nn(index, q, 5) == linear_scan(index, q, k=5)


def test_range_matches_linear_scan(rng):
    index = build(_points(rng, 128, 3))
    for _ in range(50):
        q = gaussian(rng, 3)
        assert query_range(index, q, 0.3) == linear_scan(index, q, r=0.3)
    q = gaussian(rng, 3)
    assert len(query_range(index, q, 1.0)) == 128
    assert query_range(index, q, 0.0) == []


def test_duplicates_and_ties(rng):
    v = gaussian(rng, 3)
    pts = [v, 1j * v, gaussian(rng, 3), -v]
    index = build(pts)
    got = query_nn(index, v, 3)
    assert [i for i, _ in got] == [0, 1, 3]
    assert got == linear_scan(index, v, k=3)


def test_deterministic_build(rng):
    pts = _points(rng, 200, 4)
    assert to_dict(build(pts)) == to_dict(build(pts))


def test_pruning_on_clustered_data(rng):
    index = build(_clustered(rng, 512, 4))
    visits = []
    for _ in range(50):
        q = gaussian(rng, 4)
        got, v = query_nn(index, q, 3, return_visits=True)
        assert got == linear_scan(index, q, k=3)
        visits.append(v)
    assert max(visits) <= index.size
    assert np.mean(visits) < index.size


def test_degenerate_data_does_not_recurse(rng):
    v = gaussian(rng, 2)
    index = build([v] * 3000)
    audit(index)
    assert len(query_range(index, v, 0.0)) == 3000


def test_save_load_round_trip(tmp_path, rng):
    index = build(_points(rng, 50, 3), p=3)
    path = tmp_path / "idx.json"
    save(index, path)
    again = load(path)
    assert to_dict(again) == to_dict(index)
    q = gaussian(rng, 3)
    assert query_nn(again, q, 4) == query_nn(index, q, 4)


@pytest.mark.parametrize("edit,where", [
    (lambda d: d.pop("points"), "points"),
    (lambda d: d.update(p=1.0), "p"),
    (lambda d: d.update(format="other"), "top level"),
    (lambda d: d["points"][1].__setitem__(0, ["x", 0]), "points[1][0]"),
    (lambda d: d["points"].pop(), "size"),
])
def test_load_rejects_corrupt_files(tmp_path, rng, edit, where):
    data = to_dict(build(_points(rng, 5, 2)))
    edit(data)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(FormatError) as info:
        load(path)
    assert where in str(info.value)


def test_load_rejects_broken_tree(tmp_path, rng):
    data = to_dict(build(_points(rng, 9, 2)))
    data["nodes"][0]["inside"] = 0
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises((FormatError, ValidationError)):
        load(path)


def test_load_reports_json_syntax_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"format": "schwarzkit.vpindex",\n  "p": }')
    with pytest.raises(FormatError, match="line 2"):
        load(path)
