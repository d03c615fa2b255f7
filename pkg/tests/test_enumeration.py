import random

import pytest

from conftest import digraph, sample_instances
from tpenum.decomposition import MethodSpec, tp_covered_through_dm, views_hypergraph
from tpenum.enumeration import (
    CERTIFIED,
    DM_FAILURE,
    PROJECTED,
    enumerate_all,
    enumerate_certified,
)
from tpenum.hypergraphs import find_tree_projection, hypergraph_of
from tpenum.structures import PartialMap, RelationalStructure, StructureError, is_homomorphism
from tpenum.testkit import measure_delay, oracle_enumerate, random_colouring_instance


def solutions(stream):
    return [e.solution for e in stream if e.kind != DM_FAILURE]


def colouring_instances(seed, count):
    rng = random.Random(seed)
    for _ in range(count):
        A, B, O = random_colouring_instance(rng, n_vars=rng.randint(3, 6), colours=rng.choice([2, 3]))
        yield A, B, O, rng.choice(["tw", "hw"]), rng.choice([1, 2])


# ---------------------------------------------------------------------------
# all solutions


def test_triangle_colourings(triangle, b3c):
    stream = enumerate_all(triangle, b3c, ["A", "B", "C"], MethodSpec("tw", 3))
    events = list(stream)
    assert all(e.kind == PROJECTED for e in events)
    assert len(events) == 6
    assert {e.solution for e in events} == oracle_enumerate(triangle, b3c, "ABC")
    assert stream.stats.finished


def test_k4_has_no_three_colouring(k4, b3c):
    stream = enumerate_all(k4, b3c, [], MethodSpec("tw", 4))
    assert list(stream) == []
    assert stream.stats.top_level_empty


def test_empty_output_emits_trivial_solution(triangle, b3c):
    events = list(enumerate_all(triangle, b3c, [], MethodSpec("tw", 3)))
    assert [e.solution for e in events] == [PartialMap()]


def test_outputs_follow_given_order(ex1, b3c):
    events = list(enumerate_all(ex1, b3c, ["B", "A"], MethodSpec("tw", 3)))
    firsts = [e.solution["B"] for e in events]
    assert firsts == sorted(firsts)
    assert {e.solution for e in events} == oracle_enumerate(ex1, b3c, ["A", "B"])


def test_invalid_instance_is_rejected(ex1, b3c):
    with pytest.raises(StructureError):
        enumerate_all(ex1, b3c, ["Z"], MethodSpec("tw", 2))


def test_promise_correctness_on_samples():
    hits = 0
    for A, B, O, method, k in sample_instances(61, 120, max_vars=6):
        spec = MethodSpec(method, k)
        if not tp_covered_through_dm(A, O, spec):
            continue
        hits += 1
        got = solutions(enumerate_all(A, B, O, spec))
        assert len(got) == len(set(got))
        assert set(got) == oracle_enumerate(A, B, O)
    assert hits > 40


def test_delay_bound_under_promise():
    for A, B, O, method, k in sample_instances(62, 120, max_vars=6):
        spec = MethodSpec(method, k)
        if not tp_covered_through_dm(A, O, spec):
            continue
        report = measure_delay(enumerate_all(A, B, O, spec))
        assert report.passed, report
        assert report.failed_extensions == 0


def test_top_level_emptiness_is_sound():
    for A, B, O, method, k in sample_instances(63, 100, max_vars=6):
        stream = enumerate_all(A, B, O, MethodSpec(method, k))
        list(stream)
        if stream.stats.top_level_empty:
            assert not oracle_enumerate(A, B, A.universe)


def test_streams_are_deterministic(ex1, b3c):
    spec = MethodSpec("hw", 2)
    a = list(enumerate_all(ex1, b3c, ["A", "D"], spec))
    b = list(enumerate_all(ex1, b3c, ["A", "D"], spec))
    assert a == b
    c = list(enumerate_certified(ex1, b3c, ["A", "D"], spec))
    assert c == list(enumerate_certified(ex1, b3c, ["A", "D"], spec))


def test_stream_is_lazy(ex1, b3c):
    stream = enumerate_all(ex1, b3c, ["A", "B"], MethodSpec("tw", 3))
    first = next(stream)
    assert first.kind == PROJECTED
    assert stream.stats.outputs == 1 and not stream.stats.finished


# ---------------------------------------------------------------------------
# certified solutions


def test_certified_running_example(ex1, b3c):
    stream = enumerate_certified(ex1, b3c, ["A", "B"], MethodSpec("tw", 3))
    events = list(stream)
    assert all(e.kind == CERTIFIED for e in events)
    assert {e.solution for e in events} == oracle_enumerate(ex1, b3c, ["A", "B"])
    for e in events:
        assert set(e.certificate) == {"C", "D", "E", "F"}
        assert is_homomorphism(e.full_assignment(), ex1, b3c)
    report = measure_delay(stream)
    assert report.passed and report.bound == 6


def test_certified_triangle_vs_k2_fails(triangle, k2):
    stream = enumerate_certified(triangle, k2, ["A"], MethodSpec("tw", 2))
    events = list(stream)
    assert events[-1].kind == DM_FAILURE
    assert all(e.kind != CERTIFIED for e in events)
    # fixing A triggers the failure: top level plus one level down
    assert stream.stats.gac_calls == 2
    assert stream.stats.dm_failure and not stream.stats.top_level_empty


def test_single_constraint_instance():
    A = RelationalStructure({"T": 3}, "xyz", {"T": [("x", "y", "z")]})
    B = RelationalStructure({"T": 3}, [0, 1], {"T": [(0, 0, 1), (1, 0, 1), (1, 1, 0)]})
    for spec in (MethodSpec("tw", 1), MethodSpec("hw", 1), MethodSpec("tw", 3)):
        events = list(enumerate_certified(A, B, ["x", "y", "z"], spec))
        assert [tuple(e.solution.values()) for e in events] == sorted(B.relations["T"])
        assert all(e.certificate == PartialMap() for e in events)


def test_certified_empty_output(triangle, b3c, k4):
    events = list(enumerate_certified(triangle, b3c, [], MethodSpec("tw", 3)))
    assert len(events) == 1 and events[0].solution == PartialMap()
    assert is_homomorphism(events[0].full_assignment(), triangle, b3c)
    stream = enumerate_certified(k4, b3c, [], MethodSpec("tw", 4))
    assert list(stream) == [] and stream.stats.top_level_empty


def test_unconstrained_variable_gets_a_certificate():
    A = RelationalStructure({"R": 2}, ["a", "b", "lone"], {"R": [("a", "b")]})
    B = digraph([(1, 2)])
    events = list(enumerate_certified(A, B, ["a"], MethodSpec("tw", 2)))
    assert len(events) == 1
    assert "lone" in events[0].certificate


def _check_certified_run(A, B, O, spec):
    stream = enumerate_certified(A, B, O, spec)
    events = list(stream)
    emitted = [e for e in events if e.kind == CERTIFIED]
    for e in emitted:
        assert is_homomorphism(e.full_assignment(), A, B)
    expected = oracle_enumerate(A, B, O)
    got = [e.solution for e in emitted]
    assert len(got) == len(set(got))
    assert set(got) <= expected
    if stream.stats.dm_failure:
        assert events[-1].kind == DM_FAILURE
        assert find_tree_projection(hypergraph_of(A), views_hypergraph(A, spec)) is None
    else:
        assert set(got) == expected
        assert measure_delay(stream).passed
    return stream.stats.dm_failure


def test_certified_guarantees_on_samples():
    for A, B, O, method, k in sample_instances(64, 120, max_vars=6):
        _check_certified_run(A, B, O, MethodSpec(method, k))


def test_certified_guarantees_on_colouring_instances():
    failures = sum(_check_certified_run(A, B, O, MethodSpec(m, k)) for A, B, O, m, k in colouring_instances(65, 120))
    assert failures > 10


def test_measure_delay_on_empty_run(k4, b3c):
    report = measure_delay(enumerate_all(k4, b3c, [], MethodSpec("tw", 4)))
    assert report.gac_gaps == [1]
    assert len(report.wall_gaps) == 1
