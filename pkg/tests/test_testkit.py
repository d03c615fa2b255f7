import itertools
import random

import pytest

from conftest import digraph, sample_instances
from tpenum.decomposition import MethodSpec
from tpenum.enumeration import enumerate_all, enumerate_certified
from tpenum.hypergraphs import gaifman_graph
from tpenum.structures import PartialMap, RelationalStructure, validate_instance
from tpenum.testkit import (
    OracleBudgetExceeded,
    corners,
    gen_3col,
    gen_grid,
    has_triangle,
    is_three_colourable,
    measure_delay,
    oracle_enumerate,
    random_colouring_instance,
    random_instance,
)


def test_oracle_examples(triangle, b3c, k4):
    got = oracle_enumerate(triangle, b3c, ["A"])
    assert got == {PartialMap({"A": v}) for v in (1, 2, 3)}
    assert oracle_enumerate(k4, b3c, []) == set()
    assert oracle_enumerate(triangle, triangle, []) == {PartialMap()}


def test_oracle_refuses_loudly():
    n = 14
    A = digraph([(f"v{i}", f"v{i + 1}") for i in range(n - 1)])
    B = digraph([(a, b) for a in range(4) for b in range(4) if a != b])
    with pytest.raises(OracleBudgetExceeded):
        oracle_enumerate(A, B, ["v0"], budget=1000)


def test_oracle_projection_consistency():
    for A, B, O, _, _ in sample_instances(71, 60, max_vars=5):
        full = oracle_enumerate(A, B, A.universe)
        assert oracle_enumerate(A, B, O) == {h.restrict(O) for h in full}


def test_gen_grid_shapes():
    G = gen_grid(2, 2)
    assert len(G.universe) == 4 and G.size() == 4
    with pytest.raises(ValueError):
        gen_grid(1, 3)
    R = gen_grid(3, 4, restrict_corners=True)
    assert R.drv() == set(corners(3, 4))
    grid = gaifman_graph(gen_grid(3, 3))
    assert len(grid.edges) == 12
    assert all(len(e) == 2 for e in grid.edges)


def test_gen_3col_examples():
    A, B = gen_3col([(1, 2), (2, 3), (1, 3)])
    assert len(oracle_enumerate(A, B, A.universe)) == 6
    K4 = [(u, v) for u in range(4) for v in range(u + 1, 4)]
    A, B = gen_3col(K4)
    assert oracle_enumerate(A, B, []) == set()
    A, B = gen_3col([("a", "b")])
    assert len(A.universe) == 4 and has_triangle(A.tuples("R_E"))
    assert oracle_enumerate(A, B, [])


def test_gen_3col_rejects_bad_graphs():
    with pytest.raises(ValueError):
        gen_3col([])
    with pytest.raises(ValueError):
        gen_3col([(1, 1)])


def test_gen_3col_matches_exhaustive_check_small():
    for n in range(2, 5):
        pairs = list(itertools.combinations(range(n), 2))
        for r in range(1, len(pairs) + 1):
            for edges in itertools.combinations(pairs, r):
                A, B = gen_3col(edges)
                assert bool(oracle_enumerate(A, B, [])) == is_three_colourable(edges)


def test_random_instance_is_valid_and_connected():
    rng = random.Random(72)
    for _ in range(50):
        A, B, O = random_instance(rng, n_vars=rng.randint(2, 7), n_values=3, n_constraints=5, max_arity=3)
        diag = validate_instance(A, B, O)
        assert diag.ok and not diag.warnings
        assert len(A.universe) <= 7 and all(len(t) <= 3 for r in A.relations.values() for t in r)


def test_random_colouring_instance():
    rng = random.Random(73)
    A, B, O = random_colouring_instance(rng, n_vars=5, colours=2)
    assert validate_instance(A, B, O).ok
    assert B.universe == (1, 2)


def test_measure_delay_reports(triangle, b3c, ex1):
    report = measure_delay(enumerate_all(triangle, b3c, ["A", "B", "C"], MethodSpec("tw", 3)))
    assert report.bound == 3 and report.passed
    assert len(report.gac_gaps) == 7  # six outputs plus the terminal gap
    assert len(report.wall_gaps) == 7
    cert = measure_delay(enumerate_certified(ex1, b3c, ["A"], MethodSpec("tw", 3)))
    assert cert.bound == 6 and cert.max_gap <= 6


def test_measure_delay_empty_output():
    A = RelationalStructure({"R": 2}, ["a", "b"], {"R": [("a", "b")]})
    B = RelationalStructure({"R": 2}, [1], {"R": []})
    report = measure_delay(enumerate_all(A, B, ["a"], MethodSpec("tw", 2)))
    assert report.gac_gaps == [1] and report.passed
