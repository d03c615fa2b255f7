import random

import pytest

from tpenum.decomposition import ViewPair
from tpenum.structures import RelationalStructure
from tpenum.testkit import random_instance, three_colouring_target

EX1_EDGES = [("F", "E"), ("A", "E"), ("A", "C"), ("A", "B"), ("B", "C"), ("D", "B"), ("D", "C")]
EX1_EXTRA_VIEWS = {"R1": ("A", "E", "F"), "R2": ("A", "B", "C", "F"), "R3": ("C", "D", "F")}


def digraph(edges, universe=None, symbol="R"):
    if universe is None:
        universe = sorted({x for e in edges for x in e})
    return RelationalStructure({symbol: 2}, universe, {symbol: edges})


def colouring_target(symbol="R"):
    B = three_colouring_target()
    return RelationalStructure({symbol: 2}, B.universe, {symbol: B.relations["R_E"]})


def running_example_view_pair(A):
    """The hand-built view set: seven base views plus R1, R2, R3 (scopes only)."""
    scopes = {f"R#{i}": t for i, t in enumerate(A.tuples("R"))}
    base = list(scopes)
    scopes.update(EX1_EXTRA_VIEWS)
    atoms = {n: ("R", scopes[n]) for n in base}
    return ViewPair(scopes, {}, base_view_names=base, base_atoms=atoms)


@pytest.fixture
def ex1():
    return digraph(EX1_EDGES)


@pytest.fixture
def ex1_views(ex1):
    return running_example_view_pair(ex1)


@pytest.fixture
def b3c():
    return colouring_target()


@pytest.fixture
def triangle():
    # the core A' of the running example
    return digraph([("A", "B"), ("A", "C"), ("B", "C")])


@pytest.fixture
def k2():
    return digraph([(1, 2), (2, 1)])


@pytest.fixture
def k4():
    nodes = ["a", "b", "c", "d"]
    return digraph([(u, v) for i, u in enumerate(nodes) for v in nodes[i + 1:]])


def sample_instances(seed, count, max_vars=6, max_values=3, methods=("tw", "hw"), ks=(1, 2, 3)):
    """Reproducible stream of small random (A, B, O, method, k) tuples."""
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(2, max_vars)
        A, B, O = random_instance(
            rng, n_vars=n, n_values=rng.randint(2, max_values),
            n_constraints=rng.randint(max(1, n - 1), n + 1),
            max_arity=rng.choice([2, 3]), density=rng.uniform(0.3, 0.9),
        )
        yield A, B, O, rng.choice(methods), rng.choice(ks)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
