import random

from conftest import sample_instances
from tpenum.consistency import GacTrace, gac, is_pairwise_consistent
from tpenum.decomposition import MethodSpec, ViewPair, build_views, views_hypergraph
from tpenum.hypergraphs import is_tp_covered
from tpenum.structures import domain_restricted_version
from tpenum.testkit import oracle_enumerate


def naive_fixpoint(V):
    """One-shot recomputation: sweep every ordered pair until nothing changes."""
    T = {n: set(V.tuples[n]) for n in V.scopes}
    changed = True
    while changed:
        changed = False
        for a in V.scopes:
            for b in V.scopes:
                shared = [x for x in V.scopes[a] if x in V.scopes[b]]
                if a == b or not shared:
                    continue
                pa = [V.scopes[a].index(x) for x in shared]
                pb = [V.scopes[b].index(x) for x in shared]
                support = {tuple(t[p] for p in pb) for t in T[b]}
                kept = {t for t in T[a] if tuple(t[p] for p in pa) in support}
                if kept != T[a]:
                    T[a] = kept
                    changed = True
    return T


def as_sets(V):
    return {n: set(ts) for n, ts in V.tuples.items()}


def sampled_view_pairs(seed, count, **kw):
    for A, B, O, method, k in sample_instances(seed, count, **kw):
        A1, B1 = domain_restricted_version(A, B, O)
        yield A, B, O, MethodSpec(method, k), build_views(A1, B1, MethodSpec(method, k))


# ---------------------------------------------------------------------------
# examples


def test_unary_views_intersect():
    V = ViewPair({"p": ("X",), "q": ("X",)}, {"p": [(1,), (2,)], "q": [(2,), (3,)]})
    assert not is_pairwise_consistent(V)
    W = gac(V)
    assert W.tuples == {"p": {(2,)}, "q": {(2,)}}
    assert is_pairwise_consistent(W)
    assert V.tuples["p"] == {(1,), (2,)}  # input untouched


def test_unary_views_disjoint_become_empty():
    V = ViewPair({"p": ("X",), "q": ("X",)}, {"p": [(1,)], "q": [(2,)]})
    W = gac(V)
    assert W.tuples == {"p": frozenset(), "q": frozenset()}
    assert W.has_empty_view()


def test_single_view_is_consistent():
    V = ViewPair({"p": ("X", "Y")}, {"p": [(1, 2)]})
    assert is_pairwise_consistent(V)
    assert gac(V) == V


def test_triangle_vs_k2_with_fixed_value(triangle, k2):
    A1, B1 = domain_restricted_version(triangle, k2, ["A"])
    V = build_views(A1, B1, MethodSpec("tw", 2))
    top = gac(V)
    assert not top.has_empty_view()
    fixed = top.replace({V.dom_view_names["A"]: {(1,)}})
    W = gac(fixed, changed=[V.dom_view_names["A"]])
    assert W.has_empty_view()
    assert as_sets(W) == naive_fixpoint(fixed)


def test_chain_propagation():
    V = ViewPair(
        {"a": ("X", "Y"), "b": ("Y", "Z"), "c": ("Z",)},
        {"a": [(1, 1), (2, 2)], "b": [(1, 1), (2, 3)], "c": [(1,)]},
    )
    W = gac(V)
    assert W.tuples["a"] == {(1, 1)}
    assert W.tuples["b"] == {(1, 1)}


def test_identical_scopes_end_up_identical():
    V = ViewPair({"p": ("X", "Y"), "q": ("Y", "X")},
                 {"p": [(1, 2), (2, 1), (1, 1)], "q": [(2, 1), (1, 2)]})
    W = gac(V)
    assert W.tuples["p"] == {(1, 2), (2, 1)}
    assert W.tuples["q"] == {(2, 1), (1, 2)}


# ---------------------------------------------------------------------------
# engine properties


def test_gac_matches_naive_fixpoint():
    for _, _, _, _, V in sampled_view_pairs(41, 80, max_vars=5):
        W = gac(V)
        assert as_sets(W) == naive_fixpoint(V)
        assert is_pairwise_consistent(W)


def test_idempotent_and_monotone():
    for _, _, _, _, V in sampled_view_pairs(42, 60, max_vars=5):
        W = gac(V)
        assert gac(W) == W
        for n in V.scopes:
            assert W.tuples[n] <= V.tuples[n]


def test_order_independence():
    for _, _, _, _, V in sampled_view_pairs(43, 40, max_vars=5):
        W = gac(V)
        for s in range(10):
            assert gac(V, rng=random.Random(s)) == W


def test_incremental_seeding_reaches_same_fixpoint():
    rng = random.Random(44)
    for _, _, _, _, V in sampled_view_pairs(44, 60, max_vars=5):
        W = gac(V)
        name = rng.choice(list(W.scopes))
        ts = sorted(W.tuples[name])
        if not ts:
            continue
        shrunk = W.replace({name: ts[: rng.randint(0, len(ts) - 1)]})
        assert gac(shrunk, changed=[name]) == gac(shrunk)
        assert as_sets(gac(shrunk, changed=[name])) == naive_fixpoint(shrunk)


def test_soundness_keeps_every_solution_tuple():
    for A, B, O, _, V in sampled_view_pairs(45, 60, max_vars=5):
        W = gac(V)
        solutions = oracle_enumerate(A, B, A.universe)
        for n, scope in W.scopes.items():
            projected = {tuple(h[x] for x in scope) for h in solutions}
            assert projected <= W.tuples[n]
        if W.has_empty_view():
            assert not solutions


def test_deletion_rounds_bounded_by_tuple_count():
    for _, _, _, _, V in sampled_view_pairs(46, 40, max_vars=5):
        trace = GacTrace()
        gac(V, trace=trace)
        assert trace.deleting_steps <= sum(len(t) for t in V.tuples.values())
        assert trace.pops >= 1 or not V.scopes


def test_covered_outputs_read_off_a_view():
    """After GAC, a view containing a tp-covered set O projects exactly onto the solutions over O."""
    checked = 0
    for A, B, O, spec, _ in sampled_view_pairs(47, 120, max_vars=5):
        V = build_views(A, B, spec)
        hg = views_hypergraph(A, spec)
        W = gac(V)
        for name, scope in W.scopes.items():
            sub = [x for x in scope if x in O] or list(scope[:1])
            if not is_tp_covered(A, hg, set(sub)):
                continue
            expected = {tuple(h[x] for x in sub) for h in oracle_enumerate(A, B, sub)}
            assert W.projection(name, sub) == expected
            checked += 1
            break
    assert checked > 20
