"""View structures and the tw_k / hw_k decomposition methods.

A decomposition method turns an instance (A, B) into a set of views: each
view has a scope (a set of variables) and a relation over it.  Base views
mirror the original constraints; the other views are the subproblems over
at most k variables (tw) or at most k constraints (hw).
"""
from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from operator import itemgetter

from .hypergraphs import Hypergraph, find_tree_projection, hypergraph_of
from .structures import (
    RelationalStructure,
    StructureError,
    compute_cores,
    dom_symbol,
    element_key,
    pin_outputs,
    sorted_elements,
    tuple_key,
)

METHODS = ("tw", "hw")


@dataclass(frozen=True)
class MethodSpec:
    method: str
    k: int

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")

    def __str__(self):
        return f"{self.method}_{self.k}"


def _getter(positions):
    """Tuple-valued itemgetter (also for a single position)."""
    if len(positions) == 1:
        p = positions[0]
        return lambda t: (t[p],)
    return itemgetter(*positions)


class _Layout:
    """Scope-derived adjacency shared by every copy of a ViewPair.

    Only host views propagate: a view whose scope lies inside another
    view's scope is attached to a host with a maximal scope, since at a
    pairwise-consistent fixpoint it is just the host's projection.
    `absorb[i]` is (host, slot, getter) for every attached view i.

    Each (view, shared-variable-set) pair gets a slot; `groups[j]` lists, per
    variable set host j shares with other hosts, (slot of j, getter on j,
    [(i, slot of i, getter on i), ...]).  `projections[slot]` caches the last
    projection computed for that slot together with the tuple set it came
    from, so copies that share a tuple set reuse it.
    """

    __slots__ = ("names", "index", "hosts", "absorb", "groups", "projections")

    def __init__(self, scopes: Mapping):
        self.names = tuple(scopes)
        self.index = {n: i for i, n in enumerate(self.names)}
        sets = [frozenset(scopes[n]) for n in self.names]
        slots: dict = {}

        def slot(view, shared):
            return slots.setdefault((view, shared), len(slots))

        order = sorted(range(len(sets)), key=lambda i: -len(sets[i]))
        hosts = []
        self.absorb = {}
        for i in order:
            h = next((h for h in hosts if sets[i] <= sets[h]), None)
            if h is None:
                hosts.append(i)
            else:
                pos = [scopes[self.names[h]].index(x) for x in scopes[self.names[i]]]
                self.absorb[i] = (h, slot(i, None), _getter(pos))
        self.hosts = sorted(hosts)
        self.groups = {}
        for j in self.hosts:
            nj = self.names[j]
            by_shared: dict = {}
            for i in self.hosts:
                if i == j:
                    continue
                shared = sets[i] & sets[j]
                if shared:
                    by_shared.setdefault(shared, []).append(i)
            groups = []
            for shared, members in by_shared.items():
                w = sorted_elements(shared)
                gj = itemgetter(*[scopes[nj].index(x) for x in w])
                groups.append((slot(j, shared), gj,
                               [(i, slot(i, shared), itemgetter(*[scopes[self.names[i]].index(x) for x in w]))
                                for i in members]))
            self.groups[j] = groups
        self.projections = [None] * len(slots)

    def project(self, slot: int, getter, tuples: frozenset):
        cached = self.projections[slot]
        if cached is not None and cached[0] is tuples:
            return cached[1]
        proj = frozenset(map(getter, tuples))
        self.projections[slot] = (tuples, proj)
        return proj


class ViewPair:
    """Paired view structures: scopes over variables and tuple sets over values.

    `scopes` maps view name -> ordered tuple of distinct variables, `tuples`
    maps view name -> frozenset of value tuples aligned with the scope.
    `base_atoms` records, for each base view, the (symbol, tuple) constraint
    of the original left-hand structure it stands for.
    """

    __slots__ = ("scopes", "tuples", "base_view_names", "dom_view_names", "base_atoms", "_layout")

    def __init__(self, scopes: Mapping, tuples: Mapping, base_view_names: Iterable = (),
                 dom_view_names: Mapping | None = None, base_atoms: Mapping | None = None,
                 _layout: _Layout | None = None):
        self.scopes = {n: tuple(s) for n, s in scopes.items()}
        self.tuples = {n: frozenset(tuple(t) for t in tuples.get(n, ())) for n in self.scopes}
        self.base_view_names = frozenset(base_view_names)
        self.dom_view_names = dict(dom_view_names or {})
        self.base_atoms = dict(base_atoms or {})
        self._layout = _layout
        if _layout is None:
            self._check()

    def _check(self):
        for n, scope in self.scopes.items():
            if len(set(scope)) != len(scope):
                raise StructureError(f"view {n!r}: scope variables must be distinct")
            for t in self.tuples[n]:
                if len(t) != len(scope):
                    raise StructureError(f"view {n!r}: tuple {t!r} does not match scope {scope!r}")
        extra = set(self.tuples) - set(self.scopes)
        if extra:
            raise StructureError(f"tuples given for unknown views {sorted(extra)}")
        for n in list(self.base_view_names) + list(self.dom_view_names.values()):
            if n not in self.scopes:
                raise StructureError(f"unknown view {n!r}")

    @property
    def layout(self) -> _Layout:
        if self._layout is None:
            self._layout = _Layout(self.scopes)
        return self._layout

    @property
    def names(self) -> tuple:
        return tuple(self.scopes)

    def replace(self, updates: Mapping) -> ViewPair:
        """Copy with some views' tuple sets replaced; scopes are shared."""
        tuples = dict(self.tuples)
        for n, ts in updates.items():
            if n not in tuples:
                raise KeyError(n)
            tuples[n] = frozenset(ts)
        out = ViewPair.__new__(ViewPair)
        out.scopes = self.scopes
        out.tuples = tuples
        out.base_view_names = self.base_view_names
        out.dom_view_names = self.dom_view_names
        out.base_atoms = self.base_atoms
        out._layout = self.layout
        return out

    def has_empty_view(self) -> bool:
        return any(not ts for ts in self.tuples.values())

    def sizes(self) -> dict:
        return {n: len(self.tuples[n]) for n in self.scopes}

    def sorted_tuples(self, name: str) -> list:
        return sorted(self.tuples[name], key=tuple_key)

    def projection(self, name: str, variables: Iterable) -> set:
        scope = self.scopes[name]
        pos = [scope.index(x) for x in variables]
        return {tuple(t[p] for p in pos) for t in self.tuples[name]}

    def hypergraph(self, nodes: Iterable | None = None) -> Hypergraph:
        edges = [frozenset(s) for s in self.scopes.values() if s]
        return Hypergraph.from_edges(edges, nodes)

    def as_structures(self, universe: Iterable, values: Iterable):
        """The pair as relational structures over the view vocabulary."""
        vocab = {n: len(s) for n, s in self.scopes.items() if s}
        left = RelationalStructure(vocab, universe, {n: [self.scopes[n]] for n in vocab})
        right = RelationalStructure(vocab, values, {n: self.tuples[n] for n in vocab})
        return left, right

    def __eq__(self, other):
        if not isinstance(other, ViewPair):
            return NotImplemented
        return self.scopes == other.scopes and self.tuples == other.tuples

    def __repr__(self):
        return f"ViewPair({len(self.scopes)} views, {sum(map(len, self.tuples.values()))} tuples)"


# ---------------------------------------------------------------------------
# building views


def _distinct_scope(t: tuple) -> tuple:
    return tuple(dict.fromkeys(t))


def _align(t: tuple, rel: Iterable, scope: tuple) -> set:
    """Tuples of `rel` consistent with repeated variables in t, projected onto scope."""
    first = [t.index(x) for x in scope]
    out = set()
    for b in rel:
        if all(b[i] == b[t.index(x)] for i, x in enumerate(t)):
            out.add(tuple(b[p] for p in first))
    return out


def _solve(scope: tuple, atoms: list, values: tuple) -> set:
    """All assignments of `scope` satisfying the (variables, relation) atoms."""
    partial = [{}]
    pending = list(atoms)
    bound: set = set()
    while pending:
        # join next the atom sharing most variables with what is bound
        pending.sort(key=lambda a: -len(bound & set(a[0])))
        t, rel = pending.pop(0)
        nxt = []
        for asg in partial:
            for b in rel:
                new = dict(asg)
                ok = True
                for x, v in zip(t, b):
                    if new.setdefault(x, v) != v:
                        ok = False
                        break
                if ok:
                    nxt.append(new)
        partial = nxt
        bound |= set(t)
        if not partial:
            return set()
    free = [x for x in scope if x not in bound]
    out = set()
    for asg in partial:
        for combo in itertools.product(values, repeat=len(free)):
            full = dict(asg)
            full.update(zip(free, combo))
            out.add(tuple(full[x] for x in scope))
    return out


def _base_views(A: RelationalStructure):
    scopes, atoms, doms = {}, {}, {}
    constraints = A.constraints()
    counters: dict = {}
    for sym, t in constraints:
        idx = counters.get(sym, 0)
        counters[sym] = idx + 1
        name = f"{sym}#{idx}"
        scopes[name] = _distinct_scope(t)
        atoms[name] = (sym, t)
    drv = A.drv()
    for name, (sym, t) in atoms.items():
        if len(t) == 1 and t[0] in drv and sym == dom_symbol(t[0]):
            doms[t[0]] = name
    return constraints, scopes, atoms, doms


def view_scopes(A: RelationalStructure, spec: MethodSpec) -> dict:
    """Scopes of the left-hand view structure, keyed by view name."""
    constraints, scopes, _, _ = _base_views(A)
    for name, scope, _ in _subset_views(A, constraints, spec):
        scopes[name] = scope
    return scopes


def _subset_views(A: RelationalStructure, constraints: list, spec: MethodSpec):
    if spec.method == "tw":
        for size in range(1, spec.k + 1):
            for w in itertools.combinations(A.universe, size):
                yield "tw{" + ",".join(map(str, w)) + "}", w, None
    else:
        for size in range(1, spec.k + 1):
            for idx in itertools.combinations(range(len(constraints)), size):
                vars_ = {x for i in idx for x in constraints[i][1]}
                yield "hw{" + ",".join(map(str, idx)) + "}", tuple(sorted_elements(vars_)), idx


def views_hypergraph(A: RelationalStructure, spec: MethodSpec) -> Hypergraph:
    return Hypergraph.from_edges((frozenset(s) for s in view_scopes(A, spec).values() if s), A.universe)


def build_views(A: RelationalStructure, B: RelationalStructure, spec: MethodSpec) -> ViewPair:
    """The view pair of `spec` for (A, B): base views plus subproblem views.

    tw views over a variable set w hold every map w -> B satisfying the
    constraints whose scope lies inside w; hw views over a set of
    constraint tuples hold the join of those constraints.
    """
    constraints, scopes, atoms, doms = _base_views(A)
    tuples = {}
    for name, (sym, t) in atoms.items():
        tuples[name] = _align(t, B.relations.get(sym, ()), scopes[name])
    values = B.universe
    for name, scope, idx in _subset_views(A, constraints, spec):
        if idx is None:
            inside = [(t, B.relations.get(sym, frozenset()))
                      for sym, t in constraints if set(t) <= set(scope)]
        else:
            inside = [(constraints[i][1], B.relations.get(constraints[i][0], frozenset())) for i in idx]
        scopes[name] = scope
        tuples[name] = _solve(scope, inside, values)
    return ViewPair(scopes, tuples, base_view_names=atoms, dom_view_names=doms, base_atoms=atoms)


def is_legal(V: ViewPair, A: RelationalStructure, B: RelationalStructure) -> bool:
    """Legality of V for (A, B), checked against brute-force solutions.

    Every view must contain all projected solutions over its scope, and
    every base view must be no looser than its original constraint.
    """
    from .testkit import oracle_enumerate

    solutions = oracle_enumerate(A, B, A.universe)
    for name, scope in V.scopes.items():
        projected = {tuple(h[x] for x in scope) for h in solutions}
        if not projected <= V.tuples[name]:
            return False
    for name in V.base_view_names:
        if name not in V.base_atoms:
            return False
        sym, t = V.base_atoms[name]
        scope = V.scopes[name]
        rel = B.relations.get(sym, frozenset())
        for v in V.tuples[name]:
            asg = dict(zip(scope, v))
            if tuple(asg[x] for x in t) not in rel:
                return False
    return True


def tp_covered_through_dm(A: RelationalStructure, O: Iterable, spec: MethodSpec) -> bool:
    """Whether every output variable, pinned individually, keeps some core
    with a tree projection onto the views of `spec`."""
    O = set(O)
    missing = O - set(A.universe)
    if missing:
        raise StructureError(f"output variables {sorted(missing, key=element_key)!r} not in universe")
    views = views_hypergraph(A, spec)
    for core in compute_cores(pin_outputs(A, O, jointly=False)):
        if find_tree_projection(hypergraph_of(core), views) is not None:
            return True
    return False
