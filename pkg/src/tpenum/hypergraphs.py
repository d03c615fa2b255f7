"""Hypergraphs, acyclicity, join trees and tree projections."""
from __future__ import annotations

import itertools
from collections.abc import Iterable
from dataclasses import dataclass

from .structures import (
    RelationalStructure,
    StructureError,
    compute_cores,
    pin_outputs,
    set_key,
    sorted_elements,
)


@dataclass(frozen=True)
class Hypergraph:
    """Node set plus a set of non-empty hyperedges (duplicates collapse)."""

    nodes: tuple
    edges: frozenset

    def __post_init__(self):
        nodes = tuple(sorted_elements(set(self.nodes)))
        edges = frozenset(frozenset(e) for e in self.edges)
        members = set(nodes)
        for e in edges:
            if not e:
                raise StructureError("hypergraph edges must be non-empty")
            if not e <= members:
                raise StructureError(f"edge {sorted_elements(e)!r} has nodes outside the node set")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(cls, edges: Iterable, nodes: Iterable | None = None) -> Hypergraph:
        edges = [frozenset(e) for e in edges]
        if nodes is None:
            nodes = set().union(*edges) if edges else set()
        return cls(tuple(nodes), frozenset(edges))

    def sorted_edges(self) -> list:
        return sorted(self.edges, key=lambda e: (-len(e), set_key(e)))

    def reduced(self) -> Hypergraph:
        """Drop every edge strictly contained in another edge."""
        keep = [e for e in self.edges if not any(e < f for f in self.edges)]
        return Hypergraph(self.nodes, frozenset(keep))

    def covered_nodes(self) -> frozenset:
        return frozenset().union(*self.edges) if self.edges else frozenset()

    def primal_adjacency(self) -> dict:
        adj = {x: set() for x in self.nodes}
        for e in self.edges:
            for x in e:
                adj[x].update(e)
        for x in adj:
            adj[x].discard(x)
        return adj

    def __repr__(self):
        edges = ", ".join("{" + ",".join(map(str, sorted_elements(e))) + "}" for e in self.sorted_edges())
        return f"Hypergraph([{edges}])"


@dataclass(frozen=True)
class JoinTree:
    vertices: tuple        # hyperedges (frozensets)
    tree_edges: frozenset  # frozenset of (i, j) index pairs with i < j

    def is_tree(self) -> bool:
        n = len(self.vertices)
        if n == 0:
            return not self.tree_edges
        if len(self.tree_edges) != n - 1:
            return False
        adj = {i: set() for i in range(n)}
        for i, j in self.tree_edges:
            adj[i].add(j)
            adj[j].add(i)
        seen, stack = {0}, [0]
        while stack:
            for j in adj[stack.pop()] - seen:
                seen.add(j)
                stack.append(j)
        return len(seen) == n

    def satisfies_connectedness(self) -> bool:
        """Every node's occurrences induce a connected subtree."""
        if not self.is_tree():
            return False
        nodes = set().union(*self.vertices) if self.vertices else set()
        for x in nodes:
            holders = {i for i, v in enumerate(self.vertices) if x in v}
            inner = sum(1 for i, j in self.tree_edges if i in holders and j in holders)
            if inner != len(holders) - 1:
                return False
        return True


def hypergraph_of(A: RelationalStructure) -> Hypergraph:
    edges = {frozenset(t) for rel in A.relations.values() for t in rel}
    return Hypergraph(A.universe, frozenset(edges))


def gaifman_graph(A: RelationalStructure) -> Hypergraph:
    edges = set()
    for rel in A.relations.values():
        for t in rel:
            for x, y in itertools.combinations(set(t), 2):
                edges.add(frozenset((x, y)))
    return Hypergraph(A.universe, frozenset(edges))


def _gyo(edge_list: list, on_absorb=None) -> list:
    """Exhaustive ear removal on copies of `edge_list`; returns the residual node sets.

    Nodes lying in a single live edge are dropped, and a live edge contained
    in another live edge is removed, calling `on_absorb(i, j)` for edge i
    absorbed by edge j.
    """
    work = [set(e) for e in edge_list]
    alive = set(range(len(work)))
    changed = True
    while changed:
        changed = False
        counts: dict = {}
        for i in alive:
            for x in work[i]:
                counts[x] = counts.get(x, 0) + 1
        for i in sorted(alive):
            lonely = {x for x in work[i] if counts[x] == 1}
            if lonely:
                work[i] -= lonely
                changed = True
        for i in sorted(alive):
            for j in sorted(alive):
                if i != j and work[i] <= work[j]:
                    alive.discard(i)
                    if on_absorb is not None:
                        on_absorb(i, j)
                    changed = True
                    break
    return [work[i] for i in sorted(alive) if work[i]]


def gyo_reduce(H: Hypergraph) -> Hypergraph:
    """Residual hypergraph after exhaustive ear removal (empty iff acyclic)."""
    residual = _gyo(H.sorted_edges())
    nodes = set().union(*residual) if residual else set()
    return Hypergraph(tuple(nodes), frozenset(frozenset(e) for e in residual))


def is_acyclic(H: Hypergraph) -> bool:
    return not gyo_reduce(H).edges


def build_join_tree(H: Hypergraph) -> JoinTree:
    """Join tree of an acyclic hypergraph, linking each ear to its absorbing edge."""
    vertices = tuple(H.sorted_edges())
    links = []
    survivors = _gyo(list(vertices), on_absorb=lambda i, j: links.append((min(i, j), max(i, j))))
    if survivors:
        raise StructureError("hypergraph is cyclic: no join tree exists")
    tree = JoinTree(vertices, frozenset(links))
    if not tree.satisfies_connectedness():  # pragma: no cover - guarded by tests
        raise AssertionError("join tree construction violated connectedness")
    return tree


def hg_leq(H1: Hypergraph, H2: Hypergraph) -> bool:
    """True iff every edge of H1 is contained in some edge of H2."""
    big = list(H2.edges)
    return all(any(e <= f for f in big) for e in H1.edges)


def _elimination_clique(adj: dict, eliminated: int, v: int, n: int) -> int:
    """Bitmask of v plus the not-yet-eliminated nodes reachable through eliminated ones."""
    clique = 1 << v
    seen = 1 << v
    stack = [v]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            bit = 1 << w
            if seen & bit:
                continue
            seen |= bit
            if eliminated & bit:
                stack.append(w)
            else:
                clique |= bit
    return clique


def find_tree_projection(H1: Hypergraph, H2: Hypergraph) -> Hypergraph | None:
    """An acyclic H_a with H1 <= H_a <= H2, or None if there is none.

    Exact search over elimination orderings of H1's primal graph, memoised
    on the set of eliminated nodes.  A tree projection exists iff some
    ordering has every elimination clique inside an edge of H2.
    Exponential in the number of nodes covered by H1; desk scale only.
    """
    if not hg_leq(H1, H2):
        return None
    if is_acyclic(H1):
        result = H1
    else:
        result = _search_projection(H1, H2)
        if result is None:
            return None
    assert is_acyclic(result) and hg_leq(H1, result) and hg_leq(result, H2)
    return result


def _search_projection(H1: Hypergraph, H2: Hypergraph) -> Hypergraph | None:
    nodes = sorted_elements(H1.covered_nodes())
    index = {x: i for i, x in enumerate(nodes)}
    n = len(nodes)
    primal = H1.primal_adjacency()
    adj = [[index[y] for y in primal[x] if y in index] for x in nodes]
    containers = []
    for f in H2.reduced().edges:
        mask = 0
        for x in f:
            if x in index:
                mask |= 1 << index[x]
        containers.append(mask)
    full = (1 << n) - 1
    dead: set = set()

    def fits(mask):
        return any(mask & c == mask for c in containers)

    def solve(eliminated):
        if eliminated == full:
            return []
        if eliminated in dead:
            return None
        for v in range(n):
            if eliminated >> v & 1:
                continue
            clique = _elimination_clique(adj, eliminated, v, n)
            if fits(clique):
                rest = solve(eliminated | 1 << v)
                if rest is not None:
                    return [clique] + rest
        dead.add(eliminated)
        return None

    cliques = solve(0)
    if cliques is None:
        return None
    edges = {frozenset(nodes[i] for i in range(n) if c >> i & 1) for c in cliques}
    return Hypergraph(H1.nodes, frozenset(edges)).reduced()


def is_tp_covered(A: RelationalStructure, views: Hypergraph, O: Iterable = (),
                  jointly: bool = True) -> bool:
    """Whether the output set O is tp-covered with respect to a view hypergraph.

    True iff some core of A extended by one singleton relation over O has a
    tree projection with respect to `views`.  With `jointly` false every
    variable of O gets its own singleton relation instead.
    """
    O = set(O)
    missing = O - set(A.universe)
    if missing:
        raise StructureError(f"output variables {sorted_elements(missing)!r} not in universe")
    for core in compute_cores(pin_outputs(A, O, jointly=jointly)):
        if find_tree_projection(hypergraph_of(core), views) is not None:
            return True
    return False
