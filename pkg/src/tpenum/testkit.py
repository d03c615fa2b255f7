"""Ground truth and instance generators.

The oracle is deliberately naive (plain backtracking in a fixed variable
order, no propagation) so that its failure modes have nothing in common
with the GAC engine it is used to check.
"""
from __future__ import annotations

import itertools
import random
from collections.abc import Iterable
from dataclasses import dataclass

from .enumeration import SolutionStream
from .structures import (
    PartialMap,
    RelationalStructure,
    StructureError,
    dom_symbol,
    sorted_elements,
)

DEFAULT_ORACLE_BUDGET = 10_000_000
ORACLE_FREE_SIZE = 12


class OracleBudgetExceeded(RuntimeError):
    """The brute-force oracle refuses instances beyond its budget."""


def oracle_enumerate(A: RelationalStructure, B: RelationalStructure, O: Iterable,
                     budget: int = DEFAULT_ORACLE_BUDGET) -> set:
    """Exact set of homomorphisms A -> B restricted to O, by brute force.

    With O empty the result is {empty map} if some homomorphism exists and
    the empty set otherwise.
    """
    O = list(O)
    variables = list(A.universe)
    n, d = len(variables), len(B.universe)
    if n > ORACLE_FREE_SIZE and d ** n > budget:
        raise OracleBudgetExceeded(
            f"{d}^{n} candidate maps exceed the oracle budget of {budget}"
        )
    unknown = [x for x in O if x not in set(variables)]
    if unknown:
        raise StructureError(f"output variables {unknown!r} not in universe")
    position = {x: i for i, x in enumerate(variables)}
    ready = [[] for _ in variables]
    for name, rel in A.relations.items():
        target = B.relations.get(name, frozenset())
        for t in rel:
            ready[max(position[x] for x in t)].append((t, target))
    values = list(B.universe)
    found = set()
    assignment = {}

    def search(i):
        if i == n:
            found.add(PartialMap((x, assignment[x]) for x in O))
            return
        x = variables[i]
        for v in values:
            assignment[x] = v
            if all(tuple(assignment[y] for y in t) in target for t, target in ready[i]):
                search(i + 1)
        del assignment[x]

    search(0)
    return found


def oracle_solutions_sorted(A, B, O, budget: int = DEFAULT_ORACLE_BUDGET) -> list:
    return sorted(oracle_enumerate(A, B, O, budget), key=PartialMap.sort_key)


# ---------------------------------------------------------------------------
# generators


def grid_name(r: int, c: int) -> str:
    return f"v{r}_{c}"


def gen_grid(rows: int, cols: int, restrict_corners: bool = False,
             symmetric: bool = False) -> RelationalStructure:
    """Structure over one binary symbol R_u whose Gaifman graph is a rows x cols grid.

    Edges point left-to-right and top-to-bottom; `symmetric` adds the reverse
    tuple of every edge (the undirected grid).  `restrict_corners` adds a
    dom(.) relation for each of the four corners.
    """
    if rows < 2 or cols < 2:
        raise StructureError("grid needs at least 2 rows and 2 columns")
    universe = [grid_name(r, c) for r in range(1, rows + 1) for c in range(1, cols + 1)]
    edges = []
    for r in range(1, rows + 1):
        for c in range(1, cols + 1):
            if c < cols:
                edges.append((grid_name(r, c), grid_name(r, c + 1)))
            if r < rows:
                edges.append((grid_name(r, c), grid_name(r + 1, c)))
    if symmetric:
        edges += [(b, a) for a, b in edges]
    vocab = {"R_u": 2}
    rels = {"R_u": edges}
    if restrict_corners:
        for x in corners(rows, cols):
            vocab[dom_symbol(x)] = 1
            rels[dom_symbol(x)] = [(x,)]
    return RelationalStructure(vocab, universe, rels)


def corners(rows: int, cols: int) -> list:
    return [grid_name(1, 1), grid_name(1, cols), grid_name(rows, 1), grid_name(rows, cols)]


def three_colouring_target() -> RelationalStructure:
    colours = (1, 2, 3)
    return RelationalStructure({"R_E": 2}, colours,
                               {"R_E": [(a, b) for a in colours for b in colours if a != b]})


def has_triangle(edges: list) -> bool:
    adj: dict = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return any(adj[u] & adj[v] for u, v in edges)


def gen_3col(edges: Iterable):
    """Binary CSP (A_G, B_3c) whose solutions are the proper 3-colourings of G.

    A graph without a triangle first gets one: two fresh vertices joined to
    each other and to the first vertex.  This keeps 3-colourability.
    """
    edges = [tuple(e) for e in edges]
    if not edges:
        raise StructureError("graph must have at least one edge")
    if any(u == v for u, v in edges):
        raise StructureError("graph must be simple (no loops)")
    norm = sorted({tuple(sorted_elements(e)) for e in edges}, key=lambda e: tuple(map(str, e)))
    nodes = sorted_elements({x for e in norm for x in e})
    if not has_triangle(norm):
        anchor = nodes[0]
        taken = {str(x) for x in nodes}
        fresh = []
        i = 2
        while len(fresh) < 2:
            cand = f"_n{i}"
            if cand not in taken:
                fresh.append(cand)
            i += 1
        n2, n3 = fresh
        norm += [(anchor, n2), (anchor, n3), (n2, n3)]
        nodes += [n2, n3]
    A = RelationalStructure({"R_E": 2}, nodes, {"R_E": norm})
    return A, three_colouring_target()


def is_three_colourable(edges: Iterable) -> bool:
    """Exhaustive check over all colourings (independent of the CSP encoding)."""
    edges = [tuple(e) for e in edges]
    nodes = sorted_elements({x for e in edges for x in e})
    idx = {x: i for i, x in enumerate(nodes)}
    for colouring in itertools.product(range(3), repeat=len(nodes)):
        if all(colouring[idx[u]] != colouring[idx[v]] for u, v in edges):
            return True
    return False


def random_instance(rng: random.Random, n_vars: int = 5, n_values: int = 3, n_constraints: int = 4,
                    max_arity: int = 3, density: float = 0.5, n_symbols: int = 2):
    """Random (A, B, O) with a connected left-hand structure.

    Variables are named X0, X1, ...; values are 0..n_values-1.  Each
    constraint draws a random scope (arity 1..max_arity) attached to the part
    built so far, and each symbol gets a random relation of the given density.
    The output list is a random subset of the scoped variables.
    """
    variables = [f"X{i}" for i in range(n_vars)]
    symbols = {}
    for s in range(n_symbols):
        symbols[f"R{s}"] = rng.randint(2 if max_arity >= 2 else 1, max_arity)
    rels_a: dict = {name: set() for name in symbols}
    seen = {variables[0]}
    pending = variables[1:]
    count = 0
    while count < n_constraints or pending:
        name = rng.choice(list(symbols))
        arity = symbols[name]
        anchor = rng.choice(sorted(seen))
        if pending:
            nxt = pending.pop(0)
            pool = [anchor, nxt]
        else:
            pool = [anchor]
        while len(pool) < arity:
            pool.append(rng.choice(variables))
        pool = pool[:arity]
        rng.shuffle(pool)
        rels_a[name].add(tuple(pool))
        seen.update(pool)
        count += 1
        if count > 4 * (n_constraints + n_vars):
            break
    values = list(range(n_values))
    rels_b = {}
    for name, arity in symbols.items():
        everything = list(itertools.product(values, repeat=arity))
        rels_b[name] = [t for t in everything if rng.random() < density]
    A = RelationalStructure(symbols, variables, rels_a)
    B = RelationalStructure(symbols, values, rels_b)
    scoped = sorted_elements(A.scoped_elements())
    O = rng.sample(scoped, rng.randint(0, len(scoped)))
    return A, B, O


def random_colouring_instance(rng: random.Random, n_vars: int = 5, colours: int = 3,
                              edge_prob: float = 0.6, max_outputs: int = 2):
    """Random graph against the complete graph on `colours` values.

    Local consistency over small views often cannot refute these, so they
    are the natural source of DM failures for small k.
    """
    nodes = [f"x{i}" for i in range(n_vars)]
    edges = [(u, v) for i, u in enumerate(nodes) for v in nodes[i + 1:] if rng.random() < edge_prob]
    edges = edges or [(nodes[0], nodes[1])]
    used = sorted_elements({x for e in edges for x in e})
    A = RelationalStructure({"E": 2}, used, {"E": edges})
    values = list(range(1, colours + 1))
    B = RelationalStructure({"E": 2}, values, {"E": [(a, b) for a in values for b in values if a != b]})
    O = rng.sample(used, rng.randint(0, min(max_outputs, len(used))))
    return A, B, O


# ---------------------------------------------------------------------------
# delay measurement


@dataclass
class DelayReport:
    gac_gaps: list
    wall_gaps: list
    max_gap: int
    bound: int
    failed_extensions: int
    passed: bool


def measure_delay(stream: SolutionStream, stats=None) -> DelayReport:
    """Per-gap GAC-call counts and wall times of a (drained) solution stream.

    The bound is the number of output variables for `enumerate_all` and the
    number of all variables for `enumerate_certified` (at least 1).
    """
    for _ in stream:
        pass
    stats = stats or stream.stats
    times = [stats.start_time] + list(stats.output_times) + [stats.end_time]
    wall = [b - a for a, b in zip(times, times[1:])]
    gaps = list(stats.gac_calls_between_outputs)
    max_gap = max(gaps) if gaps else 0
    bound = stats.delay_bound
    return DelayReport(gaps, wall, max_gap, bound, stats.failed_extensions, max_gap <= bound)
