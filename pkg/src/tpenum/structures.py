"""Relational structures, homomorphisms, disjoint unions and cores.

A CSP instance is a pair of structures over one vocabulary: the left-hand
structure carries variables and constraint scopes, the right-hand structure
carries the allowed value tuples.  Elements may be strings or ints; every
set-valued result is emitted in the canonical order given by `element_key`.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field

DOM_PREFIX = "dom("


class StructureError(ValueError):
    """A structure, map or instance violates a precondition."""


def element_key(x):
    """Sort key: ints numerically first, then everything else by name."""
    if isinstance(x, int) and not isinstance(x, bool):
        return (0, x, "")
    return (1, 0, str(x))


def tuple_key(t):
    return tuple(element_key(x) for x in t)


def set_key(s):
    return tuple(sorted(element_key(x) for x in s))


def sorted_elements(items: Iterable) -> list:
    return sorted(items, key=element_key)


def dom_symbol(x) -> str:
    """Name of the domain relation symbol of variable `x`."""
    return f"{DOM_PREFIX}{x})"


def is_dom_symbol(name: str) -> bool:
    return name.startswith(DOM_PREFIX) and name.endswith(")")


class PartialMap(Mapping):
    """Immutable, hashable assignment of left-hand elements to values.

    The empty map plays the role of the trivial solution of a decision
    problem (no output variables).
    """

    __slots__ = ("_d", "_hash")

    def __init__(self, bindings=()):
        self._d = dict(bindings)
        self._hash = None

    def __getitem__(self, key):
        return self._d[key]

    def __iter__(self):
        return iter(sorted_elements(self._d))

    def __len__(self):
        return len(self._d)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, PartialMap):
            return self._d == other._d
        if isinstance(other, Mapping):
            return self._d == dict(other.items())
        return NotImplemented

    def __or__(self, other: Mapping) -> PartialMap:
        merged = dict(self._d)
        merged.update(other)
        return PartialMap(merged)

    def __repr__(self):
        body = ", ".join(f"{k!r}: {self._d[k]!r}" for k in self)
        return f"PartialMap({{{body}}})"

    def restrict(self, keys: Iterable) -> PartialMap:
        return PartialMap((k, self._d[k]) for k in keys)

    def sort_key(self):
        return tuple((element_key(k), element_key(self._d[k])) for k in self)

    def as_dict(self) -> dict:
        return {k: self._d[k] for k in self}


class RelationalStructure:
    """A finite structure: vocabulary (name -> arity), universe, relations.

    Instances are immutable after construction.  The universe is stored in
    canonical order; the vocabulary keeps its declaration order, which is the
    "vocabulary order" used for deterministic tie-breaking.
    """

    __slots__ = ("vocabulary", "universe", "relations", "_hash")

    def __init__(self, vocabulary, universe: Iterable, relations: Mapping | None = None):
        vocab = dict(vocabulary)
        for name, arity in vocab.items():
            if not isinstance(name, str) or not name:
                raise StructureError(f"relation symbol must be a non-empty string, got {name!r}")
            if not isinstance(arity, int) or arity < 1:
                raise StructureError(f"symbol {name!r} must have positive arity, got {arity!r}")
        elems = list(universe)
        if len(set(elems)) != len(elems):
            raise StructureError("universe elements must be unique")
        members = set(elems)
        relations = dict(relations or {})
        unknown = set(relations) - set(vocab)
        if unknown:
            raise StructureError(f"relations for undeclared symbols: {sorted(unknown)}")
        rels = {}
        for name, arity in vocab.items():
            tuples = set()
            for t in relations.get(name, ()):
                t = tuple(t)
                if len(t) != arity:
                    raise StructureError(
                        f"relation {name!r}: tuple {t!r} has length {len(t)}, expected arity {arity}"
                    )
                missing = [x for x in t if x not in members]
                if missing:
                    raise StructureError(f"relation {name!r}: elements {missing!r} not in universe")
                tuples.add(t)
            rels[name] = frozenset(tuples)
        self.vocabulary = vocab
        self.universe = tuple(sorted_elements(elems))
        self.relations = rels
        self._hash = None

    @classmethod
    def from_tuples(cls, relations: Mapping[str, Iterable], universe: Iterable | None = None,
                    arities: Mapping[str, int] | None = None) -> RelationalStructure:
        """Build a structure inferring arities (and the universe) from the tuples."""
        arities = dict(arities or {})
        rels = {name: [tuple(t) for t in tuples] for name, tuples in relations.items()}
        vocab = {}
        for name, tuples in rels.items():
            if name in arities:
                vocab[name] = arities[name]
            elif tuples:
                vocab[name] = len(tuples[0])
            else:
                raise StructureError(f"cannot infer arity of empty relation {name!r}")
        if universe is None:
            universe = {x for tuples in rels.values() for t in tuples for x in t}
        return cls(vocab, universe, rels)

    # -- basic accessors -------------------------------------------------

    @property
    def symbols(self) -> tuple:
        return tuple(self.vocabulary)

    def tuples(self, name: str) -> list:
        return sorted(self.relations[name], key=tuple_key)

    def constraints(self) -> list:
        """All (symbol, tuple) pairs: vocabulary order, then canonical tuple order."""
        return [(name, t) for name in self.vocabulary for t in self.tuples(name)]

    def size(self) -> int:
        return sum(len(r) for r in self.relations.values())

    def drv(self) -> frozenset:
        """Domain-restricted variables: X with dom(X) = {<X>}."""
        out = set()
        for x in self.universe:
            sym = dom_symbol(x)
            if self.vocabulary.get(sym) == 1 and self.relations[sym] == frozenset({(x,)}):
                out.add(x)
        return frozenset(out)

    def scoped_elements(self) -> frozenset:
        return frozenset(x for rel in self.relations.values() for t in rel for x in t)

    # -- derived structures ---------------------------------------------

    def with_relations(self, universe: Iterable, relations: Mapping) -> RelationalStructure:
        return RelationalStructure(self.vocabulary, universe, relations)

    def induced(self, elements: Iterable) -> RelationalStructure:
        keep = set(elements)
        rels = {n: [t for t in r if all(x in keep for x in t)] for n, r in self.relations.items()}
        return RelationalStructure(self.vocabulary, keep, rels)

    def without_tuple(self, name: str, t: tuple) -> RelationalStructure:
        rels = dict(self.relations)
        rels[name] = rels[name] - {t}
        return RelationalStructure(self.vocabulary, self.universe, rels)

    def is_substructure_of(self, other: RelationalStructure) -> bool:
        if self.vocabulary != other.vocabulary:
            return False
        if not set(self.universe) <= set(other.universe):
            return False
        return all(self.relations[n] <= other.relations[n] for n in self.vocabulary)

    def sort_key(self):
        return (
            tuple(element_key(x) for x in self.universe),
            tuple((n, tuple(tuple_key(t) for t in self.tuples(n))) for n in sorted(self.vocabulary)),
        )

    # -- dunder ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, RelationalStructure):
            return NotImplemented
        return (self.vocabulary == other.vocabulary and self.universe == other.universe
                and self.relations == other.relations)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.vocabulary.items()), self.universe,
                               frozenset(self.relations.items())))
        return self._hash

    def __repr__(self):
        rels = "; ".join(
            f"{n}={{{', '.join('(' + ','.join(map(str, t)) + ')' for t in self.tuples(n))}}}"
            for n in self.vocabulary
        )
        return f"RelationalStructure(universe={list(self.universe)!r}, {rels})"


# ---------------------------------------------------------------------------
# instance checks


@dataclass
class Diagnostics:
    errors: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def raise_for_errors(self):
        if self.errors:
            raise StructureError("; ".join(self.errors))


def _components(A: RelationalStructure) -> list:
    parent = {x: x for x in A.universe}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for rel in A.relations.values():
        for t in rel:
            root = find(t[0])
            for x in t[1:]:
                parent[find(x)] = root
    groups: dict = {}
    for x in A.universe:
        groups.setdefault(find(x), []).append(x)
    return list(groups.values())


def validate_instance(A: RelationalStructure, B: RelationalStructure, O: Iterable = ()) -> Diagnostics:
    """Check that (A, B, O) is a well-formed enumeration instance.

    Hard errors: vocabulary or arity mismatch between A and B, output
    variables outside A's universe or in no constraint scope, duplicated
    output variables.  A disconnected A only produces a warning.  B may
    declare `dom(.)` symbols that A lacks; they are ignored.
    """
    diag = Diagnostics()
    for name, arity in A.vocabulary.items():
        if name not in B.vocabulary:
            diag.errors.append(f"vocabulary mismatch: symbol {name!r} missing from right-hand structure")
        elif B.vocabulary[name] != arity:
            diag.errors.append(
                f"arity mismatch for {name!r}: left {arity}, right {B.vocabulary[name]}"
            )
    for name in B.vocabulary:
        if name not in A.vocabulary and not is_dom_symbol(name):
            diag.errors.append(f"vocabulary mismatch: symbol {name!r} missing from left-hand structure")
    O = list(O)
    if len(set(O)) != len(O):
        diag.errors.append("output variables must be distinct")
    members = set(A.universe)
    scoped = A.scoped_elements()
    for x in O:
        if x not in members:
            diag.errors.append(f"output variable {x!r} not in the left-hand universe")
        elif x not in scoped:
            diag.errors.append(f"output variable {x!r} occurs in no constraint scope")
    if len(_components(A)) > 1:
        diag.warnings.append("disconnected: the hypergraph of the left-hand structure is not connected")
    return diag


# ---------------------------------------------------------------------------
# constructions


def disjoint_union(A1: RelationalStructure, A2: RelationalStructure) -> RelationalStructure:
    overlap = set(A1.vocabulary) & set(A2.vocabulary)
    if overlap:
        raise StructureError(f"vocabularies overlap on {sorted(overlap)}")
    vocab = {**A1.vocabulary, **A2.vocabulary}
    rels = {**A1.relations, **A2.relations}
    return RelationalStructure(vocab, set(A1.universe) | set(A2.universe), rels)


def singleton_structure(O, symbol: str | None = None) -> RelationalStructure:
    """Structure with one fresh |O|-ary symbol holding the single tuple O."""
    O = tuple(O)
    if not O:
        raise StructureError("singleton structure needs at least one element")
    if len(set(O)) != len(O):
        raise StructureError("singleton structure elements must be distinct")
    if symbol is None:
        symbol = "S_{" + ",".join(map(str, O)) + "}"
    return RelationalStructure({symbol: len(O)}, O, {symbol: [O]})


def pin_outputs(A: RelationalStructure, O: Iterable, jointly: bool = True) -> RelationalStructure:
    """A extended by one singleton relation over O, or one per variable of O.

    An empty O leaves A unchanged (no 0-ary relation is ever created).
    """
    O = sorted_elements(set(O))
    if not O:
        return A
    if jointly:
        return disjoint_union(A, singleton_structure(O))
    out = A
    for x in O:
        out = disjoint_union(out, singleton_structure((x,)))
    return out


def domain_restricted_version(A: RelationalStructure, B: RelationalStructure, O: Iterable):
    """Add a `dom(X)` constraint for every X in O not already domain restricted.

    The allowed values are the projection of the first relation (in
    vocabulary order) containing X, at the first position of its first
    tuple (in canonical order) mentioning X.
    """
    O = list(O)
    restricted = A.drv()
    vocab_a, vocab_b = dict(A.vocabulary), dict(B.vocabulary)
    rels_a, rels_b = dict(A.relations), dict(B.relations)
    for x in O:
        if x in restricted:
            continue
        sym = dom_symbol(x)
        if sym in vocab_a:
            raise StructureError(f"symbol {sym!r} exists but does not restrict {x!r}")
        source = None
        for name in A.vocabulary:
            for t in A.tuples(name):
                if x in t:
                    source = (name, t.index(x))
                    break
            if source:
                break
        if source is None:
            raise StructureError(f"variable {x!r} occurs in no constraint scope")
        name, pos = source
        vocab_a[sym] = vocab_b[sym] = 1
        rels_a[sym] = [(x,)]
        rels_b[sym] = [(b[pos],) for b in B.relations.get(name, ())]
        restricted = restricted | {x}
    return (RelationalStructure(vocab_a, A.universe, rels_a),
            RelationalStructure(vocab_b, B.universe, rels_b))


# ---------------------------------------------------------------------------
# homomorphisms


def is_homomorphism(h: Mapping, A: RelationalStructure, B: RelationalStructure) -> bool:
    missing = [x for x in A.universe if x not in h]
    if missing:
        raise StructureError(f"map is not total: unassigned {missing!r}")
    for name, rel in A.relations.items():
        target = B.relations.get(name, frozenset())
        for t in rel:
            if tuple(h[x] for x in t) not in target:
                return False
    return True


def _search_order(source: RelationalStructure, candidates: dict) -> list:
    """Static variable order: fewest candidates first, then most connected to the prefix."""
    neighbours = {x: set() for x in source.universe}
    for rel in source.relations.values():
        for t in rel:
            for x in t:
                neighbours[x].update(t)
    for x in neighbours:
        neighbours[x].discard(x)
    order, placed = [], set()
    remaining = list(source.universe)
    while remaining:
        best = min(
            remaining,
            key=lambda x: (-len(neighbours[x] & placed), len(candidates[x]), -len(neighbours[x]),
                           element_key(x)),
        )
        order.append(best)
        placed.add(best)
        remaining.remove(best)
    return order


def iter_homomorphisms(source: RelationalStructure, target: RelationalStructure,
                       fixed: Mapping | None = None) -> Iterator[PartialMap]:
    """Backtracking enumeration of all homomorphisms source -> target.

    `fixed` pins some elements to given values.  Unary constraints are
    applied up front; every other constraint is checked as soon as its last
    variable is assigned.
    """
    candidates = {x: list(target.universe) for x in source.universe}
    for x, v in (fixed or {}).items():
        candidates[x] = [v] if v in target.universe else []
    for name, rel in source.relations.items():
        allowed_rel = target.relations.get(name, frozenset())
        for t in rel:
            if len(set(t)) == 1:
                ok = {b[0] for b in allowed_rel if len(set(b)) == 1}
                candidates[t[0]] = [v for v in candidates[t[0]] if v in ok]
    if any(not c for c in candidates.values()):
        return
    order = _search_order(source, candidates)
    pos = {x: i for i, x in enumerate(order)}
    checks = [[] for _ in order]
    for name, rel in source.relations.items():
        target_rel = target.relations.get(name, frozenset())
        for t in rel:
            if len(set(t)) == 1:
                continue
            checks[max(pos[x] for x in t)].append((t, target_rel))
    assignment: dict = {}

    def extend(i):
        if i == len(order):
            yield PartialMap(assignment)
            return
        x = order[i]
        for v in candidates[x]:
            assignment[x] = v
            if all(tuple(assignment[y] for y in t) in rel for t, rel in checks[i]):
                yield from extend(i + 1)
        del assignment[x]

    if not order:
        yield PartialMap()
        return
    yield from extend(0)


def find_homomorphism(source: RelationalStructure, target: RelationalStructure,
                      fixed: Mapping | None = None) -> PartialMap | None:
    return next(iter_homomorphisms(source, target, fixed), None)


def enumerate_endomorphisms(A: RelationalStructure) -> list:
    """All homomorphisms A -> A, in canonical order.  Exponential; desk scale."""
    return sorted(iter_homomorphisms(A, A), key=PartialMap.sort_key)


def image_substructure(A: RelationalStructure, h: Mapping) -> RelationalStructure:
    """Substructure of the target whose elements and tuples are h's images."""
    rels = {n: [tuple(h[x] for x in t) for t in r] for n, r in A.relations.items()}
    return RelationalStructure(A.vocabulary, {h[x] for x in A.universe}, rels)


def _one_core(A: RelationalStructure) -> RelationalStructure:
    """Shrink A by retractions until no one-step-smaller substructure admits a homomorphism."""
    S = A
    while True:
        step = None
        if len(S.universe) > 1:
            for x in S.universe:
                h = find_homomorphism(S, S.induced(y for y in S.universe if y != x))
                if h is not None:
                    step = h
                    break
        if step is None:
            for name, t in S.constraints():
                h = find_homomorphism(S, S.without_tuple(name, t))
                if h is not None:
                    step = h
                    break
        if step is None:
            return S
        S = image_substructure(S, step)


def compute_cores(A: RelationalStructure) -> list:
    """Every core substructure of A, in canonical order.

    One core C is found by retraction; the others are exactly the images of
    the injective homomorphisms C -> A (all cores are isomorphic to C).
    """
    core = _one_core(A)
    found = set()
    for f in iter_homomorphisms(core, A):
        if len(set(f.values())) == len(f):
            found.add(image_substructure(core, f))
    return sorted(found, key=RelationalStructure.sort_key)


def are_isomorphic(A: RelationalStructure, B: RelationalStructure) -> bool:
    """Brute-force isomorphism test (bijective homomorphism with equal tuple counts)."""
    if A.vocabulary != B.vocabulary or len(A.universe) != len(B.universe):
        return False
    if any(len(A.relations[n]) != len(B.relations[n]) for n in A.vocabulary):
        return False
    for h in iter_homomorphisms(A, B):
        if len(set(h.values())) == len(h):
            return True
    return False
