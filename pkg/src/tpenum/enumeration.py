"""Polynomial-delay enumeration of (projected) CSP solutions.

`enumerate_all` fixes the output variables one at a time, re-enforcing GAC
on the views after each choice; it is correct whenever the instance is
tp-covered through the decomposition method (a promise it does not check).
`enumerate_certified` goes on through every variable to attach a full
solution to each projected one, and reports a DM failure instead of ever
emitting a wrong answer.

Both return a `SolutionStream`: an iterator of `SolutionEvent` whose `stats`
attribute is updated as the stream is consumed.
"""
from __future__ import annotations

import time
from collections.abc import Iterable
from dataclasses import dataclass, field

from .consistency import gac
from .decomposition import MethodSpec, ViewPair, build_views
from .structures import (
    PartialMap,
    RelationalStructure,
    domain_restricted_version,
    dom_symbol,
    sorted_elements,
    validate_instance,
)

PROJECTED = "projected_solution"
CERTIFIED = "certified_solution"
DM_FAILURE = "dm_failure"


@dataclass(frozen=True)
class SolutionEvent:
    kind: str
    solution: PartialMap | None = None
    certificate: PartialMap | None = None

    def full_assignment(self) -> PartialMap:
        return self.solution | (self.certificate or {})


@dataclass
class EnumerationStats:
    algorithm: str
    m: int
    n: int
    gac_calls_between_outputs: list = field(default_factory=list)
    failed_extensions_between_outputs: list = field(default_factory=list)
    gac_calls: int = 0
    propagate_invocations: int = 0
    outputs: int = 0
    failed_extensions: int = 0
    top_level_empty: bool = False
    dm_failure: bool = False
    finished: bool = False
    start_time: float = 0.0
    end_time: float | None = None
    output_times: list = field(default_factory=list)
    _gap_calls: int = 0
    _gap_failed: int = 0

    @property
    def delay_bound(self) -> int:
        """GAC calls allowed between consecutive outputs."""
        return max(self.n if self.algorithm == "certified" else self.m, 1)

    def _close_gap(self):
        self.gac_calls_between_outputs.append(self._gap_calls)
        self.failed_extensions_between_outputs.append(self._gap_failed)
        self._gap_calls = 0
        self._gap_failed = 0

    def as_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "m": self.m,
            "n": self.n,
            "outputs": self.outputs,
            "gac_calls": self.gac_calls,
            "propagate_invocations": self.propagate_invocations,
            "gac_calls_between_outputs": list(self.gac_calls_between_outputs),
            "failed_extensions": self.failed_extensions,
            "top_level_empty": self.top_level_empty,
            "dm_failure": self.dm_failure,
            "finished": self.finished,
        }


class SolutionStream:
    """Single-consumer iterator over solution events."""

    def __init__(self, events, stats: EnumerationStats):
        self._events = events
        self.stats = stats

    def __iter__(self):
        return self

    def __next__(self) -> SolutionEvent:
        return next(self._events)


class _Frame:
    __slots__ = ("i", "view", "values", "pos", "current", "outputs_at_entry")

    def __init__(self, i, view, values, outputs_at_entry):
        self.i = i
        self.view = view
        self.values = values
        self.pos = 0
        self.current = None
        self.outputs_at_entry = outputs_at_entry


_FAILED = object()


def _propagate(views: ViewPair, order: list, m: int, certified: bool, stats: EnumerationStats):
    """Depth-first Propagate / CPropagate over `order`, with an explicit stack.

    Each child works on a copy of its parent's fixpoint in which the domain
    view of the fixed variable is replaced by the chosen singleton.
    """
    depth = len(order) if certified else m
    doms = views.dom_view_names
    stats.start_time = time.perf_counter()

    def enter(i, V, changed):
        stats.gac_calls += 1
        stats.propagate_invocations += 1
        stats._gap_calls += 1
        W = gac(V, changed=changed)
        if W.has_empty_view():
            if i == 1:
                stats.top_level_empty = True
            elif certified:
                return _FAILED
            return _Frame(i, W, [], stats.outputs)
        values = W.sorted_tuples(doms[order[i - 1]]) if depth else [()]
        return _Frame(i, W, values, stats.outputs)

    def emit(stack):
        stats.outputs += 1
        stats.output_times.append(time.perf_counter())
        stats._close_gap()
        chosen = [f.current for f in stack]
        if certified:
            return SolutionEvent(CERTIFIED, PartialMap(zip(order[:m], chosen[:m])),
                                 PartialMap(zip(order[m:], chosen[m:])))
        return SolutionEvent(PROJECTED, PartialMap(zip(order[:m], chosen[:m])))

    def finish():
        stats._close_gap()
        stats.finished = True
        stats.end_time = time.perf_counter()

    stack = [enter(1, views, None)]
    if depth == 0:
        # no variable to fix: one decision, the trivial solution if consistent
        if stack[0].values:
            event = SolutionEvent(CERTIFIED, PartialMap(), PartialMap()) if certified \
                else SolutionEvent(PROJECTED, PartialMap())
            stats.outputs += 1
            stats.output_times.append(time.perf_counter())
            stats._close_gap()
            yield event
        finish()
        return
    while stack:
        f = stack[-1]
        if f.pos >= len(f.values):
            stack.pop()
            if f.i > 1 and stats.outputs == f.outputs_at_entry:
                stats.failed_extensions += 1
                stats._gap_failed += 1
            if stack and certified and stack[-1].i > m:
                stack[-1].pos = len(stack[-1].values)
            continue
        (a,) = f.values[f.pos]
        f.pos += 1
        f.current = a
        if f.i == depth:
            yield emit(stack)
            if certified and f.i > m:
                f.pos = len(f.values)
            continue
        dom_view = doms[order[f.i - 1]]
        child = enter(f.i + 1, f.view.replace({dom_view: {(a,)}}), [dom_view])
        if child is _FAILED:
            stats.dm_failure = True
            finish()
            yield SolutionEvent(DM_FAILURE)
            return
        stack.append(child)
    finish()


def _restrict_everything(A: RelationalStructure, B: RelationalStructure, order: list):
    """Domain-restrict every variable; unconstrained ones get the whole value set."""
    scoped = A.scoped_elements()
    A1, B1 = domain_restricted_version(A, B, [x for x in order if x in scoped])
    free = [x for x in order if x not in scoped]
    if not free:
        return A1, B1
    vocab_a, vocab_b = dict(A1.vocabulary), dict(B1.vocabulary)
    rels_a, rels_b = dict(A1.relations), dict(B1.relations)
    for x in free:
        sym = dom_symbol(x)
        vocab_a[sym] = vocab_b[sym] = 1
        rels_a[sym] = [(x,)]
        rels_b[sym] = [(v,) for v in B.universe]
    return (RelationalStructure(vocab_a, A1.universe, rels_a),
            RelationalStructure(vocab_b, B1.universe, rels_b))


def enumerate_all(A: RelationalStructure, B: RelationalStructure, O: Iterable,
                  spec: MethodSpec) -> SolutionStream:
    """All projected solutions over O, in the order O is given.

    Correct and with polynomial delay when (A, O) is tp-covered through the
    method; otherwise the output may be wrong and nothing detects it.
    """
    O = list(O)
    validate_instance(A, B, O).raise_for_errors()
    A1, B1 = domain_restricted_version(A, B, O)
    views = build_views(A1, B1, spec)
    stats = EnumerationStats("all", m=len(O), n=len(A.universe))
    return SolutionStream(_propagate(views, O, len(O), False, stats), stats)


def enumerate_certified(A: RelationalStructure, B: RelationalStructure, O: Iterable,
                        spec: MethodSpec) -> SolutionStream:
    """Projected solutions over O, each with a full-solution certificate.

    Every emitted pair is a genuine solution.  Either the stream ends with a
    `dm_failure` event (and the full hypergraph has no tree projection onto
    the views), or it contains every projected solution.
    """
    O = list(O)
    validate_instance(A, B, O).raise_for_errors()
    rest = [x for x in sorted_elements(A.universe) if x not in set(O)]
    order = O + rest
    A1, B1 = _restrict_everything(A, B, order)
    views = build_views(A1, B1, spec)
    stats = EnumerationStats("certified", m=len(O), n=len(order))
    return SolutionStream(_propagate(views, order, len(O), True, stats), stats)
