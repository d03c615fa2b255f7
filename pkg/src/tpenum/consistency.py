"""Generalized arc consistency over views (pairwise consistency fixpoint)."""
from __future__ import annotations

import random
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass

from .decomposition import ViewPair


@dataclass
class GacTrace:
    """Counters filled in by `gac` when passed one."""

    pops: int = 0
    semijoins: int = 0
    deleting_steps: int = 0
    deleted_tuples: int = 0


def gac(V: ViewPair, changed: Iterable | None = None, rng: random.Random | None = None,
        trace: GacTrace | None = None) -> ViewPair:
    """Largest pairwise-consistent sub-pair of V.

    Any two views sharing variables end up with the same projection onto
    those variables.  Only deletions happen and the input is not modified.

    `changed` names the views whose tuple sets shrank since V was last
    pairwise consistent; only those seed the worklist, which reaches the
    same fixpoint as seeding every view.
    `rng` randomizes the processing schedule, which must not affect the result.
    """
    lay = V.layout
    names = lay.names
    given = [V.tuples[n] for n in names]
    current = list(given)
    seeded = set(range(len(names))) if changed is None else {lay.index[n] for n in changed}
    project = lay.project
    # sent[j]: tuples of host j when its neighbours were last filtered
    # against it (unseeded hosts start out consistent with their neighbours)
    sent = {j: (None if j in seeded else given[j]) for j in lay.hosts}
    queued = {j for j in lay.hosts if j in seeded}
    for i, (h, _, get_i) in lay.absorb.items():
        if i not in seeded:
            continue
        before = current[h]
        kept = frozenset(t for t in before if get_i(t) in given[i])
        if len(kept) != len(before):
            current[h] = kept
            queued.add(h)
            if trace is not None:
                trace.deleted_tuples += len(before) - len(kept)
    seeds = sorted(queued)
    if rng is not None:
        rng.shuffle(seeds)
    queue = deque(seeds)
    while queue:
        if rng is not None:
            queue.rotate(-rng.randrange(len(queue)))
        j = queue.popleft()
        queued.discard(j)
        if trace is not None:
            trace.pops += 1
        now, then = current[j], sent[j]
        sent[j] = now
        if now is then:
            continue
        removed = None if then is None else then - now
        groups = lay.groups[j]
        if rng is not None:
            groups = rng.sample(groups, len(groups))
        deleted_here = 0
        for slot_j, get_j, members in groups:
            support = project(slot_j, get_j, now)
            if removed is None:
                lost = None
            else:
                lost = {get_j(t) for t in removed}
                lost.difference_update(support)
                if not lost:
                    continue
            for i, slot_i, get_i in members:
                if trace is not None:
                    trace.semijoins += 1
                before = current[i]
                proj = project(slot_i, get_i, before)
                unsupported = proj - support if lost is None else proj & lost
                if not unsupported:
                    continue
                kept = frozenset(t for t in before if get_i(t) not in unsupported)
                current[i] = kept
                deleted_here += len(before) - len(kept)
                if i not in queued:
                    queued.add(i)
                    queue.append(i)
        if trace is not None and deleted_here:
            trace.deleting_steps += 1
            trace.deleted_tuples += deleted_here
    updates = {}
    for j in lay.hosts:
        if current[j] is not given[j]:
            updates[names[j]] = current[j]
    for i, (h, slot_i, get_i) in lay.absorb.items():
        if current[h] is given[h] and h not in seeded and i not in seeded:
            continue
        proj = project(slot_i, get_i, current[h])
        if proj != given[i]:
            updates[names[i]] = proj
    return V.replace(updates)


def is_pairwise_consistent(V: ViewPair) -> bool:
    """True iff every two views agree on the projection to their shared variables."""
    names = list(V.scopes)
    for a, na in enumerate(names):
        for nb in names[a + 1:]:
            shared = [x for x in V.scopes[na] if x in set(V.scopes[nb])]
            if shared and V.projection(na, shared) != V.projection(nb, shared):
                return False
    return True
