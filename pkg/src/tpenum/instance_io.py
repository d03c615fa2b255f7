"""Instance documents and JSONL solution records.

An instance document is a JSON object with a fixed field order:

    {
      "vocabulary": [{"name": "R", "arity": 2}],
      "left":  {"universe": [...], "relations": {"R": [[...], ...]}},
      "right": {"universe": [...], "relations": {"R": [[...], ...]}},
      "output": [...],
      "views": {"V1": [...], ...}          (optional)
    }

Elements are JSON integers or strings.  The right-hand side may list extra
unary `dom(x)` relations that the vocabulary does not declare.  The optional
`views` field maps view names to scopes and is only read by the structural
commands (hand-built view sets).
"""
from __future__ import annotations

import json
from collections.abc import Iterable, Mapping

from .structures import (
    PartialMap,
    RelationalStructure,
    StructureError,
    is_dom_symbol,
    tuple_key,
)

FIELDS = ("vocabulary", "left", "right", "output", "views")


class InstanceFormatError(ValueError):
    """Malformed instance document; `where` locates the offending field or line."""

    def __init__(self, message: str, where: str = ""):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


def _element(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InstanceFormatError(f"element {value!r} must be an integer or a string", where)
    return value


def _list(value, where):
    if not isinstance(value, list):
        raise InstanceFormatError("expected a list", where)
    return value


def _object(value, where):
    if not isinstance(value, dict):
        raise InstanceFormatError("expected an object", where)
    return value


def _side(doc, key, vocab: dict, extra_dom: bool) -> RelationalStructure:
    side = _object(doc.get(key), key)
    unknown = set(side) - {"universe", "relations"}
    if unknown:
        raise InstanceFormatError(f"unknown fields {sorted(unknown)}", key)
    universe = [_element(v, f"{key}.universe[{i}]")
                for i, v in enumerate(_list(side.get("universe"), f"{key}.universe"))]
    if len(set(universe)) != len(universe):
        raise InstanceFormatError("universe elements must be unique", f"{key}.universe")
    rels_in = _object(side.get("relations", {}), f"{key}.relations")
    vocabulary = dict(vocab)
    relations = {}
    for name, tuples in rels_in.items():
        where = f"{key}.relations.{name}"
        if name not in vocabulary:
            if extra_dom and is_dom_symbol(name):
                vocabulary[name] = 1
            else:
                raise InstanceFormatError(f"relation {name!r} is not in the vocabulary", where)
        arity = vocabulary[name]
        rows = []
        for i, t in enumerate(_list(tuples, where)):
            t = _list(t, f"{where}[{i}]")
            if len(t) != arity:
                raise InstanceFormatError(
                    f"relation {name!r}: tuple {t!r} has length {len(t)}, arity is {arity}", f"{where}[{i}]"
                )
            rows.append(tuple(_element(v, f"{where}[{i}]") for v in t))
        relations[name] = rows
    try:
        return RelationalStructure(vocabulary, universe, relations)
    except StructureError as exc:
        raise InstanceFormatError(str(exc), key) from exc


def parse_document(text: str) -> dict:
    """Parse an instance document into its parts.

    Returns a dict with keys A, B, O and views (None when absent).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from exc
    doc = _object(doc, "document")
    unknown = set(doc) - set(FIELDS)
    if unknown:
        raise InstanceFormatError(f"unknown fields {sorted(unknown)}", "document")
    vocab = {}
    for i, entry in enumerate(_list(doc.get("vocabulary"), "vocabulary")):
        where = f"vocabulary[{i}]"
        entry = _object(entry, where)
        name, arity = entry.get("name"), entry.get("arity")
        if not isinstance(name, str) or not name:
            raise InstanceFormatError("symbol name must be a non-empty string", where)
        if isinstance(arity, bool) or not isinstance(arity, int) or arity < 1:
            raise InstanceFormatError(f"symbol {name!r}: arity must be a positive integer", where)
        if name in vocab:
            raise InstanceFormatError(f"duplicate symbol {name!r}", where)
        vocab[name] = arity
    A = _side(doc, "left", vocab, extra_dom=False)
    B = _side(doc, "right", vocab, extra_dom=True)
    O = [_element(v, f"output[{i}]") for i, v in enumerate(_list(doc.get("output", []), "output"))]
    views = None
    if "views" in doc:
        views = {}
        for name, scope in _object(doc["views"], "views").items():
            scope = [_element(v, f"views.{name}") for v in _list(scope, f"views.{name}")]
            missing = [x for x in scope if x not in set(A.universe)]
            if missing:
                raise InstanceFormatError(f"scope variables {missing!r} not in the left universe", f"views.{name}")
            views[name] = tuple(scope)
    return {"A": A, "B": B, "O": O, "views": views}


def parse_instance(text: str):
    """(A, B, O) from an instance document."""
    doc = parse_document(text)
    return doc["A"], doc["B"], doc["O"]


def _dump_side(S: RelationalStructure, names: Iterable) -> list:
    lines = ["{", f'    "universe": {json.dumps(list(S.universe))},', '    "relations": {']
    names = list(names)
    for k, name in enumerate(names):
        rows = ", ".join(json.dumps(list(t)) for t in sorted(S.relations.get(name, ()), key=tuple_key))
        comma = "," if k < len(names) - 1 else ""
        lines.append(f"      {json.dumps(name)}: [{rows}]{comma}")
    lines.append("    }")
    lines.append("  }")
    return lines


def serialize_instance(A: RelationalStructure, B: RelationalStructure, O: Iterable,
                       views: Mapping | None = None) -> str:
    """Canonical document text: fixed field order, sorted tuples, one relation per line."""
    vocab = list(A.vocabulary.items())
    extra = [n for n in B.vocabulary if n not in A.vocabulary]
    for n in extra:
        if not is_dom_symbol(n):
            raise StructureError(f"right-hand symbol {n!r} is missing from the left vocabulary")
    out = ["{"]
    entries = ", ".join(json.dumps({"name": n, "arity": a}) for n, a in vocab)
    out.append(f'  "vocabulary": [{entries}],')
    left = _dump_side(A, A.vocabulary)
    right = _dump_side(B, list(A.vocabulary) + sorted(extra))
    out.append('  "left": ' + left[0])
    out += left[1:-1] + ["  },"]
    out.append('  "right": ' + right[0])
    out += right[1:-1] + ["  },"]
    tail = f'  "output": {json.dumps(list(O))}'
    if views is not None:
        out.append(tail + ",")
        out.append('  "views": {')
        items = list(views.items())
        for k, (name, scope) in enumerate(items):
            comma = "," if k < len(items) - 1 else ""
            out.append(f"    {json.dumps(name)}: {json.dumps(list(scope))}{comma}")
        out.append("  }")
    else:
        out.append(tail)
    out.append("}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# output records


def _map_json(h: PartialMap | None):
    if h is None:
        return None
    return {str(k): v for k, v in h.items()}


def event_record(event) -> dict:
    """JSON-ready record of a SolutionEvent."""
    rec = {"event": event.kind}
    if event.solution is not None:
        rec["solution"] = _map_json(event.solution)
    if event.certificate is not None:
        rec["certificate"] = _map_json(event.certificate)
    return rec


def dumps_record(record: Mapping) -> str:
    return json.dumps(record, separators=(",", ":"))


def structure_record(S: RelationalStructure) -> dict:
    return {
        "universe": list(S.universe),
        "relations": {n: [list(t) for t in S.tuples(n)] for n in S.vocabulary if S.relations.get(n)},
    }

