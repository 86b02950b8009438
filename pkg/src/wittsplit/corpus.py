"""Line-oriented JSON corpus records and the builtin desk-scale catalogue.

A corpus file holds one JSON object per line with fields
``{"id": ..., "kind": ..., "payload": {...}, "expected": {...}?}``.
Kinds: algebra | curve | abelian-product | cartier-pair.  Algebra payloads
either carry a presentation inline (p, vars, ideal) or name a builtin.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .algebra import FiniteAlgebra, algebra_from_presentation, base_field
from .curves import PlaneCurve
from .errors import ParseError

BUILTIN_ALGEBRAS: dict[str, tuple] = {
    # reduced
    "F2": (2, (), ()),
    "F3": (3, (), ()),
    "F5": (5, (), ()),
    "F4": (2, ("u",), ("u^2+u+1",)),
    "F8": (2, ("u",), ("u^3+u+1",)),
    "F9": (3, ("u",), ("u^2+1",)),
    "F2[t]/(t^3-1)": (2, ("t",), ("t^3-1",)),
    "F3[t]/(t^3-t)": (3, ("t",), ("t^3-t",)),
    "F2[x]/(x^2+x)": (2, ("x",), ("x^2+x",)),
    # non-reduced
    "F2[x]/(x^2)": (2, ("x",), ("x^2",)),
    "F3[x]/(x^2)": (3, ("x",), ("x^2",)),
    "F5[x]/(x^2)": (5, ("x",), ("x^2",)),
    "F2[x]/(x^3)": (2, ("x",), ("x^3",)),
    "F2[x,y]/(x^2,y^2)": (2, ("x", "y"), ("x^2", "y^2")),
    "F2[x,y]/(x^2,y^2+y)": (2, ("x", "y"), ("x^2", "y^2+y")),
}

WITT_SUITE_ALGEBRAS = ("F2", "F3", "F4", "F2[x]/(x^2)", "F3[x]/(x^2)",
                       "F2[t]/(t^3-1)")

BOX_CORPUS_ALGEBRAS = ("F2", "F4", "F2[x]/(x^2)", "F3[x]/(x^2)",
                       "F2[t]/(t^3-1)")


@lru_cache(maxsize=None)
def builtin_algebra(name: str) -> FiniteAlgebra:
    if name not in BUILTIN_ALGEBRAS:
        raise ParseError(f"unknown builtin algebra {name!r}")
    p, variables, ideal = BUILTIN_ALGEBRAS[name]
    if not variables:
        return base_field(p)
    return algebra_from_presentation(variables, list(ideal), p)


def algebra_from_payload(payload: dict) -> FiniteAlgebra:
    if "builtin" in payload:
        return builtin_algebra(payload["builtin"])
    try:
        return algebra_from_presentation(tuple(payload["vars"]),
                                         list(payload["ideal"]),
                                         int(payload["p"]))
    except KeyError as exc:
        raise ParseError(f"algebra payload missing field {exc}") from exc


def curve_from_payload(payload: dict, name: str = "") -> PlaneCurve:
    try:
        return PlaneCurve.from_string(payload["f"], int(payload["p"]),
                                      name=name or payload.get("name", ""))
    except KeyError as exc:
        raise ParseError(f"curve payload missing field {exc}") from exc


@dataclass
class CorpusRecord:
    id: str
    kind: str
    payload: dict
    expected: dict = field(default_factory=dict)

    @classmethod
    def from_json(cls, obj: dict, line: int = 0) -> "CorpusRecord":
        for req in ("id", "kind", "payload"):
            if req not in obj:
                raise ParseError(f"line {line}: record missing {req!r}")
        kind = obj["kind"]
        if kind not in ("algebra", "curve", "abelian-product", "cartier-pair"):
            raise ParseError(f"line {line}: unknown kind {kind!r}")
        return cls(id=str(obj["id"]), kind=kind, payload=obj["payload"],
                   expected=obj.get("expected", {}) or {})


def parse_corpus(text: str) -> list[CorpusRecord]:
    records = []
    ids = set()
    for i, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {i}: invalid JSON ({exc.msg})") from exc
        rec = CorpusRecord.from_json(obj, line=i)
        if rec.id in ids:
            raise ParseError(f"line {i}: duplicate record id {rec.id!r}")
        ids.add(rec.id)
        records.append(rec)
    return records


def load_corpus(path) -> list[CorpusRecord]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_corpus(fh.read())


def demo_corpus_lines() -> list[str]:
    """A small height corpus exercising every record kind."""
    rows = [
        {"id": "a-f4", "kind": "algebra", "payload": {"builtin": "F4"},
         "expected": {"height": 1}},
        {"id": "a-dual-numbers", "kind": "algebra",
         "payload": {"builtin": "F2[x]/(x^2)"},
         "expected": {"height": "infinity"}},
        {"id": "a-cubic-roots", "kind": "algebra",
         "payload": {"p": 2, "vars": ["t"], "ideal": ["t^3-1"]},
         "expected": {"height": 1}},
        {"id": "c-fermat-p2", "kind": "curve",
         "payload": {"p": 2, "f": "x^3+y^3+z^3"},
         "expected": {"height": 2}},
        {"id": "c-fermat-p5", "kind": "curve",
         "payload": {"p": 5, "f": "x^3+y^3+z^3"},
         "expected": {"height": 2}},
        {"id": "c-fermat-p7", "kind": "curve",
         "payload": {"p": 7, "f": "x^3+y^3+z^3"},
         "expected": {"height": 1}},
        {"id": "p-ss-ss", "kind": "abelian-product",
         "payload": {"factors": [{"p": 5, "f": "y^2*z-x^3-z^3"},
                                 {"p": 5, "f": "y^2*z-x^3-z^3"}]},
         "expected": {"height": "infinity"}},
    ]
    return [json.dumps(r, sort_keys=True) for r in rows]
