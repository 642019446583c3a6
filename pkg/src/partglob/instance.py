"""JSON instance files.

A file names its elements and refers to them by name everywhere::

    {
      "group": {"elements": ["1", "x"], "table": [["1", "x"], ["x", "1"]]},
      "semigroup": {"elements": ["0", "u", "v", "t"], "table": [[...], ...]},
      "theta": {"x": {"0": "0", "u": "v", "v": "u"}}
    }

``group`` may instead be ``{"cyclic": n}``. The carrier is exactly one of
``semigroup``, ``algebra`` (``{"elements", "ops": [{"arity", "table"}]}``,
``"-"`` marking undefined cells) or ``carrier`` (a plain list of names).
Missing ``theta`` entries are undefined; the identity row defaults to the
identity map. ``relations`` is an optional list of ``{"arity", "tuples"}``.
"""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from typing import Any, TextIO

import numpy as np

from .actions import PartialAction
from .relational import Relation, RelationalSystem
from .structures import UNDEF, FiniteGroup, FinitePartialAlgebra, FiniteSemigroup, cyclic_group

TOP_KEYS = {"group", "semigroup", "algebra", "carrier", "theta", "relations", "description"}
UNDEFINED_MARK = "-"


@dataclass
class InputProblem:
    pointer: str
    message: str

    def to_json(self) -> dict:
        return {"pointer": self.pointer, "message": self.message}


class InputError(ValueError):
    def __init__(self, problems: list[InputProblem]):
        super().__init__("; ".join(f"{p.pointer}: {p.message}" for p in problems))
        self.problems = problems


@dataclass
class InstanceFile:
    group: FiniteGroup
    kind: str  # "semigroup", "algebra" or "set"
    structure: FiniteSemigroup | FinitePartialAlgebra | None
    names: tuple[str, ...]
    action: PartialAction
    relations: RelationalSystem | None = None
    warnings: list[str] = field(default_factory=list)


def _ptr(*parts) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


class _Parser:
    def __init__(self, doc: Any):
        self.doc = doc
        self.problems: list[InputProblem] = []
        self.warnings: list[str] = []

    def fail(self, pointer: str, msg: str) -> None:
        self.problems.append(InputProblem(pointer, msg))

    def names(self, obj: Any, where: tuple) -> list[str] | None:
        if not isinstance(obj, list) or not obj or not all(isinstance(v, str) for v in obj):
            self.fail(_ptr(*where), "expected a nonempty list of element names")
            return None
        if len(set(obj)) != len(obj):
            self.fail(_ptr(*where), "duplicate element names")
            return None
        return obj

    def lookup(self, names: list[str], value: Any, where: tuple, allow_undef: bool = False) -> int | None:
        if allow_undef and value == UNDEFINED_MARK:
            return UNDEF
        if isinstance(value, str) and value in names:
            return names.index(value)
        self.fail(_ptr(*where), f"unknown element {value!r}")
        return None

    def square(self, names: list[str], table: Any, where: tuple, allow_undef: bool = False):
        n = len(names)
        if not isinstance(table, list) or len(table) != n or not all(isinstance(r, list) and len(r) == n for r in table):
            self.fail(_ptr(*where), f"expected a {n}x{n} table")
            return None
        out = np.full((n, n), UNDEF, dtype=np.int64)
        ok = True
        for i, row in enumerate(table):
            for j, v in enumerate(row):
                k = self.lookup(names, v, where + (i, j), allow_undef)
                if k is None:
                    ok = False
                else:
                    out[i, j] = k
        return out if ok else None

    def nested(self, names: list[str], table: Any, arity: int, where: tuple):
        if arity == 0:
            return self.lookup(names, table, where, allow_undef=True)
        if not isinstance(table, list) or len(table) != len(names):
            self.fail(_ptr(*where), f"expected a list of {len(names)} entries")
            return None
        rows = [self.nested(names, r, arity - 1, where + (i,)) for i, r in enumerate(table)]
        return None if any(r is None for r in rows) else rows

    def unknown_keys(self, obj: dict, allowed: set, where: tuple) -> None:
        for k in sorted(set(obj) - allowed):
            self.warnings.append(f"{_ptr(*where, k)}: unknown key ignored")

    def group(self) -> FiniteGroup | None:
        g = self.doc.get("group")
        if g is None:
            self.fail("/group", "missing group")
            return None
        if not isinstance(g, dict):
            self.fail("/group", "expected an object")
            return None
        self.unknown_keys(g, {"elements", "table", "cyclic", "kind"}, ("group",))
        if "cyclic" in g:
            n = g["cyclic"]
            if not isinstance(n, int) or isinstance(n, bool) or n < 1:
                self.fail("/group/cyclic", "expected a positive integer")
                return None
            return cyclic_group(n)
        names = self.names(g.get("elements"), ("group", "elements"))
        if names is None:
            return None
        mul = self.square(names, g.get("table"), ("group", "table"))
        if mul is None:
            return None
        grp = FiniteGroup(mul, names)
        rep = grp.validate()
        if not rep.ok:
            detail = rep.errors or [f"{v.axiom} fails at {list(v.witness)}" for v in rep.violations]
            self.fail("/group/table", "not a group: " + detail[0])
            return None
        return grp

    def carrier(self):
        present = [k for k in ("semigroup", "algebra", "carrier") if k in self.doc]
        if len(present) != 1:
            self.fail("", f"exactly one of semigroup, algebra, carrier is required (found {present or 'none'})")
            return None
        kind = present[0]
        obj = self.doc[kind]
        if kind == "carrier":
            names = self.names(obj, ("carrier",))
            return None if names is None else ("set", None, names)
        if not isinstance(obj, dict):
            self.fail(_ptr(kind), "expected an object")
            return None
        if kind == "semigroup":
            self.unknown_keys(obj, {"elements", "table", "kind"}, (kind,))
            names = self.names(obj.get("elements"), (kind, "elements"))
            if names is None:
                return None
            mul = self.square(names, obj.get("table"), (kind, "table"))
            if mul is None:
                return None
            sg = FiniteSemigroup(mul, names)
            rep = sg.validate()
            if not rep.ok:
                v = rep.violations[0] if rep.violations else None
                self.fail("/semigroup/table", rep.errors[0] if rep.errors else f"not associative: {v.message}")
                return None
            return ("semigroup", sg, names)
        self.unknown_keys(obj, {"elements", "ops", "kind"}, (kind,))
        names = self.names(obj.get("elements"), (kind, "elements"))
        ops_in = obj.get("ops")
        if names is None:
            return None
        if not isinstance(ops_in, list):
            self.fail("/algebra/ops", "expected a list of operations")
            return None
        sig, ops = [], []
        for k, op in enumerate(ops_in):
            where = ("algebra", "ops", k)
            if not isinstance(op, dict) or not isinstance(op.get("arity"), int) or op["arity"] < 0:
                self.fail(_ptr(*where), "expected {\"arity\": n, \"table\": ...}")
                return None
            self.unknown_keys(op, {"arity", "table"}, where)
            tab = self.nested(names, op.get("table"), op["arity"], where + ("table",))
            if tab is None:
                return None
            sig.append(op["arity"])
            ops.append(np.array(tab, dtype=np.int64).reshape((len(names),) * op["arity"]))
        return ("algebra", FinitePartialAlgebra(len(names), sig, ops, names), names)

    def theta(self, grp: FiniteGroup, names: list[str]) -> PartialAction | None:
        th = self.doc.get("theta", {})
        if not isinstance(th, dict):
            self.fail("/theta", "expected an object keyed by group elements")
            return None
        table = np.full((grp.size, len(names)), UNDEF, dtype=np.int64)
        table[grp.identity] = np.arange(len(names))
        ok = True
        for gname, row in sorted(th.items()):
            if gname not in grp.names:
                self.fail(_ptr("theta", gname), f"unknown group element {gname!r}")
                ok = False
                continue
            if not isinstance(row, dict):
                self.fail(_ptr("theta", gname), "expected an object mapping elements to elements")
                ok = False
                continue
            x = grp.names.index(gname)
            table[x] = UNDEF
            for a, b in row.items():
                ia = self.lookup(names, a, ("theta", gname, a))
                ib = self.lookup(names, b, ("theta", gname, a))
                if ia is None or ib is None:
                    ok = False
                    continue
                table[x, ia] = ib
        return PartialAction(grp, table, names) if ok else None

    def relations(self, names: list[str]) -> RelationalSystem | None:
        rels = self.doc.get("relations")
        if rels is None:
            return None
        if not isinstance(rels, list):
            self.fail("/relations", "expected a list")
            return None
        out = []
        for k, r in enumerate(rels):
            if not isinstance(r, dict) or not isinstance(r.get("arity"), int) or not isinstance(r.get("tuples"), list):
                self.fail(_ptr("relations", k), "expected {\"arity\": n, \"tuples\": [...]}")
                return None
            tuples = []
            for m, t in enumerate(r["tuples"]):
                if not isinstance(t, list) or len(t) != r["arity"]:
                    self.fail(_ptr("relations", k, "tuples", m), f"expected {r['arity']} names")
                    return None
                idx = [self.lookup(names, v, ("relations", k, "tuples", m, i)) for i, v in enumerate(t)]
                if None in idx:
                    return None
                tuples.append(idx)
            out.append(Relation.of(r["arity"], tuples))
        return RelationalSystem(len(names), tuple(out))

    def run(self) -> InstanceFile:
        if not isinstance(self.doc, dict):
            raise InputError([InputProblem("", "top level must be a JSON object")])
        self.unknown_keys(self.doc, TOP_KEYS, ())
        grp = self.group()
        car = self.carrier()
        if grp is None or car is None:
            raise InputError(self.problems)
        kind, structure, names = car
        pa = self.theta(grp, names)
        rels = self.relations(names)
        if self.problems:
            raise InputError(self.problems)
        return InstanceFile(grp, kind, structure, tuple(names), pa, rels, self.warnings)


def parse_document(doc: Any) -> InstanceFile:
    return _Parser(doc).run()


def parse_input(source: str | TextIO) -> InstanceFile:
    """Parse a path, ``"-"`` for stdin, or an open stream."""
    try:
        if source == "-":
            text = sys.stdin.read()
        elif isinstance(source, str):
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        else:
            text = source.read()
    except OSError as e:
        raise InputError([InputProblem("", f"cannot read input: {e.strerror or e}")]) from None
    if not text.strip():
        raise InputError([InputProblem("", "empty input")])
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError([InputProblem("", f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")]) from None
    return parse_document(doc)


def instance_to_document(inst: InstanceFile) -> dict:
    """Inverse of ``parse_document`` (up to key order and omitted identity row)."""
    g = inst.group
    doc: dict = {"group": {"elements": list(g.names), "table": [[g.names[v] for v in row] for row in g.mul]}}
    nm = list(inst.names)
    if inst.kind == "semigroup":
        doc["semigroup"] = {"elements": nm, "table": [[nm[v] for v in row] for row in inst.structure.mul]}
    elif inst.kind == "algebra":
        def render(t):
            if t.ndim == 0:
                return UNDEFINED_MARK if t == UNDEF else nm[int(t)]
            return [render(s) for s in t]

        doc["algebra"] = {
            "elements": nm,
            "ops": [{"arity": n, "table": render(t)} for n, t in zip(inst.structure.signature, inst.structure.ops)],
        }
    else:
        doc["carrier"] = nm
    doc["theta"] = {
        g.names[x]: {nm[a]: nm[int(b)] for a, b in enumerate(inst.action.table[x]) if b != UNDEF}
        for x in range(g.size)
        if x != g.identity
    }
    if inst.relations is not None:
        doc["relations"] = [
            {"arity": r.arity, "tuples": [[nm[v] for v in t] for t in r.tuples]} for r in inst.relations.relations
        ]
    return doc
