"""Partial actions on finite relational systems and their lifted systems."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .actions import PartialAction
from .globalization import UniversalGlobalization, build_universal_globalization
from .structures import UNDEF, FinitePartialAlgebra, StructureError, ValidationReport, Violation


@dataclass(frozen=True)
class Relation:
    arity: int
    tuples: tuple[tuple[int, ...], ...]  # sorted, deduplicated

    @classmethod
    def of(cls, arity: int, tuples: Iterable[Sequence[int]]) -> Relation:
        ts = sorted({tuple(int(v) for v in t) for t in tuples})
        for t in ts:
            if len(t) != arity:
                raise StructureError(f"tuple {t} does not have arity {arity}")
        return cls(arity, tuple(ts))

    def __contains__(self, t) -> bool:
        return tuple(t) in self._set

    @property
    def _set(self) -> frozenset:
        # cached on first use; the dataclass is frozen
        try:
            return self.__dict__["_cached_set"]
        except KeyError:
            s = frozenset(self.tuples)
            object.__setattr__(self, "_cached_set", s)
            return s


@dataclass(frozen=True)
class RelationalSystem:
    size: int
    relations: tuple[Relation, ...]

    def validate(self) -> ValidationReport:
        rep = ValidationReport("relational system")
        for k, rel in enumerate(self.relations):
            for t in rel.tuples:
                if any(not 0 <= v < self.size for v in t):
                    rep.errors.append(f"relation {k}: tuple {t} out of range")
                    break
        return rep


def graph_system(alg: FinitePartialAlgebra) -> RelationalSystem:
    """``R(A)``: each operation as the relation ``{(a..., f(a...))}``."""
    rels = [Relation.of(n + 1, [args + (v,) for args, v in alg.cells(k)]) for k, n in enumerate(alg.signature)]
    return RelationalSystem(alg.size, tuple(rels))


def validate_relational_action(pa: PartialAction, rs: RelationalSystem) -> ValidationReport:
    """Each defined move ``x`` sends tuples of every relation into the relation.

    Witness: ``(relation index, x, tuple)``.
    """
    rep = rs.validate()
    rep.subject = "relational partial action"
    if rs.size != pa.size:
        rep.errors.append(f"system carrier {rs.size} != action carrier {pa.size}")
    if rep.errors:
        return rep
    t = pa.table
    for k, rel in enumerate(rs.relations):
        for x in range(pa.group.size):
            for tup in rel.tuples:
                img = tuple(int(t[x, a]) for a in tup)
                if UNDEF in img:
                    continue
                if img not in rel:
                    rep.violations.append(Violation("relation-invariance", (k, x, tup), f"image {img} not in relation"))
                    return rep
    return rep


@dataclass
class LiftedSystem:
    ug: UniversalGlobalization
    system: RelationalSystem


def lift_relational_system(
    pa: PartialAction, rs: RelationalSystem, ug: UniversalGlobalization | None = None
) -> LiftedSystem:
    """The relations ``{([x,a1],...,[x,an]) | (a1..an) in rho, x in G}`` on ``A^U``.

    Asserts that ``theta^U`` preserves every lifted relation and that ``[1,A]``
    is a subsystem.
    """
    rep = validate_relational_action(pa, rs)
    if not rep.ok:
        raise StructureError(f"invalid relational partial action: {rep.to_json()}")
    if ug is None:
        ug = build_universal_globalization(pa)
    g = pa.group
    lifted = []
    for rel in rs.relations:
        tuples = {
            tuple(int(ug.class_of[x, a]) for a in tup) for x in range(g.size) for tup in rel.tuples
        }
        lifted.append(Relation.of(rel.arity, tuples))
    system = RelationalSystem(ug.size, tuple(lifted))

    for k, rel in enumerate(lifted):
        for x in range(g.size):
            for tup in rel.tuples:
                img = tuple(int(ug.action[x, c]) for c in tup)
                if img not in rel:
                    raise AssertionError(f"theta^U does not preserve lifted relation {k} at {x}, {tup}")
    back = {c: a for a, c in enumerate(ug.embedding)}
    for k, rel in enumerate(lifted):
        orig = rs.relations[k]
        for tup in rel.tuples:
            if all(c in back for c in tup) and tuple(back[c] for c in tup) not in orig:
                raise AssertionError(f"[1,A] is not a subsystem: lifted relation {k} has {tup}")
        for tup in orig.tuples:
            if tuple(ug.embedding[a] for a in tup) not in rel:
                raise AssertionError(f"[1,-] is not a morphism on relation {k}")
    return LiftedSystem(ug, system)


def is_functional(rs: RelationalSystem, k: int) -> tuple[bool, tuple | None]:
    """No two tuples share all but the last entry; witness is the offending pair."""
    rel = rs.relations[k]
    if rel.arity == 0:
        return (len(rel.tuples) <= 1, None if len(rel.tuples) <= 1 else (rel.tuples[0], rel.tuples[1]))
    seen: dict[tuple, tuple] = {}
    for t in rel.tuples:
        prefix = t[:-1]
        if prefix in seen and seen[prefix] != t:
            return False, (seen[prefix], t)
        seen.setdefault(prefix, t)
    return True, None


def is_functional_system(rs: RelationalSystem) -> tuple[bool, tuple | None]:
    for k in range(len(rs.relations)):
        ok, w = is_functional(rs, k)
        if not ok:
            return False, (k,) + w
    return True, None
