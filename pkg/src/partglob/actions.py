"""Partial actions of finite groups on finite sets."""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .structures import UNDEF, FiniteGroup, StructureError, ValidationReport, Violation


class PartialAction:
    """A partial map ``G x A -> A`` stored as a ``|G| x |A|`` table.

    ``table[x, a]`` is ``x.a`` or ``UNDEF``. Domains are derived:
    ``D_x`` is the range of ``theta(x, -)``.
    """

    def __init__(self, group: FiniteGroup, table, names: Sequence[str] | None = None):
        self.group = group
        self.table = np.array(table, dtype=np.int64)
        self.table.flags.writeable = False
        if self.table.ndim != 2:
            raise StructureError(f"action table must be 2-dimensional, got shape {self.table.shape}")
        self.size = int(self.table.shape[1])
        self.names = tuple(names) if names is not None else tuple(str(i) for i in range(self.size))

    def __repr__(self) -> str:
        return f"PartialAction(|G|={self.group.size}, |A|={self.size})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PartialAction)
            and self.group == other.group
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self) -> int:
        return hash((self.group, self.table.tobytes()))

    def act(self, x: int, a: int) -> int:
        return int(self.table[x, a])

    def domain(self, x: int) -> list[int]:
        """``D_x``, sorted."""
        row = self.table[x]
        return sorted({int(v) for v in row if v != UNDEF})

    def domains(self) -> list[list[int]]:
        return [self.domain(x) for x in range(self.group.size)]

    @property
    def is_global(self) -> bool:
        return not (self.table == UNDEF).any()

    def validate(self) -> ValidationReport:
        return validate_partial_action(self)


def validate_partial_action(pa: PartialAction) -> ValidationReport:
    """Check the unit, inverse and guarded composition axioms exhaustively.

    The report keeps the first violating witness for each axiom:
    ``unit`` as ``(a,)``, ``inverse`` as ``(x, a)`` and ``composition`` as
    ``(x, y, a)``.
    """
    rep = ValidationReport("partial action")
    g = pa.group
    grep = g.validate()
    if not grep.ok:
        rep.errors.extend(f"group: {e}" for e in grep.errors)
        rep.errors.extend(f"group: {v.axiom} violated at {v.witness}" for v in grep.violations)
        return rep
    if pa.table.shape != (g.size, pa.size):
        rep.errors.append(f"table shape {pa.table.shape}, expected {(g.size, pa.size)}")
        return rep
    if len(pa.names) != pa.size:
        rep.errors.append(f"{len(pa.names)} names for {pa.size} elements")
    bad = np.argwhere((pa.table != UNDEF) & ((pa.table < 0) | (pa.table >= pa.size)))
    if len(bad):
        x, a = (int(v) for v in bad[0])
        rep.errors.append(f"theta({g.names[x]}, {a}) = {pa.table[x, a]} out of range")
    if pa.size < 1:
        rep.errors.append("empty carrier")
    if rep.errors:
        return rep

    t = pa.table
    e = g.identity
    for a in range(pa.size):
        if t[e, a] != a:
            rep.violations.append(Violation("unit", (a,), f"1.{pa.names[a]} != {pa.names[a]}"))
            break

    for x in range(g.size):
        xi = g.inverse(x)
        hit = None
        for a in range(pa.size):
            b = t[x, a]
            if b != UNDEF and t[xi, b] != a:
                hit = (x, a)
                break
        if hit:
            rep.violations.append(
                Violation("inverse", hit, f"x^-1(x a) != a for x={g.names[hit[0]]}, a={pa.names[hit[1]]}")
            )
            break

    done = False
    for x in range(g.size):
        for y in range(g.size):
            xy = g.op(x, y)
            for a in range(pa.size):
                b = t[y, a]
                if b == UNDEF:
                    continue
                c = t[x, b]
                if c == UNDEF:
                    continue
                if t[xy, a] != c:
                    rep.violations.append(
                        Violation(
                            "composition",
                            (x, y, a),
                            f"(xy)a != x(ya) for x={g.names[x]}, y={g.names[y]}, a={pa.names[a]}",
                        )
                    )
                    done = True
                    break
            if done:
                break
        if done:
            break
    return rep


def global_action(group: FiniteGroup, table, names=None) -> PartialAction:
    pa = PartialAction(group, table, names)
    if not pa.is_global:
        raise StructureError("global action table has undefined cells")
    return pa


def restrict_action(glob: PartialAction, subset: Iterable[int]) -> PartialAction:
    """Restriction of a global action to ``subset``.

    The result's carrier is ``subset`` renumbered in the given order; names
    are inherited.
    """
    subset = list(subset)
    if not subset:
        raise StructureError("empty subset")
    if len(set(subset)) != len(subset):
        raise StructureError("subset has repeated elements")
    for a in subset:
        if not 0 <= a < glob.size:
            raise StructureError(f"subset element {a} out of range")
    pos = {a: i for i, a in enumerate(subset)}
    table = np.full((glob.group.size, len(subset)), UNDEF, dtype=np.int64)
    for x in range(glob.group.size):
        for i, a in enumerate(subset):
            b = int(glob.table[x, a])
            if b in pos:
                table[x, i] = pos[b]
    return PartialAction(glob.group, table, [glob.names[a] for a in subset])


def check_morphism(
    source: PartialAction, target: PartialAction, phi: Sequence[int]
) -> tuple[bool, tuple[int, int] | None]:
    """``(ok, witness)`` for ``xa defined => x phi(a) = phi(xa)`` (defined)."""
    if source.group != target.group:
        raise ValueError("actions over different groups")
    if len(phi) != source.size:
        raise ValueError(f"map has {len(phi)} entries for a carrier of size {source.size}")
    for x in range(source.group.size):
        for a in range(source.size):
            b = source.table[x, a]
            if b == UNDEF:
                continue
            img = target.table[x, phi[a]]
            if img == UNDEF or img != phi[b]:
                return False, (x, a)
    return True, None


def compose_maps(f: Sequence[int], g: Sequence[int]) -> list[int]:
    """``g after f``."""
    return [int(g[v]) for v in f]


def domain_intersection_violation(pa: PartialAction) -> tuple | None:
    """First ``(x, y)`` with ``theta_x(D_{x^-1} & D_y) != D_x & D_{xy}``."""
    g = pa.group
    doms = [set(d) for d in pa.domains()]
    for x in range(g.size):
        xi = g.inverse(x)
        for y in range(g.size):
            lhs = {pa.act(x, a) for a in doms[xi] & doms[y]}
            rhs = doms[x] & doms[g.op(x, y)]
            if lhs != rhs:
                return (x, y)
    return None
