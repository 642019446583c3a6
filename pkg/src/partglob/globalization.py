"""The universal globalization of a partial action on a set.

``G x A`` is divided by ``(x,a) ~ (y,b)  iff  (y^-1 x) a = b`` (defined);
``G`` acts on classes by ``x[y,a] = [xy,a]`` and ``A`` embeds as ``[1,-]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .actions import PartialAction, check_morphism, validate_partial_action
from .structures import UNDEF, StructureError


class GlobalizationError(ValueError):
    pass


@dataclass(frozen=True)
class GlobClass:
    """One class ``[x,a]``: the canonical (least) pair and all members."""

    rep: tuple[int, int]
    members: tuple[tuple[int, int], ...]


class UniversalGlobalization:
    def __init__(self, pa: PartialAction, classes: list[GlobClass], class_of: np.ndarray, action: np.ndarray):
        self.pa = pa
        self.group = pa.group
        self.classes = classes
        # class_of[x, a] is the index of [x, a]
        self.class_of = class_of
        # slot[c, x] is the unique a with (x, a) in class c, or UNDEF
        self.slot = np.full((len(classes), pa.group.size), UNDEF, dtype=np.int64)
        for c, cls in enumerate(classes):
            for x, a in cls.members:
                self.slot[c, x] = a
        self.action = action
        e = pa.group.identity
        self.embedding = tuple(int(class_of[e, a]) for a in range(pa.size))

    @property
    def size(self) -> int:
        return len(self.classes)

    def class_name(self, c: int) -> str:
        x, a = self.classes[c].rep
        return f"[{self.group.names[x]},{self.pa.names[a]}]"

    def names(self) -> list[str]:
        return [self.class_name(c) for c in range(self.size)]

    def as_action(self) -> PartialAction:
        """``theta^U`` as a (global) PartialAction on the classes."""
        return PartialAction(self.group, self.action, self.names())

    def parse_class(self, text: str) -> int:
        """Resolve ``"[g,a]"`` by group and carrier element names."""
        body = text.strip()
        if not (body.startswith("[") and body.endswith("]")) or "," not in body:
            raise ValueError(f"bad class literal {text!r}")
        gname, aname = (s.strip() for s in body[1:-1].split(",", 1))
        try:
            x = self.group.names.index(gname)
            a = self.pa.names.index(aname)
        except ValueError:
            raise ValueError(f"unknown element in class literal {text!r}") from None
        return int(self.class_of[x, a])

    def to_json(self) -> dict:
        g, pa = self.group, self.pa
        return {
            "classes": [
                {
                    "name": self.class_name(c),
                    "members": [[g.names[x], pa.names[a]] for x, a in cls.members],
                }
                for c, cls in enumerate(self.classes)
            ],
            "action": {
                g.names[x]: [self.class_name(int(d)) for d in self.action[x]] for x in range(g.size)
            },
            "embedding": {pa.names[a]: self.class_name(c) for a, c in enumerate(self.embedding)},
        }


def build_universal_globalization(pa: PartialAction, validate: bool = True) -> UniversalGlobalization:
    g = pa.group
    if validate:
        rep = validate_partial_action(pa)
        if not rep.ok:
            raise StructureError(f"invalid partial action: {rep.to_json()}")
    n, m = pa.size, g.size
    t = pa.table

    def members_of(x: int, a: int) -> frozenset:
        # (y, b) ~ (x, a) iff (y^-1 x) a = b; put z = y^-1 x, so y = x z^-1
        out = []
        for z in range(m):
            b = t[z, a]
            if b != UNDEF:
                out.append((g.op(x, g.inverse(z)), int(b)))
        return frozenset(out)

    member_sets = {(x, a): members_of(x, a) for x in range(m) for a in range(n)}
    # ~ must be an equivalence: reflexive, and every member must see the same class
    for p, ms in member_sets.items():
        if p not in ms:
            raise GlobalizationError(f"~ not reflexive at {p}")
        for q in ms:
            if member_sets[q] != ms:
                raise GlobalizationError(f"~ not symmetric/transitive at {p}, {q}")

    distinct = sorted({min(ms): ms for ms in member_sets.values()}.items())
    classes = [GlobClass(rep, tuple(sorted(ms))) for rep, ms in distinct]
    class_of = np.full((m, n), UNDEF, dtype=np.int64)
    for c, cls in enumerate(classes):
        for x, a in cls.members:
            class_of[x, a] = c

    action = np.full((m, len(classes)), UNDEF, dtype=np.int64)
    for x in range(m):
        for c, cls in enumerate(classes):
            images = {int(class_of[g.op(x, y), a]) for y, a in cls.members}
            if len(images) != 1:
                raise GlobalizationError(f"x[y,a] = [xy,a] not well defined for x={x}, class {c}")
            action[x, c] = images.pop()
    class_of.flags.writeable = False
    action.flags.writeable = False
    return UniversalGlobalization(pa, classes, class_of, action)


def verify_globalization(
    iota: Sequence[int], pa: PartialAction, glob: PartialAction
) -> tuple[bool, list[str]]:
    """Check that ``iota: pa -> glob`` is a globalization.

    Returns ``(ok, problems)``. The biconditional ``xa defined <=>
    x iota(a) in iota(A)`` is checked in both directions; the direction
    ``<=`` is the one that does not follow from the morphism property.
    """
    problems: list[str] = []
    if not glob.is_global:
        problems.append("target action is not global")
        return False, problems
    if len(set(iota)) != len(iota):
        problems.append("iota not injective")
    ok, w = check_morphism(pa, glob, iota)
    if not ok:
        problems.append(f"iota not a morphism at (x, a) = {w}")
    image = set(iota)
    for x in range(pa.group.size):
        for a in range(pa.size):
            inside = int(glob.table[x, iota[a]]) in image
            defined = pa.table[x, a] != UNDEF
            if inside and not defined:
                problems.append(f"x iota(a) in iota(A) but xa undefined at (x, a) = {(x, a)}")
            if defined and not inside:
                problems.append(f"xa defined but x iota(a) outside iota(A) at (x, a) = {(x, a)}")
    return not problems, problems


def factor_morphism(
    ug: UniversalGlobalization, target: PartialAction, phi: Sequence[int]
) -> tuple[int, ...]:
    """The unique equivariant ``psi`` on classes with ``psi([1,a]) = phi(a)``.

    ``psi([x,a]) = x phi(a)``; well-definedness, ``psi o iota = phi`` and
    equivariance are all re-checked.
    """
    if not target.is_global:
        raise ValueError("target action must be global")
    ok, w = check_morphism(ug.pa, target, phi)
    if not ok:
        raise ValueError(f"phi is not a morphism, witness (x, a) = {w}")
    psi = []
    for c, cls in enumerate(ug.classes):
        values = {int(target.table[x, phi[a]]) for x, a in cls.members}
        if len(values) != 1:
            raise GlobalizationError(f"psi not well defined on class {ug.class_name(c)}")
        psi.append(values.pop())
    if any(psi[ug.embedding[a]] != phi[a] for a in range(ug.pa.size)):
        raise GlobalizationError("psi o iota != phi")
    ok, w = check_morphism(ug.as_action(), target, psi)
    if not ok:
        raise GlobalizationError(f"psi not equivariant at {w}")
    # every class is x.iota(a), so an equivariant map is fixed by its values on iota(A)
    for c, cls in enumerate(ug.classes):
        x, a = cls.rep
        if ug.action[x, ug.embedding[a]] != c:
            raise GlobalizationError(f"class {c} is not x.iota(a) for its representative")
    return tuple(psi)
