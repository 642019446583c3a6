"""Finite groups, semigroups and partial algebras given by tables.

Elements are dense 0-based indices; names are carried for display only.
Undefined cells of partial operation tables hold ``UNDEF``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

UNDEF = -1


class StructureError(ValueError):
    """A table is malformed (wrong shape, index out of range)."""


class InvalidCongruence(ValueError):
    pass


class NotAHomomorphism(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    message: str = ""

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "witness": list(self.witness), "message": self.message}


@dataclass
class ValidationReport:
    """Structural errors and axiom violations, kept apart.

    Axioms are only checked when there are no structural errors.
    """

    subject: str
    errors: list[str] = field(default_factory=list)
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors and not self.violations

    def first(self, axiom: str) -> Violation | None:
        for v in self.violations:
            if v.axiom == axiom:
                return v
        return None

    def raise_if_invalid(self) -> None:
        if self.errors:
            raise StructureError(f"{self.subject}: " + "; ".join(self.errors))
        if self.violations:
            v = self.violations[0]
            raise StructureError(f"{self.subject}: {v.axiom} violated at {v.witness} {v.message}".rstrip())

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "valid": self.ok,
            "errors": list(self.errors),
            "violations": [v.to_json() for v in self.violations],
        }


def _frozen(a) -> np.ndarray:
    try:
        arr = np.array(a, dtype=np.int64)
    except (ValueError, TypeError) as exc:
        raise StructureError(f"malformed table: {exc}") from None
    arr.flags.writeable = False
    return arr


def _default_names(n: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(n))


def _check_square(mul: np.ndarray, size: int, errors: list[str], what: str = "table") -> bool:
    if mul.shape != (size, size):
        errors.append(f"{what} has shape {mul.shape}, expected {(size, size)}")
        return False
    bad = np.argwhere((mul < 0) | (mul >= size))
    if len(bad):
        i, j = bad[0]
        errors.append(f"{what}[{i}][{j}] = {mul[i, j]} out of range")
        return False
    return True


def _first_nonassociative(mul: np.ndarray) -> tuple[int, int, int] | None:
    n = mul.shape[0]
    left = mul[mul[:, :, None], np.arange(n)[None, None, :]]  # (ab)c
    right = mul[np.arange(n)[:, None, None], mul[None, :, :]]  # a(bc)
    bad = np.argwhere(left != right)
    if len(bad):
        return tuple(int(v) for v in bad[0])
    return None


class FiniteGroup:
    """A finite group given by its multiplication table."""

    def __init__(self, mul: Sequence[Sequence[int]], names: Sequence[str] | None = None):
        self.mul = _frozen(mul)
        self.size = int(self.mul.shape[0]) if self.mul.ndim else 0
        self.names = tuple(names) if names is not None else _default_names(self.size)
        self.identity = self._find_identity()
        self.inv = self._find_inverses()

    def _find_identity(self) -> int | None:
        if self.mul.ndim != 2 or self.mul.shape != (self.size, self.size):
            return None
        r = np.arange(self.size)
        for e in range(self.size):
            if np.array_equal(self.mul[e], r) and np.array_equal(self.mul[:, e], r):
                return e
        return None

    def _find_inverses(self) -> np.ndarray | None:
        e = self.identity
        if e is None:
            return None
        inv = np.full(self.size, UNDEF, dtype=np.int64)
        for g in range(self.size):
            hits = np.flatnonzero((self.mul[g] == e) & (self.mul[:, g] == e))
            if len(hits):
                inv[g] = hits[0]
        if (inv == UNDEF).any():
            return None
        inv.flags.writeable = False
        return inv

    def __repr__(self) -> str:
        return f"FiniteGroup(size={self.size}, names={self.names})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and np.array_equal(self.mul, other.mul)

    def __hash__(self) -> int:
        return hash(self.mul.tobytes())

    def elements(self) -> range:
        return range(self.size)

    def op(self, g: int, h: int) -> int:
        return int(self.mul[g, h])

    def inverse(self, g: int) -> int:
        return int(self.inv[g])

    def index(self, name: str) -> int:
        return self.names.index(name)

    def validate(self) -> ValidationReport:
        rep = ValidationReport("group")
        if len(self.names) != self.size:
            rep.errors.append(f"{len(self.names)} names for {self.size} elements")
        if self.size < 1:
            rep.errors.append("empty group")
        if not _check_square(self.mul, self.size, rep.errors) or rep.errors:
            return rep
        w = _first_nonassociative(self.mul)
        if w is not None:
            rep.violations.append(Violation("associativity", w))
        if self.identity is None:
            rep.violations.append(Violation("identity", ()))
        elif self.inv is None:
            e = self.identity
            for g in range(self.size):
                if not ((self.mul[g] == e) & (self.mul[:, g] == e)).any():
                    rep.violations.append(Violation("inverse", (g,)))
                    break
        return rep


def cyclic_group(n: int, names: Sequence[str] | None = None) -> FiniteGroup:
    if names is None:
        names = ["1"] + (["x"] if n == 2 else [f"x^{k}" if k > 1 else "x" for k in range(1, n)])
    return FiniteGroup([[(i + j) % n for j in range(n)] for i in range(n)], names)


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    pairs = list(itertools.product(range(g.size), range(h.size)))
    idx = {p: k for k, p in enumerate(pairs)}
    mul = [[idx[(g.op(a, c), h.op(b, d))] for (c, d) in pairs] for (a, b) in pairs]
    names = []
    for a, b in pairs:
        parts = [s for s in (g.names[a], h.names[b]) if s != "1"]
        names.append("*".join(parts) if parts else "1")
    return FiniteGroup(mul, names)


def klein_four() -> FiniteGroup:
    return direct_product(cyclic_group(2, ["1", "a"]), cyclic_group(2, ["1", "b"]))


def symmetric_group(n: int) -> FiniteGroup:
    perms = sorted(itertools.permutations(range(n)))
    idx = {p: k for k, p in enumerate(perms)}
    # (p*q)(i) = p(q(i))
    mul = [[idx[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    names = ["1" if p == tuple(range(n)) else "".join(str(v) for v in p) for p in perms]
    return FiniteGroup(mul, names)


class FiniteSemigroup:
    """A finite semigroup; associativity is checked by ``validate``."""

    def __init__(self, mul: Sequence[Sequence[int]], names: Sequence[str] | None = None):
        self.mul = _frozen(mul)
        self.size = int(self.mul.shape[0]) if self.mul.ndim else 0
        self.names = tuple(names) if names is not None else _default_names(self.size)

    def __repr__(self) -> str:
        return f"FiniteSemigroup(size={self.size}, names={self.names})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteSemigroup) and np.array_equal(self.mul, other.mul)

    def __hash__(self) -> int:
        return hash(self.mul.tobytes())

    def op(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def index(self, name: str) -> int:
        return self.names.index(name)

    def validate(self) -> ValidationReport:
        rep = ValidationReport("semigroup")
        if len(self.names) != self.size:
            rep.errors.append(f"{len(self.names)} names for {self.size} elements")
        if self.size < 1:
            rep.errors.append("empty semigroup")
        if not _check_square(self.mul, self.size, rep.errors) or rep.errors:
            return rep
        w = _first_nonassociative(self.mul)
        if w is not None:
            a, b, c = w
            rep.violations.append(
                Violation(
                    "associativity",
                    w,
                    f"({self.names[a]}{self.names[b]}){self.names[c]} != {self.names[a]}({self.names[b]}{self.names[c]})",
                )
            )
        return rep

    def as_algebra(self) -> FinitePartialAlgebra:
        return FinitePartialAlgebra(self.size, (2,), [self.mul], self.names)

    def products(self, left: Iterable[int], right: Iterable[int]) -> set[int]:
        right = list(right)
        return {int(self.mul[a, b]) for a in left for b in right}

    def is_ideal(self, subset: Iterable[int]) -> bool:
        return ideal_violation(self, subset) is None

    def idempotents(self) -> list[int]:
        return [a for a in range(self.size) if self.mul[a, a] == a]

    def is_central(self, e: int) -> bool:
        return bool(np.array_equal(self.mul[e, :], self.mul[:, e]))

    def is_regular(self) -> bool:
        m = self.mul
        for a in range(self.size):
            # a = a b a for some b
            if not (m[m[a, :], a] == a).any():
                return False
        return True

    def is_inverse(self) -> bool:
        if not self.is_regular():
            return False
        es = self.idempotents()
        return all(self.mul[e, f] == self.mul[f, e] for e in es for f in es)

    def identity(self) -> int | None:
        r = np.arange(self.size)
        for e in range(self.size):
            if np.array_equal(self.mul[e], r) and np.array_equal(self.mul[:, e], r):
                return e
        return None


def ideal_violation(s: FiniteSemigroup, subset: Iterable[int]) -> tuple | None:
    """First ``(side, s, d, product)`` with the product leaving ``subset``."""
    members = sorted(set(subset))
    inside = set(members)
    for d in members:
        for a in range(s.size):
            p = s.op(a, d)
            if p not in inside:
                return ("left", a, d, p)
            p = s.op(d, a)
            if p not in inside:
                return ("right", a, d, p)
    return None


class FinitePartialAlgebra:
    """Partial algebra of a finite type.

    ``ops[k]`` is an integer array of shape ``(size,) * signature[k]``; a
    nullary operation is a 0-d array. Cells equal to ``UNDEF`` are undefined.
    """

    def __init__(
        self,
        size: int,
        signature: Sequence[int],
        ops: Sequence,
        names: Sequence[str] | None = None,
    ):
        self.size = int(size)
        self.signature = tuple(int(n) for n in signature)
        self.ops = tuple(_frozen(t) for t in ops)
        self.names = tuple(names) if names is not None else _default_names(self.size)

    def __repr__(self) -> str:
        return f"FinitePartialAlgebra(size={self.size}, signature={self.signature})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FinitePartialAlgebra)
            and self.size == other.size
            and self.signature == other.signature
            and all(np.array_equal(a, b) for a, b in zip(self.ops, other.ops))
        )

    def __hash__(self) -> int:
        return hash((self.size, self.signature, tuple(t.tobytes() for t in self.ops)))

    def apply(self, k: int, args: Sequence[int]) -> int:
        return int(self.ops[k][tuple(args)])

    def cells(self, k: int) -> Iterator[tuple[tuple[int, ...], int]]:
        """Defined cells of operation ``k`` as ``(args, value)`` in lexicographic order."""
        t = self.ops[k]
        if t.ndim == 0:
            if t != UNDEF:
                yield (), int(t)
            return
        for args in np.argwhere(t != UNDEF):
            key = tuple(int(a) for a in args)
            yield key, int(t[key])

    def arg_tuples(self, k: int) -> Iterator[tuple[int, ...]]:
        return itertools.product(range(self.size), repeat=self.signature[k])

    @property
    def is_total(self) -> bool:
        return all(not (t == UNDEF).any() for t in self.ops)

    def validate(self) -> ValidationReport:
        rep = ValidationReport("partial algebra")
        if self.size < 1:
            rep.errors.append("empty carrier")
        if len(self.names) != self.size:
            rep.errors.append(f"{len(self.names)} names for {self.size} elements")
        if len(self.ops) != len(self.signature):
            rep.errors.append(f"{len(self.ops)} operations for signature {self.signature}")
            return rep
        for k, (n, t) in enumerate(zip(self.signature, self.ops)):
            if n < 0:
                rep.errors.append(f"operation {k} has negative arity")
                continue
            if t.shape != (self.size,) * n:
                rep.errors.append(f"operation {k} has shape {t.shape}, expected {(self.size,) * n}")
                continue
            bad = np.argwhere((t != UNDEF) & ((t < 0) | (t >= self.size)))
            if len(bad):
                key = tuple(int(a) for a in bad[0])
                rep.errors.append(f"operation {k} at {key} = {int(t[key])} out of range")
        return rep

    def subalgebra_violation(self, subset: Iterable[int]) -> tuple | None:
        """First ``(op, args, value)`` with args in ``subset`` and value outside it."""
        inside = set(subset)
        for k in range(len(self.ops)):
            for args, val in self.cells(k):
                if all(a in inside for a in args) and val not in inside:
                    return (k, args, val)
        return None


def validate_structure(obj) -> ValidationReport:
    """Validate a group, semigroup or partial algebra."""
    if isinstance(obj, (FiniteGroup, FiniteSemigroup, FinitePartialAlgebra)):
        return obj.validate()
    raise TypeError(f"cannot validate {type(obj).__name__}")


class Congruence:
    """A partition of ``range(n)``; ``labels[a]`` is the least element of a's block."""

    def __init__(self, labels: Sequence[int]):
        self.labels = tuple(int(v) for v in labels)
        reps = sorted(set(self.labels))
        self._block_of = {r: i for i, r in enumerate(reps)}

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> Congruence:
        labels = list(range(n))
        for block in blocks:
            block = sorted(block)
            for a in block:
                labels[a] = block[0]
        return cls(labels)

    @classmethod
    def identity(cls, n: int) -> Congruence:
        return cls(range(n))

    @classmethod
    def full(cls, n: int) -> Congruence:
        return cls([0] * n)

    @property
    def size(self) -> int:
        return len(self.labels)

    def related(self, a: int, b: int) -> bool:
        return self.labels[a] == self.labels[b]

    def block_index(self, a: int) -> int:
        return self._block_of[self.labels[a]]

    @property
    def num_blocks(self) -> int:
        return len(self._block_of)

    def blocks(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for a, r in enumerate(self.labels):
            out.setdefault(r, []).append(a)
        return [out[r] for r in sorted(out)]

    def pairs(self) -> set[tuple[int, int]]:
        return {(a, b) for blk in self.blocks() for a in blk for b in blk}

    def __eq__(self, other) -> bool:
        return isinstance(other, Congruence) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def __le__(self, other: Congruence) -> bool:
        return all(other.related(a, b) for a, b in enumerate(self.labels))

    def __repr__(self) -> str:
        return f"Congruence({self.blocks()})"


def _canonical_labels(parent: list[int]) -> list[int]:
    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    roots = [find(a) for a in range(len(parent))]
    least: dict[int, int] = {}
    for a, r in enumerate(roots):
        least.setdefault(r, a)
    return [least[r] for r in roots]


def substitution_violation(alg: FinitePartialAlgebra, c: Congruence) -> tuple | None:
    """First ``(op, args1, args2)`` breaking the substitution property, if any."""
    for k in range(len(alg.ops)):
        seen: dict[tuple, tuple[tuple, int]] = {}
        for args, val in alg.cells(k):
            key = tuple(c.labels[a] for a in args)
            if key in seen:
                args0, val0 = seen[key]
                if not c.related(val0, val):
                    return (k, args0, args)
            else:
                seen[key] = (args, val)
    return None


def is_congruence(alg: FinitePartialAlgebra, c: Congruence) -> bool:
    return c.size == alg.size and substitution_violation(alg, c) is None


def congruence_closure(alg: FinitePartialAlgebra, pairs: Iterable[tuple[int, int]]) -> Congruence:
    """Smallest congruence of ``alg`` containing ``pairs``."""
    n = alg.size
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> bool:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[max(ra, rb)] = min(ra, rb)
        return True

    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise StructureError(f"pair {(a, b)} out of range for carrier of size {n}")
        union(a, b)

    cells = [list(alg.cells(k)) for k in range(len(alg.ops))]
    changed = True
    while changed:
        changed = False
        for op_cells in cells:
            first: dict[tuple, int] = {}
            for args, val in op_cells:
                key = tuple(find(a) for a in args)
                if key in first:
                    changed |= union(first[key], val)
                else:
                    first[key] = val
    return Congruence(_canonical_labels(parent))


def quotient(alg: FinitePartialAlgebra, c: Congruence) -> FinitePartialAlgebra:
    """``alg / c`` with blocks numbered by their least element."""
    if c.size != alg.size:
        raise InvalidCongruence("congruence and algebra have different carriers")
    m = c.num_blocks
    ops = []
    for k, n in enumerate(alg.signature):
        t = np.full((m,) * n, UNDEF, dtype=np.int64)
        for args, val in alg.cells(k):
            key = tuple(c.block_index(a) for a in args)
            b = c.block_index(val)
            if t[key] == UNDEF:
                t[key] = b
            elif t[key] != b:
                raise InvalidCongruence(f"operation {k} not well defined on blocks {key}")
        ops.append(t)
    names = ["{" + ",".join(alg.names[a] for a in blk) + "}" for blk in c.blocks()]
    return FinitePartialAlgebra(m, alg.signature, ops, names)


def homomorphism_violation(
    hom: Sequence[int], source: FinitePartialAlgebra, target: FinitePartialAlgebra
) -> tuple | None:
    if source.signature != target.signature:
        return ("signature",)
    if len(hom) != source.size or any(not 0 <= h < target.size for h in hom):
        return ("map",)
    for k in range(len(source.ops)):
        for args, val in source.cells(k):
            img = target.apply(k, [hom[a] for a in args])
            if img == UNDEF or img != hom[val]:
                return (k, args)
    return None


def is_homomorphism(hom, source, target) -> bool:
    return homomorphism_violation(hom, source, target) is None


def preimage_congruence(
    hom: Sequence[int],
    source: FinitePartialAlgebra,
    target: FinitePartialAlgebra,
    target_congruence: Congruence,
) -> Congruence:
    """Kernel-style pullback: ``a ~ b`` iff ``hom(a) ~ hom(b)`` in the target."""
    w = homomorphism_violation(hom, source, target)
    if w is not None:
        raise NotAHomomorphism(f"not a homomorphism: {w}")
    labels = [None] * source.size
    first: dict[int, int] = {}
    for a in range(source.size):
        key = target_congruence.labels[hom[a]]
        labels[a] = first.setdefault(key, a)
    return Congruence(labels)


def image_pairs(hom: Sequence[int], pairs: Iterable[tuple[int, int]]) -> set[tuple[int, int]]:
    return {(hom[a], hom[b]) for a, b in pairs}


def _element_invariant(alg: FinitePartialAlgebra, a: int) -> tuple:
    inv = []
    for k, t in enumerate(alg.ops):
        n = alg.signature[k]
        if n == 0:
            inv.append(int(t == a))
            continue
        defined = t != UNDEF
        for pos in range(n):
            inv.append(int(np.take(defined, a, axis=pos).sum()))
        inv.append(int((t == a).sum()))
        diag = tuple([a] * n)
        inv.append(int(t[diag] == a))
    return tuple(inv)


def find_isomorphism(a: FinitePartialAlgebra, b: FinitePartialAlgebra) -> tuple[int, ...] | None:
    """Return an isomorphism ``a -> b`` as a tuple, or None.

    Plain backtracking over elements in index order with an invariant-based
    candidate filter; the first isomorphism found is returned.
    """
    if a.size != b.size or a.signature != b.signature:
        return None
    n = a.size
    inv_a = [_element_invariant(a, i) for i in range(n)]
    inv_b = [_element_invariant(b, i) for i in range(n)]
    if sorted(inv_a) != sorted(inv_b):
        return None
    for k in range(len(a.ops)):
        if a.signature[k] == 0 and (a.ops[k] == UNDEF) != (b.ops[k] == UNDEF):
            return None

    cells_a = [list(a.arg_tuples(k)) for k in range(len(a.ops))]
    phi = [UNDEF] * n
    used = [False] * n

    def consistent(i: int) -> bool:
        # check every cell that became fully mapped when i was assigned
        for k, tuples in enumerate(cells_a):
            ta, tb = a.ops[k], b.ops[k]
            if a.signature[k] == 0:
                if int(ta) == i and phi[i] != int(tb):
                    return False
                continue
            for args in tuples:
                if max(args) > i:
                    continue
                va = int(ta[args])
                if i not in args and va != i:
                    continue
                vb = int(tb[tuple(phi[x] for x in args)])
                if (va == UNDEF) != (vb == UNDEF):
                    return False
                if va == UNDEF:
                    continue
                if va <= i:
                    if phi[va] != vb:
                        return False
                elif used[vb]:
                    return False
        return True

    def search(i: int) -> bool:
        if i == n:
            return True
        for j in range(n):
            if used[j] or inv_a[i] != inv_b[j]:
                continue
            phi[i] = j
            used[j] = True
            if consistent(i) and search(i + 1):
                return True
            used[j] = False
            phi[i] = UNDEF
        return False

    if search(0):
        return tuple(phi)
    return None


def is_isomorphism(phi: Sequence[int], a: FinitePartialAlgebra, b: FinitePartialAlgebra) -> bool:
    if sorted(phi) != list(range(b.size)) or a.size != b.size:
        return False
    inv = [0] * len(phi)
    for i, j in enumerate(phi):
        inv[j] = i
    return is_homomorphism(phi, a, b) and is_homomorphism(inv, b, a)
