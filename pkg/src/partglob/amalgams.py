"""Generalized amalgams, the amalgam of a partial action, and bounded
embeddability analysis for semigroup amalgams.

An amalgam has copies ``A_i`` with subsets ``A_ij`` of ``A_i`` and bijections
``alpha_ij: A_ij -> A_ji``. Maps are stored as length-``|A_i|`` arrays with
``UNDEF`` outside ``A_ij``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .actions import validate_partial_action
from .algebras import AlgebraPartialAction
from .structures import UNDEF, FinitePartialAlgebra, FiniteSemigroup, StructureError, ValidationReport, Violation
from .words import WordGraph

Algebra = Union[FiniteSemigroup, FinitePartialAlgebra]


def _as_algebra(a: Algebra) -> FinitePartialAlgebra:
    return a.as_algebra() if isinstance(a, FiniteSemigroup) else a


@dataclass
class Amalgam:
    indices: list[str]
    algebras: list[Algebra]
    subsets: list[list[tuple[int, ...]]]  # subsets[i][j] = A_ij, sorted
    alpha: list[list[np.ndarray]]  # alpha[i][j][a] = alpha_ij(a) or UNDEF

    @property
    def n(self) -> int:
        return len(self.indices)

    @property
    def is_semigroup_kind(self) -> bool:
        return all(isinstance(a, FiniteSemigroup) for a in self.algebras)

    def validate(self) -> ValidationReport:
        """The amalgam axioms; witnesses name the pair ``(i, j)`` and the element."""
        rep = ValidationReport("amalgam")
        n = self.n
        if not n:
            rep.errors.append("no indices")
            return rep
        if len({type(a) for a in self.algebras}) != 1:
            rep.errors.append("mixed algebra kinds")
        sigs = {_as_algebra(a).signature for a in self.algebras}
        if len(sigs) != 1:
            rep.errors.append(f"copies have different signatures {sorted(sigs)}")
        for i in range(n):
            size = self.algebras[i].size
            for j in range(n):
                al = self.alpha[i][j]
                if al.shape != (size,):
                    rep.errors.append(f"alpha[{i}][{j}] has shape {al.shape}")
                    return rep
                dom = tuple(int(a) for a in np.flatnonzero(al != UNDEF))
                if dom != tuple(self.subsets[i][j]):
                    rep.errors.append(f"alpha[{i}][{j}] is not defined exactly on A_ij")
                    return rep
                img = al[al != UNDEF]
                if ((img < 0) | (img >= self.algebras[j].size)).any():
                    rep.errors.append(f"alpha[{i}][{j}] leaves A_{j}")
                    return rep
        if rep.errors:
            return rep

        for i in range(n):
            if tuple(self.subsets[i][i]) != tuple(range(self.algebras[i].size)):
                rep.violations.append(Violation("A_ii = A_i", (i,)))
                return rep
            if not np.array_equal(self.alpha[i][i], np.arange(self.algebras[i].size)):
                rep.violations.append(Violation("alpha_ii = id", (i,)))
                return rep
        for i in range(n):
            alg = _as_algebra(self.algebras[i])
            for j in range(n):
                w = alg.subalgebra_violation(self.subsets[i][j])
                if w is not None:
                    rep.violations.append(Violation("subalgebra", (i, j) + w))
                    return rep
                fwd, back = self.alpha[i][j], self.alpha[j][i]
                for a in self.subsets[i][j]:
                    b = int(fwd[a])
                    if back[b] != a:
                        rep.violations.append(Violation("alpha_ji = alpha_ij^-1", (i, j, a)))
                        return rep
                # homomorphism of induced subalgebras; bijectivity and the inverse
                # check above make it an isomorphism
                target = _as_algebra(self.algebras[j])
                for k in range(len(alg.ops)):
                    for args, val in alg.cells(k):
                        if all(fwd[a] != UNDEF for a in args):
                            if target.apply(k, [int(fwd[a]) for a in args]) != fwd[val]:
                                rep.violations.append(Violation("isomorphism", (i, j, k, args)))
                                return rep
                    for args, val in target.cells(k):
                        if all(back[b] != UNDEF for b in args):
                            if alg.apply(k, [int(back[b]) for b in args]) != back[val]:
                                rep.violations.append(Violation("isomorphism", (j, i, k, args)))
                                return rep
        return rep

    def to_json(self) -> dict:
        n = self.n
        return {
            "indices": list(self.indices),
            "intersections": {
                f"{self.indices[i]},{self.indices[j]}": [self.algebras[i].names[a] for a in self.subsets[i][j]]
                for i in range(n)
                for j in range(n)
                if i != j
            },
        }


def amalgam_from_partial_action(obj) -> Amalgam:
    """``A_{x,y} = D_{x^-1 y}`` and ``alpha_{x,y} = theta_{y^-1 x}``, one copy per group element.

    Accepts an ``IdealPartialAction`` (semigroup copies) or an
    ``AlgebraPartialAction``.
    """
    if hasattr(obj, "sg"):
        pa, alg = obj.pa, obj.sg
    elif isinstance(obj, AlgebraPartialAction):
        pa, alg = obj.pa, obj.alg
    else:
        raise TypeError(f"expected a partial action on an algebra, got {type(obj).__name__}")
    rep = validate_partial_action(pa)
    rep.raise_if_invalid()
    g = pa.group
    fa = _as_algebra(alg)
    for x in range(g.size):
        w = fa.subalgebra_violation(pa.domain(x))
        if w is not None:
            raise StructureError(f"D_{g.names[x]} is not a subalgebra: op {w[0]} at {w[1]} gives {w[2]}")
    n = g.size
    subsets = [[tuple(pa.domain(g.op(g.inverse(x), y))) for y in range(n)] for x in range(n)]
    alpha = []
    for x in range(n):
        row = []
        for y in range(n):
            z = g.op(g.inverse(y), x)
            al = np.full(alg.size, UNDEF, dtype=np.int64)
            dom = list(subsets[x][y])
            al[dom] = pa.table[z][dom]
            row.append(al)
        alpha.append(row)
    am = Amalgam(list(g.names), [alg] * n, subsets, alpha)
    arep = am.validate()
    if not arep.ok:
        raise AssertionError(f"amalgam axioms fail: {arep.to_json()}")
    nrep = neumann_conditions(am)
    if not nrep.ok:
        raise AssertionError(f"compatibility conditions fail: {nrep.to_json()}")
    return am


def neumann_conditions(am: Amalgam) -> ValidationReport:
    """``alpha_ij(A_ij & A_ik) = A_ji & A_jk`` and ``alpha_jk o alpha_ij = alpha_ik``
    on ``A_ij & A_ik``, for all triples.

    These are stated for group amalgams; the check applies them verbatim to
    any amalgam, so reports label them as an extension.
    """
    rep = ValidationReport("compatibility conditions (extension to non-group amalgams)")
    n = am.n
    for i in range(n):
        for j in range(n):
            aij = am.alpha[i][j]
            for k in range(n):
                both = sorted(set(am.subsets[i][j]) & set(am.subsets[i][k]))
                img = sorted(int(aij[a]) for a in both)
                expect = sorted(set(am.subsets[j][k]) & set(am.subsets[j][i]))
                if img != expect:
                    rep.violations.append(Violation("intersection", (i, j, k)))
                    return rep
                for a in both:
                    if am.alpha[j][k][aij[a]] != am.alpha[i][k][a]:
                        rep.violations.append(Violation("cocycle", (i, j, k, a)))
                        return rep
    return rep


@dataclass
class EmbeddingVerdict:
    ok: bool
    problems: list[tuple] = field(default_factory=list)


def verify_embedding(am: Amalgam, target: Algebra, maps: Sequence[Sequence[int]]) -> EmbeddingVerdict:
    """Injective homomorphisms ``phi_i`` that agree along ``alpha`` and meet exactly
    in the images of the ``A_ij``.

    Problems are tuples starting with a tag: ``("injective", i, a, b)``,
    ``("homomorphism", i, op, args)``, ``("agreement", i, j, a)``,
    ``("intersection", i, j, value)``.
    """
    tgt = _as_algebra(target)
    problems: list[tuple] = []
    n = am.n
    if len(maps) != n:
        return EmbeddingVerdict(False, [("count", len(maps), n)])
    maps = [tuple(int(v) for v in m) for m in maps]
    for i in range(n):
        src = _as_algebra(am.algebras[i])
        phi = maps[i]
        if len(phi) != src.size or any(not 0 <= v < tgt.size for v in phi):
            problems.append(("map", i))
            continue
        seen: dict[int, int] = {}
        for a, v in enumerate(phi):
            if v in seen:
                problems.append(("injective", i, seen[v], a))
                break
            seen[v] = a
        for k in range(len(src.ops)):
            for args, val in src.cells(k):
                if tgt.apply(k, [phi[a] for a in args]) != phi[val]:
                    problems.append(("homomorphism", i, k, args))
                    break
    if problems:
        return EmbeddingVerdict(False, problems)
    for i in range(n):
        for j in range(n):
            for a in am.subsets[i][j]:
                if maps[j][am.alpha[i][j][a]] != maps[i][a]:
                    problems.append(("agreement", i, j, a))
                    break
            if i < j:
                meet = set(maps[i]) & set(maps[j])
                want = {maps[i][a] for a in am.subsets[i][j]}
                if meet != want:
                    problems.append(("intersection", i, j, min(meet ^ want)))
    return EmbeddingVerdict(not problems, problems)


# --- bounded closure of N ---------------------------------------------------------


@dataclass(frozen=True)
class AmalgamStep:
    position: int
    kind: str  # "reduce", "expand" or "amalgamate"
    copy: int
    data: tuple  # (s, t) for products; (j, a, b) with b = alpha_{copy,j}(a) for amalgamate
    word: tuple[int, ...]  # letter ids after the step


@dataclass
class AmalgamViolation:
    letters: tuple[int, int]
    start: tuple[int, ...]
    steps: list[AmalgamStep]


@dataclass
class EmbeddabilityReport:
    max_len: int
    violation: AmalgamViolation | None

    @property
    def found(self) -> bool:
        return self.violation is not None


class PresentedQuotient:
    """Words over the disjoint union of the copies, modulo the generators of N
    (operation collapse inside a copy and ``a ~ alpha_ij(a)``), closed up to a
    length bound."""

    def __init__(self, am: Amalgam, max_len: int):
        if max_len < 1:
            raise ValueError("max_len must be at least 1")
        if not am.is_semigroup_kind:
            raise ValueError("bounded closure needs semigroup copies")
        self.am = am
        self.max_len = max_len
        self.offsets = np.cumsum([0] + [a.size for a in am.algebras]).tolist()
        L = self.offsets[-1]
        self.num_letters = L
        self.copy_of = np.repeat(np.arange(am.n), [a.size for a in am.algebras])
        self.elem_of = np.concatenate([np.arange(a.size) for a in am.algebras])

        products = []
        for i, sg in enumerate(am.algebras):
            P = np.full((L, L), UNDEF, dtype=np.int64)
            lo, hi = self.offsets[i], self.offsets[i + 1]
            P[lo:hi, lo:hi] = sg.mul + lo
            products.append(P)

        # amalgamation classes of letters
        parent = list(range(L))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i in range(am.n):
            for j in range(am.n):
                for a in am.subsets[i][j]:
                    p, q = find(self.letter(i, a)), find(self.letter(j, int(am.alpha[i][j][a])))
                    if p != q:
                        parent[max(p, q)] = min(p, q)
        canon = np.array([find(a) for a in range(L)], dtype=np.int64)
        self.canonical = canon
        self.graph = WordGraph(L, products, max_len, moves=[canon])

    def letter(self, i: int, a: int) -> int:
        return self.offsets[i] + int(a)

    def letter_name(self, c: int) -> str:
        i, a = int(self.copy_of[c]), int(self.elem_of[c])
        return f"{self.am.algebras[i].names[a]}_{self.am.indices[i]}"

    def violates(self, p: int, q: int) -> bool:
        """Does the merged pair ``(p, q)`` break the amalgam embedding condition?"""
        i, a = int(self.copy_of[p]), int(self.elem_of[p])
        j, b = int(self.copy_of[q]), int(self.elem_of[q])
        return bool(self.am.alpha[i][j][a] != b)

    def _alpha_path(self, p: int, q: int) -> list[tuple[int, int, int, int]]:
        """Shortest list of single ``alpha`` moves from letter ``p`` to ``q``."""
        am = self.am
        prev: dict[int, tuple | None] = {p: None}
        queue = deque([p])
        while queue:
            c = queue.popleft()
            if c == q:
                break
            i, a = int(self.copy_of[c]), int(self.elem_of[c])
            for j in range(am.n):
                b = int(am.alpha[i][j][a])
                if b == UNDEF:
                    continue
                d = self.letter(j, b)
                if d not in prev:
                    prev[d] = (c, i, j, a, b)
                    queue.append(d)
        out = []
        c = q
        while prev[c] is not None:
            c0, i, j, a, b = prev[c]
            out.append((i, j, a, b))
            c = c0
        return out[::-1]

    def _steps_between(self, w: tuple[int, ...], v: tuple[int, ...]) -> list[AmalgamStep]:
        am = self.am
        if len(w) == len(v):
            (i,) = [k for k in range(len(w)) if w[k] != v[k]]
            steps = []
            cur = list(w)
            for ci, j, a, b in self._alpha_path(w[i], v[i]):
                cur[i] = self.letter(j, b)
                steps.append(AmalgamStep(i, "amalgamate", ci, (j, a, b), tuple(cur)))
            return steps
        longer, shorter, kind = (w, v, "reduce") if len(w) > len(v) else (v, w, "expand")
        for i in range(len(longer) - 1):
            if longer[:i] != shorter[:i] or longer[i + 2 :] != shorter[i + 1 :]:
                continue
            p, q = longer[i], longer[i + 1]
            ci = int(self.copy_of[p])
            if ci == self.copy_of[q]:
                s, t = int(self.elem_of[p]), int(self.elem_of[q])
                if self.letter(ci, am.algebras[ci].op(s, t)) == shorter[i]:
                    return [AmalgamStep(i, kind, ci, (s, t), v)]
        raise AssertionError(f"no generating step between {w} and {v}")

    def chain(self, p: int, q: int) -> list[AmalgamStep]:
        words = self.graph.path((p,), (q,))
        steps: list[AmalgamStep] = []
        for w, v in zip(words, words[1:]):
            steps.extend(self._steps_between(w, v))
        return steps


def bounded_embeddability_check(am: Amalgam, max_len: int = 4) -> EmbeddabilityReport:
    """Look for two merged letters ``a in A_i``, ``b in A_j`` with not
    ``(a in A_ij and alpha_ij(a) = b)``.

    A hit certifies that the amalgam does not embed. The reported pair comes
    from the first offending component; within it a pair from one copy (a
    non-injective canonical map) is preferred, joining the copy's greatest
    letter to its least. No hit says nothing beyond the bound.
    """
    pq = PresentedQuotient(am, max_len)
    labels = pq.graph.letter_components()
    comps: dict[int, list[int]] = {}
    for c in range(pq.num_letters):
        comps.setdefault(int(labels[c]), []).append(c)
    for members in sorted(comps.values()):
        if len(members) < 2:
            continue
        by_copy: dict[int, list[int]] = {}
        for c in members:
            by_copy.setdefault(int(pq.copy_of[c]), []).append(c)
        pair = None
        for i in sorted(by_copy):
            if len(by_copy[i]) > 1:
                pair = (by_copy[i][-1], by_copy[i][0])
                break
        if pair is None:
            bad = [(q, p) for p in members for q in members if p < q and pq.violates(p, q)]
            if bad:
                pair = bad[0]
        if pair is not None:
            steps = pq.chain(*pair)
            return EmbeddabilityReport(max_len, AmalgamViolation(pair, (pair[0],), steps))
    return EmbeddabilityReport(max_len, None)


def replay_violation(am: Amalgam, v: AmalgamViolation) -> bool:
    """Re-derive the chain from the amalgam tables alone and confirm the end
    pair breaks the amalgam embedding condition."""
    offsets = np.cumsum([0] + [a.size for a in am.algebras]).tolist()

    def split(c):
        i = int(np.searchsorted(offsets, c, side="right") - 1)
        return i, c - offsets[i]

    word = [split(c) for c in v.start]
    for st in v.steps:
        i = st.position
        if st.kind == "amalgamate":
            j, a, b = st.data
            if word[i] != (st.copy, a) or am.alpha[st.copy][j][a] != b:
                return False
            word[i] = (j, b)
        elif st.kind == "reduce":
            s, t = st.data
            if word[i : i + 2] != [(st.copy, s), (st.copy, t)]:
                return False
            word[i : i + 2] = [(st.copy, am.algebras[st.copy].op(s, t))]
        elif st.kind == "expand":
            s, t = st.data
            if i >= len(word) or word[i] != (st.copy, am.algebras[st.copy].op(s, t)):
                return False
            word[i : i + 1] = [(st.copy, s), (st.copy, t)]
        else:
            return False
        if [split(c) for c in st.word] != word:
            return False
    if len(word) != 1:
        return False
    (i, a), (j, b) = split(v.letters[0]), word[0]
    if split(v.letters[1]) != (j, b):
        return False
    return bool(am.alpha[i][j][a] != b)


def violation_to_json(am: Amalgam, v: AmalgamViolation) -> dict:
    pq_names = []
    for i, alg in enumerate(am.algebras):
        pq_names.extend(f"{n}_{am.indices[i]}" for n in alg.names)
    fmt = lambda w: " ".join(pq_names[c] for c in w)  # noqa: E731
    steps = []
    for st in v.steps:
        d = {"position": st.position, "kind": st.kind, "copy": am.indices[st.copy]}
        names = am.algebras[st.copy].names
        if st.kind == "amalgamate":
            j, a, b = st.data
            d["to_copy"] = am.indices[j]
            d["element"] = names[a]
            d["image"] = am.algebras[j].names[b]
        else:
            d["factors"] = [names[st.data[0]], names[st.data[1]]]
        d["word"] = fmt(st.word)
        steps.append(d)
    return {"letters": [pq_names[c] for c in v.letters], "start": fmt(v.start), "steps": steps}
