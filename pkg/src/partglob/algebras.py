"""Partial actions on partial algebras, terms, and the congruence Theta.

Terms over a carrier are nested tuples: a leaf is an ``int`` element, an
application is ``(op_index, *children)``; a nullary symbol is ``(op_index,)``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

from .actions import PartialAction, validate_partial_action
from .globalization import UniversalGlobalization, build_universal_globalization, verify_globalization
from .relational import graph_system, is_functional_system, lift_relational_system, validate_relational_action
from .structures import UNDEF, FinitePartialAlgebra, StructureError, ValidationReport, Violation

Term = Union[int, tuple]


@dataclass(frozen=True)
class AlgebraPartialAction:
    pa: PartialAction
    alg: FinitePartialAlgebra

    def __post_init__(self):
        if self.pa.size != self.alg.size:
            raise StructureError(f"action carrier {self.pa.size} != algebra carrier {self.alg.size}")


def _condition_31_violations(apa: AlgebraPartialAction) -> Iterator[tuple]:
    pa, alg = apa.pa, apa.alg
    t = pa.table
    for k in range(len(alg.ops)):
        for x in range(pa.group.size):
            for args, val in alg.cells(k):
                moved = [int(t[x, a]) for a in args]
                xv = int(t[x, val])
                if UNDEF in moved or xv == UNDEF:
                    continue
                lhs = alg.apply(k, moved)
                if lhs != xv:
                    yield (k, x, args, lhs, xv)


def check_condition_31(apa: AlgebraPartialAction, cross_check: bool = True) -> ValidationReport:
    """``theta_x`` is an isomorphism of relative subalgebras ``D_{x^-1} -> D_x``.

    Witness ``(op, x, args, f(x args), x f(args))``; ``UNDEF`` marks an
    undefined side.
    """
    rep = validate_partial_action(apa.pa)
    vrep = apa.alg.validate()
    rep.errors.extend(vrep.errors)
    rep.subject = "algebra partial action"
    if rep.errors or rep.violations:
        return rep
    w = next(_condition_31_violations(apa), None)
    if w is not None:
        rep.violations.append(Violation("operation-compatibility", w))
    if cross_check:
        rrep = validate_relational_action(apa.pa, graph_system(apa.alg))
        if rrep.ok != rep.ok:
            raise AssertionError("condition check disagrees with the graph-relation check")
    return rep


@dataclass(frozen=True)
class GlobalizabilityVerdict:
    globalizable: bool
    # (op, x, args, f(x args), x f(args)) with UNDEF for an undefined side
    witness: tuple | None = None

    def to_json(self, apa: AlgebraPartialAction) -> dict:
        if self.witness is None:
            return {"globalizable": self.globalizable, "witness": None}
        k, x, args, lhs, rhs = self.witness
        nm = apa.alg.names
        show = lambda v: "-" if v == UNDEF else nm[v]  # noqa: E731
        return {
            "globalizable": self.globalizable,
            "witness": {
                "op": k,
                "x": apa.pa.group.names[x],
                "args": [nm[a] for a in args],
                "f(x args)": show(lhs),
                "x f(args)": show(rhs),
            },
        }


def check_globalizability_32(apa: AlgebraPartialAction, cross_check: bool = True) -> GlobalizabilityVerdict:
    """Whenever ``f(a...)`` and every ``x a_i`` are defined, ``f(x a...) = x f(a...)``
    as partial values (both undefined counts as equal).

    With ``cross_check`` the verdict is compared against functionality of the
    lifted graph system on ``A^U``.
    """
    rep = check_condition_31(apa, cross_check=False)
    if not rep.ok:
        raise StructureError(f"not a partial action on the algebra: {rep.to_json()}")
    pa, alg = apa.pa, apa.alg
    t = pa.table
    witness = None
    for k in range(len(alg.ops)):
        for x in range(pa.group.size):
            for args, val in alg.cells(k):
                moved = [int(t[x, a]) for a in args]
                if UNDEF in moved:
                    continue
                lhs = alg.apply(k, moved)
                rhs = int(t[x, val])
                if lhs != rhs:
                    witness = (k, x, args, lhs, rhs)
                    break
            if witness:
                break
        if witness:
            break
    verdict = GlobalizabilityVerdict(witness is None, witness)
    if cross_check:
        lifted = lift_relational_system(pa, graph_system(alg))
        functional, _ = is_functional_system(lifted.system)
        if functional != verdict.globalizable:
            raise AssertionError("condition verdict disagrees with lifted-system functionality")
    return verdict


class NotGlobalizable(ValueError):
    def __init__(self, verdict: GlobalizabilityVerdict):
        super().__init__(f"partial action is not globalizable: witness {verdict.witness}")
        self.verdict = verdict


@dataclass
class AlgebraGlobalization:
    ug: UniversalGlobalization
    algebra: FinitePartialAlgebra


def build_algebra_AU(apa: AlgebraPartialAction) -> AlgebraGlobalization:
    """The partial algebra on ``A^U`` with ``f([x,a1],...,[x,an]) = [x, f(a1..an)]``."""
    verdict = check_globalizability_32(apa, cross_check=False)
    if not verdict.globalizable:
        raise NotGlobalizable(verdict)
    pa, alg = apa.pa, apa.alg
    ug = build_universal_globalization(pa)
    m = ug.size
    ops = []
    for k, n in enumerate(alg.signature):
        tab = np.full((m,) * n, UNDEF, dtype=np.int64)
        for x in range(pa.group.size):
            for args, val in alg.cells(k):
                key = tuple(int(ug.class_of[x, a]) for a in args)
                v = int(ug.class_of[x, val])
                if tab[key] not in (UNDEF, v):
                    raise AssertionError(f"lifted operation {k} is not functional at {key}")
                tab[key] = v
        ops.append(tab)
    au = FinitePartialAlgebra(m, alg.signature, ops, ug.names())

    glob = ug.as_action()
    ok, problems = verify_globalization(ug.embedding, pa, glob)
    if not ok:
        raise AssertionError(f"[1,-] is not a globalization: {problems}")
    # theta^U acts by automorphisms
    for k in range(len(ops)):
        for x in range(pa.group.size):
            for args, val in au.cells(k):
                moved = [int(ug.action[x, c]) for c in args]
                if au.apply(k, moved) != ug.action[x, val]:
                    raise AssertionError(f"theta^U does not preserve operation {k}")
    # [1,A] is a relative subalgebra of A^U
    emb = ug.embedding
    back = {c: a for a, c in enumerate(emb)}
    for k in range(len(ops)):
        for args in alg.arg_tuples(k):
            v = alg.apply(k, args)
            vu = au.apply(k, [emb[a] for a in args])
            restricted = back.get(vu, UNDEF) if vu != UNDEF else UNDEF
            if restricted != v:
                raise AssertionError(f"[1,A] is not a relative subalgebra at op {k}, args {args}")
    return AlgebraGlobalization(ug, au)


# --- terms -------------------------------------------------------------------


def term_length(w: Term) -> int:
    if isinstance(w, int):
        return 1
    if len(w) == 1:
        return 1
    return 1 + sum(term_length(c) for c in w[1:])


def term_depth(w: Term) -> int:
    if isinstance(w, int):
        return 0
    return 1 + max((term_depth(c) for c in w[1:]), default=0)


def term_leaves(w: Term) -> Iterator[int]:
    if isinstance(w, int):
        yield w
    else:
        for c in w[1:]:
            yield from term_leaves(c)


def term_value(alg: FinitePartialAlgebra, w: Term) -> int:
    """The value ``v(w)`` in ``alg``, or ``UNDEF``."""
    if isinstance(w, int):
        return w
    k, children = w[0], w[1:]
    vals = []
    for c in children:
        v = term_value(alg, c)
        if v == UNDEF:
            return UNDEF
        vals.append(v)
    return alg.apply(k, vals)


def theta_normal_form(alg: FinitePartialAlgebra, w: Term) -> Term:
    """Collapse, innermost first, every subterm whose value is defined."""
    if isinstance(w, int):
        return w
    k = w[0]
    children = tuple(theta_normal_form(alg, c) for c in w[1:])
    if all(isinstance(c, int) for c in children):
        v = alg.apply(k, children)
        if v != UNDEF:
            return v
    return (k,) + children


def theta_related(alg: FinitePartialAlgebra, w1: Term, w2: Term) -> bool:
    """Theta by its recursive definition: equal defined values, or same head
    symbol with pairwise related arguments."""
    v1, v2 = term_value(alg, w1), term_value(alg, w2)
    if v1 != UNDEF and v1 == v2:
        return True
    if isinstance(w1, int) or isinstance(w2, int):
        return False
    if w1[0] != w2[0] or len(w1) != len(w2):
        return False
    return all(theta_related(alg, a, b) for a, b in zip(w1[1:], w2[1:]))


def extend_action_to_terms(apa: AlgebraPartialAction, x: int, w: Term) -> Term | None:
    """Act letterwise; ``None`` when some leaf cannot be moved by ``x``."""
    t = apa.pa.table
    if isinstance(w, int):
        v = int(t[x, w])
        return None if v == UNDEF else v
    out = [w[0]]
    for c in w[1:]:
        m = extend_action_to_terms(apa, x, c)
        if m is None:
            return None
        out.append(m)
    return tuple(out)


def enumerate_terms(signature: Sequence[int], leaves: Sequence[int], depth: int) -> list[Term]:
    """All terms of depth at most ``depth``; grows fast, keep inputs tiny."""
    level: list[Term] = list(leaves)
    for _ in range(depth):
        nxt = list(leaves)
        for k, n in enumerate(signature):
            if n == 0:
                nxt.append((k,))
            else:
                nxt.extend((k,) + combo for combo in itertools.product(level, repeat=n))
        level = list(dict.fromkeys(nxt))
    return level


_TOKEN = re.compile(r"\s*(f\d+|\(|\)|,|[^\s(),]+)")


def parse_term(text: str, names: Sequence[str]) -> Term:
    """Prefix syntax with operation indices, e.g. ``f0(f0(u,t),v)``; ``f1`` alone is nullary."""
    tokens = [m.group(1) for m in _TOKEN.finditer(text)]
    pos = 0

    def take() -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError(f"unexpected end of term {text!r}")
        tok = tokens[pos]
        pos += 1
        return tok

    def parse() -> Term:
        tok = take()
        if re.fullmatch(r"f\d+", tok) and tok not in names:
            k = int(tok[1:])
            if pos < len(tokens) and tokens[pos] == "(":
                take()
                children = [parse()]
                while True:
                    sep = take()
                    if sep == ")":
                        break
                    if sep != ",":
                        raise ValueError(f"expected ',' or ')' in {text!r}")
                    children.append(parse())
                return (k,) + tuple(children)
            return (k,)
        if tok in "(),":
            raise ValueError(f"unexpected {tok!r} in {text!r}")
        try:
            return names.index(tok)
        except ValueError:
            raise ValueError(f"unknown element {tok!r} in {text!r}") from None

    w = parse()
    if pos != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return w


def format_term(w: Term, names: Sequence[str]) -> str:
    if isinstance(w, int):
        return names[w]
    if len(w) == 1:
        return f"f{w[0]}"
    return f"f{w[0]}(" + ",".join(format_term(c, names) for c in w[1:]) + ")"


def check_term_signature(w: Term, signature: Sequence[int], size: int) -> None:
    if isinstance(w, int):
        if not 0 <= w < size:
            raise StructureError(f"leaf {w} out of range")
        return
    k = w[0]
    if not 0 <= k < len(signature) or len(w) - 1 != signature[k]:
        raise StructureError(f"operation f{k} used with {len(w) - 1} arguments")
    for c in w[1:]:
        check_term_signature(c, signature, size)
