"""Partial actions on finite semigroups whose domains are ideals.

Words over the classes of ``S^U`` are rewritten by
``w [x,s][x,t] w'  ->  w [x,st] w'``. Globalizability is decided by the
identity ``x(x^-1(su)t) = s x(x^-1(u)t)``; the rewriting engine gives two
independent routes to the same verdict (critical pairs and exhaustive
normal-form agreement) plus a bounded search for letters that collapse.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .actions import PartialAction
from .algebras import AlgebraPartialAction, check_condition_31
from .globalization import UniversalGlobalization, build_universal_globalization, verify_globalization
from .structures import UNDEF, FiniteSemigroup, StructureError, ValidationReport, Violation, ideal_violation
from .words import WordGraph


class IdealPartialAction:
    """A partial action of a finite group on a finite semigroup."""

    def __init__(self, pa: PartialAction, sg: FiniteSemigroup, validate: bool = True):
        if pa.size != sg.size:
            raise StructureError(f"action carrier {pa.size} != semigroup size {sg.size}")
        self.pa = pa
        self.sg = sg
        self.group = pa.group
        if validate:
            srep = sg.validate()
            srep.raise_if_invalid()
            rep = check_condition_31(self.apa)
            rep.raise_if_invalid()

    @property
    def apa(self) -> AlgebraPartialAction:
        return AlgebraPartialAction(self.pa, self.sg.as_algebra())

    @cached_property
    def ug(self) -> UniversalGlobalization:
        return build_universal_globalization(self.pa, validate=False)

    @cached_property
    def slot_products(self) -> list[np.ndarray]:
        """``P[x][c, d] = [x, s t]`` when ``c = [x,s]`` and ``d = [x,t]``, else ``UNDEF``."""
        ug, mul = self.ug, self.sg.mul
        out = []
        for x in range(self.group.size):
            col = ug.slot[:, x]
            P = np.full((ug.size, ug.size), UNDEF, dtype=np.int64)
            have = np.flatnonzero(col != UNDEF)
            if len(have):
                s = col[have]
                prod = mul[s[:, None], s[None, :]]
                P[np.ix_(have, have)] = ug.class_of[x][prod]
            out.append(P)
        return out

    def names(self) -> list[str]:
        return self.ug.names()

    def __repr__(self) -> str:
        return f"IdealPartialAction(|G|={self.group.size}, |S|={self.sg.size})"


def check_ideal_domains(ipa: IdealPartialAction) -> ValidationReport:
    """Witness ``(x, side, s, d, product)`` with ``d in D_x`` and the product outside."""
    rep = ValidationReport("ideal domains")
    for x in range(ipa.group.size):
        w = ideal_violation(ipa.sg, ipa.pa.domain(x))
        if w is not None:
            side, s, d, p = w
            rep.violations.append(Violation("ideal", (x, side, s, d, p)))
            break
    return rep


def _require_ideals(ipa: IdealPartialAction) -> None:
    rep = check_ideal_domains(ipa)
    if not rep.ok:
        raise StructureError(f"domains are not ideals: {rep.violations[0].witness}")


@dataclass(frozen=True)
class CriterionWitness:
    x: int
    u: int
    s: int
    t: int
    lhs: int
    rhs: int

    def to_json(self, ipa: IdealPartialAction) -> dict:
        nm = ipa.sg.names
        return {
            "x": ipa.group.names[self.x],
            "u": nm[self.u],
            "s": nm[self.s],
            "t": nm[self.t],
            "lhs": nm[self.lhs],
            "rhs": nm[self.rhs],
        }


@dataclass
class CriterionVerdict:
    holds: bool
    witness: CriterionWitness | None = None
    violations: list[CriterionWitness] = field(default_factory=list)


def criterion_sides(ipa: IdealPartialAction, x: int) -> tuple[np.ndarray, np.ndarray, list[int]]:
    """Arrays ``lhs[u, s, t]`` and ``rhs[u, s, t]`` over ``u in D_x`` (returned too)."""
    g, t_, mul = ipa.group, ipa.pa.table, ipa.sg.mul
    xi = g.inverse(x)
    dom = ipa.pa.domain(x)
    u = np.array(dom, dtype=np.int64)
    su = mul[:, u].T  # [u, s]
    inner = t_[xi][su]  # x^-1(su)
    lhs = t_[x][mul[inner[:, :, None], np.arange(ipa.sg.size)[None, None, :]]]
    right = t_[x][mul[t_[xi][u][:, None], np.arange(ipa.sg.size)[None, :]]]  # x(x^-1(u)t), [u, t]
    rhs = mul[np.arange(ipa.sg.size)[None, :, None], right[:, None, :]]
    if (lhs == UNDEF).any() or (rhs == UNDEF).any():
        raise AssertionError("criterion sides undefined; domains must be ideals")
    return lhs, rhs, dom


def _violations_for(ipa: IdealPartialAction, x: int, first_only: bool) -> list[CriterionWitness]:
    lhs, rhs, dom = criterion_sides(ipa, x)
    bad = np.argwhere(lhs != rhs)
    if first_only:
        bad = bad[:1]
    return [
        CriterionWitness(x, dom[i], int(s), int(t), int(lhs[i, s, t]), int(rhs[i, s, t])) for i, s, t in bad
    ]


def _violations_job(args):
    pa_table, group_mul, group_names, sg_mul, x, first_only = args
    from .structures import FiniteGroup

    g = FiniteGroup(group_mul, group_names)
    ipa = IdealPartialAction(PartialAction(g, pa_table), FiniteSemigroup(sg_mul), validate=False)
    return _violations_for(ipa, x, first_only)


def check_criterion(ipa: IdealPartialAction, all_violations: bool = False, jobs: int = 1) -> CriterionVerdict:
    """Exhaustive check over ``x in G, u in D_x, s, t in S``.

    The reported witness is the first violation in ``(x, u, s, t)`` index
    order regardless of ``jobs``.
    """
    _require_ideals(ipa)
    xs = list(range(ipa.group.size))
    first_only = not all_violations
    if jobs > 1:
        payload = [
            (ipa.pa.table, ipa.group.mul, ipa.group.names, ipa.sg.mul, x, first_only) for x in xs
        ]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_x = list(pool.map(_violations_job, payload))
    else:
        per_x = [_violations_for(ipa, x, first_only) for x in xs]
    found = sorted(
        itertools.chain.from_iterable(per_x), key=lambda w: (w.x, w.u, w.s, w.t)
    )
    return CriterionVerdict(not found, found[0] if found else None, found if all_violations else found[:1])


# --- sufficient conditions -----------------------------------------------------


@dataclass
class DomainProperties:
    x: int
    idempotent: bool
    weakly_reductive: bool
    unit: int | None  # central idempotent e with eS = D_x

    @property
    def unital(self) -> bool:
        return self.unit is not None


@dataclass
class SufficientConditions:
    domains: list[DomainProperties]
    identity: int
    inverse: bool

    def _others(self):
        return [d for d in self.domains if d.x != self.identity]

    @property
    def all_idempotent(self) -> bool:
        return all(d.idempotent for d in self._others())

    @property
    def all_weakly_reductive(self) -> bool:
        return all(d.weakly_reductive for d in self._others())

    @property
    def all_unital(self) -> bool:
        """Every ``D_x`` with ``x != 1`` is unital."""
        return all(d.unital for d in self._others())

    @property
    def all_unital_including_identity(self) -> bool:
        return all(d.unital for d in self.domains)

    def to_json(self, ipa: IdealPartialAction) -> dict:
        nm = ipa.sg.names
        return {
            "inverse": self.inverse,
            "domains": {
                ipa.group.names[d.x]: {
                    "idempotent": d.idempotent,
                    "weakly_reductive": d.weakly_reductive,
                    "unit": None if d.unit is None else nm[d.unit],
                }
                for d in self.domains
            },
        }


def is_idempotent_subset(sg: FiniteSemigroup, dom: Sequence[int]) -> bool:
    return sg.products(dom, dom) == set(dom)


def is_weakly_reductive_subset(sg: FiniteSemigroup, dom: Sequence[int]) -> bool:
    mul = sg.mul
    d = np.array(dom, dtype=np.int64)
    for a, b in itertools.combinations(dom, 2):
        if np.array_equal(mul[d, a], mul[d, b]) and np.array_equal(mul[a, d], mul[b, d]):
            return False
    return True


def find_unit(sg: FiniteSemigroup, dom: Sequence[int]) -> int | None:
    """The central idempotent ``e`` with ``eS = dom``, if any."""
    target = set(dom)
    units = [
        e
        for e in sg.idempotents()
        if sg.is_central(e) and {int(v) for v in sg.mul[e]} == target
    ]
    if len(set(units)) > 1:
        raise AssertionError(f"several identities for one unital ideal: {units}")
    return units[0] if units else None


def check_sufficient_conditions(ipa: IdealPartialAction) -> SufficientConditions:
    _require_ideals(ipa)
    sg = ipa.sg
    doms = []
    for x in range(ipa.group.size):
        dom = ipa.pa.domain(x)
        doms.append(
            DomainProperties(
                x,
                is_idempotent_subset(sg, dom),
                is_weakly_reductive_subset(sg, dom),
                find_unit(sg, dom) if dom else None,
            )
        )
    return SufficientConditions(doms, ipa.group.identity, sg.is_inverse())


# --- rewriting ---------------------------------------------------------------


@dataclass(frozen=True)
class RewriteStep:
    position: int
    direction: str  # "reduce" or "expand"
    slot: int
    factors: tuple[int, int]
    word: tuple[int, ...]  # the word after this step


@dataclass
class RewriteTrace:
    start: tuple[int, ...]
    steps: list[RewriteStep] = field(default_factory=list)

    @property
    def end(self) -> tuple[int, ...]:
        return self.steps[-1].word if self.steps else self.start

    def to_json(self, ipa: IdealPartialAction) -> dict:
        names = ipa.names()
        sn, gn = ipa.sg.names, ipa.group.names
        fmt = lambda w: "".join(names[c] for c in w)  # noqa: E731
        return {
            "start": fmt(self.start),
            "end": fmt(self.end),
            "steps": [
                {
                    "position": st.position,
                    "direction": st.direction,
                    "slot": gn[st.slot],
                    "factors": [sn[st.factors[0]], sn[st.factors[1]]],
                    "word": fmt(st.word),
                }
                for st in self.steps
            ],
        }


def parse_word(ipa: IdealPartialAction, text: str) -> tuple[int, ...]:
    """``"[1,v][1,t]"`` to a tuple of class indices."""
    text = text.strip()
    if not text:
        raise ValueError("empty word")
    parts = []
    depth = 0
    cur = ""
    for ch in text:
        if ch.isspace():
            continue
        cur += ch
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth == 0:
                parts.append(cur)
                cur = ""
    if cur or depth:
        raise ValueError(f"bad word {text!r}")
    return tuple(ipa.ug.parse_class(p) for p in parts)


def format_word(ipa: IdealPartialAction, word: Sequence[int]) -> str:
    names = ipa.names()
    return "".join(names[c] for c in word)


def _check_letters(ipa: IdealPartialAction, word: Sequence[int]) -> tuple[int, ...]:
    word = tuple(int(c) for c in word)
    if not word:
        raise ValueError("words are nonempty")
    for c in word:
        if not 0 <= c < ipa.ug.size:
            raise ValueError(f"letter {c} is not a class of this action's S^U")
    return word


def normalize_word(ipa: IdealPartialAction, word: Sequence[int]) -> tuple[tuple[int, ...], RewriteTrace]:
    """Reduce the leftmost reducible pair, through the least common slot, until stuck."""
    word = _check_letters(ipa, word)
    ug, mul = ipa.ug, ipa.sg.mul
    trace = RewriteTrace(word)
    while True:
        step = None
        for i in range(len(word) - 1):
            c, d = word[i], word[i + 1]
            for x in range(ipa.group.size):
                s, t = ug.slot[c, x], ug.slot[d, x]
                if s != UNDEF and t != UNDEF:
                    new = int(ug.class_of[x, mul[s, t]])
                    word = word[:i] + (new,) + word[i + 2 :]
                    step = RewriteStep(i, "reduce", x, (int(s), int(t)), word)
                    break
            if step:
                break
        if step is None:
            return word, trace
        trace.steps.append(step)


def one_step_reducts(ipa: IdealPartialAction, word: tuple[int, ...]) -> list[tuple[int, ...]]:
    out = []
    for i in range(len(word) - 1):
        for P in ipa.slot_products:
            p = int(P[word[i], word[i + 1]])
            if p != UNDEF:
                out.append(word[:i] + (p,) + word[i + 2 :])
    return list(dict.fromkeys(out))


def all_normal_forms(ipa: IdealPartialAction, word: Sequence[int], _memo=None) -> frozenset:
    """Every normal form reachable from ``word`` under any strategy (memoized DFS)."""
    word = tuple(word)
    memo = {} if _memo is None else _memo
    if word in memo:
        return memo[word]
    reducts = one_step_reducts(ipa, word)
    if not reducts:
        res = frozenset([word])
    else:
        res = frozenset().union(*(all_normal_forms(ipa, r, memo) for r in reducts))
    memo[word] = res
    return res


@dataclass
class CriticalPair:
    word: tuple[int, ...]
    left: tuple[int, ...]
    right: tuple[int, ...]
    common: tuple[int, ...] | None  # a common reduct, None if not joinable


@dataclass
class ConfluenceVerdict:
    confluent: bool
    checked: int
    failure: CriticalPair | None = None
    certificates: list[CriticalPair] = field(default_factory=list)

    def to_json(self, ipa: IdealPartialAction) -> dict:
        out = {"weakly_confluent": self.confluent, "critical_pairs": self.checked}
        if self.failure is not None:
            f = self.failure
            out["failure"] = {
                "word": format_word(ipa, f.word),
                "left": format_word(ipa, f.left),
                "right": format_word(ipa, f.right),
            }
        return out


def _reducts_closure(ipa: IdealPartialAction, word: tuple[int, ...]) -> set[tuple[int, ...]]:
    seen = {word}
    stack = [word]
    while stack:
        w = stack.pop()
        for r in one_step_reducts(ipa, w):
            if r not in seen:
                seen.add(r)
                stack.append(r)
    return seen


def check_weak_confluence(
    ipa: IdealPartialAction, cross_check: bool = True, certificates: bool = False
) -> ConfluenceVerdict:
    """Enumerate every overlap of two redexes and test joinability.

    Overlaps are ``[x,s][x,u][y,t]`` with ``[x,u] = [y,v]`` (the middle
    letter used through two slots), and a single pair reducible through two
    different slots. The reported failure is the first in enumeration order.
    """
    _require_ideals(ipa)
    ug = ipa.ug
    P = ipa.slot_products
    G = ipa.group.size
    closure_cache: dict[tuple, set] = {}

    def closure(w):
        if w not in closure_cache:
            closure_cache[w] = _reducts_closure(ipa, w)
        return closure_cache[w]

    checked = 0
    certs: list[CriticalPair] = []
    failure = None
    with_slot = [np.flatnonzero(ug.slot[:, x] != UNDEF) for x in range(G)]
    for c in range(ug.size):
        slots = [x for x in range(G) if ug.slot[c, x] != UNDEF]
        # a pair reducible through two slots
        for d in range(ug.size):
            for x, y in itertools.combinations(slots, 2):
                if P[x][c, d] == UNDEF or P[y][c, d] == UNDEF:
                    continue
                checked += 1
                left, right = (int(P[x][c, d]),), (int(P[y][c, d]),)
                cp = CriticalPair((c, d), left, right, left if left == right else None)
                if cp.common is None and failure is None:
                    failure = cp
                elif certificates:
                    certs.append(cp)
        # overlapping redexes around the middle letter c
        for x in slots:
            for y in slots:
                for l in with_slot[x]:
                    for r in with_slot[y]:
                        checked += 1
                        word = (int(l), c, int(r))
                        left = (int(P[x][l, c]), int(r))
                        right = (int(l), int(P[y][c, r]))
                        common = sorted(closure(left) & closure(right), key=lambda w: (len(w), w))
                        cp = CriticalPair(word, left, right, common[0] if common else None)
                        if cp.common is None:
                            if failure is None:
                                failure = cp
                        elif certificates:
                            certs.append(cp)
    verdict = ConfluenceVerdict(failure is None, checked, failure, certs)
    if cross_check:
        crit = check_criterion(ipa)
        if crit.holds != verdict.confluent:
            raise AssertionError("weak confluence verdict disagrees with the criterion")
    return verdict


@dataclass
class NormalFormVerdict:
    unique: bool
    max_len: int
    word: tuple[int, ...] | None = None
    normal_forms: tuple[tuple[int, ...], ...] = ()


def unique_normal_forms(ipa: IdealPartialAction, max_len: int = 5) -> NormalFormVerdict:
    """Do all reduction strategies agree on every word of length <= ``max_len``?

    Lengths are processed in increasing order. Once every shorter word has a
    single normal form, the normal forms of a word are exactly those of its
    one-step reducts, so agreement is a vectorized comparison over all words
    of the current length.
    """
    _require_ideals(ipa)
    m = ipa.ug.size
    P = ipa.slot_products
    offset = [0, 0]
    for k in range(1, max_len + 1):
        offset.append(offset[-1] + m**k)

    def decode(node: int) -> tuple[int, ...]:
        k = 1
        while offset[k + 1] <= node:
            k += 1
        code = node - offset[k]
        out = []
        for _ in range(k):
            out.append(code % m)
            code //= m
        return tuple(reversed(out))

    prev = np.arange(m, dtype=np.int64)  # normal-form node id of each length-1 word
    big = np.iinfo(np.int64).max
    for k in range(2, max_len + 1):
        codes = np.arange(m**k, dtype=np.int64)
        lo = np.full(m**k, big, dtype=np.int64)
        hi = np.full(m**k, -1, dtype=np.int64)
        for i in range(k - 1):
            li = (codes // m ** (k - 1 - i)) % m
            lj = (codes // m ** (k - 2 - i)) % m
            prefix = codes // m ** (k - i)
            suffix = codes % m ** (k - 2 - i)
            for Px in P:
                prod = Px[li, lj]
                ok = prod != UNDEF
                red = (prefix * m + prod) * m ** (k - 2 - i) + suffix
                nf = np.where(ok, prev[np.where(ok, red, 0)], -1)
                lo = np.where(ok, np.minimum(lo, nf), lo)
                hi = np.where(ok, np.maximum(hi, nf), hi)
        clash = np.flatnonzero((hi >= 0) & (lo != hi))
        if len(clash):
            w = int(clash[0])
            return NormalFormVerdict(
                False, max_len, decode(offset[k] + w), (decode(int(lo[w])), decode(int(hi[w])))
            )
        prev = np.where(hi >= 0, lo, offset[k] + codes)
    return NormalFormVerdict(True, max_len)


# --- bounded collapse search --------------------------------------------------


@dataclass
class CollapseWitness:
    letters: tuple[int, int]
    trace: RewriteTrace

    def to_json(self, ipa: IdealPartialAction) -> dict:
        names = ipa.names()
        return {
            "letters": [names[self.letters[0]], names[self.letters[1]]],
            "chain": self.trace.to_json(ipa),
        }


def _step_between(ipa: IdealPartialAction, w: tuple[int, ...], v: tuple[int, ...]) -> RewriteStep:
    ug, mul = ipa.ug, ipa.sg.mul
    longer, shorter, direction = (w, v, "reduce") if len(w) > len(v) else (v, w, "expand")
    for i in range(len(longer) - 1):
        if longer[:i] != shorter[:i] or longer[i + 2 :] != shorter[i + 1 :]:
            continue
        c, d = longer[i], longer[i + 1]
        for x in range(ipa.group.size):
            s, t = ug.slot[c, x], ug.slot[d, x]
            if s != UNDEF and t != UNDEF and ug.class_of[x, mul[s, t]] == shorter[i]:
                return RewriteStep(i, direction, x, (int(s), int(t)), v)
    raise AssertionError(f"no rewrite step between {w} and {v}")


def word_graph(ipa: IdealPartialAction, max_len: int) -> WordGraph:
    return WordGraph(ipa.ug.size, ipa.slot_products, max_len)


def find_collapse_witness(ipa: IdealPartialAction, max_len: int = 4) -> CollapseWitness | None:
    """Search words of length <= ``max_len`` under reductions and expansions for
    two distinct one-letter words in one class.

    Reports the first collapsing component (by least letter), joining its
    greatest letter to its least. ``None`` only means nothing was found
    within the bound.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    _require_ideals(ipa)
    graph = word_graph(ipa, max_len)
    labels = graph.letter_components()
    groups: dict[int, list[int]] = {}
    for c, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(c)
    for members in sorted(groups.values()):
        if len(members) > 1:
            hi, lo = members[-1], members[0]
            chain = graph.path((hi,), (lo,))
            trace = RewriteTrace(chain[0])
            for w, v in zip(chain, chain[1:]):
                trace.steps.append(_step_between(ipa, w, v))
            return CollapseWitness((hi, lo), trace)
    return None


def _same_class(pa: PartialAction, p: tuple[int, int], q: tuple[int, int]) -> bool:
    # (x,a) ~ (y,b) iff (y^-1 x) a = b
    g = pa.group
    (x, a), (y, b) = p, q
    return pa.act(g.op(g.inverse(y), x), a) == b


def verify_trace(ipa: IdealPartialAction, trace: RewriteTrace) -> bool:
    """Replay a trace against the action and multiplication tables.

    Class membership is re-derived from the defining relation of ``~`` on
    ``G x S``; the class tables of ``S^U`` are only used to name letters.
    """
    pa, sg = ipa.pa, ipa.sg
    reps = [cls.rep for cls in ipa.ug.classes]
    word = [reps[c] for c in trace.start]
    for st in trace.steps:
        x, (s, t) = st.slot, st.factors
        i = st.position
        if st.direction == "reduce":
            if i + 1 >= len(word):
                return False
            if not (_same_class(pa, word[i], (x, s)) and _same_class(pa, word[i + 1], (x, t))):
                return False
            word = word[:i] + [(x, sg.op(s, t))] + word[i + 2 :]
        elif st.direction == "expand":
            if i >= len(word) or not _same_class(pa, word[i], (x, sg.op(s, t))):
                return False
            word = word[:i] + [(x, s), (x, t)] + word[i + 1 :]
        else:
            return False
        recorded = [reps[c] for c in st.word]
        if len(recorded) != len(word) or not all(_same_class(pa, p, q) for p, q in zip(word, recorded)):
            return False
    return True


def verify_criterion_witness(ipa: IdealPartialAction, w: CriterionWitness) -> bool:
    """Recompute both sides of the identity by hand from the tables."""
    pa, sg, g = ipa.pa, ipa.sg, ipa.group
    xi = g.inverse(w.x)
    if w.u not in pa.domain(w.x):
        return False
    lhs = pa.act(w.x, sg.op(pa.act(xi, sg.op(w.s, w.u)), w.t))
    rhs = sg.op(w.s, pa.act(w.x, sg.op(pa.act(xi, w.u), w.t)))
    return lhs == w.lhs and rhs == w.rhs and lhs != rhs


# --- unital domains ------------------------------------------------------------


class NotUnital(ValueError):
    pass


@dataclass
class UnitalGlobalization:
    ipa: IdealPartialAction
    semigroup: FiniteSemigroup  # (S^U, *) on the classes of S^U
    embedding: tuple[int, ...]
    units: tuple[int, ...]  # 1_x per group element

    def to_json(self) -> dict:
        names = list(self.semigroup.names)
        return {
            "elements": names,
            "table": [[names[v] for v in row] for row in self.semigroup.mul],
            "embedding": {self.ipa.sg.names[a]: names[c] for a, c in enumerate(self.embedding)},
            "units": {self.ipa.group.names[x]: self.ipa.sg.names[e] for x, e in enumerate(self.units)},
        }


def build_unital_globalization(ipa: IdealPartialAction) -> UnitalGlobalization:
    """``[x,s] * [y,t] = [x, s (x^-1 y)(1_{y^-1 x} t)]`` on ``S^U``.

    Every identity the construction relies on is re-checked on the result.
    """
    conds = check_sufficient_conditions(ipa)
    missing = [ipa.group.names[d.x] for d in conds.domains if not d.unital]
    if missing:
        raise NotUnital(f"D_x is not of the form 1_x S for a central idempotent 1_x: x in {missing}")
    g, pa, sg, ug = ipa.group, ipa.pa, ipa.sg, ipa.ug
    one = tuple(d.unit for d in conds.domains)
    G = g.size

    for x in range(G):
        xi = g.inverse(x)
        for y in range(G):
            lhs = pa.act(x, sg.op(one[xi], one[y]))
            if lhs == UNDEF or lhs != sg.op(one[x], one[g.op(x, y)]):
                raise AssertionError(f"x(1_(x^-1) 1_y) != 1_x 1_(xy) at x={x}, y={y}")

    def star(x: int, s: int, y: int, t: int) -> int:
        z = g.op(g.inverse(x), y)
        inner = pa.act(z, sg.op(one[g.inverse(z)], t))
        return int(ug.class_of[x, sg.op(s, inner)])

    m = ug.size
    table = np.full((m, m), UNDEF, dtype=np.int64)
    for c in range(m):
        for d in range(m):
            values = {
                star(x, s, y, t) for x, s in ug.classes[c].members for y, t in ug.classes[d].members
            }
            if len(values) != 1:
                raise AssertionError(f"* not well defined on {ug.class_name(c)}, {ug.class_name(d)}")
            table[c, d] = values.pop()
    su = FiniteSemigroup(table, ug.names())
    rep = su.validate()
    if not rep.ok:
        raise AssertionError(f"* is not associative: {rep.violations[0].witness}")

    emb = ug.embedding
    for a in range(sg.size):
        for b in range(sg.size):
            if su.op(emb[a], emb[b]) != emb[sg.op(a, b)]:
                raise AssertionError("[1,-] is not a homomorphism")
    if not su.is_ideal(emb):
        raise AssertionError("[1,S] is not an ideal of (S^U, *)")
    for z in range(G):
        act = ug.action[z]
        if not np.array_equal(act[table], table[act[:, None], act[None, :]]):
            raise AssertionError(f"theta^U does not act by automorphisms (z={z})")
    for x in range(G):
        for s in range(sg.size):
            for t in range(sg.size):
                if su.op(ug.class_of[x, s], ug.class_of[x, t]) != ug.class_of[x, sg.op(s, t)]:
                    raise AssertionError("[x,s]*[x,t] != [x,st]")
    ok, problems = verify_globalization(emb, pa, ug.as_action())
    if not ok:
        raise AssertionError(f"not a globalization: {problems}")
    if sg.is_inverse() and not su.is_inverse():
        raise AssertionError("S is inverse but (S^U, *) is not")
    return UnitalGlobalization(ipa, su, emb, one)
