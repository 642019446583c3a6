"""Instance generators for property tests, acceptance runs and experiments.

Everything takes a ``numpy.random.Generator`` so corpora are reproducible
from a seed. Partial actions on sets are restrictions of global actions
(every partial action arises this way). Semigroup actions come from three
sources: an involutive automorphism of an ideal (order-2 groups, both
verdicts), pullbacks of those along a surjection onto the order-2 group,
and restrictions of actions by automorphisms to ideals (always
globalizable).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .actions import PartialAction, restrict_action
from .algebras import AlgebraPartialAction, check_condition_31
from .semigroups import IdealPartialAction
from .structures import (
    UNDEF,
    FiniteGroup,
    FinitePartialAlgebra,
    FiniteSemigroup,
    congruence_closure,
    cyclic_group,
    klein_four,
    quotient,
    symmetric_group,
)

# --- groups and group actions on sets -----------------------------------------------


@lru_cache(maxsize=None)
def small_groups(max_order: int = 6) -> tuple[FiniteGroup, ...]:
    out = [cyclic_group(n) for n in range(1, max_order + 1)]
    if max_order >= 4:
        out.append(klein_four())
    if max_order >= 6:
        out.append(symmetric_group(3))
    return tuple(out)


def subgroups(g: FiniteGroup) -> list[tuple[int, ...]]:
    """All subgroups, as sorted element tuples (brute force over subsets)."""
    e = g.identity
    others = [a for a in range(g.size) if a != e]
    out = []
    for r in range(len(others) + 1):
        for combo in itertools.combinations(others, r):
            h = set(combo) | {e}
            if all(g.op(a, b) in h for a in h for b in h):
                out.append(tuple(sorted(h)))
    return out


def coset_action(g: FiniteGroup, h: Sequence[int]) -> np.ndarray:
    """Table of ``G`` acting on left cosets ``aH`` by left multiplication."""
    cosets: list[frozenset] = []
    index = {}
    for a in range(g.size):
        c = frozenset(g.op(a, b) for b in h)
        if c not in index:
            index[c] = len(cosets)
            cosets.append(c)
    table = np.empty((g.size, len(cosets)), dtype=np.int64)
    for x in range(g.size):
        for i, c in enumerate(cosets):
            table[x, i] = index[frozenset(g.op(x, a) for a in c)]
    return table


def random_global_action(rng: np.random.Generator, g: FiniteGroup, max_size: int) -> PartialAction:
    """A disjoint union of coset spaces with at most ``max_size`` points (at least one orbit)."""
    subs = subgroups(g)
    tables = []
    size = 0
    while True:
        h = subs[rng.integers(len(subs))]
        t = coset_action(g, h)
        if tables and size + t.shape[1] > max_size:
            break
        if not tables and t.shape[1] > max_size:
            continue
        tables.append(t + size)
        size += t.shape[1]
        if rng.random() < 0.35:
            break
    return PartialAction(g, np.concatenate(tables, axis=1))


def random_partial_action(
    rng: np.random.Generator, g: FiniteGroup, max_size: int = 6, global_size: int | None = None
) -> PartialAction:
    glob = random_global_action(rng, g, global_size or 2 * max_size)
    k = int(rng.integers(1, min(max_size, glob.size) + 1))
    subset = sorted(rng.choice(glob.size, size=k, replace=False).tolist())
    return restrict_action(glob, subset)


# --- semigroups ----------------------------------------------------------------------


def _canonical(mul: np.ndarray) -> bytes:
    n = mul.shape[0]
    best = None
    for p in itertools.permutations(range(n)):
        p = np.array(p)
        inv = np.argsort(p)
        # relabel a -> p[a]
        t = p[mul[inv[:, None], inv[None, :]]]
        key = t.tobytes()
        if best is None or key < best:
            best = key
    return best


def _associative_tables(n: int) -> Iterator[list[list[int]]]:
    """Backtracking over Cayley tables, pruning on partially filled triples."""
    mul = [[-1] * n for _ in range(n)]
    cells = [(a, b) for a in range(n) for b in range(n)]

    def consistent() -> bool:
        for a in range(n):
            for b in range(n):
                ab = mul[a][b]
                if ab < 0:
                    continue
                for c in range(n):
                    bc = mul[b][c]
                    if bc < 0:
                        continue
                    left, right = mul[ab][c], mul[a][bc]
                    if left >= 0 and right >= 0 and left != right:
                        return False
        return True

    def rec(i: int):
        if i == len(cells):
            yield [row[:] for row in mul]
            return
        a, b = cells[i]
        for v in range(n):
            mul[a][b] = v
            if consistent():
                yield from rec(i + 1)
        mul[a][b] = -1

    yield from rec(0)


@lru_cache(maxsize=None)
def all_semigroups(n: int) -> tuple[FiniteSemigroup, ...]:
    """Every semigroup of order ``n <= 4`` up to isomorphism (1, 5, 24, 188)."""
    if not 1 <= n <= 4:
        raise ValueError("enumeration is limited to orders 1..4")
    found = {}
    for tab in _associative_tables(n):
        mul = np.array(tab, dtype=np.int64)
        found.setdefault(_canonical(mul), mul)
    return tuple(FiniteSemigroup(found[k]) for k in sorted(found))


@lru_cache(maxsize=None)
def nilpotent3_semigroups(n: int) -> tuple[FiniteSemigroup, ...]:
    """Order-``n`` semigroups with zero ``0`` and ``S^3 = 0``, up to isomorphism.

    Elements ``1..k`` are generators whose pairwise products land in
    ``{0, k+1..n-1}``; every other product is ``0``, so all triple products
    vanish and associativity is automatic.
    """
    found = {}
    for k in range(1, n):
        gens = list(range(1, k + 1))
        targets = [0] + list(range(k + 1, n))
        for vals in itertools.product(targets, repeat=k * k):
            # every non-generator besides 0 must actually be a product
            if not set(range(k + 1, n)) <= set(vals):
                continue
            mul = np.zeros((n, n), dtype=np.int64)
            mul[np.ix_(gens, gens)] = np.array(vals).reshape(k, k)
            found.setdefault(_canonical(mul), mul)
    return tuple(FiniteSemigroup(found[key]) for key in sorted(found))


def example_semigroup() -> FiniteSemigroup:
    mul = [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
    return FiniteSemigroup(mul, ["0", "u", "v", "t"])


def example_action() -> IdealPartialAction:
    s = example_semigroup()
    pa = PartialAction(cyclic_group(2), [[0, 1, 2, 3], [0, 2, 1, UNDEF]], s.names)
    return IdealPartialAction(pa, s)


def unital01_action() -> IdealPartialAction:
    s = FiniteSemigroup([[0, 0], [0, 1]], ["0", "1"])
    pa = PartialAction(cyclic_group(2), [[0, 1], [0, UNDEF]], s.names)
    return IdealPartialAction(pa, s)


def multiplicative_zn(n: int) -> FiniteSemigroup:
    return FiniteSemigroup([[(a * b) % n for b in range(n)] for a in range(n)], [str(a) for a in range(n)])


def subset_semilattice(k: int) -> FiniteSemigroup:
    """``(P({0..k-1}), intersection)``, subsets as bitmasks."""
    m = 1 << k
    return FiniteSemigroup([[a & b for b in range(m)] for a in range(m)], [format(a, f"0{k}b") for a in range(m)])


def null_semigroup(n: int) -> FiniteSemigroup:
    return FiniteSemigroup(np.zeros((n, n), dtype=np.int64))


def chain_semilattice(n: int) -> FiniteSemigroup:
    return FiniteSemigroup([[min(a, b) for b in range(n)] for a in range(n)])


def semigroup_product(s: FiniteSemigroup, t: FiniteSemigroup) -> FiniteSemigroup:
    pairs = list(itertools.product(range(s.size), range(t.size)))
    idx = {p: i for i, p in enumerate(pairs)}
    mul = [[idx[(s.op(a, c), t.op(b, d))] for (c, d) in pairs] for (a, b) in pairs]
    return FiniteSemigroup(mul, [f"{s.names[a]}{t.names[b]}" for a, b in pairs])


def transformation_semigroup(gens: Sequence[Sequence[int]], max_size: int = 5) -> FiniteSemigroup | None:
    """Closure of ``gens`` under composition (apply left factor first), or ``None`` if too big."""
    elems = [tuple(g) for g in gens]
    seen = set(elems)
    i = 0
    while i < len(elems):
        for b in list(elems):
            for p in (tuple(b[v] for v in elems[i]), tuple(elems[i][v] for v in b)):
                if p not in seen:
                    seen.add(p)
                    elems.append(p)
                    if len(elems) > max_size:
                        return None
        i += 1
    elems.sort()
    idx = {e: k for k, e in enumerate(elems)}
    mul = [[idx[tuple(b[v] for v in a)] for b in elems] for a in elems]
    return FiniteSemigroup(mul)


def random_transformation_semigroup(rng: np.random.Generator, degree: int = 3, max_size: int = 5):
    for _ in range(50):
        k = int(rng.integers(1, 3))
        gens = [rng.integers(degree, size=degree).tolist() for _ in range(k)]
        s = transformation_semigroup(gens, max_size)
        if s is not None:
            return s
    return None


@lru_cache(maxsize=None)
def semigroup_catalogue(max_size: int = 5) -> tuple[FiniteSemigroup, ...]:
    """A fixed, varied list of small semigroups (deterministic)."""
    cat: list[FiniteSemigroup] = []
    for n in range(1, min(4, max_size) + 1):
        cat.extend(all_semigroups(n))
    if max_size >= 5:
        cat.extend(nilpotent3_semigroups(5))
    extra = [
        example_semigroup(),
        multiplicative_zn(4),
        multiplicative_zn(5),
        subset_semilattice(2),
        chain_semilattice(4),
        chain_semilattice(5),
        null_semigroup(4),
        semigroup_product(all_semigroups(2)[0], all_semigroups(2)[-1]),
    ]
    rng = np.random.default_rng(12345)
    for _ in range(40):
        s = random_transformation_semigroup(rng, 3, max_size)
        if s is not None and s.size >= 4:
            extra.append(s)
    seen = {_canonical(s.mul) for s in cat}
    for s in extra:
        if s.size > max_size:
            continue
        key = _canonical(s.mul)
        if key not in seen:
            seen.add(key)
            cat.append(s)
    return tuple(cat)


def ideals(s: FiniteSemigroup) -> list[tuple[int, ...]]:
    """Nonempty two-sided ideals (brute force over subsets)."""
    out = []
    for r in range(1, s.size + 1):
        for combo in itertools.combinations(range(s.size), r):
            if s.is_ideal(combo):
                out.append(combo)
    return out


def subsemigroup(s: FiniteSemigroup, subset: Sequence[int]) -> FiniteSemigroup:
    subset = list(subset)
    pos = {a: i for i, a in enumerate(subset)}
    mul = [[pos[s.op(a, b)] for b in subset] for a in subset]
    return FiniteSemigroup(mul, [s.names[a] for a in subset])


def automorphisms(s: FiniteSemigroup) -> list[tuple[int, ...]]:
    out = []
    m = s.mul
    for p in itertools.permutations(range(s.size)):
        pa = np.array(p)
        if np.array_equal(pa[m], m[pa[:, None], pa[None, :]]):
            out.append(p)
    return out


def involution_action(s: FiniteSemigroup, ideal: Sequence[int], sigma: Sequence[int]) -> IdealPartialAction:
    """Order-2 group with ``D_x = ideal`` and ``theta_x = sigma`` (a map on ``ideal``)."""
    table = np.full((2, s.size), UNDEF, dtype=np.int64)
    table[0] = np.arange(s.size)
    for a, b in zip(ideal, sigma):
        table[1, a] = b
    return IdealPartialAction(PartialAction(cyclic_group(2), table, s.names), s, validate=False)


def involution_instances(s: FiniteSemigroup) -> Iterator[IdealPartialAction]:
    """Every (ideal, involutive automorphism of the ideal) pair of ``s``."""
    for ideal in ideals(s):
        sub = subsemigroup(s, ideal)
        for p in automorphisms(sub):
            if all(p[p[i]] == i for i in range(len(p))):
                yield involution_action(s, ideal, [ideal[i] for i in p])


def pullback(ipa: IdealPartialAction, g: FiniteGroup, hom: Sequence[int]) -> IdealPartialAction:
    """Precompose with a group homomorphism ``g -> ipa.group``."""
    table = np.stack([ipa.pa.table[hom[x]] for x in range(g.size)])
    return IdealPartialAction(PartialAction(g, table, ipa.pa.names), ipa.sg, validate=False)


def surjections_onto_z2(g: FiniteGroup) -> list[tuple[int, ...]]:
    out = []
    for h in itertools.product(range(2), repeat=g.size):
        if h[g.identity] != 0 or 1 not in h:
            continue
        if all(h[g.op(a, b)] == (h[a] + h[b]) % 2 for a in range(g.size) for b in range(g.size)):
            out.append(h)
    return out


def group_homs_to_permutations(g: FiniteGroup, perms: Sequence[tuple[int, ...]]) -> list[list[tuple[int, ...]]]:
    """Homomorphisms ``g -> perms`` (a group under composition) by brute force on a generating set."""
    n = len(perms[0]) if perms else 0
    ident = tuple(range(n))
    out = []
    for images in itertools.product(perms, repeat=g.size):
        if images[g.identity] != ident:
            continue
        ok = all(
            images[g.op(a, b)] == tuple(images[a][images[b][v]] for v in range(n))
            for a in range(g.size)
            for b in range(g.size)
        )
        if ok:
            out.append(list(images))
        if len(out) >= 64:
            break
    return out


def restricted_global_action(
    s: FiniteSemigroup, g: FiniteGroup, images: Sequence[tuple[int, ...]], ideal: Sequence[int]
) -> IdealPartialAction:
    """Restrict the action of ``g`` on ``s`` by automorphisms ``images`` to ``ideal``."""
    glob = PartialAction(g, np.array(images, dtype=np.int64), s.names)
    pa = restrict_action(glob, ideal)
    return IdealPartialAction(pa, subsemigroup(s, ideal), validate=False)


@dataclass
class SemigroupInstance:
    source: str
    ipa: IdealPartialAction


def semigroup_corpus(
    rng: np.random.Generator, max_size: int = 5, max_group: int = 4, target: int = 240
) -> list[SemigroupInstance]:
    """A mixed corpus of ideal-domain actions with both verdicts.

    The two worked examples come first; the rest is sampled without
    replacement from the three constructions.
    """
    out = [SemigroupInstance("example", example_action()), SemigroupInstance("unital01", unital01_action())]
    cat = semigroup_catalogue(max_size)
    z2_pool: list[IdealPartialAction] = []
    for s in cat:
        z2_pool.extend(involution_instances(s))
    groups = [g for g in small_groups(max_group) if 2 < g.size <= max_group]
    glob_pool: list[tuple[str, IdealPartialAction]] = []
    for s in cat:
        auts = automorphisms(s)
        ids = ideals(s)
        for g in groups:
            homs = group_homs_to_permutations(g, auts)
            for k in rng.permutation(len(homs))[:2]:
                ideal = ids[int(rng.integers(len(ids)))]
                glob_pool.append((f"restricted-global |G|={g.size}", restricted_global_action(s, g, homs[k], ideal)))
    # stratify on the criterion so both verdicts are well represented
    from .semigroups import check_criterion

    holds = [i for i, ipa in enumerate(z2_pool) if check_criterion(ipa).holds]
    fails = sorted(set(range(len(z2_pool))) - set(holds))
    q = target // 4
    pick_f = rng.permutation(fails)[:q].tolist()
    pick_h = rng.permutation(holds)[:q].tolist()
    out.extend(SemigroupInstance("involution", z2_pool[i]) for i in pick_f + pick_h)
    # pullbacks along surjections onto Z2 keep the verdict of the source
    for g in groups:
        for hom in surjections_onto_z2(g):
            for i in pick_f[:6] + pick_h[:6]:
                out.append(SemigroupInstance(f"pullback |G|={g.size}", pullback(z2_pool[i], g, hom)))
    gorder = rng.permutation(len(glob_pool))
    for i in gorder[: max(0, target - len(out))]:
        src, ipa = glob_pool[i]
        out.append(SemigroupInstance(src, ipa))
    return out


# --- partial algebras -----------------------------------------------------------------


def random_partial_algebra(
    rng: np.random.Generator, n: int, signature: Sequence[int], density: float = 0.7
) -> FinitePartialAlgebra:
    ops = []
    for arity in signature:
        shape = (n,) * arity
        t = rng.integers(n, size=shape) if arity else np.array(rng.integers(n))
        mask = rng.random(shape) < density if arity else np.array(rng.random() < density)
        ops.append(np.where(mask, t, UNDEF))
    return FinitePartialAlgebra(n, signature, ops)


def repair_condition_31(pa: PartialAction, alg: FinitePartialAlgebra) -> FinitePartialAlgebra:
    """Undefine offending cells until every ``theta_x`` is an isomorphism between domains."""
    ops = [np.array(t) for t in alg.ops]
    t = pa.table
    changed = True
    while changed:
        changed = False
        for k, arity in enumerate(alg.signature):
            op = ops[k]
            for x in range(pa.group.size):
                for args in (np.argwhere(op != UNDEF) if arity else [()]):
                    args = tuple(int(a) for a in args)
                    val = int(op[args])
                    if val == UNDEF:
                        continue
                    moved = tuple(int(t[x, a]) for a in args)
                    xv = int(t[x, val])
                    if UNDEF in moved or xv == UNDEF:
                        continue
                    if int(op[moved]) != xv:
                        op[args] = UNDEF
                        if op[moved] != UNDEF:
                            op[moved] = UNDEF
                        changed = True
    return FinitePartialAlgebra(alg.size, alg.signature, ops, alg.names)


SIGNATURES = ((2,), (1,), (1, 2), (2, 2), (0, 2), (1, 1), (0,))


def random_algebra_action(
    rng: np.random.Generator, max_size: int = 5, max_group: int = 4, total: bool = False
) -> AlgebraPartialAction | None:
    """A random partial action on a partial algebra compatible with the operations.

    With ``total=True`` the algebra is total and the draw is rejected (``None``)
    when operation compatibility fails.
    """
    gs = [g for g in small_groups(max_group)]
    g = gs[int(rng.integers(len(gs)))]
    pa = random_partial_action(rng, g, max_size)
    sig = SIGNATURES[int(rng.integers(len(SIGNATURES)))]
    alg = random_partial_algebra(rng, pa.size, sig, density=1.0 if total else float(rng.uniform(0.3, 1.0)))
    if total:
        apa = AlgebraPartialAction(pa, alg)
        return apa if check_condition_31(apa, cross_check=False).ok else None
    return AlgebraPartialAction(pa, repair_condition_31(pa, alg))


def equivariant_total_algebra(
    rng: np.random.Generator, glob: PartialAction, signature: Sequence[int]
) -> FinitePartialAlgebra:
    """A total algebra on which the global action ``glob`` acts by automorphisms.

    Values are chosen on orbit representatives of argument tuples among points
    fixed by the tuple's stabilizer, then spread along the orbit.
    """
    g, t, n = glob.group, glob.table, glob.size
    ops = []
    for arity in signature:
        op = np.full((n,) * arity, UNDEF, dtype=np.int64)
        for args in itertools.product(range(n), repeat=arity):
            if op[args] != UNDEF:
                continue
            stab = [x for x in range(g.size) if all(t[x, a] == a for a in args)]
            fixed = [b for b in range(n) if all(t[x, b] == b for x in stab)]
            val = fixed[int(rng.integers(len(fixed)))] if fixed else None
            if val is None:
                raise ValueError("no stabilizer-fixed value")
            for x in range(g.size):
                op[tuple(int(t[x, a]) for a in args)] = t[x, val]
        ops.append(op)
    return FinitePartialAlgebra(n, signature, ops)


def restricted_total_algebra_action(
    rng: np.random.Generator, max_size: int = 5, max_group: int = 4
) -> AlgebraPartialAction | None:
    """Restrict an action by automorphisms of a total algebra to a subalgebra.

    The restriction is operation compatible; its domains may or may not be closed.
    """
    gs = list(small_groups(max_group))
    g = gs[int(rng.integers(len(gs)))]
    glob = random_global_action(rng, g, 8)
    sig = SIGNATURES[int(rng.integers(len(SIGNATURES)))]
    try:
        big = equivariant_total_algebra(rng, glob, sig)
    except ValueError:
        return None
    # subalgebra generated by a random subset
    start = set(rng.choice(glob.size, size=int(rng.integers(1, glob.size + 1)), replace=False).tolist())
    sub = set(start)
    changed = True
    while changed:
        changed = False
        for k in range(len(sig)):
            for args, val in big.cells(k):
                if all(a in sub for a in args) and val not in sub:
                    sub.add(val)
                    changed = True
    if len(sub) > max_size:
        return None
    subset = sorted(sub)
    pos = {a: i for i, a in enumerate(subset)}
    ops = []
    for arity, op in zip(sig, big.ops):
        t = np.full((len(subset),) * arity, UNDEF, dtype=np.int64)
        for args in itertools.product(range(len(subset)), repeat=arity):
            t[args] = pos[int(op[tuple(subset[i] for i in args)])]
        ops.append(t)
    return AlgebraPartialAction(restrict_action(glob, subset), FinitePartialAlgebra(len(subset), sig, ops))


# --- congruence calculus --------------------------------------------------------------


def random_total_algebra(rng: np.random.Generator, n: int, signature: Sequence[int]) -> FinitePartialAlgebra:
    return random_partial_algebra(rng, n, signature, density=1.0)


def random_pairs(rng: np.random.Generator, n: int, k: int) -> list[tuple[int, int]]:
    return [(int(a), int(b)) for a, b in rng.integers(n, size=(k, 2))]


def all_homomorphisms(a: FinitePartialAlgebra, b: FinitePartialAlgebra, limit: int = 50) -> list[tuple[int, ...]]:
    """Brute force over all maps; fine for carriers up to 5."""
    from .structures import is_homomorphism

    out = []
    for phi in itertools.product(range(b.size), repeat=a.size):
        if is_homomorphism(phi, a, b):
            out.append(phi)
            if len(out) >= limit:
                break
    return out


def random_homomorphism(
    rng: np.random.Generator, a: FinitePartialAlgebra
) -> tuple[tuple[int, ...], FinitePartialAlgebra]:
    """A quotient map followed by a random relabelling; target is ``a / theta`` relabelled."""
    c = congruence_closure(a, random_pairs(rng, a.size, int(rng.integers(0, 3))))
    q = quotient(a, c)
    perm = rng.permutation(q.size)
    inv = np.argsort(perm)
    ops = []
    for t in q.ops:
        if t.ndim == 0:
            ops.append(np.array(perm[t]))
        else:
            idx = np.ix_(*[inv] * t.ndim)
            ops.append(perm[t[idx]])
    target = FinitePartialAlgebra(q.size, q.signature, ops)
    phi = tuple(int(perm[c.block_index(x)]) for x in range(a.size))
    return phi, target
