import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from partglob.generators import example_semigroup, random_homomorphism, random_pairs, random_total_algebra
from partglob.structures import (
    UNDEF,
    Congruence,
    FiniteGroup,
    FinitePartialAlgebra,
    FiniteSemigroup,
    StructureError,
    InvalidCongruence,
    NotAHomomorphism,
    congruence_closure,
    cyclic_group,
    direct_product,
    find_isomorphism,
    is_congruence,
    is_homomorphism,
    is_isomorphism,
    klein_four,
    preimage_congruence,
    quotient,
    symmetric_group,
    validate_structure,
)


def additive(n):
    return FinitePartialAlgebra(n, (2,), [[[(a + b) % n for b in range(n)] for a in range(n)]])


def all_partitions(n):
    def rec(i, blocks):
        if i == n:
            yield [list(b) for b in blocks]
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(0, [])


def brute_closure(alg, pairs):
    best = None
    for blocks in all_partitions(alg.size):
        c = Congruence.from_blocks(alg.size, blocks)
        if all(c.related(a, b) for a, b in pairs) and is_congruence(alg, c):
            if best is None or c <= best:
                best = c
    return best


# --- validation -------------------------------------------------------------


def test_z2_valid():
    assert cyclic_group(2).validate().ok


def test_example_semigroup_valid():
    assert validate_structure(example_semigroup()).ok


def test_nonassociative_magma_reports_triple():
    # find a 2-element non-associative table by brute force
    for cells in itertools.product(range(2), repeat=4):
        mul = np.array(cells).reshape(2, 2)
        rep = FiniteSemigroup(mul).validate()
        if not rep.ok:
            a, b, c = rep.violations[0].witness
            assert mul[mul[a, b], c] != mul[a, mul[b, c]]
            return
    pytest.fail("no non-associative 2-element table found")


def test_out_of_range_is_structural_error():
    rep = FiniteSemigroup([[0, 5], [1, 0]]).validate()
    assert rep.errors and not rep.violations


def test_ragged_table_rejected():
    with pytest.raises(StructureError):
        FiniteSemigroup([[0, 1], [1]])


def test_group_without_inverses_flagged():
    # the 2-element semilattice {0,1} under min has an identity but 0 has no inverse
    g = FiniteGroup([[0, 0], [0, 1]])
    assert not g.validate().ok


@pytest.mark.parametrize("g", [cyclic_group(5), klein_four(), symmetric_group(3), direct_product(cyclic_group(2), cyclic_group(3))])
def test_standard_groups_valid(g):
    assert g.validate().ok
    for a in range(g.size):
        assert g.op(a, g.inverse(a)) == g.identity


def test_partial_algebra_shape_errors():
    alg = FinitePartialAlgebra(2, (2,), [[0, 1]])
    assert alg.validate().errors


# --- congruences ----------------------------------------------------------------------


def test_closure_empty_is_identity():
    s = example_semigroup().as_algebra()
    assert congruence_closure(s, []) == Congruence.identity(4)


def test_closure_example_u0():
    s = example_semigroup().as_algebra()
    c = congruence_closure(s, [(1, 0)])
    assert c.blocks() == [[0, 1], [2], [3]]


def test_closure_z4():
    c = congruence_closure(additive(4), [(0, 2)])
    assert c.blocks() == [[0, 2], [1, 3]]


def test_quotient_identity_is_isomorphic():
    s = example_semigroup().as_algebra()
    q = quotient(s, Congruence.identity(4))
    assert find_isomorphism(s, q) == (0, 1, 2, 3)


def test_quotient_example_three_elements():
    s = example_semigroup().as_algebra()
    q = quotient(s, congruence_closure(s, [(1, 0)]))
    assert q.size == 3
    assert FiniteSemigroup(q.ops[0]).validate().ok


def test_quotient_z4_is_z2():
    q = quotient(additive(4), congruence_closure(additive(4), [(0, 2)]))
    assert np.array_equal(q.ops[0], [[0, 1], [1, 0]])


def test_quotient_rejects_non_congruence():
    with pytest.raises(InvalidCongruence):
        quotient(additive(4), Congruence.from_blocks(4, [[0, 1]]))


def test_preimage_identity_hom():
    a = additive(4)
    c = congruence_closure(a, [(0, 2)])
    assert preimage_congruence(range(4), a, a, c) == c


def test_preimage_mod2():
    c = preimage_congruence([0, 1, 0, 1], additive(4), additive(2), Congruence.identity(2))
    assert c.blocks() == [[0, 2], [1, 3]]


def test_preimage_into_trivial():
    trivial = FinitePartialAlgebra(1, (2,), [[[0]]])
    c = preimage_congruence([0] * 4, additive(4), trivial, Congruence.identity(1))
    assert c == Congruence.full(4)


def test_preimage_requires_hom():
    with pytest.raises(NotAHomomorphism):
        preimage_congruence([0, 0, 0, 1], additive(4), additive(2), Congruence.identity(2))


@given(st.integers(0, 10_000))
def test_closure_is_least_congruence(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 5))
    alg = random_total_algebra(rng, n, [(2,), (1,), (1, 2)][seed % 3])
    pairs = random_pairs(rng, n, int(rng.integers(0, 3)))
    assert congruence_closure(alg, pairs) == brute_closure(alg, pairs)


@given(st.integers(0, 10_000))
def test_closure_on_partial_algebras(seed):
    from partglob.generators import random_partial_algebra

    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 5))
    alg = random_partial_algebra(rng, n, (2,), 0.6)
    pairs = random_pairs(rng, n, 2)
    assert congruence_closure(alg, pairs) == brute_closure(alg, pairs)


@given(st.integers(0, 10_000))
def test_preimage_is_congruence(seed):
    rng = np.random.default_rng(seed)
    a = random_total_algebra(rng, int(rng.integers(1, 6)), (2,))
    phi, b = random_homomorphism(rng, a)
    theta = congruence_closure(b, random_pairs(rng, b.size, 2))
    pre = preimage_congruence(phi, a, b, theta)
    assert is_congruence(a, pre)
    for x in range(a.size):
        for y in range(a.size):
            assert pre.related(x, y) == theta.related(phi[x], phi[y])


# --- isomorphism ------------------------------------------------------------------------


def test_isomorphism_self():
    s = example_semigroup().as_algebra()
    assert find_isomorphism(s, s) == tuple(range(4))


def test_z4_not_klein():
    k = klein_four()
    kv = FinitePartialAlgebra(4, (2,), [k.mul])
    assert find_isomorphism(additive(4), kv) is None


def test_permuted_semilattice():
    chain = FinitePartialAlgebra(3, (2,), [[[min(a, b) for b in range(3)] for a in range(3)]])
    perm = [2, 0, 1]
    inv = np.argsort(perm)
    t = np.array(perm)[chain.ops[0][inv[:, None], inv[None, :]]]
    other = FinitePartialAlgebra(3, (2,), [t])
    phi = find_isomorphism(chain, other)
    assert phi == tuple(perm)
    assert is_isomorphism(phi, chain, other)


def test_size_mismatch_no_isomorphism():
    assert find_isomorphism(additive(2), additive(3)) is None


@given(st.integers(0, 10_000))
def test_isomorphism_found_after_relabel(seed):
    from partglob.generators import random_partial_algebra

    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    a = random_partial_algebra(rng, n, (2, 1), 0.7)
    perm = rng.permutation(n)
    inv = np.argsort(perm)
    ops = []
    for t in a.ops:
        idx = np.ix_(*[inv] * t.ndim)
        moved = t[idx]
        ops.append(np.where(moved == UNDEF, UNDEF, perm[np.where(moved == UNDEF, 0, moved)]))
    b = FinitePartialAlgebra(n, a.signature, ops)
    phi = find_isomorphism(a, b)
    assert phi is not None and is_isomorphism(phi, a, b)
    assert is_homomorphism(phi, a, b)
