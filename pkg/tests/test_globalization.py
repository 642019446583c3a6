import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from partglob.actions import PartialAction, check_morphism, global_action, restrict_action
from partglob.generators import random_global_action, random_partial_action, small_groups
from partglob.globalization import build_universal_globalization, factor_morphism, verify_globalization
from partglob.structures import UNDEF, StructureError, cyclic_group

GROUPS = list(small_groups(6))


def brute_classes(pa):
    """Equivalence classes of ~ by a direct double loop."""
    g = pa.group
    pairs = list(itertools.product(range(g.size), range(pa.size)))
    related = lambda p, q: pa.table[g.op(g.inverse(q[0]), p[0]), p[1]] == q[1]
    classes = []
    for p in pairs:
        for c in classes:
            if related(p, c[0]):
                c.append(p)
                break
        else:
            classes.append([p])
    return sorted(tuple(sorted(c)) for c in classes)


def test_example_five_classes(example):
    ug = build_universal_globalization(example.pa)
    assert ug.names() == ["[1,0]", "[1,u]", "[1,v]", "[1,t]", "[x,t]"]
    members = [c.members for c in ug.classes]
    assert members == [((0, 0), (1, 0)), ((0, 1), (1, 2)), ((0, 2), (1, 1)), ((0, 3),), ((1, 3),)]
    assert ug.embedding == (0, 1, 2, 3)


def test_global_action_no_new_classes(z4_shift):
    ug = build_universal_globalization(z4_shift)
    assert ug.size == 4
    assert sorted(ug.embedding) == [0, 1, 2, 3]


def test_trivial_partial_action_has_mn_classes():
    g = cyclic_group(3)
    pa = PartialAction(g, [[0, 1], [UNDEF] * 2, [UNDEF] * 2])
    assert build_universal_globalization(pa).size == 6


def test_invalid_action_rejected(z2):
    with pytest.raises(StructureError):
        build_universal_globalization(PartialAction(z2, [[0, 1], [0, 0]]))


def test_parse_class(example):
    ug = build_universal_globalization(example.pa)
    assert ug.parse_class("[x,v]") == ug.parse_class("[1,u]")
    with pytest.raises(ValueError):
        ug.parse_class("[y,u]")


def test_to_json_shape(example):
    doc = build_universal_globalization(example.pa).to_json()
    assert doc["embedding"] == {"0": "[1,0]", "u": "[1,u]", "v": "[1,v]", "t": "[1,t]"}
    assert doc["action"]["x"] == ["[1,0]", "[1,v]", "[1,u]", "[x,t]", "[1,t]"]


def test_verify_universal(example):
    ug = build_universal_globalization(example.pa)
    assert verify_globalization(ug.embedding, example.pa, ug.as_action()) == (True, [])


def test_restriction_round_trip(z4_shift):
    pa = restrict_action(z4_shift, [1, 2])
    ok, problems = verify_globalization([1, 2], pa, z4_shift)
    assert ok, problems


def test_verify_catches_missing_domain(z2):
    # swap on {a,b} as a target; source is {a,b} with x undefined everywhere
    glob = global_action(z2, [[0, 1], [1, 0]])
    src = PartialAction(z2, [[0, 1], [UNDEF, UNDEF]])
    ok, problems = verify_globalization([0, 1], src, glob)
    assert not ok
    assert any("xa undefined" in p for p in problems)


def test_factor_identity(example):
    ug = build_universal_globalization(example.pa)
    psi = factor_morphism(ug, ug.as_action(), ug.embedding)
    assert psi == tuple(range(ug.size))


def test_factor_into_orbit_collapse(example):
    # map the example onto Z2 acting on {p,q} by swapping: 0->p? 0 is fixed so send to a fixed point
    g = example.pa.group
    tgt = global_action(g, [[0, 1, 2], [0, 2, 1]], ["z", "p", "q"])
    phi = [0, 1, 2, 1]
    assert check_morphism(example.pa, tgt, phi)[0]
    psi = factor_morphism(build_universal_globalization(example.pa), tgt, phi)
    assert psi == (0, 1, 2, 1, 2)


def test_factor_rejects_non_morphism(example):
    ug = build_universal_globalization(example.pa)
    with pytest.raises(ValueError):
        factor_morphism(ug, ug.as_action(), [0, 1, 1, 3])


@given(st.integers(0, 10_000))
def test_universal_properties(seed):
    rng = np.random.default_rng(seed)
    g = GROUPS[seed % len(GROUPS)]
    pa = random_partial_action(rng, g, 6)
    ug = build_universal_globalization(pa)
    assert [c.members for c in ug.classes] == brute_classes(pa)
    assert ug.as_action().validate().ok and ug.as_action().is_global
    assert verify_globalization(ug.embedding, pa, ug.as_action())[0]
    empty = all(not pa.domain(x) for x in range(g.size) if x != g.identity)
    assert ug.size <= g.size * pa.size
    assert (ug.size == g.size * pa.size) == empty
    for cls in ug.classes:
        assert cls.rep == min(cls.members)


@given(st.integers(0, 10_000))
def test_factor_morphism_unique(seed):
    """psi is the only equivariant map on classes extending phi (exhaustive for small A^U)."""
    rng = np.random.default_rng(seed)
    g = GROUPS[seed % len(GROUPS)]
    glob = random_global_action(rng, g, 6)
    k = int(rng.integers(1, glob.size + 1))
    subset = sorted(rng.choice(glob.size, k, replace=False).tolist())
    pa = restrict_action(glob, subset)
    ug = build_universal_globalization(pa)
    psi = factor_morphism(ug, glob, subset)
    assert all(psi[ug.embedding[i]] == a for i, a in enumerate(subset))
    if glob.size ** ug.size <= 50_000:
        uact = ug.as_action()
        matches = [
            cand
            for cand in itertools.product(range(glob.size), repeat=ug.size)
            if all(cand[ug.embedding[i]] == a for i, a in enumerate(subset)) and check_morphism(uact, glob, cand)[0]
        ]
        assert matches == [psi]


@given(st.integers(0, 10_000))
def test_injective_into_globalization_gives_injective_psi(seed):
    rng = np.random.default_rng(seed)
    g = GROUPS[seed % len(GROUPS)]
    glob = random_global_action(rng, g, 6)
    subset = sorted(rng.choice(glob.size, int(rng.integers(1, glob.size + 1)), replace=False).tolist())
    pa = restrict_action(glob, subset)
    ug = build_universal_globalization(pa)
    psi = factor_morphism(ug, glob, subset)
    # glob is a globalization of pa via the inclusion, so psi is injective
    assert len(set(psi)) == len(psi)
