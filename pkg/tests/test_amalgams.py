import itertools

import numpy as np
import pytest

from partglob.actions import PartialAction
from partglob.algebras import AlgebraPartialAction
from partglob.amalgams import (
    Amalgam,
    PresentedQuotient,
    amalgam_from_partial_action,
    bounded_embeddability_check,
    neumann_conditions,
    replay_violation,
    verify_embedding,
    violation_to_json,
)
from partglob.generators import example_semigroup, involution_action
from partglob.semigroups import IdealPartialAction, build_unital_globalization, check_criterion, word_graph
from partglob.structures import UNDEF, FinitePartialAlgebra, StructureError, cyclic_group


@pytest.fixture
def global_ipa():
    s = example_semigroup()
    return IdealPartialAction(PartialAction(cyclic_group(2), [list(range(4))] * 2, s.names), s)


def test_global_amalgam(global_ipa):
    am = amalgam_from_partial_action(global_ipa)
    assert am.n == 2 and am.is_semigroup_kind
    assert all(tuple(am.subsets[i][j]) == (0, 1, 2, 3) for i in range(2) for j in range(2))
    assert am.validate().ok and neumann_conditions(am).ok
    assert not bounded_embeddability_check(am, 3).found


def test_example_amalgam(example):
    am = amalgam_from_partial_action(example)
    assert am.indices == ["1", "x"]
    assert am.to_json()["intersections"] == {"1,x": ["0", "u", "v"], "x,1": ["0", "u", "v"]}
    assert list(am.alpha[0][1]) == [0, 2, 1, UNDEF]
    assert neumann_conditions(am).ok


def test_minimal_domains_amalgam():
    ipa = involution_action(example_semigroup(), [0], [0])
    am = amalgam_from_partial_action(ipa)
    assert am.subsets[0][1] == (0,)
    assert am.validate().ok


def test_refuses_non_subalgebra_domains(z2):
    pa = PartialAction(z2, [[0, 1, 2], [1, 0, UNDEF]])
    alg = FinitePartialAlgebra(3, (1,), [[2, 2, 2]])
    with pytest.raises(StructureError):
        amalgam_from_partial_action(AlgebraPartialAction(pa, alg))


def test_rejects_wrong_type():
    with pytest.raises(TypeError):
        amalgam_from_partial_action(object())


def test_validate_catches_broken_inverse(example):
    am = amalgam_from_partial_action(example)
    bad = [row[:] for row in am.alpha]
    bad[0][1] = np.array([0, 1, 2, UNDEF])  # identity on A_{1,x}, while alpha_{x,1} swaps
    rep = Amalgam(am.indices, am.algebras, am.subsets, bad).validate()
    assert not rep.ok


def test_validate_partial_algebra_kind(z2):
    pa = PartialAction(z2, [[0, 1], [1, 0]])
    alg = FinitePartialAlgebra(2, (1,), [[1, 0]])
    am = amalgam_from_partial_action(AlgebraPartialAction(pa, alg))
    assert am.validate().ok and not am.is_semigroup_kind
    with pytest.raises(ValueError):
        bounded_embeddability_check(am)


# --- embeddings ----------------------------------------------------------------------------


def test_global_embeds_via_theta(global_ipa):
    am = amalgam_from_partial_action(global_ipa)
    maps = [global_ipa.pa.table[x] for x in range(2)]
    assert verify_embedding(am, global_ipa.sg, maps).ok


def test_unital01_embeds_into_star_semigroup(unital01):
    am = amalgam_from_partial_action(unital01)
    ug = build_unital_globalization(unital01)
    maps = [unital01.ug.class_of[x] for x in range(2)]
    v = verify_embedding(am, ug.semigroup, maps)
    assert v.ok, v.problems


def test_overlapping_images_fail(unital01):
    am = amalgam_from_partial_action(unital01)
    v = verify_embedding(am, unital01.sg, [[0, 1], [0, 1]])
    assert not v.ok
    assert v.problems == [("intersection", 0, 1, 1)]


def test_non_injective_map_fails(unital01):
    am = amalgam_from_partial_action(unital01)
    v = verify_embedding(am, unital01.sg, [[0, 0], [0, 0]])
    assert ("injective", 0, 0, 1) in v.problems


# --- bounded closure -----------------------------------------------------------------------


def test_example_violation(example):
    am = amalgam_from_partial_action(example)
    rep = bounded_embeddability_check(am, max_len=3)
    assert rep.found
    doc = violation_to_json(am, rep.violation)
    assert doc["letters"] == ["v_1", "0_1"]
    kinds = [s["kind"] for s in doc["steps"]]
    assert "amalgamate" in kinds and kinds.count("reduce") == 2
    assert replay_violation(am, rep.violation)


def test_tampered_violation_fails_replay(example):
    am = amalgam_from_partial_action(example)
    v = bounded_embeddability_check(am, 3).violation
    from partglob.amalgams import AmalgamViolation

    assert not replay_violation(am, AmalgamViolation(v.letters, v.start, v.steps[:-1]))


def test_unital01_no_violation(unital01):
    assert not bounded_embeddability_check(amalgam_from_partial_action(unital01), 4).found


def test_bound_must_be_positive(example):
    with pytest.raises(ValueError):
        bounded_embeddability_check(amalgam_from_partial_action(example), 0)


def test_letter_bijection_matches_word_graph(semigroup_corpus):
    """Letters a_x and classes [x,a] have matching bounded closures."""
    for inst in semigroup_corpus[:40]:
        ipa = inst.ipa
        pq = PresentedQuotient(amalgam_from_partial_action(ipa), 3)
        wg = word_graph(ipa, 3)
        ulab = wg.letter_components()
        plab = pq.graph.letter_components()
        cls = [int(ipa.ug.class_of[int(pq.copy_of[c]), int(pq.elem_of[c])]) for c in range(pq.num_letters)]
        for p, q in itertools.combinations(range(pq.num_letters), 2):
            assert (plab[p] == plab[q]) == (ulab[cls[p]] == ulab[cls[q]])


def test_corpus_consistency_sample(semigroup_corpus):
    for inst in semigroup_corpus[:30]:
        rep = bounded_embeddability_check(amalgam_from_partial_action(inst.ipa), 4)
        assert rep.found == (not check_criterion(inst.ipa).holds)
        if rep.found:
            assert replay_violation(amalgam_from_partial_action(inst.ipa), rep.violation)
