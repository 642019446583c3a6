import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from partglob.actions import PartialAction
from partglob.generators import (
    chain_semilattice,
    example_semigroup,
    involution_action,
    involution_instances,
    subset_semilattice,
)
from partglob.globalization import verify_globalization
from partglob.semigroups import (
    CriterionWitness,
    IdealPartialAction,
    NotUnital,
    RewriteStep,
    RewriteTrace,
    all_normal_forms,
    build_unital_globalization,
    check_criterion,
    check_ideal_domains,
    check_sufficient_conditions,
    check_weak_confluence,
    find_collapse_witness,
    format_word,
    normalize_word,
    one_step_reducts,
    parse_word,
    unique_normal_forms,
    verify_criterion_witness,
    verify_trace,
)
from partglob.structures import StructureError, cyclic_group

ZERO, U, V, T = range(4)


@pytest.fixture
def identity_global():
    s = example_semigroup()
    return IdealPartialAction(PartialAction(cyclic_group(2), [list(range(4))] * 2, s.names), s)


# --- ideals and the ideal criterion ----------------------------------------------------------------------


def test_example_domains_are_ideals(example):
    assert example.pa.domain(1) == [ZERO, U, V]
    assert check_ideal_domains(example).ok


def test_global_domains_are_ideals(identity_global):
    assert check_ideal_domains(identity_global).ok


def test_singleton_u_not_ideal():
    ipa = involution_action(example_semigroup(), [U], [U])
    rep = check_ideal_domains(ipa)
    assert not rep.ok
    x, side, s, d, p = rep.violations[0].witness
    assert x == 1 and d == U and p not in (U,)


def test_example_criterion_witness(example):
    v = check_criterion(example)
    assert not v.holds
    assert v.witness == CriterionWitness(1, U, T, T, ZERO, U)
    assert v.witness.to_json(example) == {"x": "x", "u": "u", "s": "t", "t": "t", "lhs": "0", "rhs": "u"}
    assert verify_criterion_witness(example, v.witness)


def test_example_all_violations(example):
    v = check_criterion(example, all_violations=True)
    assert CriterionWitness(1, U, T, T, ZERO, U) in v.violations
    assert len(v.violations) == 2
    assert all(verify_criterion_witness(example, w) for w in v.violations)


def test_criterion_jobs_deterministic(example):
    assert check_criterion(example, all_violations=True, jobs=2) == check_criterion(example, all_violations=True)


def test_tampered_witness_rejected(example):
    w = check_criterion(example).witness
    assert not verify_criterion_witness(example, CriterionWitness(w.x, w.u, w.s, w.t, w.rhs, w.rhs))


def test_global_criterion_holds(identity_global):
    assert check_criterion(identity_global).holds


def test_criterion_rejects_non_ideal():
    with pytest.raises(StructureError):
        check_criterion(involution_action(example_semigroup(), [U], [U]))


@pytest.mark.parametrize("sg", [chain_semilattice(3), chain_semilattice(4), subset_semilattice(2)])
def test_band_instances_hold(sg):
    for ipa in involution_instances(sg):
        assert check_sufficient_conditions(ipa).all_idempotent
        assert check_criterion(ipa).holds


# --- sufficient conditions ------------------------------------------------------------------


def test_example_not_weakly_reductive(example):
    sc = check_sufficient_conditions(example)
    d = sc.domains[1]
    assert not d.weakly_reductive and not d.idempotent and not d.unital
    assert sc.to_json(example)["domains"]["x"] == {"idempotent": False, "weakly_reductive": False, "unit": None}


def test_semilattice_principal_ideal():
    s = subset_semilattice(2)  # 00, 01, 10, 11 under intersection
    ipa = involution_action(s, [0, 1], [0, 1])  # D_x = 01 S
    sc = check_sufficient_conditions(ipa)
    d = sc.domains[1]
    assert d.idempotent and d.weakly_reductive and d.unit == 1
    assert sc.inverse


def test_inverse_semigroup_criterion_holds():
    s = subset_semilattice(2)
    swap = [0, 2, 1, 3]
    ipa = involution_action(s, [0, 1, 2, 3], swap)
    assert check_sufficient_conditions(ipa).inverse
    assert check_criterion(ipa).holds


# --- rewriting -----------------------------------------------------------------------------


def test_parse_and_format(example):
    w = parse_word(example, "[1,v][1,t]")
    assert w == (2, 3)
    assert format_word(example, w) == "[1,v][1,t]"
    assert parse_word(example, "[x,u]") == (2,)
    with pytest.raises(ValueError):
        parse_word(example, "[1,v][1,t")


def test_normalize_one_letter(example):
    nf, trace = normalize_word(example, (3,))
    assert nf == (3,) and trace.steps == []


def test_normalize_vt(example):
    nf, trace = normalize_word(example, parse_word(example, "[1,v][1,t]"))
    assert format_word(example, nf) == "[1,u]"
    assert trace.steps == [RewriteStep(0, "reduce", 0, (V, T), nf)]
    assert verify_trace(example, trace)


def test_normalize_no_common_slot(example):
    w = parse_word(example, "[1,t][x,t]")
    assert normalize_word(example, w)[0] == w


def test_normalize_rejects_foreign_letters(example):
    with pytest.raises(ValueError):
        normalize_word(example, (9,))
    with pytest.raises(ValueError):
        normalize_word(example, ())


def test_normalize_is_a_normal_form_for_any_strategy(example):
    w = parse_word(example, "[1,t][1,u][x,t]")
    nf, _ = normalize_word(example, w)
    forms = all_normal_forms(example, w)
    assert nf in forms and len(forms) == 2


@given(st.integers(0, 10_000))
def test_reduction_terminates_quickly(seed):
    """Any reduction sequence from a word of length n has at most n - 1 steps."""
    from partglob.generators import example_action

    ipa = example_action()
    rng = np.random.default_rng(seed)
    w = tuple(int(c) for c in rng.integers(ipa.ug.size, size=int(rng.integers(1, 7))))
    steps = 0
    while True:
        reds = one_step_reducts(ipa, w)
        if not reds:
            break
        w = reds[int(rng.integers(len(reds)))]
        steps += 1
    assert steps <= 6 - 1


# --- confluence and unique normal forms ------------------------------------------------------


def test_example_not_weakly_confluent(example):
    v = check_weak_confluence(example)
    assert not v.confluent
    j = v.to_json(example)
    assert j["failure"] == {"word": "[1,t][1,u][x,t]", "left": "[1,0][x,t]", "right": "[1,t][1,v]"}


def test_global_confluent(identity_global):
    assert check_weak_confluence(identity_global).confluent


def test_unital01_confluent(unital01):
    v = check_weak_confluence(unital01, certificates=True)
    assert v.confluent and v.certificates and all(c.common is not None for c in v.certificates)


def test_example_normal_form_clash(example):
    v = unique_normal_forms(example, 5)
    assert not v.unique
    assert format_word(example, v.word) == "[1,t][1,u][x,t]"
    assert set(v.normal_forms) == all_normal_forms(example, v.word)


def test_unique_normal_forms_agree_with_oracle(unital01, example):
    import itertools

    for ipa in (unital01, example):
        m = ipa.ug.size
        verdict = unique_normal_forms(ipa, 4)
        brute = all(
            len(all_normal_forms(ipa, w)) == 1
            for k in range(1, 5)
            for w in itertools.product(range(m), repeat=k)
        )
        assert verdict.unique == brute


# --- collapse witnesses ------------------------------------------------------------------------


def test_example_collapse_chain(example):
    w = find_collapse_witness(example, max_len=3)
    assert w is not None
    names = example.names()
    assert [names[c] for c in w.letters] == ["[1,v]", "[1,0]"]
    steps = [(s.direction, example.group.names[s.slot], s.factors, format_word(example, s.word)) for s in w.trace.steps]
    assert steps == [
        ("expand", "x", (V, T), "[1,u][x,t]"),
        ("expand", "1", (T, V), "[1,t][1,v][x,t]"),
        ("reduce", "x", (U, T), "[1,t][1,0]"),
        ("reduce", "1", (T, ZERO), "[1,0]"),
    ]
    assert verify_trace(example, w.trace)


def test_collapse_needs_length_3(example):
    assert find_collapse_witness(example, max_len=2) is None


def test_tampered_trace_rejected(example):
    w = find_collapse_witness(example, max_len=3)
    s0 = w.trace.steps[0]
    bad = RewriteTrace(w.trace.start, [RewriteStep(s0.position, s0.direction, 0, s0.factors, s0.word)] + w.trace.steps[1:])
    assert not verify_trace(example, bad)


def test_no_collapse_for_global_or_unital(identity_global, unital01):
    assert find_collapse_witness(identity_global, 4) is None
    assert find_collapse_witness(unital01, 4) is None


def test_collapse_bound_validation(example):
    with pytest.raises(ValueError):
        find_collapse_witness(example, 0)


# --- unital globalization -------------------------------------------------------------------


def test_unital01_table(unital01):
    ug = build_unital_globalization(unital01)
    names = list(ug.semigroup.names)
    assert names == ["[1,0]", "[1,1]", "[x,1]"]
    op = lambda a, b: names[ug.semigroup.op(names.index(a), names.index(b))]  # noqa: E731
    assert op("[1,1]", "[x,1]") == "[1,0]"
    assert op("[x,1]", "[x,1]") == "[x,1]"
    assert ug.to_json()["units"] == {"1": "1", "x": "0"}


def test_unital_trivial_group():
    s = subset_semilattice(2)
    from partglob.structures import FiniteGroup

    g = FiniteGroup([[0]], ["1"])
    ipa = IdealPartialAction(PartialAction(g, [list(range(4))], s.names), s)
    ug = build_unital_globalization(ipa)
    assert np.array_equal(ug.semigroup.mul, s.mul)


def test_unital_semilattice_swap():
    s = subset_semilattice(2)
    ipa = involution_action(s, [0, 1, 2, 3], [0, 2, 1, 3])
    ug = build_unital_globalization(ipa)
    assert ug.semigroup.is_inverse()
    assert verify_globalization(ug.embedding, ipa.pa, ipa.ug.as_action())[0]


def test_example_not_unital(example):
    with pytest.raises(NotUnital):
        build_unital_globalization(example)


def test_unital_slot_products_agree_with_reduction(unital01):
    ug = build_unital_globalization(unital01)
    P = unital01.slot_products
    for Px in P:
        for c, d in zip(*np.nonzero(Px >= 0)):
            assert ug.semigroup.op(int(c), int(d)) == Px[c, d]


def test_corpus_collapse_sound(semigroup_corpus):
    """A collapse chain is only ever found when the ideal criterion fails, and it replays."""
    for inst in semigroup_corpus[:60]:
        w = find_collapse_witness(inst.ipa, 3)
        if w is not None:
            assert not check_criterion(inst.ipa).holds
            assert verify_trace(inst.ipa, w.trace)
