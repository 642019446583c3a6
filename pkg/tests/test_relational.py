import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from partglob.generators import random_algebra_action
from partglob.globalization import build_universal_globalization
from partglob.relational import (
    Relation,
    RelationalSystem,
    graph_system,
    is_functional,
    is_functional_system,
    lift_relational_system,
    validate_relational_action,
)
from partglob.structures import StructureError


def test_relation_dedups_and_sorts():
    r = Relation.of(2, [(1, 0), (0, 1), (1, 0)])
    assert r.tuples == ((0, 1), (1, 0))
    assert (1, 0) in r


def test_relation_arity_mismatch():
    with pytest.raises(StructureError):
        Relation.of(2, [(0,)])


def test_empty_relations_valid(example):
    assert validate_relational_action(example.pa, RelationalSystem(4, ())).ok


def test_multiplication_graph_valid(example):
    rs = graph_system(example.sg.as_algebra())
    assert rs.relations[0].arity == 3 and len(rs.relations[0].tuples) == 16
    assert validate_relational_action(example.pa, rs).ok


def test_unary_u_not_invariant(example):
    rs = RelationalSystem(4, (Relation.of(1, [(1,)]),))
    rep = validate_relational_action(example.pa, rs)
    assert not rep.ok
    assert rep.violations[0].witness == (0, 1, (1,))


def test_out_of_range_tuple_is_error(example):
    rep = validate_relational_action(example.pa, RelationalSystem(4, (Relation.of(1, [(9,)]),)))
    assert rep.errors


def test_lift_global_is_identity(z4_shift):
    rs = RelationalSystem(4, (Relation.of(2, [(a, (a + 1) % 4) for a in range(4)]),))
    lifted = lift_relational_system(z4_shift, rs)
    emb = lifted.ug.embedding
    assert lifted.system.relations[0] == Relation.of(2, [(emb[a], emb[b]) for a, b in rs.relations[0].tuples])


def test_lift_unary_orbit(example):
    rs = RelationalSystem(4, (Relation.of(1, [(1,), (2,)]),))
    lifted = lift_relational_system(example.pa, rs)
    ug = lifted.ug
    assert lifted.system.relations[0].tuples == ((ug.parse_class("[1,u]"),), (ug.parse_class("[1,v]"),))


def test_lift_rejects_invalid(example):
    with pytest.raises(StructureError):
        lift_relational_system(example.pa, RelationalSystem(4, (Relation.of(1, [(1,)]),)))


def test_lifted_multiplication_functional(example):
    lifted = lift_relational_system(example.pa, graph_system(example.sg.as_algebra()))
    assert lifted.system.size == 5
    assert is_functional(lifted.system, 0) == (True, None)


def test_functional_definition():
    rs = RelationalSystem(3, (Relation.of(2, [(0, 1), (0, 2)]),))
    assert is_functional(rs, 0) == (False, ((0, 1), (0, 2)))
    assert is_functional_system(rs) == (False, (0, (0, 1), (0, 2)))


def test_nullary_relation_functional():
    assert is_functional(RelationalSystem(2, (Relation.of(0, [()]),)), 0)[0]


def test_total_operation_graph_functional(z4_shift):
    from partglob.structures import FinitePartialAlgebra

    alg = FinitePartialAlgebra(4, (2,), [[[(a * b) % 4 for b in range(4)] for a in range(4)]])
    assert is_functional_system(graph_system(alg))[0]


@given(st.integers(0, 10_000))
def test_lift_properties(seed):
    rng = np.random.default_rng(seed)
    apa = random_algebra_action(rng, 5, 4)
    rs = graph_system(apa.alg)
    ug = build_universal_globalization(apa.pa)
    lifted = lift_relational_system(apa.pa, rs, ug)
    g = apa.pa.group
    for rel in lifted.system.relations:
        for x in range(g.size):
            assert all(tuple(int(ug.action[x, c]) for c in t) in rel for t in rel.tuples)
