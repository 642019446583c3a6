"""Partial actions of finite groups and their globalizations.

Tables in, verdicts and witnesses out: axiom checks for partial actions,
universal globalizations of sets, relational systems and partial algebras,
a decision procedure for partial actions on semigroups with ideal domains,
and bounded embeddability analysis of the associated amalgams.
"""
from .actions import PartialAction, global_action, restrict_action, validate_partial_action
from .algebras import (
    AlgebraPartialAction,
    build_algebra_AU,
    check_condition_31,
    check_globalizability_32,
)
from .amalgams import Amalgam, amalgam_from_partial_action, bounded_embeddability_check, verify_embedding
from .globalization import UniversalGlobalization, build_universal_globalization, verify_globalization
from .relational import Relation, RelationalSystem, lift_relational_system
from .semigroups import (
    IdealPartialAction,
    build_unital_globalization,
    check_criterion,
    check_ideal_domains,
    check_sufficient_conditions,
    check_weak_confluence,
    find_collapse_witness,
    normalize_word,
    unique_normal_forms,
)
from .structures import (
    UNDEF,
    Congruence,
    FiniteGroup,
    FinitePartialAlgebra,
    FiniteSemigroup,
    congruence_closure,
    cyclic_group,
    find_isomorphism,
    quotient,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
