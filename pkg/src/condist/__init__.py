"""Finite-model toolkit for congruence-distributivity conditions."""

from .algebras import (
    AlgebraParseError,
    ElementMap,
    FiniteAlgebra,
    Operation,
    format_algebra,
    generate_subuniverse,
    load_algebra,
    parse_algebra,
    power,
    product,
)
from .congruences import (
    Congruence,
    CongruenceLattice,
    FactorPair,
    check_factor_permutability,
    congruence_from_pairs,
    congruence_lattice,
    congruences_by_enumeration,
    diagonal_congruence,
    factor_congruence_indices,
    factor_relations,
    full_congruence,
    is_distributive,
    is_modular,
    is_n_permutable,
    join_con,
    kernel_congruence,
    meet_con,
    permutability_level,
    principal_congruence,
    quotient,
)
from .corpus import CorpusEntry, builtin_corpus, corpus_entry, resolve_algebra
from .dsl import DslError, DslEvalError, evaluate, parse, unparse
from .lemmas import (
    check_boolean_factors,
    check_distributive_inequality,
    check_factor_formula,
    check_factor_formula_all,
    check_freyd,
    check_jonsson_triple,
    check_permutes_with,
    check_shifting,
    check_shifting_triple,
    check_theorem_ii_triple,
    check_trapezoid,
    check_trapezoid_triple,
    deep_family,
    jonsson_order_relational,
    random_compatible_reflexive,
    random_reflexive,
)
from .relations import (
    Relation,
    RelationParseError,
    TernaryRelation,
    alternating,
    build_proof_relation_D,
    closure_properties,
    equivalence_closure,
    format_relation,
    load_relation,
    parse_relation,
    transitive_closure,
)
from .terms import (
    FreeAlgebra,
    FreeAlgebraCapError,
    JonssonChain,
    TermWitness,
    build_free_f3,
    certify_chain_against_relations,
    find_jonsson_chain,
    find_majority_term,
    find_near_unanimity,
    verify_chain,
)
from .verdicts import OrderReport, Verdict

__version__ = "0.1.0"
