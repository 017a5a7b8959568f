"""Free algebras on three generators and chain/majority/NU term search."""

import itertools

import pytest

from _oracles import (
    o_chain_exists,
    o_linear_z2_ternary,
    o_monotone_ternary_bool,
    o_selfdual_monotone_ternary,
    o_term_functions,
)
from condist.algebras import FiniteAlgebra, Operation
from condist.corpus import corpus_entry
from condist.terms import (
    FreeAlgebra,
    FreeAlgebraCapError,
    JonssonChain,
    build_free_f3,
    certify_chain_against_relations,
    find_jonsson_chain,
    find_majority_term,
    find_near_unanimity,
    verify_chain,
)

F3_SIZES = {
    "l2": 18,
    "median": 4,
    "median3": 4,
    "imp2": 38,
    "z2": 8,
    "bool2": 256,
    "m3": 28,
    "n5": 99,
}


def f3(name, **kw):
    return build_free_f3(corpus_entry(name).algebra, **kw)


def test_f3_equals_term_function_closure():
    for name, want in F3_SIZES.items():
        a = corpus_entry(name).algebra
        free = build_free_f3(a)
        _, funcs = o_term_functions(a)
        assert len(free) == len(funcs) == want
        assert set(free.elements) == set(funcs)


def test_f3_counts_match_function_classes():
    assert len(f3("l2")) == len(o_monotone_ternary_bool())
    assert len(f3("median")) == len(o_selfdual_monotone_ternary())
    assert len(f3("z2")) == len(o_linear_z2_ternary())


def test_f3_of_cube_is_free_on_the_generating_variety():
    assert len(f3("l2cube", size_bound=8)) == 18


def test_generators_are_projections():
    free = f3("imp2")
    n = free.base.size
    for g, idx in enumerate(free.gens):
        vec = free.elements[idx]
        for p, args in enumerate(itertools.product(range(n), repeat=3)):
            assert vec[p] == args[g]
    assert [free.term_string(i) for i in free.gens] == ["x", "y", "z"]


def test_witness_dag_reproduces_every_element():
    for name in ["l2", "imp2", "median3", "z2"]:
        free = f3(name)
        for i in range(len(free)):
            assert free.evaluate_witness(i) == free.elements[i]


def test_free_algebra_guards():
    with pytest.raises(ValueError):
        f3("l2cube")
    with pytest.raises(FreeAlgebraCapError) as e:
        f3("imp2", size_cap=10)
    assert e.value.cap == 10 and e.value.partial == 11
    with pytest.raises(ValueError):
        FreeAlgebra(corpus_entry("l2").algebra, 0)


def test_nullary_constants_enter_the_closure():
    free = build_free_f3(corpus_entry("z2").algebra)
    assert tuple(0 for _ in range(8)) in set(free.elements)
    pointed = FiniteAlgebra(2, [Operation("c", 0, (1,))], name="pointed")
    free2 = build_free_f3(pointed)
    ones = tuple(1 for _ in range(8))
    assert len(free2) == 4
    assert free2.term_string(free2.elements.index(ones)) == "c"


# ------------------------------------------------------------ chain search


def test_majority_algebra_has_order_one_chain():
    chain = find_jonsson_chain(corpus_entry("median").algebra)
    assert chain.order == 1
    assert chain.terms == ("m(x, y, z)",)
    assert verify_chain(f3("median"), chain.indices)
    maj = find_majority_term(corpus_entry("median").algebra)
    assert maj.index == chain.indices[0]
    assert o_chain_exists(corpus_entry("median").algebra, 1)


def test_implication_algebra_has_order_two_chain():
    a = corpus_entry("imp2").algebra
    chain = find_jonsson_chain(a)
    assert chain.order == 2 and len(chain.indices) == 2
    assert verify_chain(f3("imp2"), chain.indices)
    assert not o_chain_exists(a, 1)
    assert o_chain_exists(a, 2)
    assert find_jonsson_chain(a, max_n=1) is None
    assert find_jonsson_chain(a, max_n=2).order == 2


def test_padding_extends_any_chain():
    """Appending the third projection keeps the equation system satisfied."""
    for name in ["median", "imp2"]:
        free = f3(name)
        chain = find_jonsson_chain(corpus_entry(name).algebra)
        padded = chain.indices + (free.gens[2],)
        assert verify_chain(free, padded)
        assert verify_chain(free, padded + (free.gens[2],))


def test_group_algebras_have_no_chain():
    assert find_jonsson_chain(corpus_entry("z2").algebra) is None
    assert find_jonsson_chain(corpus_entry("z2z2").algebra) is None
    assert find_majority_term(corpus_entry("z2").algebra) is None


def test_chain_orders_across_corpus():
    for name in ["l2", "l2xl2", "bool2", "median3", "n5", "m3"]:
        a = corpus_entry(name).algebra
        chain = find_jonsson_chain(a, size_bound=max(6, a.size))
        assert chain.order == 1
    chain = find_jonsson_chain(corpus_entry("l2cube").algebra, size_bound=8)
    assert chain.order == 1


def test_majority_iff_order_one():
    for name in F3_SIZES:
        a = corpus_entry(name).algebra
        chain = find_jonsson_chain(a)
        maj = find_majority_term(a)
        if maj is None:
            assert chain is None or chain.order > 1
        else:
            assert chain is not None and chain.order == 1


def test_one_element_algebra():
    one = FiniteAlgebra(1, [Operation("c", 0, (0,))], name="one")
    chain = find_jonsson_chain(one)
    assert chain.order == 1
    assert verify_chain(build_free_f3(one), chain.indices)


def test_verify_chain_rejects_bad_inputs():
    free = f3("median")
    assert not verify_chain(free, ())
    assert not verify_chain(free, (free.gens[0],))
    assert not verify_chain(free, (free.gens[1],))


# ------------------------------------------------------------ certification


def test_chain_certified_against_relation_sweep():
    for name in ["median", "imp2"]:
        a = corpus_entry(name).algebra
        chain = find_jonsson_chain(a)
        v = certify_chain_against_relations(a, chain)
        assert v.holds and v.checked > 0


def test_certification_rejects_tampered_chain():
    a = corpus_entry("median").algebra
    free = f3("median")
    fake = JonssonChain(1, (free.gens[0],), ("x",))
    with pytest.raises(ValueError):
        certify_chain_against_relations(a, fake)


# ------------------------------------------------------------- wider terms


def test_near_unanimity_terms():
    with pytest.raises(ValueError):
        find_near_unanimity(corpus_entry("l2").algebra, 2)
    assert find_near_unanimity(corpus_entry("median").algebra, 3).term == "m(x, y, z)"
    assert (
        find_near_unanimity(corpus_entry("l2").algebra, 4).term
        == "meet(join(x1, x2), join(x3, x4))"
    )
    assert find_near_unanimity(corpus_entry("median").algebra, 4).term == "m(x1, x2, x3)"
    assert find_near_unanimity(corpus_entry("z2").algebra, 4) is None
    assert find_near_unanimity(corpus_entry("imp2").algebra, 4) is None


def test_near_unanimity_size_bound():
    with pytest.raises(ValueError):
        find_near_unanimity(corpus_entry("m3").algebra, 4)


def test_found_nu_term_satisfies_the_equations():
    a = corpus_entry("l2").algebra
    wit = find_near_unanimity(a, 4)
    free = FreeAlgebra(a, 4)
    vec = free.elements[wit.index]
    pos = list(itertools.product(range(2), repeat=4))
    for spot in range(4):
        for x in range(2):
            for y in range(2):
                args = [x] * 4
                args[spot] = y
                assert vec[pos.index(tuple(args))] == x
