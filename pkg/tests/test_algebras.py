"""Operation tables, homomorphisms, products, subuniverses, text format."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import o_apply, o_subuniverse
from _strategies import algebras
from condist.algebras import (
    AlgebraParseError,
    ElementMap,
    FiniteAlgebra,
    Operation,
    SignatureError,
    format_algebra,
    generate_subuniverse,
    parse_algebra,
    power,
    product,
)
from condist.corpus import builtin_corpus, corpus_entry


def test_apply_matches_row_major_indexing():
    for entry in builtin_corpus():
        a = entry.algebra
        for op in a.operations:
            for args in itertools.product(range(a.size), repeat=op.arity):
                assert a.apply(op, args) == o_apply(op, args, a.size)


def test_apply_accepts_name_and_checks_arity():
    a = corpus_entry("z2").algebra
    assert a.apply("add", (1, 1)) == 0
    with pytest.raises(ValueError):
        a.apply("add", (1,))
    with pytest.raises(ValueError):
        a.op("missing")


def test_constructor_validation():
    with pytest.raises(ValueError):
        FiniteAlgebra(0, [])
    with pytest.raises(ValueError):
        FiniteAlgebra(2, [Operation("f", 1, (0,))])
    with pytest.raises(ValueError):
        FiniteAlgebra(2, [Operation("f", 1, (0, 2))])
    with pytest.raises(ValueError):
        FiniteAlgebra(2, [Operation("f", 0, (0,)), Operation("f", 0, (1,))])


def test_signature_and_equality():
    a = corpus_entry("l2").algebra
    b = FiniteAlgebra(2, a.operations, name="other label")
    assert a.signature() == (("meet", 2), ("join", 2))
    assert a == b
    assert hash(a) == hash(b)


# ---------------------------------------------------------------- mappings


def test_homomorphism_certificate():
    l2 = corpus_entry("l2").algebra
    sq = corpus_entry("l2xl2").algebra
    f = ElementMap.homomorphism(l2, sq, [0, 3])
    assert f(1) == 3
    assert f.is_homomorphism()
    with pytest.raises(ValueError):
        ElementMap.homomorphism(l2, sq, [0, 2, 1])
    with pytest.raises(ValueError):
        ElementMap.homomorphism(l2, sq, [3, 0])


def test_homomorphism_signature_mismatch():
    l2 = corpus_entry("l2").algebra
    z2 = corpus_entry("z2").algebra
    assert not ElementMap(l2, z2, [0, 1]).is_homomorphism()
    with pytest.raises(SignatureError):
        ElementMap.homomorphism(l2, z2, [0, 1])


def test_map_compose():
    l2 = corpus_entry("l2").algebra
    sq = corpus_entry("l2xl2").algebra
    f = ElementMap.homomorphism(l2, sq, [0, 3])
    g = ElementMap.homomorphism(sq, l2, [0, 0, 1, 1])
    h = f.compose(g)
    assert h.values == (0, 1)
    with pytest.raises(ValueError):
        g.compose(g)


# ---------------------------------------------------------------- products


def test_product_projections_and_encoding():
    a = corpus_entry("l2").algebra
    b = corpus_entry("median").algebra
    with pytest.raises(SignatureError):
        product(a, b)
    p, pi1, pi2 = product(a, a)
    assert p.size == 4
    assert pi1.is_homomorphism() and pi2.is_homomorphism()
    for x in range(2):
        for y in range(2):
            code = x * 2 + y
            assert pi1(code) == x and pi2(code) == y
    for op in p.operations:
        base = a.op(op.name)
        for args in itertools.product(range(4), repeat=op.arity):
            got = p.apply(op, args)
            want_l = a.apply(base, [pi1(v) for v in args])
            want_r = a.apply(base, [pi2(v) for v in args])
            assert pi1(got) == want_l and pi2(got) == want_r


def test_power_sizes():
    a = corpus_entry("l2").algebra
    assert power(a, 1) == a
    assert power(a, 3).size == 8
    assert power(a, 3).signature() == a.signature()
    with pytest.raises(ValueError):
        power(a, 0)


# ------------------------------------------------------------ subuniverses


def test_subuniverse_against_naive_closure():
    for name in ["l2xl2", "z2z2", "n5", "m3", "imp2", "median3"]:
        a = corpus_entry(name).algebra
        for seeds in [(0,), (a.size - 1,), tuple(range(min(2, a.size)))]:
            assert generate_subuniverse(a, seeds) == o_subuniverse(a, seeds)


def test_subuniverse_picks_up_constants():
    z2 = corpus_entry("z2").algebra
    assert generate_subuniverse(z2, [1]) == (0, 1)
    assert generate_subuniverse(z2, []) == (0,)


@settings(max_examples=60, deadline=None)
@given(algebras(), st.data())
def test_subuniverse_closed_and_minimal(a, data):
    seeds = data.draw(
        st.frozensets(st.integers(0, a.size - 1), max_size=a.size)
    )
    sub = generate_subuniverse(a, seeds)
    members = set(sub)
    assert set(seeds) <= members
    for op in a.operations:
        for args in itertools.product(sub, repeat=op.arity):
            assert a.apply(op, args) in members
    assert generate_subuniverse(a, sub) == sub
    assert sub == o_subuniverse(a, seeds)


# -------------------------------------------------------------- text format


def test_format_parse_round_trip():
    for entry in builtin_corpus():
        text = format_algebra(entry.algebra)
        assert parse_algebra(text) == entry.algebra


@settings(max_examples=40, deadline=None)
@given(algebras())
def test_round_trip_random_algebras(a):
    assert parse_algebra(format_algebra(a)) == a


def test_parse_reports_line_numbers():
    with pytest.raises(AlgebraParseError) as e:
        parse_algebra("op f 1\n0 1\n")
    assert "size" in str(e.value)
    with pytest.raises(AlgebraParseError) as e:
        parse_algebra("size 2\nop f 1\n0\n2\n")
    assert e.value.line == 4
    with pytest.raises(AlgebraParseError):
        parse_algebra("size 2\nop f 1\n0\n")
    with pytest.raises(AlgebraParseError):
        parse_algebra("size 2\nop f one\n0 1\n")
    with pytest.raises(AlgebraParseError):
        parse_algebra("size 2\nwat f 1\n0 1\n")


def test_parse_allows_comments_and_blank_lines():
    text = "# two element lattice\nsize 2\n\nop meet 2\n# rows follow\n0 0\n0 1\nop join 2\n0 1\n1 1\n"
    assert parse_algebra(text) == corpus_entry("l2").algebra
