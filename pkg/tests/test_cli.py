"""Command-line behavior: exit codes, JSON payloads, text output."""

import json

import pytest

from condist.algebras import format_algebra
from condist.cli import run
from condist.corpus import corpus_entry, corpus_names
from condist.relations import Relation, format_relation


def out_of(capsys):
    return capsys.readouterr().out


# ------------------------------------------------------------------- conlat


def test_conlat_text(capsys):
    assert run(["conlat", "corpus:z2z2"]) == 0
    out = out_of(capsys)
    assert "5 congruences" in out and "distributive=False" in out
    assert "c0: {0,1,2,3}" in out


def test_conlat_dot_and_json(capsys):
    assert run(["conlat", "corpus:l2xl2", "--dot"]) == 0
    assert out_of(capsys).startswith("digraph")
    assert run(["conlat", "corpus:l2xl2", "--json"]) == 0
    data = json.loads(out_of(capsys))
    assert data["schema"] == 1 and len(data["elements"]) == 4
    assert run(["conlat", "corpus:l2xl2", "--dot", "--json"]) == 2


def test_conlat_file_and_errors(tmp_path, capsys):
    path = tmp_path / "lat.alg"
    path.write_text(format_algebra(corpus_entry("l2").algebra))
    assert run(["conlat", str(path)]) == 0
    assert "2 congruences" in out_of(capsys)
    assert run(["conlat", str(tmp_path / "missing.alg")]) == 2
    assert "error:" in capsys.readouterr().err
    bad = tmp_path / "bad.alg"
    bad.write_text("size 2\nop f 1\n0\n")
    assert run(["conlat", str(bad)]) == 2
    assert run(["conlat", "corpus:notthere"]) == 2


def test_conlat_size_bound(capsys):
    assert run(["conlat", "corpus:l2cube", "--size-bound", "4"]) == 2
    err = capsys.readouterr().err
    assert "exceeds bound" in err


# -------------------------------------------------------------------- check


def test_check_trapezoid(capsys):
    assert run(["check", "trapezoid", "corpus:median"]) == 0
    assert "trapezoid holds" in out_of(capsys)
    assert run(["check", "trapezoid", "corpus:z2z2", "--json"]) == 1
    data = json.loads(out_of(capsys))
    assert data["holds"] is False
    assert data["counterexample"]["triple"] == [1, 2, 3]
    assert data["check"] == "trapezoid"


def test_check_shifting_and_factors(capsys):
    assert run(["check", "shifting", "corpus:z2z2"]) == 0
    assert run(["check", "factor-perm", "corpus:l2cube"]) == 0
    assert run(["check", "trapezoid", "corpus:median", "--deep"]) == 0


def test_check_freyd(capsys):
    assert run(["check", "freyd", "corpus:median", "--trials", "50"]) == 0
    assert "holds on 50 random triples" in out_of(capsys)
    assert run(["check", "freyd", "corpus:n5", "--trials", "25", "--json"]) == 0
    data = json.loads(out_of(capsys))
    assert data["triples_checked"] == 25 and data["holds"] is True


# ------------------------------------------------------------ jonsson-order


def test_jonsson_order(capsys):
    assert run(["jonsson-order", "corpus:median"]) == 0
    assert "minimal relational order 1" in out_of(capsys)
    assert run(["jonsson-order", "corpus:z2z2"]) == 1
    assert "definitively none" in out_of(capsys)
    assert run(["jonsson-order", "corpus:z2z2", "--json"]) == 1
    data = json.loads(out_of(capsys))
    assert data["n"] is None and data["definitive_none"] is True
    assert run(["jonsson-order", "corpus:median", "--max-n", "0"]) == 2
    assert run(["jonsson-order", "corpus:median", "--deep", "--json"]) == 0
    data = json.loads(out_of(capsys))
    assert data["n"] == 1 and len(data["members"]) == 4


# -------------------------------------------------------------------- terms


def test_terms_jonsson(capsys):
    assert run(["terms", "jonsson", "corpus:median"]) == 0
    out = out_of(capsys)
    assert "chain of order 1" in out and "p1 = m(x, y, z)" in out
    assert run(["terms", "jonsson", "corpus:z2"]) == 1
    assert "no chain found" in out_of(capsys)
    assert run(["terms", "jonsson", "corpus:imp2", "--json"]) == 0
    data = json.loads(out_of(capsys))
    assert data["n"] == 2 and len(data["terms"]) == 2
    assert run(["terms", "jonsson", "corpus:imp2", "--max-n", "1"]) == 1


def test_terms_majority_and_nu(capsys):
    assert run(["terms", "majority", "corpus:median"]) == 0
    assert "majority term: m(x, y, z)" in out_of(capsys)
    assert run(["terms", "majority", "corpus:imp2"]) == 1
    assert run(["terms", "nu", "corpus:l2", "--k", "4"]) == 0
    assert "order bound 3" in out_of(capsys)
    assert run(["terms", "nu", "corpus:z2", "--k", "4"]) == 1
    assert run(["terms", "nu", "corpus:l2", "--k", "2"]) == 2


def test_terms_size_bound_flag(capsys):
    assert run(["terms", "jonsson", "corpus:l2cube"]) == 0
    path_free = run(["terms", "jonsson", "corpus:l2cube", "--size-bound", "4"])
    assert path_free == 2


# --------------------------------------------------------------------- eval


def test_eval_statements(capsys):
    assert run(["eval", "c1 ; c2 = nabla", "--model", "corpus:z2z2"]) == 0
    assert out_of(capsys).strip() == "true"
    assert run(["eval", "c1 ; c2 = c1", "--model", "corpus:z2z2"]) == 1
    assert out_of(capsys).strip() == "false"


def test_eval_expression_output(capsys):
    assert run(["eval", "alt(c1, c2, 2)", "--model", "corpus:z2z2", "--json"]) == 0
    data = json.loads(out_of(capsys))
    assert data["relation"]["left"] == 4
    assert len(data["relation"]["pairs"]) == 16
    assert run(["eval", "delta", "--size", "3"]) == 0
    assert "3x3 relation, 3 pairs" in out_of(capsys)


def test_eval_relation_bindings(tmp_path, capsys):
    rel = Relation.from_pairs(3, 3, [(0, 1), (1, 2)])
    path = tmp_path / "edge.rel"
    path.write_text(format_relation("edge", rel))
    assert run(["eval", "E ; E", "--rel", f"E={path}"]) == 0
    assert "(0,2)" in out_of(capsys)
    assert run(["eval", "E", "--rel", "E={0 1, 2 0}", "--size", "3"]) == 0
    assert "(2,0)" in out_of(capsys)
    assert run(["eval", "E & c0", "--rel", "E={0 1}", "--model", "corpus:l2"]) == 0


def test_eval_errors(capsys):
    assert run(["eval", "R &", "--size", "2"]) == 2
    assert run(["eval", "R", "--size", "2"]) == 2
    assert "unbound" in capsys.readouterr().err
    assert run(["eval", "E", "--rel", "E={0 1}"]) == 2
    assert "need --model or --size" in capsys.readouterr().err
    assert run(["eval", "E", "--rel", "E=/does/not/exist.rel"]) == 2
    assert run(["eval", "E", "--rel", "badspec", "--size", "2"]) == 2
    assert run(["eval", "E", "--rel", "E={0 1 2}", "--size", "3"]) == 2
    assert run(["eval", "delta"]) == 2


# ------------------------------------------------------------------- corpus


def test_corpus_list(capsys):
    assert run(["corpus", "list"]) == 0
    out = out_of(capsys)
    for name in corpus_names():
        assert name in out


def test_corpus_verify(capsys):
    assert run(["corpus", "verify", "--json"]) == 0
    data = json.loads(out_of(capsys))
    assert data["schema"] == 1 and data["holds"] is True
    assert len(data["entries"]) == len(corpus_names())


# -------------------------------------------------------------------- usage


def test_usage_errors(capsys):
    assert run([]) == 2
    assert run(["frobnicate"]) == 2
    assert run(["check", "nonsense", "corpus:l2"]) == 2
    capsys.readouterr()
