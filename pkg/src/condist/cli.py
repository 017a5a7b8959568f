"""Command-line driver.

Exit codes: 0 when the queried property holds (or the command just succeeds),
1 when a counterexample or negative answer is found, 2 for usage and input
errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Optional

from .algebras import AlgebraParseError
from .congruences import (
    congruence_lattice,
    is_distributive,
    is_modular,
    lattice_to_dot,
    lattice_to_json,
)
from .corpus import builtin_corpus, resolve_algebra, verify_entry
from .dsl import DslError, DslEvalError, evaluate, parse
from .lemmas import (
    check_factor_permutability_family,
    check_freyd,
    check_shifting_family,
    check_trapezoid_family,
    jonsson_order_relational,
    random_reflexive,
)
from .relations import Relation, RelationParseError, load_relation
from .terms import (
    F3_SIZE_BOUND,
    FreeAlgebraCapError,
    find_jonsson_chain,
    find_majority_term,
    find_near_unanimity,
)


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="condist",
        description="finite-model checks for congruence-distributivity conditions",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("conlat", help="congruence lattice of an algebra")
    p.add_argument("model", help="corpus:NAME or path to an .alg file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--dot", action="store_true", help="emit a Hasse diagram in DOT")
    g.add_argument("--json", action="store_true")
    p.add_argument("--size-bound", type=int, default=12)

    p = sub.add_parser("check", help="decision procedures")
    which = p.add_subparsers(dest="which", required=True)
    for name in ("trapezoid", "shifting", "factor-perm"):
        q = which.add_parser(name)
        q.add_argument("model")
        q.add_argument("--deep", action="store_true",
                       help="also check the square and all quotients")
        q.add_argument("--json", action="store_true")
    q = which.add_parser("freyd")
    q.add_argument("model")
    q.add_argument("--trials", type=int, default=200)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--deep", action="store_true",
                   help="accepted for symmetry; freyd samples plain relations")
    q.add_argument("--json", action="store_true")

    p = sub.add_parser("jonsson-order", help="least relational order, if any")
    p.add_argument("model")
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("--deep", action="store_true")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("terms", help="term searches in free algebras")
    which = p.add_subparsers(dest="which", required=True)
    q = which.add_parser("jonsson")
    q.add_argument("model")
    q.add_argument("--max-n", type=int, default=None)
    q.add_argument("--size-bound", type=int, default=None)
    q.add_argument("--json", action="store_true")
    q = which.add_parser("majority")
    q.add_argument("model")
    q.add_argument("--size-bound", type=int, default=None)
    q.add_argument("--json", action="store_true")
    q = which.add_parser("nu")
    q.add_argument("model")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--size-bound", type=int, default=None)
    q.add_argument("--json", action="store_true")

    p = sub.add_parser("eval", help="evaluate a relation expression")
    p.add_argument("expr")
    p.add_argument("--model", default=None,
                   help="binds c0..cK to the model's congruences")
    p.add_argument("--rel", action="append", default=[], metavar="NAME=SPEC",
                   help="bind NAME to a relation file, or inline as NAME={a b, c d}")
    p.add_argument("--size", type=int, default=None)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("corpus", help="built-in algebras")
    which = p.add_subparsers(dest="which", required=True)
    which.add_parser("list")
    q = which.add_parser("verify")
    q.add_argument("--json", action="store_true")

    return top


def _emit(payload: dict, as_json: bool, text: str) -> None:
    if as_json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _cmd_conlat(args) -> int:
    algebra = resolve_algebra(args.model)
    lattice = congruence_lattice(algebra, size_bound=args.size_bound)
    if args.dot:
        sys.stdout.write(lattice_to_dot(lattice))
        return 0
    if args.json:
        sys.stdout.write(lattice_to_json(lattice))
        return 0
    dist = is_distributive(lattice).holds
    mod = is_modular(lattice).holds
    print(f"{args.model}: {len(lattice)} congruences, "
          f"distributive={dist}, modular={mod}")
    for i, c in enumerate(lattice.elements):
        blocks = " ".join("{" + ",".join(map(str, blk)) + "}" for blk in c.blocks())
        print(f"  c{i}: {blocks}")
    return 0


def _cmd_check(args) -> int:
    algebra = resolve_algebra(args.model)
    if args.which == "freyd":
        rng = random.Random(args.seed)
        n = algebra.size
        checked = 0
        for _ in range(args.trials):
            r = random_reflexive(rng, n, density=rng.random())
            s = random_reflexive(rng, n, density=rng.random())
            t = random_reflexive(rng, n, density=rng.random())
            v = check_freyd(r, s, t)
            checked += 1
            if not v.holds:
                payload = v.to_json(check="freyd", algebra=args.model, n=None)
                _emit(payload, args.json,
                      f"freyd FAILED after {checked} trials: {v.counterexample}")
                return 1
        payload = {"schema": 1, "check": "freyd", "algebra": args.model,
                   "n": None, "holds": True, "triples_checked": checked,
                   "skipped_vacuous": 0}
        _emit(payload, args.json, f"freyd holds on {checked} random triples")
        return 0

    runner = {
        "trapezoid": check_trapezoid_family,
        "shifting": check_shifting_family,
        "factor-perm": check_factor_permutability_family,
    }[args.which]
    verdict = runner(algebra, deep=args.deep)
    payload = verdict.to_json(check=args.which, algebra=args.model, n=None)
    if verdict.holds:
        _emit(payload, args.json,
              f"{args.which} holds ({verdict.checked} triples, "
              f"{verdict.skipped_vacuous} vacuous)")
        return 0
    _emit(payload, args.json,
          f"{args.which} fails: {verdict.counterexample}")
    return 1


def _cmd_jonsson_order(args) -> int:
    algebra = resolve_algebra(args.model)
    report = jonsson_order_relational(algebra, bound=args.max_n, deep=args.deep)
    payload = report.to_json(check="jonsson-order", algebra=args.model)
    if report.minimal_order is not None:
        _emit(payload, args.json,
              f"minimal relational order {report.minimal_order} "
              f"({report.triples_checked} triples over {', '.join(report.members)})")
        return 0
    detail = "definitively none" if report.definitive_none else f"none up to {report.bound}"
    _emit(payload, args.json, f"no relational order: {detail} ({report.failing})")
    return 1


def _cmd_terms(args) -> int:
    algebra = resolve_algebra(args.model)
    bound = args.size_bound
    if bound is None:
        bound = max(F3_SIZE_BOUND, algebra.size) if args.model.startswith("corpus:") \
            else F3_SIZE_BOUND
    if args.which == "jonsson":
        chain = find_jonsson_chain(algebra, max_n=args.max_n, size_bound=bound)
        if chain is None:
            payload = {"schema": 1, "check": "terms-jonsson", "algebra": args.model,
                       "n": None, "holds": False}
            _emit(payload, args.json, "no chain found")
            return 1
        payload = {"schema": 1, "check": "terms-jonsson", "algebra": args.model,
                   "n": chain.order, "holds": True, "terms": list(chain.terms)}
        lines = [f"chain of order {chain.order}:"]
        lines += [f"  p{i + 1} = {t}" for i, t in enumerate(chain.terms)]
        _emit(payload, args.json, "\n".join(lines))
        return 0
    if args.which == "majority":
        term = find_majority_term(algebra, size_bound=bound)
        if term is None:
            payload = {"schema": 1, "check": "terms-majority", "algebra": args.model,
                       "n": None, "holds": False}
            _emit(payload, args.json, "no majority term")
            return 1
        payload = {"schema": 1, "check": "terms-majority", "algebra": args.model,
                   "n": 1, "holds": True, "terms": [term.term]}
        _emit(payload, args.json, f"majority term: {term.term}")
        return 0
    term = find_near_unanimity(algebra, args.k,
                               size_bound=bound if args.size_bound else None)
    if term is None:
        payload = {"schema": 1, "check": "terms-nu", "algebra": args.model,
                   "n": None, "holds": False, "k": args.k}
        _emit(payload, args.json, f"no {args.k}-ary near-unanimity term")
        return 1
    payload = {"schema": 1, "check": "terms-nu", "algebra": args.model,
               "n": 2 * args.k - 5, "holds": True, "k": args.k,
               "terms": [term.term]}
    _emit(payload, args.json,
          f"{args.k}-ary near-unanimity term: {term.term} "
          f"(order bound {2 * args.k - 5})")
    return 0


def _parse_inline_relation(name: str, body: str, size: int) -> Relation:
    pairs = []
    body = body.strip()
    if body:
        for chunk in body.split(","):
            parts = chunk.split()
            if len(parts) != 2:
                raise ValueError(f"--rel {name}: expected 'a b' pairs, got {chunk!r}")
            pairs.append((int(parts[0]), int(parts[1])))
    return Relation.from_pairs(size, size, pairs)


def _cmd_eval(args) -> int:
    env: dict[str, Relation] = {}
    size: Optional[int] = args.size
    if args.model:
        algebra = resolve_algebra(args.model)
        size = algebra.size if size is None else size
        lattice = congruence_lattice(algebra)
        for i, c in enumerate(lattice.elements):
            env[f"c{i}"] = c.rel()
    pending_inline = []
    for binding in args.rel:
        if "=" not in binding:
            raise ValueError(f"--rel needs NAME=SPEC, got {binding!r}")
        name, spec = binding.split("=", 1)
        if spec.startswith("{") and spec.endswith("}"):
            pending_inline.append((name, spec[1:-1]))
        else:
            _, rel = load_relation(spec)
            env[name] = rel
    if size is None:
        dims = {d for r in env.values() for d in (r.left, r.right)}
        if len(dims) == 1:
            size = dims.pop()
    for name, body in pending_inline:
        if size is None:
            raise ValueError("inline relations need --model or --size for the carrier")
        env[name] = _parse_inline_relation(name, body, size)
    node = parse(args.expr)
    result = evaluate(node, env, size=size)
    if isinstance(result, bool):
        payload = {"schema": 1, "check": "eval", "expr": args.expr, "holds": result}
        _emit(payload, args.json, "true" if result else "false")
        return 0 if result else 1
    pairs = sorted(result.pairs())
    payload = {"schema": 1, "check": "eval", "expr": args.expr,
               "relation": {"left": result.left, "right": result.right,
                            "pairs": [list(p) for p in pairs]}}
    noun = "pair" if len(pairs) == 1 else "pairs"
    _emit(payload, args.json,
          f"{result.left}x{result.right} relation, {len(pairs)} {noun}: "
          + " ".join(f"({a},{b})" for a, b in pairs))
    return 0


def _cmd_corpus(args) -> int:
    if args.which == "list":
        for e in builtin_corpus():
            order = e.chain_order if e.chain_order is not None else "-"
            print(f"{e.name:8s} size {e.algebra.size:2d}  "
                  f"distributive={str(e.distributive):5s} "
                  f"permutable={e.permutability} order={order}  {e.note}")
        return 0
    all_ok = True
    results = []
    for e in builtin_corpus():
        rows = verify_entry(e)
        ok = all(r[1] for r in rows)
        all_ok = all_ok and ok
        results.append({"name": e.name, "ok": ok,
                        "checks": [{"check": c, "ok": o, "detail": d}
                                   for c, o, d in rows]})
        if not getattr(args, "json", False):
            mark = "ok" if ok else "FAIL"
            print(f"{e.name:8s} {mark}")
            for c, o, d in rows:
                if not o:
                    print(f"  {c}: {d}")
    if getattr(args, "json", False):
        print(json.dumps({"schema": 1, "check": "corpus-verify",
                          "holds": all_ok, "entries": results}, indent=2))
    return 0 if all_ok else 1


def run(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        if args.command == "conlat":
            return _cmd_conlat(args)
        if args.command == "check":
            return _cmd_check(args)
        if args.command == "jonsson-order":
            return _cmd_jonsson_order(args)
        if args.command == "terms":
            return _cmd_terms(args)
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "corpus":
            return _cmd_corpus(args)
        raise AssertionError(f"unhandled command {args.command}")
    except (ValueError, OSError, AlgebraParseError, RelationParseError,
            DslError, DslEvalError, FreeAlgebraCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    entry()
