"""Command line: analyze, fe, expand, reverse, oracle, fischer.

Exit codes: 0 success / true verdict, 1 false verdict, 2 invalid input,
3 oracle disagreement.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from soficflow.fischer import FischerError, as_cover, fischer_cover, verify_fischer
from soficflow.invariants import (InvariantError, bowen_franks, multiplicity_graph,
                                  near_markov_fe, sft_flow_equivalent)
from soficflow.oracle import DEFAULT_PERIOD_BOUND, DEFAULT_WORD_BOUND, cross_check
from soficflow.presentation import (PresentationError, parse, render, reverse, symbol_expand,
                                    validate)
from soficflow.skew import build_Bk, opp
from soficflow.tupleflow import analyze, render_tuple

SCHEMA_VERSION = 1

OK, FALSE, INVALID, DISAGREE = 0, 1, 2, 3


class InputError(Exception):
    """Rejected input; the message names the stage."""


def _emit(args, doc: dict, human: list[str]) -> None:
    if args.json:
        doc = {"schema_version": SCHEMA_VERSION, **doc}
        print(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print("\n".join(human))


def _load(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"read: {exc}") from exc
    try:
        return parse(text)
    except PresentationError as exc:
        raise InputError(f"parse: {path}: {exc}") from exc


def _cover(p, args):
    """Fischer cover of ``p``: verified as given, or constructed."""
    if args.assume_fischer:
        try:
            return as_cover(p, args.magic_bound)
        except FischerError as exc:
            raise InputError(f"fischer: {exc}") from exc
    report = validate(p)
    if not (report.is_essential and report.is_irreducible):
        raise InputError("validate: " + "; ".join(report.failures()))
    try:
        return fischer_cover(p, args.magic_bound)
    except FischerError as exc:
        raise InputError(f"fischer: {exc}") from exc


def _flags(report) -> dict:
    return {"is_essential": report.is_essential, "is_irreducible": report.is_irreducible,
            "is_right_resolving": report.is_right_resolving,
            "is_follower_separated": report.is_follower_separated}


def _group(g) -> dict:
    return {"invariant_factors": list(g.invariant_factors), "free_rank": g.free_rank, "text": str(g)}


def _matrix_doc(M) -> dict:
    return {"k": M.k, "dim": M.dim, "cells": M.cell_strings(one_line=True),
            "cycles": M.cell_strings(), "augmentation": M.augmentation()}


def _mugraph_doc(mg) -> dict:
    return {"right_lengths": list(mg.right),
            "left": [{"target": j, "w": w, "length": n} for j, w, n in mg.left],
            "right_labels": list(mg.labels), "canonical": [list(x) for x in mg.canonical()]}


# ---------------------------------------------------------------- analyze

def analysis_report(p, cover, with_oracle: bool = False, L: int = DEFAULT_WORD_BOUND,
                    P: int = DEFAULT_PERIOD_BOUND) -> tuple[dict, list[str]]:
    cp = cover.presentation
    g, rep = analyze(cover)
    v = verify_fischer(cp)
    bf, d = bowen_franks(cp.adjacency())
    tup = lambda i: render_tuple(i, cp)  # noqa: E731
    edge = lambda e: g.render(e) if e else None  # noqa: E731

    doc = {
        "input": {"states": list(p.states), "edges": len(p.edges),
                  "alphabet": sorted(p.alphabet), "validation": _flags(validate(p))},
        "fischer": {"states": list(cp.states), "edges": len(cp.edges),
                    "provenance": {s: sorted(prov) for s, prov in zip(cp.states, cover.provenance)},
                    "verified": v.is_fischer,
                    "magic_word": list(v.certificate.word) if v.certificate else None},
        "tuple_graph": {"vertices": [tup(i) for i in g.vertices if len(i) >= 2],
                        "edges": [g.render(e) for e in g.edges if len(e[0]) >= 2],
                        "rounds": g.rounds},
        "classification": {"is_aft": rep.is_aft, "is_pet": rep.is_pet,
                           "is_near_markov": rep.is_near_markov,
                           "aft_witness": edge(rep.aft_witness), "pet_witness": edge(rep.pet_witness),
                           "near_markov_witness": tup(rep.near_markov_witness)
                           if rep.near_markov_witness else None},
        "multicard": {"values": sorted(rep.multicard), "kind": rep.multicard_kind,
                      "tuple_sizes": sorted(rep.tuple_sizes)},
        "integer_matrices": {str(k): g.adjacency(k)[1] for k in sorted(rep.tuple_sizes)},
        "cover_sft": {"bowen_franks": _group(bf), "det": d},
    }
    human = [
        f"input: {len(p.states)} states, {len(p.edges)} edges, alphabet {' '.join(sorted(p.alphabet))}",
        f"fischer cover: {cp.n} states, verified {str(v.is_fischer).lower()}, "
        f"magic word {' '.join(v.certificate.word) if v.certificate else '-'}",
        "tuple graph (sizes >= 2): " + (", ".join(tup(i) for i in g.vertices if len(i) >= 2) or "empty"),
    ]
    human += ["  " + g.render(e) for e in g.edges if len(e[0]) >= 2]
    human += [
        f"AFT: {str(rep.is_aft).lower()}" + (f"  witness {edge(rep.aft_witness)}" if rep.aft_witness else ""),
        f"PET: {str(rep.is_pet).lower()}" + (f"  witness {edge(rep.pet_witness)}" if rep.pet_witness else ""),
        f"near Markov: {str(rep.is_near_markov).lower()}"
        + (f"  witness {tup(rep.near_markov_witness)}" if rep.near_markov_witness else ""),
        "MultiCard: {" + ", ".join(map(str, sorted(rep.multicard))) + "}"
        + ("" if rep.multicard_kind == "exact" else f"  ({rep.multicard_kind})"),
    ]
    if rep.tuple_sizes != rep.multicard:
        human.append("tuple sizes: {" + ", ".join(map(str, sorted(rep.tuple_sizes)))
                     + "}  (smaller pieces shadow points with more preimages)")
    if rep.is_pet:
        doc["group_ring_matrices"] = {}
        for k in sorted(rep.tuple_sizes):
            M = build_Bk(g, k)
            doc["group_ring_matrices"][str(k)] = {"B": _matrix_doc(M), "opp": _matrix_doc(opp(M))}
            rows = " ".join(tup(i) for i in M.rows)
            human.append(f"B_{k} over {rows}:")
            human += ["  " + line for line in M.render().splitlines()]
    human.append(f"cover SFT: Bowen-Franks {bf}, det(I-A) = {d}")
    if rep.is_near_markov:
        mg = multiplicity_graph(cover, (g, rep))
        doc["invariant_triple"] = {"bowen_franks": _group(bf), "det": d, "multiplicity_graph": _mugraph_doc(mg)}
        human.append(f"invariant triple: ({bf}, {d}, {mg})")
    if with_oracle:
        orc = cross_check(cover, p, L, P)
        doc["oracle"] = {"ok": orc.ok, "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail}
                                                  for c in orc.checks]}
        human.append("oracle: " + ("all checks pass" if orc.ok else "DISAGREEMENT"))
    return doc, human


def _analyze_one(path: str, args):
    p = _load(path)
    cover = _cover(p, args)
    doc, human = analysis_report(p, cover, args.oracle, args.word_bound, args.period_bound)
    return {"file": path, **doc}, human


def cmd_analyze(args) -> int:
    # files are independent; map keeps the input order
    with ThreadPoolExecutor(max_workers=min(len(args.files), 4)) as pool:
        results = list(pool.map(lambda f: _analyze_one(f, args), args.files))
    if len(results) == 1:
        doc, human = results[0]
        _emit(args, {"command": "analyze", **doc}, human)
    else:
        human = []
        for doc, lines in results:
            human += [f"== {doc['file']}", *lines, ""]
        _emit(args, {"command": "analyze", "reports": [d for d, _ in results]}, human[:-1])
    if args.oracle and not all(d["oracle"]["ok"] for d, _ in results):
        return DISAGREE
    return OK


# ---------------------------------------------------------------- fe

def _side(verdict_part):
    if verdict_part is None:
        return None
    if isinstance(verdict_part, tuple):
        g, d = verdict_part
        return {"bowen_franks": _group(g), "det": d}
    return {"bowen_franks": _group(verdict_part.bf), "det": verdict_part.det,
            "multiplicity_graph": _mugraph_doc(verdict_part.mugraph)}


def _side_text(part) -> str:
    if part is None:
        return "-"
    if isinstance(part, tuple):
        return f"({part[0]}, {part[1]})"
    return str(part)


def cmd_fe(args) -> int:
    a, b = _load(args.file_a), _load(args.file_b)
    try:
        if args.mode == "sft":
            verdict = sft_flow_equivalent(a.adjacency(), b.adjacency())
        else:
            verdict = near_markov_fe(_cover(a, args), _cover(b, args))
    except InvariantError as exc:
        raise InputError(f"fe: {exc}") from exc
    doc = {"command": "fe", "mode": args.mode, "files": [args.file_a, args.file_b],
           "equivalent": verdict.equivalent, "reason": verdict.reason,
           "invariants": [_side(verdict.left), _side(verdict.right)]}
    human = [f"flow equivalent ({args.mode}): {str(verdict.equivalent).lower()}",
             f"  {args.file_a}: {_side_text(verdict.left)}",
             f"  {args.file_b}: {_side_text(verdict.right)}",
             f"  {verdict.reason}"]
    _emit(args, doc, human)
    return OK if verdict.equivalent else FALSE


# ---------------------------------------------------------------- transformations

def _write(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_expand(args) -> int:
    p = _load(args.file)
    try:
        q = symbol_expand(p, args.symbol)
    except PresentationError as exc:
        raise InputError(f"expand: {exc}") from exc
    _write(args, render(q))
    return OK


def cmd_reverse(args) -> int:
    _write(args, render(reverse(_load(args.file))))
    return OK


def cmd_fischer(args) -> int:
    p = _load(args.file)
    cover = _cover(p, args)
    cp = cover.presentation
    doc = {"command": "fischer", "file": args.file, "presentation": render(cp),
           "provenance": {s: sorted(prov) for s, prov in zip(cp.states, cover.provenance)},
           "magic_words": {s: list(w) for s, w in zip(cp.states, cover.magic_words)}}
    human = [render(cp).rstrip("\n"), "# provenance and magic words"]
    human += [f"# {s}: {{{' '.join(sorted(prov))}}} via {' '.join(w)}"
              for s, prov, w in zip(cp.states, cover.provenance, cover.magic_words)]
    _emit(args, doc, human)
    return OK


def cmd_oracle(args) -> int:
    p = _load(args.file)
    cover = _cover(p, args)
    report = cross_check(cover, p, args.word_bound, args.period_bound)
    doc = {"command": "oracle", "file": args.file, "ok": report.ok,
           "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in report.checks],
           "census": [{"period": r.period, "word": list(r.word), "count": r.count,
                       "orbit_lengths": list(r.orbit_lengths)} for r in report.census]}
    human = [f"{'ok  ' if c.ok else 'FAIL'} {c.name}" + (f"  ({c.detail})" if c.detail else "")
             for c in report.checks]
    human.append(f"census (periods <= {args.period_bound}):")
    human += ["  " + r.render() for r in report.census]
    _emit(args, doc, human)
    return OK if report.ok else DISAGREE


# ---------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="soficflow", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON document")
    common.add_argument("--assume-fischer", action="store_true",
                        help="verify the input is a Fischer cover instead of constructing one")
    common.add_argument("--magic-bound", type=int, default=None, metavar="N",
                        help="length bound for synchronizing-word search (default 2^n * n)")
    common.add_argument("--word-bound", type=int, default=DEFAULT_WORD_BOUND, metavar="L")
    common.add_argument("--period-bound", "--period", type=int, default=DEFAULT_PERIOD_BOUND,
                        metavar="P", dest="period_bound")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="classify and compute invariants")
    p.add_argument("files", nargs="+", metavar="file")
    p.add_argument("--oracle", action="store_true", help="include brute-force cross checks")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("fe", parents=[common], help="decide flow equivalence")
    p.add_argument("--mode", choices=["sft", "near-markov"], default="sft")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.set_defaults(func=cmd_fe)

    p = sub.add_parser("expand", parents=[common], help="symbol expansion")
    p.add_argument("file")
    p.add_argument("symbol")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("reverse", parents=[common], help="time reversal")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reverse)

    p = sub.add_parser("oracle", parents=[common], help="brute-force cross checks")
    p.add_argument("file")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("fischer", parents=[common], help="print the right Fischer cover")
    p.add_argument("file")
    p.set_defaults(func=cmd_fischer)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
