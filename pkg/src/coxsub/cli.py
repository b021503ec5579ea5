"""Command line surface.

Subcommands: ``complex`` builds one subword complex, ``classify`` grades a
single braid move, ``chain`` replays a move sequence, ``poset`` builds the
reduced-word order, ``demo`` reruns the worked dihedral and rank-3 chain
examples with their frozen expectations, ``bench`` times the compiled
kernels against the uncompiled source.

Exit codes: 0 success, 2 unusable input, 3 a verification check failed.
All output except bench timings is deterministic for a fixed invocation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import backend
from .braid import (CASE_NAMES, apply_sequence, classify, find_move_path,
                    move_context)
from .coxeter import CoxeterMatrix, CoxeterSystem
from .rhoposet import build_rho, export_dot, poset_json
from .subword import SubwordDescriptor, build, complex_json


def parse_word(text: str) -> tuple[int, ...]:
    parts = text.replace(",", " ").split()
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise ValueError(f"cannot parse word {text!r}: use 1-based letters")


def load_system(spec: str, tol: float) -> CoxeterSystem:
    if os.path.isfile(spec):
        with open(spec) as fh:
            spec = fh.read().strip()
    return CoxeterSystem(CoxeterMatrix.from_spec(spec), tol=tol)


def resolve_pi(system: CoxeterSystem, text: str):
    if text.strip().lower() in ("w0", "wo", "longest"):
        return system.longest_element()
    return system.element_of(parse_word(text))


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return sorted((_jsonable(v) for v in x), key=str)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def _complex_summary(x) -> dict:
    index = {v: k for k, v in enumerate(x.vertices)}
    out = {
        "vertices": [str(v) for v in x.vertices],
        "facets": sorted(sorted(index[v] for v in fs) for fs in x.facet_label_sets()),
        "f_vector": list(x.f_vector()),
        "h_vector": None if x.is_void else list(x.h_vector()),
    }
    return out


def _mono_json(poly: dict) -> list:
    return [[a, t, c] for (a, t), c in sorted(poly.items())]


def _poly_json(poly) -> dict | None:
    if poly is None:
        return None
    return {
        "delta_h": _mono_json(poly.delta_h),
        "rhs_h": _mono_json(poly.rhs_h),
        "h_ok": poly.h_ok,
        "spherical": list(poly.spherical),
        "delta_gamma": _jsonable(poly.delta_gamma),
        "rhs_gamma": _jsonable(poly.rhs_gamma),
        "gamma_ok": poly.gamma_ok,
    }


def report_ok(rep) -> bool:
    """No claimed witness or identity failed (unsupported moves claim none)."""
    if rep.witness_ok is False or not rep.decomposition.ok:
        return False
    if rep.poly is not None and (not rep.poly.h_ok or rep.poly.gamma_ok is False):
        return False
    return True


def case_report_json(rep) -> dict:
    return {
        "m": rep.m,
        "window": [rep.ctx.i, rep.ctx.j],
        "case": rep.case,
        "case_name": rep.case_name,
        "supported": rep.supported,
        "conditions": {"A2": rep.A2, "B2": rep.B2, "A3": rep.A3, "B3": rep.B3},
        "delta1": _complex_summary(rep.delta1),
        "delta2": _complex_summary(rep.delta2),
        "witness": _jsonable(rep.witness),
        "witness_ok": rep.witness_ok,
        "decomposition": {
            "ok": rep.decomposition.ok,
            "chain_checked": rep.decomposition.chain_checked,
            "checks": [[name, good] for name, good in rep.decomposition.checks],
        },
        "poly": _poly_json(rep.poly),
        "ok": report_ok(rep),
    }


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _word_text(word) -> str:
    if word and max(word) > 9:
        return "-".join(map(str, word))
    return "".join(map(str, word))


# -- subcommands --------------------------------------------------------------


def cmd_complex(args) -> int:
    system = load_system(args.group, args.tolerance)
    word = parse_word(args.word)
    pi = resolve_pi(system, args.pi)
    d = SubwordDescriptor(system, word, pi)
    out = complex_json(d)
    if args.json:
        _emit(out)
        return 0
    x = build(d)
    print(f"word {_word_text(word)}  (rank {system.rank})")
    print(f"f-vector {tuple(out['f_vector'])}  spherical {out['spherical']}"
          f"  flag {out['flag']}")
    if out["h_vector"] is not None:
        print(f"h-vector {tuple(out['h_vector'])}")
    if out["gamma"] is not None:
        print(f"gamma    {tuple(out['gamma'])}")
    if x.is_void:
        print("facets   none (void complex)")
    else:
        facets = " ".join(
            "{" + ",".join(str(v) for v in sorted(fs, key=str)) + "}"
            for fs in sorted(x.facet_label_sets(), key=lambda s: sorted(map(str, s)))
        )
        print(f"facets   {facets if facets else '{} (single empty face)'}")
    return 0


def cmd_classify(args) -> int:
    system = load_system(args.group, args.tolerance)
    word = parse_word(args.word)
    pi = resolve_pi(system, args.pi)
    ctx = move_context(system, word, args.pos, pi)
    rep = classify(ctx)
    if args.json:
        _emit(case_report_json(rep))
    else:
        print(f"window ({ctx.i},{ctx.j}) of order {rep.m} at position {args.pos}")
        conds = f"A2={rep.A2} B2={rep.B2}"
        if rep.A3 is not None:
            conds += f" A3={rep.A3} B3={rep.B3}"
        print(f"conditions {conds}")
        if rep.case is None:
            print("case: unsupported (length-3 conditions fail on a long window)")
        else:
            print(f"case {rep.case} ({rep.case_name})")
            print(f"witness verified: {rep.witness_ok}")
        print(f"side 1 f-vector {rep.delta1.f_vector()}, side 2 f-vector {rep.delta2.f_vector()}")
        dec = rep.decomposition
        print(f"decomposition identities: {'ok' if dec.ok else 'FAILED'}"
              f" ({len(dec.checks)} checks, chain {'included' if dec.chain_checked else 'not applicable'})")
        if rep.poly is not None:
            print(f"h identity: {rep.poly.h_ok}   gamma identity: {rep.poly.gamma_ok}")
    return 0 if report_ok(rep) else 3


def cmd_chain(args) -> int:
    system = load_system(args.group, args.tolerance)
    word = parse_word(args.word)
    pi = resolve_pi(system, args.pi)
    if args.moves:
        positions = [int(p) for p in args.moves.replace(",", " ").split()]
    elif args.goal:
        goal = parse_word(args.goal)
        positions = find_move_path(system, word, goal, cap=args.cap)
    else:
        raise ValueError("chain needs --moves or --goal")
    rep = apply_sequence(system, word, pi, positions)
    ok = all(report_ok(s.report) for s in rep.steps)
    if args.json:
        _emit({
            "words": [list(w) for w in rep.words],
            "moves": positions,
            "rows": [
                {"word": list(r["word"]),
                 "f_vector": list(r["f_vector"]),
                 "vertices": [str(v) for v in r["vertices"]],
                 "h_vector": None if r["h_vector"] is None else list(r["h_vector"]),
                 "spherical": r["spherical"],
                 "gamma": None if r["gamma"] is None else list(r["gamma"]),
                 "gamma1": r["gamma1"]}
                for r in rep.rows
            ],
            "steps": [
                {"pos": s.pos, "case": s.report.case,
                 "case_name": s.report.case_name,
                 "witness_ok": s.report.witness_ok,
                 "ok": report_ok(s.report)}
                for s in rep.steps
            ],
            "ok": ok,
        })
        return 0 if ok else 3
    for k, row in enumerate(rep.rows):
        g = row["gamma"]
        print(f"{_word_text(row['word'])}  f={row['f_vector']}"
              f"  gamma={g if g is not None else '-'}")
        if k < len(rep.steps):
            s = rep.steps[k]
            print(f"  | move at {s.pos}: case {s.report.case or '-'}"
                  f" ({s.report.case_name}), verified {s.report.witness_ok}")
    print(f"sequence {'ok' if ok else 'FAILED'}")
    return 0 if ok else 3


def cmd_poset(args) -> int:
    system = load_system(args.group, args.tolerance)
    Q = parse_word(args.Q)
    Qp = parse_word(args.Qprime)
    pi = resolve_pi(system, args.pi)
    p = build_rho(system, Q, Qp, pi, cap=args.cap)
    out = poset_json(p)
    wrote = False
    if args.dot:
        text = export_dot(p)
        if args.dot == "-":
            sys.stdout.write(text)
        else:
            with open(args.dot, "w") as fh:
                fh.write(text)
        wrote = True
    if args.json:
        if args.json == "-":
            _emit(out)
        else:
            with open(args.json, "w") as fh:
                json.dump(out, fh, indent=2, sort_keys=True)
                fh.write("\n")
        wrote = True
    if not wrote:
        sl = out["semilattice"]
        print(f"{len(p.words)} reduced words, {len(p.classes)} classes,"
              f" {len(out['cover_edges'])} cover moves,"
              f" {len(out['iso_edges'])} isomorphism moves")
        print(f"antisymmetric: {p.antisymmetric}")
        if p.violations:
            print(f"violations: {p.violations}")
        if sl["applicable"]:
            print(f"meet-semilattice: {sl['meet']}   join-semilattice: {sl['join']}")
            for kind in ("meet", "join"):
                cert = sl[f"{kind}_certificate"]
                if cert:
                    print(f"  {kind} fails at pair {cert['pair']},"
                          f" extremal bounds {cert['bounds']}")
        if p.gap.checked:
            print(f"definition gap: iso pairs {len(p.gap.iso_pairs)},"
                  f" subdivision pairs {len(p.gap.subdivision_pairs)}"
                  f"{' (scan truncated)' if p.gap.truncated else ''}")
    bad = [e for e in p.edges if e.lower is not None and not e.verified]
    return 3 if bad else 0


# -- demos with frozen expectations -------------------------------------------

CHAIN_START = (1, 2, 3, 3, 2, 1, 3, 2, 3)
CHAIN_MOVES = (6, 4, 6, 5, 8, 6, 4, 6)
CHAIN_ROWS = (0, 1, 2, 3, 5, 6, 7, 8)  # word 4 is a commutation midpoint
CHAIN_NAMES = ("I^3", "I^3", "I x As^2", "I x As^2", "I x As^2",
               "P^3", "As^3", "As^3")
CHAIN_F = ((6, 12, 8), (6, 12, 8), (7, 15, 10), (7, 15, 10), (7, 15, 10),
           (8, 18, 12), (9, 21, 14), (9, 21, 14))
CHAIN_G1 = (0, 0, 1, 1, 1, 2, 3, 3)
CHAIN_VERTS = ({1, 2, 3, 4, 7, 9}, {1, 2, 3, 4, 6, 9}, {1, 2, 3, 4, 5, 6, 9},
               {1, 2, 3, 4, 5, 8, 9}, {1, 2, 3, 4, 6, 8, 9},
               {1, 2, 3, 4, 6, 7, 8, 9}, set(range(1, 10)), set(range(1, 10)))


def demo_i2(args) -> int:
    m = args.m
    if m < 3:
        raise ValueError("the dihedral demo needs m >= 3")
    system = load_system(f"I2:{m}", args.tolerance)
    w0 = system.longest_element()
    word = (1, 2) + tuple(1 if t % 2 == 0 else 2 for t in range(m))
    rep = classify(move_context(system, word, 3, w0))
    f1, f2 = rep.delta1.f_vector(), rep.delta2.f_vector()
    g1 = rep.delta1.gamma().coeffs
    g2 = rep.delta2.gamma().coeffs
    diff = g1[1] - g2[1]
    print(f"I2({m}): word {_word_text(word)}, window at 3, pi the longest element")
    print(f"case {rep.case} ({rep.case_name}), witness verified {rep.witness_ok}")
    print(f"side 1: boundary of the {m + 2}-gon, f={f1}, gamma={g1}")
    print(f"side 2: boundary of the square, f={f2}, gamma={g2}")
    print(f"gamma(side 1) - gamma(side 2) = {diff}*tau   (m - 2 = {m - 2})")
    print(f"h identity {rep.poly.h_ok}, gamma identity {rep.poly.gamma_ok}")
    good = (rep.case == 2 and rep.witness_ok and report_ok(rep)
            and f2 == (4, 4) and f1 == (m + 2, m + 2) and diff == m - 2)
    print("demo ok" if good else "demo FAILED")
    return 0 if good else 3


def demo_a3_chain(args) -> int:
    system = load_system("A3", args.tolerance)
    w0 = system.longest_element()
    rep = apply_sequence(system, CHAIN_START, w0, CHAIN_MOVES)
    good = all(report_ok(s.report) and s.report.supported for s in rep.steps)
    shown = []
    for r, k in enumerate(CHAIN_ROWS):
        row = rep.rows[k]
        verts = {int(v) for v in row["vertices"]}
        line_ok = (row["f_vector"] == CHAIN_F[r]
                   and row["gamma1"] == CHAIN_G1[r]
                   and verts == CHAIN_VERTS[r])
        good = good and line_ok
        word = row["word"]
        marked = "".join(
            f"[{a}]" if p + 1 in verts else str(a) for p, a in enumerate(word))
        shown.append((marked, row, line_ok))
    w = max(len(s) for s, _, _ in shown)
    print("bracketed letters are the complex's vertices; the right column")
    print("names the dual polytope")
    for r, (marked, row, line_ok) in enumerate(shown):
        print(f"{marked:<{w}}  f={row['f_vector']!s:<12} gamma1={row['gamma1']}"
              f"  {CHAIN_NAMES[r]:<9}{'' if line_ok else '  MISMATCH'}")
    cases = [s.report.case for s in rep.steps]
    print(f"moves at {list(CHAIN_MOVES)} classify as cases {cases}")
    print(f"gamma1 trajectory {tuple(rep.rows[k]['gamma1'] for k in CHAIN_ROWS)}")
    print("demo ok" if good else "demo FAILED")
    return 0 if good else 3


def cmd_demo(args) -> int:
    if args.which == "i2":
        return demo_i2(args)
    return demo_a3_chain(args)


def cmd_bench(args) -> int:
    system = load_system(args.group, args.tolerance)
    w0 = system.longest_element()
    cw = system.c_sorting_word(range(1, system.rank + 1), w0)
    word = (cw * ((args.length + len(cw) - 1) // len(cw)))[:args.length]
    w = np.array([a - 1 for a in word], dtype=np.int64)
    pi_inv = np.ascontiguousarray(np.linalg.inv(w0.mat))
    pi_len = system.length(w0)
    out = np.empty(1 << 20, dtype=np.int64)

    def run(kernels) -> tuple[float, int]:
        k = int(kernels.reduced_subword_masks(
            system.refl, w, pi_inv, pi_len, system.tol, out, 2 ** 62))
        best = float("inf")
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            kernels.reduced_subword_masks(
                system.refl, w, pi_inv, pi_len, system.tol, out, 2 ** 62)
            best = min(best, time.perf_counter() - t0)
        return best * 1e3, k

    py_ms, count = run(backend.python_kernels)
    nb_ms = None
    if backend.numba_kernels is not None:
        nb_ms, count2 = run(backend.numba_kernels)
        if count2 != count:
            print("backend disagreement on mask count", file=sys.stderr)
            return 3
    result = {
        "group": args.group,
        "word_length": len(word),
        "masks": count,
        "python_ms": round(py_ms, 3),
        "numba_ms": None if nb_ms is None else round(nb_ms, 3),
        "speedup": None if nb_ms is None else round(py_ms / nb_ms, 1),
        "active_backend": backend.backend_name(),
    }
    if args.json:
        _emit(result)
    else:
        print(f"{len(word)}-letter word in {args.group}: {count} reduced subwords")
        print(f"python  {py_ms:9.3f} ms")
        if nb_ms is None:
            print("numba   unavailable")
        else:
            print(f"numba   {nb_ms:9.3f} ms   ({py_ms / nb_ms:.1f}x)")
    return 0


# -- parser --------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="coxsub",
        description="subword complexes of Coxeter systems and their braid moves")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, cap=False):
        p.add_argument("--group", required=True,
                       help="type name (A3, B4, H3, I2:7, ...), inline JSON, or a file")
        p.add_argument("--tolerance", type=float, default=1e-6,
                       help="rounding grid for group-element matrices")
        if cap:
            p.add_argument("--cap", type=int, default=100_000,
                           help="enumeration size guard")

    p = sub.add_parser("complex", help="build one subword complex")
    common(p)
    p.add_argument("--word", required=True, help="letters, e.g. 1,2,1,2,1")
    p.add_argument("--pi", required=True, help="target element word, or w0")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_complex)

    p = sub.add_parser("classify", help="grade one braid move")
    common(p)
    p.add_argument("--word", required=True)
    p.add_argument("--pos", type=int, required=True,
                   help="1-based start of the alternating window")
    p.add_argument("--pi", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("chain", help="replay a sequence of braid moves")
    common(p, cap=True)
    p.add_argument("--word", required=True)
    p.add_argument("--pi", required=True)
    p.add_argument("--moves", help="positions, e.g. 6,4,6,5,8,6,4,6")
    p.add_argument("--goal", help="find a shortest move path to this word")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_chain)

    p = sub.add_parser("poset", help="order the reduced words of pi")
    common(p, cap=True)
    p.add_argument("--Q", default="", help="left factor word")
    p.add_argument("--Qprime", default="", help="right factor word")
    p.add_argument("--pi", required=True)
    p.add_argument("--dot", help="write the Hasse diagram here ('-' = stdout)")
    p.add_argument("--json", help="write the order summary here ('-' = stdout)")
    p.add_argument("--seed", type=int, default=0,
                   help="accepted for reproducible pipelines; the build is deterministic")
    p.set_defaults(fn=cmd_poset)

    p = sub.add_parser("demo", help="replay a worked example and verify it")
    p.add_argument("which", choices=("i2", "a3-chain"))
    p.add_argument("--m", type=int, default=5, help="dihedral order for the i2 demo")
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.set_defaults(fn=cmd_demo)

    p = sub.add_parser("bench", help="time the compiled kernels against pure python")
    common(p)
    p.add_argument("--length", type=int, default=18, help="benchmark word length")
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_bench)
    return top


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, KeyError, OSError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
