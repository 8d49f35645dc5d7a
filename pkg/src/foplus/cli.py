"""Command-line surface.

Subcommands map one-to-one onto the library modules: automaton checks,
formula evaluation, game solving, the K language suite, graph encodings,
the mortality reduction, the integer game, and the HTTP game service.

Exit codes: 0 for success or a true verdict, 1 for a false verdict,
2 for usage errors (including malformed input files).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from itertools import product
from typing import Optional

import numpy as np

from . import automata as au
from . import games as gm
from . import graphs as gr
from . import intgame as ig
from . import klang
from . import logic as lg
from . import mortality as mt
from .core import OrderedAlphabet, Word, make_powerset_alphabet


class CliError(Exception):
    """Usage-level error: bad flags or malformed input files."""


def _read_json(path: str):
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as e:
        raise CliError(f"{path}: {e.strerror or e}") from None
    except json.JSONDecodeError as e:
        raise CliError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None


def _read_text(path: str) -> str:
    try:
        with open(path) as f:
            return f.read()
    except OSError as e:
        raise CliError(f"{path}: {e.strerror or e}") from None


def _write_json(path: Optional[str], payload: dict):
    payload = {"v": 1, **payload}
    if path is None:
        print(json.dumps(payload, indent=2))
    else:
        with open(path, "w") as f:
            json.dump(payload, f, indent=2)


def _load_nfa(path: str) -> au.Nfa:
    data = _read_json(path)
    try:
        return au.Nfa.from_json(data)
    except (KeyError, ValueError, TypeError) as e:
        raise CliError(f"{path}: bad automaton: {e}") from None


def _load_alphabet(path: str) -> OrderedAlphabet:
    data = _read_json(path)
    try:
        return OrderedAlphabet.from_json(data)
    except (KeyError, ValueError, TypeError) as e:
        raise CliError(f"{path}: bad alphabet: {e}") from None


def _load_word(path: str, alphabet: OrderedAlphabet) -> Word:
    data = _read_json(path)
    if not isinstance(data, list):
        raise CliError(f"{path}: word file must be an array of letter names")
    try:
        return Word.from_letters(alphabet, data)
    except ValueError as e:
        raise CliError(f"{path}: {e}") from None


def _emit(args, payload: dict, text: str):
    if getattr(args, "json", False):
        print(json.dumps({"v": 1, **payload}))
    else:
        print(text)


# --- automata ---------------------------------------------------------------


def cmd_check_monotone(args) -> int:
    nfa = _load_nfa(args.nfa)
    verdict = au.is_monotone(nfa)
    _emit(args, {"monotone": verdict},
          "monotone" if verdict else "not monotone")
    return 0 if verdict else 1


def cmd_closure(args) -> int:
    nfa = _load_nfa(args.nfa)
    _write_json(args.out, au.monotone_closure(nfa).to_json())
    return 0


def cmd_canonical(args) -> int:
    nfa = _load_nfa(args.nfa)
    _write_json(args.out, au.canonical_dfa(nfa).to_json())
    return 0


def cmd_aperiodic(args) -> int:
    nfa = _load_nfa(args.nfa)
    m = au.syntactic_monoid(nfa)
    verdict = au.is_aperiodic(m)
    _emit(args, {"aperiodic": verdict, "monoid_size": len(m)},
          f"{'aperiodic' if verdict else 'not aperiodic'} "
          f"(monoid size {len(m)})")
    return 0 if verdict else 1


def cmd_eggbox(args) -> int:
    nfa = _load_nfa(args.nfa)
    m = au.syntactic_monoid(nfa)
    rep = au.green_classes(m)
    if args.json:
        print(json.dumps({
            "v": 1, "monoid_size": len(m),
            "r_classes": [sorted(c) for c in rep.r_classes],
            "l_classes": [sorted(c) for c in rep.l_classes],
            "j_classes": [sorted(c) for c in rep.j_classes],
            "h_classes": [sorted(c) for c in rep.h_classes],
            "eggbox": rep.eggbox,
        }))
    else:
        print(rep.eggbox)
    return 0


# --- logic ------------------------------------------------------------------


def cmd_eval(args) -> int:
    alphabet = _load_alphabet(args.alphabet)
    try:
        formula = lg.parse(_read_text(args.formula), alphabet)
    except lg.FormulaError as e:
        raise CliError(f"{args.formula}: {e}") from None
    if args.mode == "fo+" and not lg.is_positive(formula, mode="word"):
        raise CliError("formula is not positive (use --mode fo)")
    if lg.free_vars(formula):
        raise CliError("formula has free variables")
    word = _load_word(args.word, alphabet)
    verdict = lg.eval_word_fast(formula, word)
    _emit(args, {"value": verdict}, "true" if verdict else "false")
    return 0 if verdict else 1


# --- games ------------------------------------------------------------------


def cmd_game_solve(args) -> int:
    alphabet = _load_alphabet(args.alphabet)
    u = _load_word(args.u, alphabet)
    v = _load_word(args.v, alphabet)
    try:
        dup = gm.duplicator_wins(u, v, args.rounds, cap=args.cap)
    except gm.GameError as e:
        raise CliError(str(e)) from None
    winner = "duplicator" if dup else "spoiler"
    if not dup and args.formula_out:
        f = gm.distinguishing_formula(u, v, args.rounds, cap=args.cap)
        with open(args.formula_out, "w") as fh:
            fh.write(lg.render(f) + "\n")
    _emit(args, {"winner": winner, "rounds": args.rounds},
          f"{winner} wins the {args.rounds}-round game")
    return 0 if dup else 1


# --- K suite ----------------------------------------------------------------


def cmd_k_suite(args) -> int:
    ctx = klang.build_K()
    report: dict = {"monotone": au.is_monotone(ctx.nfa)}
    m = au.syntactic_monoid(ctx.nfa)
    rep = au.green_classes(m)
    report["aperiodic"] = au.is_aperiodic(m)
    report["h_classes_singletons"] = all(len(h) == 1 for h in rep.h_classes)
    report["counter_free"] = au.is_counter_free(ctx.nfa)
    report["lemma44"] = {}
    for n in range(1, args.max_n + 1):
        u, v = klang.lemma44_words(n)
        report["lemma44"][n] = {
            "u_in_K": ctx.dfa.accepts(u),
            "v_in_K": ctx.dfa.accepts(v),
            "duplicator_wins": gm.duplicator_wins(u, v, n),
        }
    phi = klang.build_phi_K()
    mismatches = 0
    size = len(ctx.alphabet)
    for n in range(args.phi_check_len + 1):
        if n == 0:
            words = np.zeros((1, 0), dtype=int)
        else:
            words = np.array(list(product(range(size), repeat=n)))
        got = lg.eval_words_batch(phi, ctx.alphabet, words)
        want = np.array([ctx.dfa.accepts(tuple(w)) for w in words])
        mismatches += int((got != want).sum())
    report["phi_K_mismatches_to_len"] = {"len": args.phi_check_len,
                                         "mismatches": mismatches}
    if args.emit_dfa:
        _write_json(args.emit_dfa, ctx.dfa.to_json())
    ok = (report["monotone"] and report["aperiodic"]
          and report["h_classes_singletons"] and report["counter_free"]
          and mismatches == 0
          and all(r["u_in_K"] and not r["v_in_K"] and r["duplicator_wins"]
                  for r in report["lemma44"].values()))
    if args.json:
        print(json.dumps({"v": 1, **report, "ok": ok}))
    else:
        print(f"monotone={report['monotone']} "
              f"aperiodic={report['aperiodic']} "
              f"h_singletons={report['h_classes_singletons']} "
              f"counter_free={report['counter_free']}")
        for n, r in report["lemma44"].items():
            print(f"lemma44 n={n}: u_in_K={r['u_in_K']} "
                  f"v_in_K={r['v_in_K']} duplicator={r['duplicator_wins']}")
        print(f"phi_K exhaustive to length {args.phi_check_len}: "
              f"{mismatches} mismatches")
        print("ok" if ok else "FAILED")
    return 0 if ok else 1


# --- graphs -----------------------------------------------------------------


def _p3() -> OrderedAlphabet:
    return make_powerset_alphabet(["a", "b", "c"])


def cmd_graph_encode(args) -> int:
    word = _load_word(args.word, _p3())
    try:
        g = gr.encode_ugraph(word) if args.undirected \
            else gr.encode_digraph(word)
    except gr.GraphError as e:
        raise CliError(str(e)) from None
    _write_json(args.out, g.to_json())
    return 0


def _load_graph(path: str):
    data = _read_json(path)
    try:
        return gr.load_graph(data)
    except (KeyError, ValueError, TypeError) as e:
        raise CliError(f"{path}: bad graph: {e}") from None


def cmd_graph_decode(args) -> int:
    g = _load_graph(args.graph)
    try:
        word = gr.decode_ugraph(g) if isinstance(g, gr.UGraph) \
            else gr.decode_digraph(g)
    except gr.GraphError as e:
        raise CliError(str(e)) from None
    _emit(args, {"word": word.letters_list()}, str(word))
    return 0


def cmd_graph_check(args) -> int:
    g = _load_graph(args.graph)
    bad = gr.check_ugraph(g) if isinstance(g, gr.UGraph) \
        else gr.check_digraph(g)
    _emit(args, {"violations": bad},
          "valid encoding" if not bad else "violated: " + ", ".join(bad))
    return 0 if not bad else 1


def cmd_graph_game(args) -> int:
    g1, g2 = _load_graph(args.g1), _load_graph(args.g2)
    try:
        dup = gr.ef_game_graph(g1, g2, args.rounds, cap=args.cap)
    except (gm.GameError, gr.GraphError) as e:
        raise CliError(str(e)) from None
    winner = "duplicator" if dup else "spoiler"
    _emit(args, {"winner": winner, "rounds": args.rounds},
          f"{winner} wins the {args.rounds}-round game")
    return 0 if dup else 1


# --- mortality --------------------------------------------------------------


def _load_tm(path: str) -> mt.TuringMachine:
    data = _read_json(path)
    try:
        return mt.TuringMachine.from_json(data)
    except (KeyError, ValueError, TypeError) as e:
        raise CliError(f"{path}: bad machine: {e}") from None


def cmd_mortality_build(args) -> int:
    tm = _load_tm(args.tm)
    ra = mt.build_reduction_alphabet(tm)
    lm = mt.build_L_M(ra)
    _write_json(args.out, lm.to_json())
    _emit(args, {"letters": len(ra.alphabet.letters),
                 "base": len(ra.base), "amb": len(ra.amb),
                 "states": lm.state_count},
          f"alphabet: {len(ra.base)} base + {len(ra.amb)} ambiguous "
          f"letters; L_M automaton: {lm.state_count} states")
    return 0


def cmd_mortality_witness(args) -> int:
    tm = _load_tm(args.tm)
    ra = mt.build_reduction_alphabet(tm)
    try:
        pair = mt.witness_words(ra, args.n, max_tape=args.max_tape)
    except mt.MortalityError as e:
        raise CliError(str(e)) from None
    if pair is None:
        _emit(args, {"found": False},
              "no witness: the machine looks mortal within the budget")
        return 1
    u, v = pair
    if args.out_u:
        _write_json(args.out_u, {"word": u.letters_list()})
    if args.out_v:
        _write_json(args.out_v, {"word": v.letters_list()})
    _emit(args, {"found": True, "u": u.letters_list(),
                 "v": v.letters_list()},
          f"witness found: |u|={len(u)}, |v|={len(v)}")
    return 0


def cmd_mortality_analyze(args) -> int:
    tm = _load_tm(args.tm)
    ra = mt.build_reduction_alphabet(tm)
    data = _read_json(args.word)
    raw = data["word"] if isinstance(data, dict) else data
    try:
        word = Word.from_letters(ra.alphabet, raw)
    except ValueError as e:
        raise CliError(f"{args.word}: {e}") from None
    lm = mt.build_L_M(ra)
    forbidden = mt.local_factor_scan(ra, word, lm=lm)
    payload: dict = {"in_L_M": lm.accepts(word),
                     "forbidden_factors": [list(s) for s in forbidden]}
    lines = [f"in L_M: {payload['in_L_M']}"]
    if forbidden:
        lines.append(f"forbidden local factors at: {forbidden}")
    else:
        rep = mt.segment_analysis(ra, word, lm=lm)
        payload["set_types"] = [sorted(st) for st in rep.set_types]
        payload["anchors"] = [list(a) for a in rep.anchors]
        payload["ambiguous_factors"] = [list(f) for f in rep.ambiguous_factors]
        lines.append(f"set types: {payload['set_types']}")
        lines.append(f"anchors: {payload['anchors']}")
        lines.append(f"ambiguous factors: {payload['ambiguous_factors']}")
    _emit(args, payload, "\n".join(lines))
    return 0


# --- integer game -----------------------------------------------------------


def _parse_int_word(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split())
    except ValueError:
        raise CliError(f"bad integer word {text!r}") from None


def _parse_pair_word(text: str) -> tuple[tuple[int, int], ...]:
    toks = re.findall(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)", text)
    if not toks and text.strip():
        raise CliError(f"bad pair word {text!r}; expected e.g. \"(2,1) (1,0)\"")
    return tuple((int(a), int(b)) for a, b in toks)


def cmd_int_game_solve(args) -> int:
    try:
        arena = ig.IntArena(args.n, _parse_int_word(args.u),
                            _parse_pair_word(args.v))
        res = ig.solve_int_game(arena, args.rounds)
    except gm.GameError as e:
        raise CliError(str(e)) from None
    _emit(args, {"winner": res.winner, "rounds": res.rounds,
                 "variation": [[list(m), r] for m, r in res.variation]},
          f"{res.winner} wins within {args.rounds} rounds"
          + (f" (spoiler needs {res.rounds})" if res.winner == "spoiler"
             else ""))
    return 0 if res.winner == "duplicator" else 1


def cmd_int_game_sweep(args) -> int:
    budget = ig.round_budget_int(args.n)
    total = 0
    failures = []
    worst = 0
    for arena in ig.generate_arenas(args.n, args.max_len,
                                    max_v_len=args.max_v_len):
        total += 1
        res = ig.solve_int_game(arena, budget)
        got = ig.verify_spoiler_strategy(arena)
        if res.winner != "spoiler" or got is None:
            failures.append((arena.u, arena.v))
        else:
            worst = max(worst, got)
    payload = {"n": args.n, "max_len": args.max_len, "arenas": total,
               "budget": budget, "worst_strategy_rounds": worst,
               "failures": [[list(u), [list(p) for p in v]]
                            for u, v in failures]}
    _emit(args, payload,
          f"{total} arenas at n={args.n}, |U| <= {args.max_len}: "
          + (f"all Spoiler within {budget} rounds "
             f"(strategy worst case {worst})" if not failures
             else f"{len(failures)} FAILURES"))
    return 0 if not failures else 1


# --- serve ------------------------------------------------------------------


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(solver_cap=args.solver_cap, preset_dir=args.preset_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="foplus",
        description="Monotone languages, positive first-order logic, "
                    "and EF+ games")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("--json", action="store_true",
                       help="machine-readable output")
        return p

    p = add("check-monotone", cmd_check_monotone,
            help="is the NFA's language monotone?")
    p.add_argument("--nfa", required=True)

    p = add("closure", cmd_closure, help="monotone closure of an NFA")
    p.add_argument("--nfa", required=True)
    p.add_argument("--out")

    p = add("canonical", cmd_canonical, help="canonical minimal DFA")
    p.add_argument("--nfa", required=True)
    p.add_argument("--out")

    p = add("aperiodic", cmd_aperiodic,
            help="is the syntactic monoid aperiodic?")
    p.add_argument("--nfa", required=True)

    p = add("eggbox", cmd_eggbox, help="Green's relations eggbox diagram")
    p.add_argument("--nfa", required=True)

    p = add("eval", cmd_eval, help="evaluate a formula on a word")
    p.add_argument("--formula", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--alphabet", required=True)
    p.add_argument("--mode", choices=["fo", "fo+"], default="fo+")

    game = sub.add_parser("game", help="EF+ word games")
    gsub = game.add_subparsers(dest="subcommand", required=True)
    p = gsub.add_parser("solve", help="solve the n-round game on two words")
    p.set_defaults(fn=cmd_game_solve)
    p.add_argument("--json", action="store_true")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--alphabet", required=True)
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--cap", type=int, default=gm.DEFAULT_CAP)
    p.add_argument("--formula-out",
                   help="write a distinguishing formula when Spoiler wins")

    p = add("k-suite", cmd_k_suite, help="all desk-scale checks on K")
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--phi-check-len", type=int, default=6)
    p.add_argument("--emit-dfa", help="export K's canonical DFA")

    graph = sub.add_parser("graph", help="graph encodings of words")
    grsub = graph.add_subparsers(dest="subcommand", required=True)
    p = grsub.add_parser("encode")
    p.set_defaults(fn=cmd_graph_encode)
    p.add_argument("--json", action="store_true")
    p.add_argument("--word", required=True)
    p.add_argument("--undirected", action="store_true")
    p.add_argument("--out")
    p = grsub.add_parser("decode")
    p.set_defaults(fn=cmd_graph_decode)
    p.add_argument("--json", action="store_true")
    p.add_argument("--graph", required=True)
    p = grsub.add_parser("check")
    p.set_defaults(fn=cmd_graph_check)
    p.add_argument("--json", action="store_true")
    p.add_argument("--graph", required=True)
    p = grsub.add_parser("game")
    p.set_defaults(fn=cmd_graph_game)
    p.add_argument("--json", action="store_true")
    p.add_argument("--g1", required=True)
    p.add_argument("--g2", required=True)
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--cap", type=int, default=4)

    mort = sub.add_parser("mortality", help="the mortality reduction")
    msub = mort.add_subparsers(dest="subcommand", required=True)
    p = msub.add_parser("build", help="build the L_M automaton")
    p.set_defaults(fn=cmd_mortality_build)
    p.add_argument("--json", action="store_true")
    p.add_argument("--tm", required=True)
    p.add_argument("--out")
    p = msub.add_parser("witness", help="find u in L_M, v outside")
    p.set_defaults(fn=cmd_mortality_witness)
    p.add_argument("--json", action="store_true")
    p.add_argument("--tm", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-tape", type=int)
    p.add_argument("--out-u")
    p.add_argument("--out-v")
    p = msub.add_parser("analyze", help="local factors and segment report")
    p.set_defaults(fn=cmd_mortality_analyze)
    p.add_argument("--json", action="store_true")
    p.add_argument("--tm", required=True)
    p.add_argument("--word", required=True)

    intg = sub.add_parser("int-game", help="the n-integer game")
    isub = intg.add_subparsers(dest="subcommand", required=True)
    p = isub.add_parser("solve")
    p.set_defaults(fn=cmd_int_game_solve)
    p.add_argument("--json", action="store_true")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--u", required=True, help='e.g. "2 1 0"')
    p.add_argument("--v", required=True, help='e.g. "(2,1) (1,0)"')
    p.add_argument("--rounds", type=int, required=True)
    p = isub.add_parser("sweep")
    p.set_defaults(fn=cmd_int_game_sweep)
    p.add_argument("--json", action="store_true")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--max-v-len", type=int)

    p = add("serve", cmd_serve, help="HTTP JSON game service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--preset-dir")
    p.add_argument("--solver-cap", type=int, default=6)

    return top


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
