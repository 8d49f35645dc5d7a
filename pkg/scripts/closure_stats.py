#!/usr/bin/env python3
"""How much does the monotone closure grow random languages?

Samples random NFAs over a powerset alphabet, compares the canonical DFA
sizes of the language and its closure, and counts how often the language
was already monotone.

Usage: python3 scripts/closure_stats.py --samples 200 --max-states 5
"""

import argparse
import random
from dataclasses import dataclass

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from conftest import random_nfa  # noqa: E402

from foplus import automata as au  # noqa: E402
from foplus.core import make_powerset_alphabet  # noqa: E402


@dataclass
class Config:
    samples: int = 200
    max_states: int = 5
    predicates: int = 2
    seed: int = 0


def run(cfg: Config) -> None:
    alphabet = make_powerset_alphabet(
        [chr(ord("a") + i) for i in range(cfg.predicates)])
    rng = random.Random(cfg.seed)
    monotone = 0
    growth = []
    for _ in range(cfg.samples):
        nfa = random_nfa(alphabet, rng, max_states=cfg.max_states)
        before = au.canonical_dfa(nfa).state_count
        after = au.canonical_dfa(au.monotone_closure(nfa)).state_count
        if au.is_monotone(nfa):
            monotone += 1
        growth.append(after / before)
    print(f"alphabet: {len(alphabet)} letters "
          f"(powerset of {cfg.predicates} predicates)")
    print(f"samples: {cfg.samples}, max states: {cfg.max_states}")
    print(f"already monotone: {monotone} "
          f"({100 * monotone / cfg.samples:.1f}%)")
    growth.sort()
    mid = growth[len(growth) // 2]
    print(f"DFA size ratio closure/original: "
          f"min {growth[0]:.2f}, median {mid:.2f}, max {growth[-1]:.2f}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=Config.samples)
    ap.add_argument("--max-states", type=int, default=Config.max_states)
    ap.add_argument("--predicates", type=int, default=Config.predicates)
    ap.add_argument("--seed", type=int, default=Config.seed)
    args = ap.parse_args()
    run(Config(args.samples, args.max_states, args.predicates, args.seed))


if __name__ == "__main__":
    main()
