#!/usr/bin/env python3
"""How many rounds Spoiler actually needs in the integer game.

Enumerates all arenas up to a length bound, solves each exactly with
iterative deepening, and tabulates the distribution of minimal winning
round counts against the 2n+2 budget and the inductive strategy's
worst case.

Usage: python3 scripts/int_game_rounds.py --n 2 --max-len 5
"""

import argparse
from collections import Counter
from dataclasses import dataclass

from foplus import intgame as ig


@dataclass
class Config:
    n: int = 2
    max_len: int = 5
    orientation: str = ig.STANDARD


def minimal_rounds(arena: ig.IntArena, bound: int) -> int:
    solver = ig._IntSolver(arena)
    for r in range(1, bound + 1):
        if not solver.dup_wins((), r):
            return r
    raise AssertionError(f"Duplicator survives the budget on {arena}")


def run(cfg: Config) -> None:
    bound = ig.round_budget_int(cfg.n)
    exact = Counter()
    strategy = Counter()
    total = 0
    for arena in ig.generate_arenas(cfg.n, cfg.max_len,
                                    orientation=cfg.orientation):
        total += 1
        exact[minimal_rounds(arena, bound)] += 1
        strategy[ig.verify_spoiler_strategy(arena)] += 1
    print(f"n={cfg.n}, |U| <= {cfg.max_len}, budget {bound}: {total} arenas")
    print("minimal Spoiler rounds (exact solver):")
    for r in sorted(exact):
        print(f"  {r}: {exact[r]}")
    print("worst-case rounds of the inductive strategy:")
    for r in sorted(strategy, key=lambda x: (x is None, x)):
        print(f"  {r}: {strategy[r]}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=Config.n)
    ap.add_argument("--max-len", type=int, default=Config.max_len)
    ap.add_argument("--mirrored", action="store_true")
    args = ap.parse_args()
    run(Config(args.n, args.max_len,
               ig.MIRRORED if args.mirrored else ig.STANDARD))


if __name__ == "__main__":
    main()
