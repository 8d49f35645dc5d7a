#!/usr/bin/env python3
"""How the K word-pair games scale with the round count n.

For each n, builds the canonical pair (u in K, v outside K), solves the
n-round game exactly, and verifies the closest-token strategy against
every Spoiler move sequence.  Prints word lengths and timings.

Usage: python3 scripts/lemma44_scaling.py --max-n 3
"""

import argparse
import time
from dataclasses import dataclass

from foplus import games as gm
from foplus import klang


@dataclass
class Config:
    max_n: int = 3
    verify_strategy: bool = True


def run(cfg: Config) -> None:
    ctx = klang.build_K()
    print(f"{'n':>2} {'|u|':>4} {'|v|':>4} {'u in K':>6} {'v in K':>6} "
          f"{'dup wins':>8} {'solve s':>8} {'verify s':>9}")
    for n in range(1, cfg.max_n + 1):
        u, v = klang.lemma44_words(n)
        t0 = time.monotonic()
        dup = gm.duplicator_wins(u, v, n)
        t_solve = time.monotonic() - t0
        t_verify = float("nan")
        if cfg.verify_strategy:
            t0 = time.monotonic()
            ok = gm.verify_duplicator_strategy(
                u, v, n, klang.closest_token_strategy)
            t_verify = time.monotonic() - t0
            assert ok, f"strategy fails at n={n}"
        print(f"{n:>2} {len(u):>4} {len(v):>4} "
              f"{str(ctx.dfa.accepts(u)):>6} {str(ctx.dfa.accepts(v)):>6} "
              f"{str(dup):>8} {t_solve:>8.2f} {t_verify:>9.2f}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=Config.max_n)
    ap.add_argument("--no-verify", action="store_true",
                    help="skip the exhaustive strategy verification")
    args = ap.parse_args()
    run(Config(args.max_n, not args.no_verify))


if __name__ == "__main__":
    main()
