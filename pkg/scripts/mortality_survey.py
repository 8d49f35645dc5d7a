#!/usr/bin/env python3
"""Survey the mortality reduction on the bundled machines.

For each machine: alphabet sizes, the L_M automaton, height profiles over
small tapes, and (for immortal machines) the witness pair with its
segment analysis.

Usage: python3 scripts/mortality_survey.py --max-tape 5 --witness-n 1
"""

import argparse
from dataclasses import dataclass

from foplus import mortality as mt


@dataclass
class Config:
    max_tape: int = 5
    witness_n: int = 1


def survey(name: str, tm: mt.TuringMachine, cfg: Config) -> None:
    ra = mt.build_reduction_alphabet(tm)
    lm = mt.build_L_M(ra)
    print(f"== {name} ==")
    print(f"alphabet: {len(ra.base)} base + {len(ra.amb)} ambiguous")
    print(f"L_M automaton: {lm.state_count} states")
    for tape in range(1, cfg.max_tape + 1):
        heights = [mt.height(ra, c, fuel=64)
                   for c in mt.enumerate_configs(ra, tape)]
        finite = [h for h in heights if h is not None]
        top = max(finite, default=None)
        overflow = sum(1 for h in heights if h is None)
        print(f"tape {tape}: {len(heights)} configs, max height {top}, "
              f"{overflow} beyond fuel")
    try:
        pair = mt.witness_words(ra, cfg.witness_n)
    except mt.MortalityError as e:
        print(f"witness search: {e}")
        print()
        return
    if pair is None:
        print("witness search: machine looks mortal within the budget")
    else:
        u, v = pair
        print(f"witness (n={cfg.witness_n}): |u|={len(u)}, |v|={len(v)}, "
              f"u accepted: {lm.accepts(u)}, v accepted: {lm.accepts(v)}")
        rep = mt.segment_analysis(ra, v, lm=lm)
        print(f"v segments: {len(rep.segments)}, "
              f"anchors: {rep.anchors}, "
              f"non-coherent factors: {rep.non_coherent()}")
    print()


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-tape", type=int, default=Config.max_tape)
    ap.add_argument("--witness-n", type=int, default=Config.witness_n)
    args = ap.parse_args()
    cfg = Config(args.max_tape, args.witness_n)
    survey("right mover (immortal)", mt.right_mover(), cfg)
    survey("bouncer (mortal)", mt.mortal_bouncer(), cfg)


if __name__ == "__main__":
    main()
