"""Reduction from Turing Machine mortality to FO+ definability.

A deterministic machine with states typed 1/2/3 induces an ordered alphabet:
base letters encode tape cells (plain, decorated with the transition that
just left or is about to enter, or carrying the head), and ambiguous letters
are unordered pairs of base letters that can disagree between two successive
configurations.  Configuration words encode machine configurations that have
both a predecessor and a successor; L_base chains them with separators in
the 1-2-3 type cycle, and L_M is the monotone closure of L_base.

The module provides the construction itself (alphabet, configuration
language NFAs, L_M), the dynamics used as oracles (single step,
superposition, heights), witness pairs for the immortal direction, and the
local-factor and segment analyses backing the mortal direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Optional, Sequence

from .automata import Eps, Nfa, Star, alt, cat, compile_regex, lit
from .core import OrderedAlphabet, Word

LEFT, RIGHT = "L", "R"

# A transition: (state, read, state', write, direction).
Transition = tuple[str, str, str, str, str]


class MortalityError(ValueError):
    pass


def _opp(d: str) -> str:
    return LEFT if d == RIGHT else RIGHT


# ---------------------------------------------------------------------------
# Turing machines


@dataclass(frozen=True)
class TuringMachine:
    """Deterministic machine with states split into types 1, 2, 3.

    Every transition must step the type cycle 1 -> 2 -> 3 -> 1.  Initial and
    final states play no role: the machine halts when no transition applies.
    """

    gamma: tuple[str, ...]
    q1: tuple[str, ...]
    q2: tuple[str, ...]
    q3: tuple[str, ...]
    delta: tuple[Transition, ...]

    def __post_init__(self):
        if len(set(self.gamma)) != len(self.gamma) or not self.gamma:
            raise MortalityError("tape alphabet must be nonempty and distinct")
        allq = self.q1 + self.q2 + self.q3
        if len(set(allq)) != len(allq):
            raise MortalityError("state groups must be disjoint")
        seen = set()
        for tr in self.delta:
            p, a, q, b, d = tr
            if p not in allq or q not in allq:
                raise MortalityError(f"unknown state in transition {tr}")
            if a not in self.gamma or b not in self.gamma:
                raise MortalityError(f"unknown tape letter in transition {tr}")
            if d not in (LEFT, RIGHT):
                raise MortalityError(f"bad direction in transition {tr}")
            if (p, a) in seen:
                raise MortalityError(f"nondeterministic at ({p}, {a})")
            seen.add((p, a))
            if self.state_type(q) != self.state_type(p) % 3 + 1:
                raise MortalityError(f"transition {tr} breaks the type cycle")

    def states(self) -> tuple[str, ...]:
        return self.q1 + self.q2 + self.q3

    def state_type(self, q: str) -> int:
        if q in self.q1:
            return 1
        if q in self.q2:
            return 2
        if q in self.q3:
            return 3
        raise MortalityError(f"unknown state {q!r}")

    def transition_from(self, p: str, a: str) -> Optional[Transition]:
        for tr in self.delta:
            if tr[0] == p and tr[1] == a:
                return tr
        return None

    def transitions_to(self, q: str) -> list[Transition]:
        return [tr for tr in self.delta if tr[2] == q]

    def to_json(self) -> dict:
        return {
            "gamma": list(self.gamma),
            "states": {"Q1": list(self.q1), "Q2": list(self.q2),
                       "Q3": list(self.q3)},
            "delta": [list(tr) for tr in self.delta],
        }

    @staticmethod
    def from_json(data: dict) -> "TuringMachine":
        st = data["states"]
        return TuringMachine(tuple(data["gamma"]), tuple(st["Q1"]),
                             tuple(st["Q2"]), tuple(st["Q3"]),
                             tuple(tuple(tr) for tr in data["delta"]))


def simulate_raw(delta: Iterable[Transition], tape: Sequence[str],
                 state: str, pos: int, max_steps: int
                 ) -> list[tuple[str, int, tuple[str, ...]]]:
    """Raw run on a fixed finite tape, halting when no transition applies or
    the head walks off.  Returns the visited configurations, start included.
    Independent of the decoration machinery: used as a simulation oracle."""
    table = {(p, a): (q, b, d) for p, a, q, b, d in delta}
    cells = list(tape)
    trace = [(state, pos, tuple(cells))]
    for _ in range(max_steps):
        if not 0 <= pos < len(cells):
            break
        hit = table.get((state, cells[pos]))
        if hit is None:
            break
        q, b, d = hit
        cells[pos] = b
        pos += 1 if d == RIGHT else -1
        state = q
        if not 0 <= pos < len(cells):
            break
        trace.append((state, pos, tuple(cells)))
    return trace


def normalize_types(gamma: Sequence[str], states: Sequence[str],
                    delta: Iterable[Transition]) -> TuringMachine:
    """Triple an untyped machine's states so transitions follow the type
    cycle.  Mortality is preserved: each copy simulates the original."""
    delta = list(delta)
    seen = set()
    for p, a, _q, _b, _d in delta:
        if (p, a) in seen:
            raise MortalityError(f"nondeterministic at ({p}, {a})")
        seen.add((p, a))
    groups = tuple(tuple(f"{s}@{i}" for s in states) for i in (1, 2, 3))
    typed = []
    for p, a, q, b, d in delta:
        for i in (1, 2, 3):
            typed.append((f"{p}@{i}", a, f"{q}@{i % 3 + 1}", b, d))
    return TuringMachine(tuple(gamma), groups[0], groups[1], groups[2],
                         tuple(typed))


def right_mover() -> TuringMachine:
    """Three states cycling 1-2-3, always writing 0 and moving right: runs
    are bounded only by the tape, so the machine is not mortal."""
    return TuringMachine(
        ("0",), ("r1",), ("r2",), ("r3",),
        (("r1", "0", "r2", "0", RIGHT),
         ("r2", "0", "r3", "0", RIGHT),
         ("r3", "0", "r1", "0", RIGHT)))


def mortal_bouncer() -> TuringMachine:
    """Writes X, steps right, steps back onto its own X, then right again
    onto the X left behind, where it halts.  Every run from any
    configuration takes at most 4 raw steps, so the machine is mortal."""
    return TuringMachine(
        ("0", "X"), ("b1",), ("b2",), ("b3",),
        (("b1", "0", "b2", "X", RIGHT),
         ("b2", "0", "b3", "X", LEFT),
         ("b3", "X", "b1", "X", RIGHT)))


# ---------------------------------------------------------------------------
# The reduction alphabet


@dataclass(frozen=True)
class LetterInfo:
    kind: str  # plain | sub | sup | both | head | sep | amb
    gamma: Optional[str] = None
    sub: Optional[Transition] = None
    sup: Optional[Transition] = None
    state: Optional[str] = None
    members: Optional[tuple[str, str]] = None  # (predecessor, successor)


def _dname(tr: Transition) -> str:
    return "(" + ",".join(tr) + ")"


def sub_name(a: str, tr: Transition) -> str:
    return f"{a}_{_dname(tr)}"


def sup_name(a: str, tr: Transition) -> str:
    return f"{a}^{_dname(tr)}"


def both_name(a: str, tr: Transition, tr2: Transition) -> str:
    return f"{a}_{_dname(tr)}^{_dname(tr2)}"


def head_name(q: str, a: str) -> str:
    return f"[{q}.{a}]"


def amb_letter_name(pred: str, succ: str) -> str:
    return "{" + pred + "|" + succ + "}"


SEP = "#"


@dataclass(frozen=True, eq=False)
class ReductionAlphabet:
    """The ordered alphabet A = A_base + A_amb for one machine.

    Each ambiguous letter is an unordered pair of distinct base letters,
    tagged with which member is the predecessor; base letters sit strictly
    below the ambiguous letters containing them.
    """

    tm: TuringMachine
    alphabet: OrderedAlphabet
    base: tuple[str, ...]
    amb: tuple[str, ...]
    info: dict[str, LetterInfo] = field(repr=False)
    pair_to_amb: dict[frozenset, str] = field(repr=False)

    def is_base(self, name: str) -> bool:
        return self.info[name].kind != "amb"

    def amb_of(self, x: str, y: str) -> Optional[str]:
        return self.pair_to_amb.get(frozenset((x, y)))

    def members(self, name: str) -> tuple[str, str]:
        m = self.info[name].members
        if m is None:
            raise MortalityError(f"{name!r} is not an ambiguous letter")
        return m

    def content(self, name: str) -> str:
        """The underlying tape letter of a base letter (heads included)."""
        g = self.info[name].gamma
        if g is None:
            raise MortalityError(f"{name!r} has no tape content")
        return g


def build_reduction_alphabet(tm: TuringMachine) -> ReductionAlphabet:
    info: dict[str, LetterInfo] = {}
    base: list[str] = []

    def add(name: str, li: LetterInfo):
        info[name] = li
        base.append(name)

    for a in tm.gamma:
        add(a, LetterInfo("plain", gamma=a))
    for a in tm.gamma:
        for tr in tm.delta:
            add(sub_name(a, tr), LetterInfo("sub", gamma=a, sub=tr))
    for a in tm.gamma:
        for tr in tm.delta:
            add(sup_name(a, tr), LetterInfo("sup", gamma=a, sup=tr))
    for a in tm.gamma:
        for tr in tm.delta:
            for tr2 in tm.delta:
                add(both_name(a, tr, tr2),
                    LetterInfo("both", gamma=a, sub=tr, sup=tr2))
    for q in tm.states():
        for a in tm.gamma:
            add(head_name(q, a), LetterInfo("head", gamma=a, state=q))
    add(SEP, LetterInfo("sep"))

    # The six families of ambiguous pairs, predecessor first.
    pairs: list[tuple[str, str]] = []
    for a in tm.gamma:
        for tr in tm.delta:
            pairs.append((sub_name(a, tr), a))
            pairs.append((a, sup_name(a, tr)))
    for tr in tm.delta:  # tr is about to enter: it targets the head state
        q = tr[2]
        for a in tm.gamma:
            pairs.append((sup_name(a, tr), head_name(q, a)))
    for tr in tm.delta:  # head leaves and comes straight back
        _, _, p, a, d = tr
        for tr2 in tm.delta:
            if tr2[0] == p and tr2[4] == _opp(d):
                pairs.append((both_name(a, tr, tr2), head_name(tr2[2], a)))
    for tr in tm.delta:  # head letter ahead of the cell it leaves behind
        p, a, _, b, _ = tr
        pairs.append((head_name(p, a), sub_name(b, tr)))
    for tr in tm.delta:  # same, with the head about to come back
        p, a, q, b, d = tr
        for tr2 in tm.delta:
            if tr2[0] == q and tr2[4] == _opp(d):
                pairs.append((head_name(p, a), both_name(b, tr, tr2)))

    amb: list[str] = []
    pair_to_amb: dict[frozenset, str] = {}
    order_pairs: list[tuple[str, str]] = []
    for pred, succ in pairs:
        key = frozenset((pred, succ))
        if key in pair_to_amb:
            if info[pair_to_amb[key]].members != (pred, succ):
                raise MortalityError(
                    f"conflicting predecessor for pair {{{pred},{succ}}}")
            continue
        name = amb_letter_name(pred, succ)
        info[name] = LetterInfo("amb", members=(pred, succ))
        pair_to_amb[key] = name
        amb.append(name)
        order_pairs.append((pred, name))
        order_pairs.append((succ, name))

    alphabet = OrderedAlphabet.from_pairs(tuple(base) + tuple(amb),
                                          order_pairs)
    return ReductionAlphabet(tm, alphabet, tuple(base), tuple(amb), info,
                             pair_to_amb)


# ---------------------------------------------------------------------------
# Configuration words


def is_config_word(ra: ReductionAlphabet, w: Word) -> Optional[tuple[int, int]]:
    """(type, head position) when w encodes a machine configuration with a
    predecessor and a successor; None otherwise.

    Checks, per the construction: no separator, exactly one head letter,
    exactly one just-left and one about-to-enter decoration adjacent to the
    head on opposite sides (or one combined letter carrying both), every
    other letter plain, and the decorating transitions coherent with the
    head state, the read letter, and the written contents.
    """
    tm = ra.tm
    names = [w.letter(i) for i in range(len(w))]
    infos = [ra.info[n] for n in names]
    if any(li.kind in ("sep", "amb") for li in infos):
        return None
    heads = [i for i, li in enumerate(infos) if li.kind == "head"]
    if len(heads) != 1:
        return None
    i = heads[0]
    q, a = infos[i].state, infos[i].gamma
    enter = tm.transition_from(q, a)
    if enter is None:
        return None
    sup_side = 1 if enter[4] == RIGHT else -1
    decorated = [j for j, li in enumerate(infos)
                 if li.kind in ("sub", "sup", "both")]
    if any(infos[j].kind != "plain" for j in range(len(w))
           if j != i and j not in decorated):
        return None

    def sub_coherent(j: int) -> bool:
        tr = infos[j].sub
        return (tr is not None and tr[2] == q and tr[3] == infos[j].gamma
                and tr[4] == (LEFT if j == i + 1 else RIGHT))

    def sup_coherent(j: int) -> bool:
        return infos[j].sup == enter and (j - i) == sup_side

    if len(decorated) == 1:
        j = decorated[0]
        if infos[j].kind != "both" or abs(j - i) != 1:
            return None
        if not (sub_coherent(j) and sup_coherent(j)):
            return None
    elif len(decorated) == 2:
        j1, j2 = decorated
        kinds = {infos[j1].kind, infos[j2].kind}
        if kinds != {"sub", "sup"}:
            return None
        js = j1 if infos[j1].kind == "sub" else j2
        je = j1 if infos[j1].kind == "sup" else j2
        if abs(js - i) != 1 or abs(je - i) != 1 or js == je:
            return None
        if not (sub_coherent(js) and sup_coherent(je)):
            return None
    else:
        return None
    return tm.state_type(q), i


def _blocks(ra: ReductionAlphabet, type_i: int
            ) -> list[tuple[list[list[str]], int]]:
    """Decorated windows around the head for configurations of one type:
    (per-cell letter choices, head offset).  Cells outside the window are
    plain tape letters."""
    tm = ra.tm
    out = []
    for enter in tm.delta:
        q, a = enter[0], enter[1]
        if tm.state_type(q) != type_i:
            continue
        head = head_name(q, a)
        sup_side = enter[4]
        sups = [sup_name(y, enter) for y in tm.gamma]
        for left in tm.transitions_to(q):
            b0, d0 = left[3], left[4]
            sub_side = LEFT if d0 == RIGHT else RIGHT
            sub = sub_name(b0, left)
            if sub_side != sup_side:
                cells = [[sub], [head], sups]
                if sub_side == RIGHT:
                    cells = [sups, [head], [sub]]
                out.append((cells, 1))
            else:
                comb = [both_name(b0, left, enter)]
                if sub_side == LEFT:
                    out.append(([comb, [head]], 1))
                else:
                    out.append(([[head], comb], 0))
    return out


def config_nfa(ra: ReductionAlphabet, type_i: int) -> Nfa:
    """NFA for the configuration words of one type, over the full reduction
    alphabet (only base letters occur)."""
    return compile_regex(_config_regex(ra, type_i), ra.alphabet)


def _config_regex(ra: ReductionAlphabet, type_i: int):
    pad = Star(lit(*ra.tm.gamma))
    parts = []
    for cells, _ in _blocks(ra, type_i):
        parts.append(cat(pad, *[lit(*c) for c in cells], pad))
    return alt(*parts)


def enumerate_configs(ra: ReductionAlphabet, tape_len: int) -> Iterator[Word]:
    """All configuration words of the given length."""
    tm = ra.tm
    for type_i in (1, 2, 3):
        for cells, _ in _blocks(ra, type_i):
            k = len(cells)
            if k > tape_len:
                continue
            for start in range(tape_len - k + 1):
                pad_positions = [p for p in range(tape_len)
                                 if not start <= p < start + k]
                for mid in product(*cells):
                    for pad in product(tm.gamma, repeat=len(pad_positions)):
                        letters = [""] * tape_len
                        for off, name in enumerate(mid):
                            letters[start + off] = name
                        for p, g in zip(pad_positions, pad):
                            letters[p] = g
                        yield Word.from_letters(ra.alphabet, letters)


# ---------------------------------------------------------------------------
# Dynamics: step, superposition, heights


def step_config(ra: ReductionAlphabet, u: Word) -> Optional[Word]:
    """The successor configuration word, decorations maintained; None when
    the head would leave the tape or the result would lack a successor
    decoration of its own."""
    tm = ra.tm
    parsed = is_config_word(ra, u)
    if parsed is None:
        raise MortalityError("not a configuration word")
    _, i = parsed
    head = ra.info[u.letter(i)]
    q, a = head.state, head.gamma
    enter = tm.transition_from(q, a)
    q2, b2, d2 = enter[2], enter[3], enter[4]
    contents = [ra.content(u.letter(j)) for j in range(len(u))]
    contents[i] = b2
    k = i + (1 if d2 == RIGHT else -1)
    if not 0 <= k < len(u):
        return None
    y = contents[k]
    nxt = tm.transition_from(q2, y)
    if nxt is None:
        return None
    m = k + (1 if nxt[4] == RIGHT else -1)
    if not 0 <= m < len(u):
        return None
    letters = list(contents)
    if m == i:
        letters[i] = both_name(b2, enter, nxt)
    else:
        letters[i] = sub_name(b2, enter)
        letters[m] = sup_name(contents[m], nxt)
    letters[k] = head_name(q2, y)
    w = Word.from_letters(ra.alphabet, letters)
    assert is_config_word(ra, w) is not None
    return w


def common_upper_bound(ra: ReductionAlphabet,
                       words: Sequence[Word]) -> Optional[Word]:
    """A word above all the given equal-length words, when one exists."""
    if not words:
        raise MortalityError("need at least one word")
    n = len(words[0])
    if any(len(w) != n for w in words):
        raise MortalityError("length mismatch")
    letters = []
    for j in range(n):
        distinct = sorted({w.letter(j) for w in words})
        if len(distinct) == 1:
            letters.append(distinct[0])
        elif len(distinct) == 2:
            name = ra.amb_of(distinct[0], distinct[1])
            if name is None:
                return None
            letters.append(name)
        else:
            return None
    return Word.from_letters(ra.alphabet, letters)


def superpose(ra: ReductionAlphabet, u1: Word, u2: Word) -> Optional[Word]:
    if len(u1) != len(u2):
        raise MortalityError("length mismatch")
    return common_upper_bound(ra, (u1, u2))


def can_superpose(ra: ReductionAlphabet, u1: Word, u2: Word) -> bool:
    return superpose(ra, u1, u2) is not None


def height(ra: ReductionAlphabet, u: Word, fuel: int = 64) -> Optional[int]:
    """Number of successor steps inside the configuration language, or None
    when the run outlasts the fuel."""
    steps = 0
    cur: Optional[Word] = u
    while True:
        cur = step_config(ra, cur)
        if cur is None:
            return steps
        steps += 1
        if steps > fuel:
            return None


def n_approx(ra: ReductionAlphabet, u: Word, n: int) -> Word:
    """Truncate to radius n around the head: the context further out cannot
    affect a run of length at most n."""
    parsed = is_config_word(ra, u)
    if parsed is None:
        raise MortalityError("not a configuration word")
    _, i = parsed
    return u.slice(max(0, i - n), min(len(u) - 1, i + n))


# ---------------------------------------------------------------------------
# L_base and L_M


def build_L_base(ra: ReductionAlphabet) -> Nfa:
    """(eps + C3# + C2#C3#)(C1#C2#C3#)*(C1 + C1#C2 + C1#C2#C3)."""
    c1, c2, c3 = (_config_regex(ra, i) for i in (1, 2, 3))
    sep = lit(SEP)
    prefix = alt(Eps(), cat(c3, sep), cat(c2, sep, c3, sep))
    loop = Star(cat(c1, sep, c2, sep, c3, sep))
    suffix = alt(c1, cat(c1, sep, c2), cat(c1, sep, c2, sep, c3))
    return compile_regex(cat(prefix, loop, suffix), ra.alphabet)


def build_L_M(ra: ReductionAlphabet) -> Nfa:
    from .automata import monotone_closure
    return monotone_closure(build_L_base(ra))


# ---------------------------------------------------------------------------
# Witness words for the immortal direction


def witness_round_count(n: int) -> int:
    """N = 2^(n+1) + 1: separator count giving Duplicator n rounds."""
    return 2 ** (n + 1) + 1


def witness_words(ra: ReductionAlphabet, n: int,
                  max_tape: Optional[int] = None,
                  ) -> Optional[tuple[Word, Word]]:
    """A pair u in L_M, v outside it, built from a run of length N + 3.

    u chains the run's configuration words; v superposes consecutive ones in
    the middle, dropping one segment, so its separator count breaks the
    type cycle.  Returns None when the search space makes the machine look
    mortal (run lengths stop growing with the tape); raises when the tape
    budget ends the search while runs are still growing.
    """
    if n < 1:
        raise MortalityError("n must be at least 1")
    big_n = witness_round_count(n)
    if max_tape is None:
        max_tape = big_n + 5
    best_per_tape: list[int] = []
    for tape_len in range(2, max_tape + 1):
        best = -1
        for u0 in enumerate_configs(ra, tape_len):
            h = height(ra, u0, fuel=big_n)
            if h is None or h >= big_n:
                chain = [u0]
                for _ in range(big_n):
                    chain.append(step_config(ra, chain[-1]))
                return _assemble_witness(ra, chain)
            best = max(best, h)
        best_per_tape.append(best)
        if len(best_per_tape) >= 3 and len({*best_per_tape[-3:]}) == 1:
            return None  # run lengths have stopped growing: looks mortal
    raise MortalityError(
        f"witness search budget exhausted at tape length {max_tape} "
        f"with runs still growing")


def _assemble_witness(ra: ReductionAlphabet,
                      chain: Sequence[Word]) -> tuple[Word, Word]:
    big_n = len(chain) - 1
    sep = Word.from_letters(ra.alphabet, [SEP])
    u = chain[0]
    for w in chain[1:]:
        u = u.concat(sep).concat(w)
    v = chain[0]
    for i in range(1, big_n - 1):
        v = v.concat(sep).concat(superpose(ra, chain[i], chain[i + 1]))
    v = v.concat(sep).concat(chain[big_n])
    return u, v


# ---------------------------------------------------------------------------
# Local factors


def factor_nfa(n: Nfa) -> Nfa:
    """Accepts exactly the factors of words of L(n): trim to useful states,
    then make every state initial and final."""
    d = n.delta()
    reach = set(n.initial)
    frontier = list(reach)
    while frontier:
        p = frontier.pop()
        for a in range(len(n.alphabet)):
            for q in d.get((p, a), ()):
                if q not in reach:
                    reach.add(q)
                    frontier.append(q)
    rev: dict[int, set[int]] = {}
    for p, _a, q in n.transitions:
        rev.setdefault(q, set()).add(p)
    co = set(n.final)
    frontier = list(co)
    while frontier:
        q = frontier.pop()
        for p in rev.get(q, ()):
            if p not in co:
                co.add(p)
                frontier.append(p)
    useful = reach & co
    trans = frozenset((p, a, q) for p, a, q in n.transitions
                      if p in useful and q in useful)
    keep = frozenset(useful) if useful else frozenset({0})
    return Nfa(n.alphabet, n.state_count, keep, keep, trans)


def local_factor_scan(ra: ReductionAlphabet, w: Word,
                      lm: Optional[Nfa] = None) -> list[tuple[int, int]]:
    """Minimal forbidden local factors of w, as inclusive index spans.

    A local factor has at most two separators; it is forbidden when it is a
    factor of no word of L_M.  Minimality: both one-shorter factors are
    allowed, so a span pinpoints one inconsistency.
    """
    factors = factor_nfa(lm if lm is not None else build_L_M(ra))
    d = factors.delta()
    sep_idx = ra.alphabet.index(SEP)

    def ok(i: int, j: int) -> bool:
        current = set(factors.initial)
        for p in range(i, j + 1):
            a = w[p]
            current = set().union(*(d.get((s, a), set()) for s in current)) \
                if current else set()
            if not current:
                return False
        return bool(current & factors.final)

    out = []
    for i in range(len(w)):
        seps = 0
        for j in range(i, len(w)):
            if w[j] == sep_idx:
                seps += 1
                if seps > 2:
                    break
            if not ok(i, j):
                if (i == j or ok(i + 1, j)) and (i == j or ok(i, j - 1)):
                    out.append((i, j))
                break  # any extension is forbidden too, and not minimal
    return out


# ---------------------------------------------------------------------------
# Segment analysis


_SUCC = {1: 2, 2: 3, 3: 1}


def _settype_succ(st: frozenset) -> frozenset:
    return frozenset(_SUCC[t] for t in st)


@dataclass(frozen=True)
class SegmentReport:
    """Per-segment view of a word against the type discipline of L_M."""

    segments: tuple[tuple[int, int], ...]  # inclusive spans between seps
    set_types: tuple[frozenset, ...]
    anchors: tuple[tuple[int, Optional[int]], ...]  # (segment, anchor type)
    ambiguous_factors: tuple[tuple[int, int, bool], ...]  # (i, j, coherent)

    def non_coherent(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j, coh in self.ambiguous_factors if not coh]


def _segment_spans(ra: ReductionAlphabet, w: Word) -> list[tuple[int, int]]:
    sep_idx = ra.alphabet.index(SEP)
    spans, start = [], 0
    for p in range(len(w)):
        if w[p] == sep_idx:
            spans.append((start, p - 1))
            start = p + 1
    spans.append((start, len(w) - 1))
    return spans


def compatible_types(ra: ReductionAlphabet, seg: Word,
                     c_nfas: Optional[dict[int, Nfa]] = None) -> frozenset:
    """Types j with some C_j word below the segment letterwise."""
    if c_nfas is None:
        c_nfas = {i: config_nfa(ra, i) for i in (1, 2, 3)}
    found = set()
    for j, nfa in c_nfas.items():
        d = nfa.delta()
        current = set(nfa.initial)
        for p in range(len(seg)):
            allowed = [a for a in range(len(ra.alphabet))
                       if ra.alphabet.leq_idx(a, seg[p])]
            current = set().union(
                *(d.get((s, a), set()) for s in current for a in allowed)) \
                if current else set()
            if not current:
                break
        if current & nfa.final:
            found.add(j)
    return frozenset(found)


def _first_type(st: frozenset) -> int:
    """The predecessor member of a two-type set in the 1-2-3 cycle."""
    (a, b) = sorted(st)
    return a if _SUCC[a] == b else b


def segment_analysis(ra: ReductionAlphabet, v: Word,
                     lm: Optional[Nfa] = None,
                     endpoints_anchored: bool = True) -> SegmentReport:
    """Set-types, anchors, and maximal ambiguous factors of v.

    Requires v free of forbidden local factors.  With endpoints_anchored,
    the first and last segments are pinned to a single type (resolved
    against their neighbour when their set-type is ambiguous), mirroring
    how endpoint tokens are forced in the game.
    """
    if local_factor_scan(ra, v, lm=lm):
        raise MortalityError("word contains a forbidden local factor")
    spans = _segment_spans(ra, v)
    c_nfas = {i: config_nfa(ra, i) for i in (1, 2, 3)}
    set_types = [compatible_types(ra, v.slice(i, j), c_nfas)
                 for i, j in spans]
    t = len(spans) - 1

    def resolve(idx: int) -> Optional[int]:
        """Unique type for segment idx consistent with both neighbours."""
        candidates = []
        for ty in sorted(set_types[idx]):
            if idx > 0 and not any(_SUCC[s] == ty for s in set_types[idx - 1]):
                continue
            if idx < t and _SUCC[ty] not in set_types[idx + 1]:
                continue
            candidates.append(ty)
        return candidates[0] if len(candidates) == 1 else None

    if endpoints_anchored:
        for idx in (0, t):
            if len(set_types[idx]) > 1:
                pick = resolve(idx)
                if pick is None:
                    pick = _first_type(set_types[idx])
                set_types[idx] = frozenset({pick})

    def triple_ambiguous(idx: int) -> bool:
        lo, hi = idx - 1, idx + 1
        if lo < 0 or hi > t:
            return False
        if any(len(set_types[k]) != 2 for k in (lo, idx, hi)):
            return False
        return (_settype_succ(set_types[lo]) == set_types[idx]
                and _settype_succ(set_types[idx]) == set_types[hi])

    anchors: list[tuple[int, Optional[int]]] = []
    for idx in range(t + 1):
        if idx in (0, t) or not triple_ambiguous(idx):
            if len(set_types[idx]) == 1:
                ty: Optional[int] = next(iter(set_types[idx]))
            else:
                ty = resolve(idx)
            anchors.append((idx, ty))
    anchor_type = dict(anchors)

    # Ambiguous factors depend on set-types only; a segment can be both an
    # anchor and part of an ambiguous factor (e.g. next to a base segment).
    factors: list[tuple[int, int, bool]] = []
    idx = 0
    while idx <= t:
        if len(set_types[idx]) == 2:
            j = idx
            while j + 1 <= t and len(set_types[j + 1]) == 2 and \
                    _settype_succ(set_types[j]) == set_types[j + 1]:
                j += 1
            factors.append((idx, j, _coherent(set_types, anchor_type, idx, j)))
            idx = j + 1
        else:
            idx += 1
    return SegmentReport(tuple(spans), tuple(set_types), tuple(anchors),
                         tuple(factors))


def _coherent(set_types, anchor_type, i: int, j: int) -> bool:
    """Both delimiting anchors continue the same reading (first types or
    second types) of the ambiguous run."""
    first_i, first_j = _first_type(set_types[i]), _first_type(set_types[j])
    left = anchor_type.get(i - 1)
    right = anchor_type.get(j + 1)
    first_ok = ((left is None or _SUCC[left] == first_i)
                and (right is None or _SUCC[first_j] == right))
    second_ok = ((left is None or _SUCC[left] == _SUCC[first_i])
                 and (right is None or _SUCC[_SUCC[first_j]] == right))
    return first_ok or second_ok


# ---------------------------------------------------------------------------
# Round budget for the mortal direction


def round_budget(n: int) -> int:
    """2n + ceil(log2 n) + 7: local cleanup, the integer game, and the
    enforcement moves around it."""
    if n < 1:
        raise MortalityError("n must be at least 1")
    return 2 * n + math.ceil(math.log2(n)) + 7


# ---------------------------------------------------------------------------
# Powerset form of the alphabet


@dataclass(frozen=True, eq=False)
class PowersetView:
    """The reduction alphabet recast with letters as predicate sets: base
    letters become singletons, ambiguous letters their two-element sets, and
    the order becomes set inclusion restricted to these letters."""

    ra: ReductionAlphabet
    alphabet: OrderedAlphabet
    rename: dict[str, str]
    letter_map: dict[str, str]

    def map_word(self, w: Word) -> Word:
        return Word.from_letters(
            self.alphabet, [self.letter_map[w.letter(i)]
                            for i in range(len(w))])


def powerset_transform(ra: ReductionAlphabet) -> PowersetView:
    rename = {name: f"b{i:03d}" for i, name in enumerate(ra.base)}
    letter_map: dict[str, str] = {}
    letters: list[str] = []
    order_pairs: list[tuple[str, str]] = []
    for name in ra.base:
        letter_map[name] = "{" + rename[name] + "}"
        letters.append(letter_map[name])
    for name in ra.amb:
        pred, succ = ra.members(name)
        tokens = sorted((rename[pred], rename[succ]))
        letter_map[name] = "{" + ",".join(tokens) + "}"
        letters.append(letter_map[name])
        order_pairs.append((letter_map[pred], letter_map[name]))
        order_pairs.append((letter_map[succ], letter_map[name]))
    alphabet = OrderedAlphabet.from_pairs(letters, order_pairs,
                                          predicates=sorted(rename.values()))
    return PowersetView(ra, alphabet, rename, letter_map)
