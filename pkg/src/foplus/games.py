"""Exact EF+ game solver on words.

A position is a set of token pairs (position in u, position in v).  The
position is valid when every u-label is <=_A its v-label and the pairings
agree on the order of positions.  Duplicator wins the n-round game iff from
the empty position he can keep the position valid for n rounds against every
Spoiler move.

The solver is plain memoized minimax.  The memo key is the sorted pair set
plus rounds left: the game's future depends only on which pairs are placed,
not on the order they were played.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .automata import Nfa, canonical_dfa
from .core import AlphabetError, Word
from . import logic as lg

DEFAULT_CAP = 6

# Spoiler move: ("u" | "v", position).  Duplicator reply: position in the
# other word.
Move = tuple[str, int]


@dataclass(frozen=True)
class WordGamePosition:
    u: Word
    v: Word
    pairs: tuple[tuple[int, int], ...]

    def rounds_played(self) -> int:
        return len(self.pairs)


class GameError(ValueError):
    pass


def is_valid_position(p: WordGamePosition) -> bool:
    nu, nv = len(p.u), len(p.v)
    for a, b in p.pairs:
        if not (0 <= a < nu and 0 <= b < nv):
            raise GameError(f"token ({a},{b}) out of range")
    order = p.u.alphabet.order
    if p.u.alphabet != p.v.alphabet:
        raise AlphabetError("alphabet mismatch")
    for a, b in p.pairs:
        if (p.u[a], p.v[b]) not in order:
            return False
    for i, (a1, b1) in enumerate(p.pairs):
        for a2, b2 in p.pairs[i + 1:]:
            if (a1 < a2) != (b1 < b2) or (a1 == a2) != (b1 == b2):
                return False
    return True


class Solver:
    """Per-(u,v) solver instance; memo shared across queries."""

    def __init__(self, u: Word, v: Word):
        if u.alphabet != v.alphabet:
            raise AlphabetError("alphabet mismatch")
        self.u = u
        self.v = v
        order = u.alphabet.order
        self.leq_uv = [[(a, b) in order for b in v.indices] for a in u.indices]
        self.memo: dict[tuple, bool] = {}

    # -- validity helpers --------------------------------------------------

    def extends_ok(self, pairs: tuple[tuple[int, int], ...], p: int, q: int) -> bool:
        if not self.leq_uv[p][q]:
            return False
        for a, b in pairs:
            if (p < a) != (q < b) or (p == a) != (q == b):
                return False
        return True

    def valid_replies(self, pairs, word: str, pos: int) -> list[int]:
        if word == "u":
            return [q for q in range(len(self.v)) if self.extends_ok(pairs, pos, q)]
        return [p for p in range(len(self.u)) if self.extends_ok(pairs, p, pos)]

    # -- minimax -----------------------------------------------------------

    def dup_wins(self, pairs: tuple[tuple[int, int], ...], rounds: int) -> bool:
        if rounds == 0:
            return True
        key = (tuple(sorted(set(pairs))), rounds)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        result = True
        for word, length in (("u", len(self.u)), ("v", len(self.v))):
            for pos in range(length):
                if not any(self.dup_wins(self._ext(pairs, word, pos, r), rounds - 1)
                           for r in self.valid_replies(pairs, word, pos)):
                    result = False
                    break
            if not result:
                break
        self.memo[key] = result
        return result

    @staticmethod
    def _ext(pairs, word, pos, reply):
        pair = (pos, reply) if word == "u" else (reply, pos)
        return pairs + (pair,)

    def winning_spoiler_move(self, pairs, rounds: int) -> Optional[Move]:
        """Smallest position, u before v; None when Duplicator wins."""
        if rounds == 0:
            return None
        for pos in range(max(len(self.u), len(self.v))):
            for word in ("u", "v"):
                if pos >= (len(self.u) if word == "u" else len(self.v)):
                    continue
                if not any(self.dup_wins(self._ext(pairs, word, pos, r), rounds - 1)
                           for r in self.valid_replies(pairs, word, pos)):
                    return (word, pos)
        return None

    def best_reply(self, pairs, move: Move, rounds: int) -> Optional[int]:
        word, pos = move
        for r in self.valid_replies(pairs, word, pos):
            if self.dup_wins(self._ext(pairs, word, pos, r), rounds - 1):
                return r
        return None


def duplicator_wins(u: Word, v: Word, n: int, cap: int = DEFAULT_CAP) -> bool:
    if n > cap:
        raise GameError(f"round count {n} exceeds cap {cap}")
    return Solver(u, v).dup_wins((), n)


def spoiler_wins_within(u: Word, v: Word, max_rounds: int,
                        cap: int = DEFAULT_CAP) -> Optional[int]:
    """Least n <= max_rounds with a Spoiler win, or None.

    Uses iterative deepening: a Spoiler win at n implies one at every larger
    n, so the first failing depth is the answer.
    """
    s = Solver(u, v)
    for n in range(1, min(max_rounds, cap) + 1):
        if not s.dup_wins((), n):
            return n
    return None


def best_spoiler_move(p: WordGamePosition, rounds_left: int,
                      cap: int = DEFAULT_CAP) -> Optional[Move]:
    if rounds_left > cap:
        raise GameError(f"round count {rounds_left} exceeds cap {cap}")
    if not is_valid_position(p):
        raise GameError("invalid position")
    return Solver(p.u, p.v).winning_spoiler_move(p.pairs, rounds_left)


def best_duplicator_response(p: WordGamePosition, spoiler_move: Move,
                             rounds_left: int,
                             cap: int = DEFAULT_CAP) -> Optional[int]:
    if rounds_left > cap:
        raise GameError(f"round count {rounds_left} exceeds cap {cap}")
    if not is_valid_position(p):
        raise GameError("invalid position")
    return Solver(p.u, p.v).best_reply(p.pairs, spoiler_move, rounds_left)


Strategy = Callable[[WordGamePosition, Move], int]


def verify_duplicator_strategy(u: Word, v: Word, n: int,
                               strategy: Strategy) -> bool:
    """Play every Spoiler move sequence of length n against the strategy."""

    def survive(pairs: tuple[tuple[int, int], ...], rounds: int) -> bool:
        if rounds == 0:
            return True
        pos_obj = WordGamePosition(u, v, pairs)
        for word, length in (("u", len(u)), ("v", len(v))):
            for pos in range(length):
                reply = strategy(pos_obj, (word, pos))
                other = len(v) if word == "u" else len(u)
                if not 0 <= reply < other:
                    raise GameError(f"strategy reply {reply} out of range")
                pair = (pos, reply) if word == "u" else (reply, pos)
                nxt = pairs + (pair,)
                if not is_valid_position(WordGamePosition(u, v, nxt)):
                    return False
                if not survive(nxt, rounds - 1):
                    return False
        return True

    return survive((), n)


# ---------------------------------------------------------------------------
# Constructive distinguishing formulas


def distinguishing_formula(u: Word, v: Word, n: int,
                           cap: int = DEFAULT_CAP) -> Optional[lg.Formula]:
    """A positive formula of rank <= n true on u, false on v, extracted from
    Spoiler's winning strategy; None when Duplicator wins."""
    if n > cap:
        raise GameError(f"round count {n} exceeds cap {cap}")
    s = Solver(u, v)
    if s.dup_wins((), n):
        return None

    def order_atom(var: str, prior_var: str, p: int, a: int) -> lg.Formula:
        # the relation that holds between u-positions p and a
        if p < a:
            return lg.Lt(var, prior_var)
        if p == a:
            return lg.EqVar(var, prior_var)
        return lg.Lt(prior_var, var)

    def violated_atom(pairs, p: int, q: int, var: str) -> lg.Formula:
        # an atom true on (u, ..., p) and false on (v, ..., q)
        if not s.leq_uv[p][q]:
            return lg.LetterUp(u.letter(p), var)
        for i, (a, b) in enumerate(pairs):
            xi = f"x{i}"
            if p < a and not q < b:
                return lg.Lt(var, xi)
            if p == a and q != b:
                return lg.EqVar(var, xi)
            if p > a and not q > b:
                return lg.Lt(xi, var)
        raise AssertionError("no violation found for invalid extension")

    def build(pairs, rounds: int) -> lg.Formula:
        move = s.winning_spoiler_move(pairs, rounds)
        assert move is not None
        word, pos = move
        var = f"x{len(pairs)}"
        if word == "u":
            atoms: list[lg.Formula] = [lg.LetterUp(u.letter(pos), var)]
            for i, (a, _) in enumerate(pairs):
                atoms.append(order_atom(var, f"x{i}", pos, a))
            subs = []
            for q in s.valid_replies(pairs, "u", pos):
                subs.append(build(pairs + ((pos, q),), rounds - 1))
            body = lg.conj(*_dedup(atoms + subs))
            return lg.Exists(var, body)
        # Spoiler plays in v: for every u reply the game is lost for Duplicator
        disjuncts: list[lg.Formula] = []
        for p in range(len(u)):
            if s.extends_ok(pairs, p, pos):
                disjuncts.append(build(pairs + ((p, pos),), rounds - 1))
            else:
                disjuncts.append(violated_atom(pairs, p, pos, var))
        return lg.Forall(var, lg.disj(*_dedup(disjuncts)))

    return build((), n)


def _dedup(parts: Iterable[lg.Formula]) -> list[lg.Formula]:
    seen = set()
    out = []
    for p in parts:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# Witness search


def find_witness_pairs(language: Nfa, n: int, max_len: int,
                       limit: int | None = None,
                       cap: int = DEFAULT_CAP) -> list[tuple[Word, Word]]:
    """Pairs u in L, v not in L with Duplicator winning the n-round game:
    evidence that L is not FO+-definable at rank n (within the bound)."""
    from itertools import product

    alpha = language.alphabet
    dfa = canonical_dfa(language)
    inside, outside = [], []
    for length in range(max_len + 1):
        for idx in product(range(len(alpha)), repeat=length):
            (inside if dfa.accepts(idx) else outside).append(Word(alpha, idx))
    found = []
    for u in inside:
        for v in outside:
            if duplicator_wins(u, v, n, cap=cap):
                found.append((u, v))
                if limit is not None and len(found) >= limit:
                    return found
    return found
