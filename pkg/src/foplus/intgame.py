"""The n-integer game: arenas, exact solving, and the inductive Spoiler strategy.

The game abstracts an EF+ game on configuration words by the heights of the
configurations.  It is played on an arena (U, V) where U is a sequence over
the base letters [0, n] and V a sequence over the ambiguous letters (i, i-1).
Besides the usual order and label clauses, Duplicator must respect a
neighbouring constraint: tokens on consecutive positions in one word must sit
on consecutive positions in the other, and two consecutive V tokens labelled
(i, i-1)(j, j-1) force U labels i, j or i-1, j-1, never a mix.

Spoiler wins every n-integer game within 2n + 2 rounds.  The inductive
strategy plays the last occurrence of the maximal letter in U when present,
otherwise the first maximal ambiguous letter in V, and recurses on the
resulting suffix or prefix windows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterator, Optional

from .games import GameError

# Spoiler move: ("U" | "V", position).
IntMove = tuple[str, int]
Pair = tuple[int, int]

STANDARD = "standard"
MIRRORED = "mirrored"


def amb(i: int) -> tuple[int, int]:
    """The ambiguous letter (i, i-1)."""
    return (i, i - 1)


@dataclass(frozen=True)
class IntArena:
    """Arena (U, V) for the n-integer game.

    U ranges over [0, n], V over {(i, i-1) : 1 <= i <= n}.  In the standard
    orientation V starts with (U[0], U[0]-1) and ends with (U[-1]+1, U[-1]);
    the mirrored orientation swaps the two endpoint shapes.
    """

    n: int
    u: tuple[int, ...]
    v: tuple[tuple[int, int], ...]
    orientation: str = STANDARD

    def __post_init__(self):
        if self.n < 1:
            raise GameError("n must be >= 1")
        if self.orientation not in (STANDARD, MIRRORED):
            raise GameError(f"unknown orientation {self.orientation!r}")
        if len(self.u) < 2 or len(self.v) < 1:
            raise GameError("need |U| >= 2 and |V| >= 1")
        for a in self.u:
            if not 0 <= a <= self.n:
                raise GameError(f"U letter {a} outside [0, {self.n}]")
        for pair in self.v:
            if not (isinstance(pair, tuple) and len(pair) == 2
                    and pair[0] == pair[1] + 1 and 1 <= pair[0] <= self.n):
                raise GameError(f"V letter {pair} not of the form (i, i-1)")
        if self.orientation == STANDARD:
            want_first, want_last = amb(self.u[0]), amb(self.u[-1] + 1)
        else:
            want_first, want_last = amb(self.u[0] + 1), amb(self.u[-1])
        if self.v[0] != want_first:
            raise GameError(f"V must start with {want_first}, got {self.v[0]}")
        if self.v[-1] != want_last:
            raise GameError(f"V must end with {want_last}, got {self.v[-1]}")

    def mirrored_standard(self) -> "IntArena":
        """The reversed arena; maps a mirrored arena to a standard one."""
        flip = {STANDARD: MIRRORED, MIRRORED: STANDARD}
        return IntArena(self.n, self.u[::-1], self.v[::-1],
                        flip[self.orientation])

    def to_json(self) -> dict:
        return {"v": 1, "n": self.n, "u": list(self.u),
                "V": [list(p) for p in self.v],
                "orientation": self.orientation}

    @staticmethod
    def from_json(data: dict) -> "IntArena":
        return IntArena(data["n"], tuple(data["u"]),
                        tuple(tuple(p) for p in data["V"]),
                        data.get("orientation", STANDARD))


@dataclass(frozen=True)
class IntPosition:
    arena: IntArena
    pairs: tuple[Pair, ...]


def _label_ok(arena: IntArena, x: int, y: int) -> bool:
    return arena.u[x] in arena.v[y]


def _pairwise_ok(arena: IntArena, p1: Pair, p2: Pair) -> bool:
    (x1, y1), (x2, y2) = p1, p2
    if (x1 < x2) != (y1 < y2) or (x1 == x2) != (y1 == y2):
        return False
    # neighbouring: consecutive in one word iff consecutive in the other
    if (x2 == x1 + 1) != (y2 == y1 + 1):
        return False
    if (x1 == x2 + 1) != (y1 == y2 + 1):
        return False
    if x2 == x1 + 1:
        i, j = arena.v[y1][0], arena.v[y2][0]
        if (arena.u[x1], arena.u[x2]) not in ((i, j), (i - 1, j - 1)):
            return False
    if x1 == x2 + 1:
        i, j = arena.v[y2][0], arena.v[y1][0]
        if (arena.u[x2], arena.u[x1]) not in ((i, j), (i - 1, j - 1)):
            return False
    return True


def is_legal_int_position(p: IntPosition) -> bool:
    arena = p.arena
    for x, y in p.pairs:
        if not (0 <= x < len(arena.u) and 0 <= y < len(arena.v)):
            raise GameError(f"token ({x},{y}) out of range")
    for x, y in p.pairs:
        if not _label_ok(arena, x, y):
            return False
    for i, p1 in enumerate(p.pairs):
        for p2 in p.pairs[i + 1:]:
            if p1 != p2 and not _pairwise_ok(arena, p1, p2):
                return False
    return True


def _extends_ok(arena: IntArena, pairs: tuple[Pair, ...], x: int, y: int) -> bool:
    if not _label_ok(arena, x, y):
        return False
    for old in pairs:
        if (x, y) != old and not _pairwise_ok(arena, old, (x, y)):
            return False
    return True


def legal_replies(arena: IntArena, pairs: tuple[Pair, ...],
                  move: IntMove) -> list[int]:
    word, pos = move
    if word == "U":
        if not 0 <= pos < len(arena.u):
            raise GameError(f"U position {pos} out of range")
        return [y for y in range(len(arena.v))
                if _extends_ok(arena, pairs, pos, y)]
    if word == "V":
        if not 0 <= pos < len(arena.v):
            raise GameError(f"V position {pos} out of range")
        return [x for x in range(len(arena.u))
                if _extends_ok(arena, pairs, x, pos)]
    raise GameError(f"unknown word {word!r}")


def _pair_of(move: IntMove, reply: int) -> Pair:
    word, pos = move
    return (pos, reply) if word == "U" else (reply, pos)


# ---------------------------------------------------------------------------
# Exact solver


@dataclass
class IntGameResult:
    winner: str  # "spoiler" | "duplicator"
    rounds: int  # rounds granted
    variation: list[tuple[IntMove, Optional[int]]] = field(default_factory=list)


class _IntSolver:
    def __init__(self, arena: IntArena):
        self.arena = arena
        self.memo: dict[tuple, bool] = {}

    def moves(self) -> Iterator[IntMove]:
        for x in range(len(self.arena.u)):
            yield ("U", x)
        for y in range(len(self.arena.v)):
            yield ("V", y)

    def dup_wins(self, pairs: tuple[Pair, ...], rounds: int) -> bool:
        if rounds == 0:
            return True
        key = (tuple(sorted(set(pairs))), rounds)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        result = True
        for move in self.moves():
            if not any(self.dup_wins(pairs + (_pair_of(move, r),), rounds - 1)
                       for r in legal_replies(self.arena, pairs, move)):
                result = False
                break
        self.memo[key] = result
        return result

    def winning_spoiler_move(self, pairs, rounds: int) -> Optional[IntMove]:
        if rounds == 0:
            return None
        for move in self.moves():
            if not any(self.dup_wins(pairs + (_pair_of(move, r),), rounds - 1)
                       for r in legal_replies(self.arena, pairs, move)):
                return move
        return None

    def best_reply(self, pairs, move: IntMove, rounds: int) -> Optional[int]:
        for r in legal_replies(self.arena, pairs, move):
            if self.dup_wins(pairs + (_pair_of(move, r),), rounds - 1):
                return r
        return None


def round_budget_int(n: int) -> int:
    """Upper bound on the rounds the inductive Spoiler strategy needs."""
    return 2 * n + 2


def solve_int_game(arena: IntArena, rounds: int) -> IntGameResult:
    """Exact minimax verdict with a principal variation.

    When Spoiler wins, the variation pairs each winning Spoiler move with
    Duplicator's best (longest-surviving) reply; the final reply is None.
    """
    if rounds > round_budget_int(arena.n):
        raise GameError(f"rounds {rounds} exceeds budget "
                        f"{round_budget_int(arena.n)}")
    s = _IntSolver(arena)
    if s.dup_wins((), rounds):
        return IntGameResult("duplicator", rounds)
    variation: list[tuple[IntMove, Optional[int]]] = []
    pairs: tuple[Pair, ...] = ()
    left = rounds
    while left:
        move = s.winning_spoiler_move(pairs, left)
        assert move is not None
        # Duplicator's best: any reply that survives the longest
        best, best_depth = None, -1
        for r in legal_replies(arena, pairs, move):
            depth = 0
            probe = pairs + (_pair_of(move, r),)
            while depth < left - 1 and s.dup_wins(probe, depth + 1):
                depth += 1
            if depth > best_depth:
                best, best_depth = r, depth
        variation.append((move, best))
        if best is None:
            break
        pairs += (_pair_of(move, best),)
        left -= 1
    return IntGameResult("spoiler", rounds, variation)


# ---------------------------------------------------------------------------
# The inductive Spoiler strategy

IntStrategy = Callable[[tuple[Pair, ...]], IntMove]


def spoiler_lemma622(arena: IntArena) -> IntStrategy:
    """The inductive strategy: a function from the pair history (in play
    order) to Spoiler's next move."""

    def strategy(history: tuple[Pair, ...]) -> IntMove:
        return _inductive_move(arena, tuple(history))

    return strategy


def _inductive_move(arena: IntArena, history: tuple[Pair, ...]) -> IntMove:
    if arena.orientation == MIRRORED:
        std = arena.mirrored_standard()
        nu, nv = len(arena.u), len(arena.v)
        flipped = tuple((nu - 1 - x, nv - 1 - y) for x, y in history)
        word, pos = _inductive_move(std, flipped)
        return (word, (nu if word == "U" else nv) - 1 - pos)

    u, v = arena.u, arena.v
    u_lo, u_hi = 0, len(u) - 1
    v_lo, v_hi = 0, len(v) - 1
    m = arena.n
    idx = 0

    def next_is(move: IntMove) -> Optional[IntMove]:
        """Return the move if it is still pending, else consume its pair."""
        nonlocal idx
        if idx == len(history):
            return move
        word, pos = move
        got = history[idx][0] if word == "U" else history[idx][1]
        if got != pos:
            raise GameError(f"history diverges from the strategy at {move}")
        idx += 1
        return None

    while True:
        if u_lo > u_hi and v_lo > v_hi:
            raise GameError("strategy exhausted: both windows empty")
        if v_lo > v_hi:
            # any u-window move has no reply strictly between placed tokens
            mv = next_is(("U", u_lo))
            if mv:
                return mv
            raise GameError("unexpected reply in an empty v-window")
        if u_lo > u_hi:
            mv = next_is(("V", v_lo))
            if mv:
                return mv
            raise GameError("unexpected reply in an empty u-window")
        if m < 1:
            raise GameError("strategy exhausted: level 0 reached")

        if m == 1:
            xs = [x for x in range(u_lo, u_hi + 1) if u[x] == 1]
            if not xs or xs[-1] == u_hi:
                raise GameError("window is not a 1-arena")
            x = xs[-1]
            mv = next_is(("U", x))
            if mv:
                return mv
            # successor labelled 0: reply forced adjacent, mix rule kills it
            mv = next_is(("U", x + 1))
            if mv:
                return mv
            raise GameError("unexpected reply to the base-case mix probe")

        xs = [x for x in range(u_lo, u_hi + 1) if u[x] == m]
        ys = [y for y in range(v_lo, v_hi + 1) if v[y] == amb(m)]
        if not xs and not ys:
            m -= 1
            continue
        if xs:
            # play the last occurrence of m; reply label is forced to (m, m-1)
            x = xs[-1]
            mv = next_is(("U", x))
            if mv:
                return mv
            _, y = history[idx - 1]
            if y < v_hi and x < u_hi and v[y + 1] != amb(u[x + 1]):
                # suffix start invariant broken: the forced reply to x+1 is a
                # mix with the (x, y) token
                mv = next_is(("U", x + 1))
                if mv:
                    return mv
                raise GameError("unexpected reply to the suffix mix probe")
            u_lo, v_lo = x + 1, y + 1
            continue
        # m absent from U: play the first (m, m-1); reply label forced m-1
        y1 = ys[0]
        mv = next_is(("V", y1))
        if mv:
            return mv
        x, _ = history[idx - 1]
        if x == u_lo:
            # nothing to the left of x: the first v-window position has no reply
            mv = next_is(("V", v_lo))
            if mv:
                return mv
            raise GameError("unexpected reply left of the window start")
        if v[y1 - 1] != amb(u[x - 1] + 1):
            # prefix end invariant broken: the forced reply to x-1 is a mix
            mv = next_is(("U", x - 1))
            if mv:
                return mv
            raise GameError("unexpected reply to the prefix mix probe")
        u_hi, v_hi = x - 1, y1 - 1
        m -= 1


def verify_spoiler_strategy(arena: IntArena,
                            strategy: Optional[IntStrategy] = None,
                            budget: Optional[int] = None) -> Optional[int]:
    """Play the strategy against every legal Duplicator reply sequence.

    Returns the worst-case number of rounds Spoiler needs, or None if some
    reply sequence survives the budget.
    """
    if strategy is None:
        strategy = spoiler_lemma622(arena)
    if budget is None:
        budget = round_budget_int(arena.n)

    def dfs(history: tuple[Pair, ...]) -> Optional[int]:
        move = strategy(history)
        replies = legal_replies(arena, history, move)
        if not replies:
            return len(history) + 1
        if len(history) + 1 >= budget:
            return None  # Duplicator survives the budget
        worst = 0
        for r in replies:
            got = dfs(history + (_pair_of(move, r),))
            if got is None:
                return None
            worst = max(worst, got)
        return worst

    return dfs(())


# ---------------------------------------------------------------------------
# Exhaustive arena generation


def generate_arenas(n: int, max_u_len: int, max_v_len: Optional[int] = None,
                    orientation: str = STANDARD) -> Iterator[IntArena]:
    """All arenas with |U| <= max_u_len and |V| <= max_v_len (default: same
    bound).  Endpoint letters are constrained by the orientation invariants;
    interior letters range freely."""
    if max_v_len is None:
        max_v_len = max_u_len
    if orientation == STANDARD:
        first_ok = range(1, n + 1)          # V[0] = (U[0], U[0]-1)
        last_ok = range(0, n)               # V[-1] = (U[-1]+1, U[-1])
    elif orientation == MIRRORED:
        first_ok = range(0, n)
        last_ok = range(1, n + 1)
    else:
        raise GameError(f"unknown orientation {orientation!r}")
    for u_len in range(2, max_u_len + 1):
        for first in first_ok:
            for last in last_ok:
                for interior in product(range(n + 1), repeat=u_len - 2):
                    u = (first, *interior, last)
                    if orientation == STANDARD:
                        v_first, v_last = amb(first), amb(last + 1)
                    else:
                        v_first, v_last = amb(first + 1), amb(last)
                    for v_len in range(1, max_v_len + 1):
                        if v_len == 1:
                            if v_first != v_last:
                                continue
                            yield IntArena(n, u, (v_first,), orientation)
                            continue
                        for mid in product([amb(i) for i in range(1, n + 1)],
                                           repeat=v_len - 2):
                            yield IntArena(n, u, (v_first, *mid, v_last),
                                           orientation)
