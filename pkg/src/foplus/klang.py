"""The counter-example language K = (a↑b↑c↑)* + A*⊤A* over P({a,b,c}).

K is monotone and FO-definable but not FO+-definable.  This module builds its
canonical DFA, the word families u = ({a}{b}{c})^N and v = pair-shifts used to
beat every FO+ formula, the closest-token Duplicator strategy, and an explicit
FO formula (with negation) equivalent to K built from anchor positions.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import automata as au
from . import logic as lg
from .core import OrderedAlphabet, Word, make_powerset_alphabet
from .games import Move, WordGamePosition

TOP = "{a,b,c}"

# position class k means: in (a↑b↑c↑)* the letter sits at index ≡ k (mod 3)
CLASS_LETTER = ["{a}", "{b}", "{c}"]
PAIRS = ["{a,b}", "{b,c}", "{a,c}"]  # classes {0,1}, {1,2}, {2,0}
PAIR_UPPER = {"{a,b}": 0, "{b,c}": 1, "{a,c}": 2}  # class of the upper choice
CYCLIC_NEXT = {"{a,b}": "{b,c}", "{b,c}": "{a,c}", "{a,c}": "{a,b}"}


@dataclass(frozen=True)
class KContext:
    alphabet: OrderedAlphabet
    nfa: au.Nfa
    dfa: au.Dfa
    top: str

    def accepts(self, w: Word | list[str]) -> bool:
        if isinstance(w, Word):
            return self.dfa.accepts(w)
        return self.dfa.accepts(Word.from_letters(self.alphabet, w))


def build_K() -> KContext:
    alpha = make_powerset_alphabet(["a", "b", "c"])
    any_letter = au.Lit(frozenset(alpha.letters))
    expr = au.alt(
        au.Star(au.cat(au.up(alpha, "{a}"), au.up(alpha, "{b}"),
                       au.up(alpha, "{c}"))),
        au.cat(au.Star(any_letter), au.lit(TOP), au.Star(any_letter)))
    nfa = au.compile_regex(expr, alpha)
    return KContext(alpha, nfa, au.canonical_dfa(nfa), TOP)


def lemma44_words(n: int) -> tuple[Word, Word]:
    """u = ({a}{b}{c})^N in K and v with v[i] = {w(i), w(i+1)} not in K,
    where N = 2^n and w = (abc)^ω; |v| = 3N-1 ≡ 2 (mod 3)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    alpha = make_powerset_alphabet(["a", "b", "c"])
    big_n = 2 ** n
    u = Word.from_letters(alpha, CLASS_LETTER * big_n)
    preds = "abc"
    v_letters = []
    for i in range(3 * big_n - 1):
        v_letters.append("{" + ",".join(sorted({preds[i % 3], preds[(i + 1) % 3]}))
                         + "}")
    v = Word.from_letters(alpha, v_letters)
    return u, v


def closest_token_strategy(p: WordGamePosition, spoiler_move: Move) -> int:
    """Reply at the same signed distance from the closest existing token,
    counting virtual sentinel tokens on both endpoints."""
    word, pos = spoiler_move
    if word == "u":
        own_len, other_len = len(p.u), len(p.v)
        tokens = [(a, b) for a, b in p.pairs]
    else:
        own_len, other_len = len(p.v), len(p.u)
        tokens = [(b, a) for a, b in p.pairs]
    tokens = tokens + [(0, 0), (own_len - 1, other_len - 1)]
    own, partner = min(tokens, key=lambda t: (abs(pos - t[0]), t[0]))
    reply = partner + (pos - own)
    return max(0, min(other_len - 1, reply))


# ---------------------------------------------------------------------------
# The explicit FO formula for K


def _letter_is(var: str, letter: str) -> lg.Formula:
    """Exact-letter test through the three predicates."""
    preds = set(letter[1:-1].split(",")) if len(letter) > 2 else set()
    parts: list[lg.Formula] = []
    for p in ("a", "b", "c"):
        atom = lg.Pred(p, var)
        parts.append(atom if p in preds else lg.Not(atom))
    return lg.conj(*parts)


def _first(var: str) -> lg.Formula:
    return lg.Forall("q0", lg.Le(var, "q0"))


def _last(var: str) -> lg.Formula:
    return lg.Forall("q1", lg.Le("q1", var))


def _succ(x: str, y: str) -> lg.Formula:
    return lg.conj(lg.Lt(x, y),
                   lg.Forall("q2", lg.disj(lg.Le("q2", x), lg.Le(y, "q2"))))


def _cls(var: str, k: int) -> lg.Formula:
    """Effective-letter class test: the letter fits slot k of (a↑b↑c↑)*,
    with the first position pinned to slot 0 and the last to slot 2."""
    parts: list[lg.Formula] = [lg.LetterUp(CLASS_LETTER[k % 3], var)]
    if k % 3 != 0:
        parts.append(lg.Not(_first(var)))
    if k % 3 != 2:
        parts.append(lg.Not(_last(var)))
    return lg.conj(*parts)


def _singleton(var: str) -> lg.Formula:
    return lg.disj(*[_letter_is(var, s) for s in CLASS_LETTER])


def _pair_anchor(var: str) -> lg.Formula:
    # a pair letter whose successor is not its cyclic follower
    opts = []
    for pair in PAIRS:
        breaking = lg.Exists("m", lg.conj(
            _succ(var, "m"), lg.Not(_letter_is("m", CYCLIC_NEXT[pair]))))
        opts.append(lg.conj(_letter_is(var, pair),
                            lg.disj(_last(var), breaking)))
    return lg.disj(*opts)


def _anchor(var: str) -> lg.Formula:
    return lg.disj(_first(var), _last(var), _singleton(var), _pair_anchor(var))


def _fits(var: str, k: int) -> lg.Formula:
    """The anchor at var has determined class k: its effective letter fits
    slot k and its immediate follower (if any) fits slot k+1."""
    follower = lg.disj(_last(var),
                       lg.Exists("n0", lg.conj(_succ(var, "n0"),
                                               _cls("n0", (k + 1) % 3))))
    return lg.conj(_cls(var, k % 3), follower)


def _right_dir(x: str, up: bool) -> lg.Formula:
    # a pair (αβ) follows anchor x and replacing it by its upper (resp.
    # lower) singleton matches x's determined class
    opts = []
    for pair in PAIRS:
        k_upper = PAIR_UPPER[pair]
        k_rep = k_upper if up else (k_upper + 1) % 3
        opts.append(lg.conj(_letter_is("m", pair), _fits(x, (k_rep - 1) % 3)))
    return lg.Exists("m", lg.conj(_succ(x, "m"), lg.disj(*opts)))


def _left_dir(y: str, up: bool) -> lg.Formula:
    opts = []
    for pair in PAIRS:
        k_upper = PAIR_UPPER[pair]
        k_rep = k_upper if up else (k_upper + 1) % 3
        opts.append(lg.conj(_letter_is("m", pair), _fits(y, (k_rep + 1) % 3)))
    return lg.Exists("m", lg.conj(_succ("m", y), lg.disj(*opts)))


def build_phi_K() -> lg.Formula:
    """FO formula (with negation) whose word semantics equals membership in
    K, built around anchor positions and direction agreement."""
    has_top = lg.Exists("t", lg.LetterUp(TOP, "t"))
    empty = lg.Not(lg.Exists("e", lg.Le("e", "e")))
    single = lg.Exists("s", lg.Forall("r", lg.EqVar("r", "s")))

    ends_ok = lg.conj(
        lg.Exists("f", lg.conj(_first("f"), lg.LetterUp("{a}", "f"))),
        lg.Exists("l", lg.conj(_last("l"), lg.LetterUp("{c}", "l"))))

    # consecutive anchors: some class alignment fits both (the 3-letter
    # neighbourhood check, folded into the follower clause of _fits)
    window3 = [lg.conj(_fits("x", k), _fits("y", (k + 1) % 3))
               for k in range(3)]
    consec_ok = lg.Forall("x", lg.Forall("y", lg.disj(
        lg.Not(_succ("x", "y")), lg.Not(_anchor("x")), lg.Not(_anchor("y")),
        lg.disj(*window3))))

    # successive non-consecutive anchors agree on a direction
    between_anchor = lg.Exists("z", lg.conj(
        lg.Lt("x", "z"), lg.Lt("z", "y"), _anchor("z")))
    non_consec = lg.Exists("w", lg.conj(lg.Lt("x", "w"), lg.Lt("w", "y")))
    agree = lg.disj(lg.conj(_right_dir("x", True), _left_dir("y", True)),
                    lg.conj(_right_dir("x", False), _left_dir("y", False)))
    agree_ok = lg.Forall("x", lg.Forall("y", lg.disj(
        lg.Not(lg.conj(lg.Lt("x", "y"), _anchor("x"), _anchor("y"))),
        between_anchor, lg.Not(non_consec), agree)))

    body = lg.conj(lg.Not(single), ends_ok, consec_ok, agree_ok)
    return lg.disj(has_top, empty, body)
