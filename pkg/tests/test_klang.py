import random
from itertools import product

import numpy as np
import pytest

from foplus import automata as au
from foplus import games as gm
from foplus import klang
from foplus import logic as lg
from foplus.core import Word, leq_word


@pytest.fixture(scope="module")
def ctx():
    return klang.build_K()


def test_basic_membership(ctx):
    assert ctx.accepts([])
    assert ctx.accepts(["{a}", "{b}", "{c}"])
    assert not ctx.accepts(["{a}", "{b}"])
    assert ctx.accepts(["{b}", "{a,b,c}", "{}"])
    assert ctx.accepts(["{a,b}", "{b,c}", "{a,c}"])
    assert not ctx.accepts(["{}"])


def test_K_monotone_and_aperiodic(ctx):
    assert au.is_monotone(ctx.dfa)
    m = au.syntactic_monoid(ctx.dfa)
    assert au.is_aperiodic(m)
    assert au.is_counter_free(ctx.nfa)
    rep = au.green_classes(m)
    assert all(len(h) == 1 for h in rep.h_classes)


def test_K0_restricted_to_top_star(ctx):
    # the first disjunct alone satisfies K0 ∩ ⊤* = (⊤⊤⊤)* up to length 9
    alpha = ctx.alphabet
    k0 = au.compile_regex(au.Star(au.cat(
        au.up(alpha, "{a}"), au.up(alpha, "{b}"), au.up(alpha, "{c}"))), alpha)
    top = alpha.index(klang.TOP)
    for n in range(10):
        assert k0.accepts([top] * n) == (n % 3 == 0)
        # full K accepts every nonempty ⊤-word through A*⊤A*
        assert ctx.dfa.accepts([top] * n)


def test_lemma44_shapes():
    for n in (1, 2, 3):
        u, v = klang.lemma44_words(n)
        big_n = 2 ** n
        assert len(u) == 3 * big_n
        assert len(v) == 3 * big_n - 1
        assert len(v) % 3 == 2
        for i in range(len(v)):
            preds = v.alphabet.letter_predicates(v[i])
            assert len(preds) == 2
            # u[i] <= v[i] and u[i+1] <= v[i]
            assert leq_word(u.slice(i, i), Word(v.alphabet, (v[i],)))
            assert leq_word(u.slice(i + 1, i + 1), Word(v.alphabet, (v[i],)))


def test_lemma44_membership(ctx):
    for n in (1, 2, 3):
        u, v = klang.lemma44_words(n)
        assert ctx.dfa.accepts(u)
        assert not ctx.dfa.accepts(v)


def test_lemma44_shift_property():
    u, v = klang.lemma44_words(1)
    dropped = u.slice(0, len(u) - 2)
    assert leq_word(dropped, v)


def test_lemma44_rejects_n0():
    with pytest.raises(ValueError):
        klang.lemma44_words(0)


def test_duplicator_wins_lemma44():
    for n in (1, 2):
        u, v = klang.lemma44_words(n)
        assert gm.duplicator_wins(u, v, n)


def test_closest_token_strategy_sentinels():
    u, v = klang.lemma44_words(1)
    p = gm.WordGamePosition(u, v, ())
    assert klang.closest_token_strategy(p, ("u", 0)) == 0
    assert klang.closest_token_strategy(p, ("u", len(u) - 1)) == len(v) - 1
    assert klang.closest_token_strategy(p, ("v", 0)) == 0


def test_closest_token_strategy_survives():
    for n in (1, 2):
        u, v = klang.lemma44_words(n)
        assert gm.verify_duplicator_strategy(u, v, n,
                                             klang.closest_token_strategy)


def test_witness_family_in_K_product(ctx):
    u, v = klang.lemma44_words(1)
    pairs = gm.find_witness_pairs(ctx.nfa, 1, 5, limit=1)
    assert pairs  # the n=1 pair is within the bound


# --- phi_K -------------------------------------------------------------------

def test_phi_K_top_word(ctx):
    phi = klang.build_phi_K()
    assert lg.eval_word(phi, Word.from_letters(ctx.alphabet, [klang.TOP]))


def test_phi_K_small_words(ctx):
    phi = klang.build_phi_K()
    for letters in ([], ["{a}", "{b}"], ["{a}", "{b}", "{c}"],
                    ["{a,b}", "{b,c}", "{a,c}"], ["{}"], ["{a,c}"]):
        w = Word.from_letters(ctx.alphabet, letters)
        assert lg.eval_word_fast(phi, w) == ctx.dfa.accepts(w), letters


def test_phi_K_section44_example(ctx):
    # a pair word with interior anchors at 5 (singleton c) and 10 (a pair
    # followed by a chain-breaking pair), accepted
    letters = ["{a,b}", "{b,c}", "{a,c}", "{a,b}", "{b,c}", "{c}",
               "{a,b}", "{b,c}", "{a,c}", "{a,b}", "{b,c}", "{b,c}",
               "{a,c}", "{a,b}", "{b,c}"]
    w = Word.from_letters(ctx.alphabet, letters)
    assert ctx.dfa.accepts(w)
    phi = klang.build_phi_K()
    assert lg.eval_word_fast(phi, w)


def test_phi_K_exhaustive_to_len4(ctx):
    phi = klang.build_phi_K()
    table = np.array(ctx.dfa.table())
    final = np.array(sorted(ctx.dfa.final))
    for n in range(5):
        ws = np.array(list(product(range(8), repeat=n)),
                      dtype=np.int64).reshape(8 ** n, n)
        got = lg.eval_words_batch(phi, ctx.alphabet, ws)
        state = np.zeros(ws.shape[0], dtype=np.int64)
        for j in range(n):
            state = table[state, ws[:, j]]
        exp = np.isin(state, final)
        assert (got == exp).all()


def test_phi_K_batch_matches_naive(ctx):
    phi = klang.build_phi_K()
    rng = random.Random(8)
    for _ in range(30):
        n = rng.randint(0, 5)
        w = Word(ctx.alphabet, tuple(rng.randrange(8) for _ in range(n)))
        assert lg.eval_word_fast(phi, w) == lg.eval_word(phi, w)
