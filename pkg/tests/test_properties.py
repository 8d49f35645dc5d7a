"""Property tests for the spec-level invariants, driven by hypothesis."""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_nfa
from foplus import automata as au
from foplus import games as gm
from foplus import intgame as ig
from foplus import logic as lg
from foplus.core import Word, leq_word, make_powerset_alphabet

P2 = make_powerset_alphabet(["a", "b"])

words = st.lists(st.integers(0, len(P2) - 1), max_size=6).map(
    lambda ix: Word(P2, tuple(ix)))
seeds = st.integers(0, 10**6)


@given(words, words, words)
def test_leq_word_is_a_partial_order(u, v, w):
    assert leq_word(u, u)
    if leq_word(u, v) and leq_word(v, u):
        assert u.indices == v.indices
    if leq_word(u, v) and leq_word(v, w):
        assert leq_word(u, w)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_monotone_closure_is_a_closure_operator(seed):
    nfa = random_nfa(P2, random.Random(seed))
    closed = au.monotone_closure(nfa)
    assert au.is_monotone(closed)
    assert au.includes(closed, nfa)  # contains the original language
    twice = au.monotone_closure(closed)
    assert au.includes(closed, twice) and au.includes(twice, closed)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_canonical_dfa_preserves_language(seed):
    nfa = random_nfa(P2, random.Random(seed))
    dfa = au.canonical_dfa(nfa)
    for w_seed in range(20):
        rng = random.Random(seed * 31 + w_seed)
        w = tuple(rng.randrange(len(P2)) for _ in range(rng.randint(0, 6)))
        assert nfa.accepts(w) == dfa.accepts(w)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 3), seeds)
def test_parse_render_round_trip(rank, seed):
    f = lg.random_formula(P2, rank, seed=seed)
    assert lg.parse(lg.render(f), P2) == f
    assert lg.is_positive(f, mode="word")
    assert lg.quantifier_rank(f) <= rank


@settings(max_examples=40, deadline=None)
@given(words, st.integers(0, 2), seeds)
def test_batch_and_scalar_eval_agree(u, rank, seed):
    import numpy as np
    f = lg.random_formula(P2, rank, seed=seed)
    batch = lg.eval_words_batch(f, P2, np.array([u.indices], dtype=np.int64))
    assert bool(batch[0]) == lg.eval_word_fast(f, u)


@settings(max_examples=30, deadline=None)
@given(words, words, st.integers(1, 3))
def test_duplicator_wins_is_downward_closed_in_rounds(u, v, n):
    """Winning n rounds implies winning any smaller number of rounds."""
    if gm.duplicator_wins(u, v, n):
        for k in range(1, n):
            assert gm.duplicator_wins(u, v, k)


@settings(max_examples=30, deadline=None)
@given(words, st.integers(1, 3))
def test_game_is_reflexive(u, n):
    assert gm.duplicator_wins(u, u, n)


@settings(max_examples=30, deadline=None)
@given(words, words, st.integers(1, 2), seeds)
def test_transfer_soundness(u, v, n, seed):
    """If Duplicator wins n rounds, every rank-n positive formula transfers."""
    if gm.duplicator_wins(u, v, n):
        f = lg.random_formula(P2, n, seed=seed)
        assert not lg.eval_word_fast(f, u) or lg.eval_word_fast(f, v)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 2), st.data())
def test_int_game_mirror_symmetry(n, data):
    """Solving an arena and its reverse gives the same winner."""
    arenas = list(ig.generate_arenas(n, 4))
    arena = data.draw(st.sampled_from(arenas))
    rounds = ig.round_budget_int(n)
    direct = ig.solve_int_game(arena, rounds).winner
    mirrored = ig.solve_int_game(arena.mirrored_standard(), rounds).winner
    assert direct == mirrored
