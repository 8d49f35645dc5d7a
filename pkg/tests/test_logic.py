import random
from itertools import product

import numpy as np
import pytest

from foplus import logic as lg
from foplus.core import OrderedAlphabet, Word, leq_word, make_powerset_alphabet


def words_upto(alphabet, max_len):
    for n in range(max_len + 1):
        for idx in product(range(len(alphabet)), repeat=n):
            yield Word(alphabet, idx)


# --- parsing and rendering ---------------------------------------------------

def test_parse_forall_letterup(p3):
    f = lg.parse("forall x. [{a}](x)", p3)
    assert f == lg.Forall("x", lg.LetterUp("{a}", "x"))


def test_parse_example33():
    f = lg.parse("exists x. exists y. x<=y & a(x) & b(y)")
    assert f == lg.Exists("x", lg.Exists("y", lg.And(
        (lg.Le("x", "y"), lg.Pred("a", "x"), lg.Pred("b", "y")))))


def test_parse_precedence():
    f = lg.parse("a(x) | b(x) & c(x)")
    assert isinstance(f, lg.Or)
    assert isinstance(f.parts[1], lg.And)
    g = lg.parse("!a(x) & b(x)")
    assert isinstance(g, lg.And)
    assert isinstance(g.parts[0], lg.Not)


def test_quantifier_body_extends_right():
    f = lg.parse("a(x) | exists y . b(y) | c(y)")
    assert isinstance(f, lg.Or)
    assert len(f.parts) == 2
    assert isinstance(f.parts[1], lg.Exists)
    assert isinstance(f.parts[1].sub, lg.Or)


def test_parse_multi_var_quantifier():
    f = lg.parse("exists x y . x<y")
    assert f == lg.Exists("x", lg.Exists("y", lg.Lt("x", "y")))


def test_parse_graph_atoms():
    f = lg.parse("E(x,y) & x!=y & x=z")
    assert f == lg.And((lg.Edge("x", "y"), lg.NeqVar("x", "y"),
                        lg.EqVar("x", "z")))


def test_parse_errors():
    with pytest.raises(lg.FormulaError):
        lg.parse("exists . a(x)")
    with pytest.raises(lg.FormulaError):
        lg.parse("a(x) &")
    with pytest.raises(lg.FormulaError):
        lg.parse("F(x,y)")
    with pytest.raises(lg.FormulaError):
        lg.parse("forall x. [{z}](x)", make_powerset_alphabet(["a"]))


def test_round_trip_corpus(p2):
    corpus = [
        "forall x . [{a}](x)",
        "exists x . exists y . x<=y & a(x) & b(y)",
        "exists x . [{a,b}](x) | forall y . y<x",
        "!(x<=y)",
        "E(x,y) & x!=y",
        "true",
        "false | a(x)",
    ]
    rng = random.Random(0)
    for seed in range(43):
        corpus.append(lg.render(lg.random_formula(p2, rng.randint(0, 3), seed)))
    assert len(corpus) == 50
    for text in corpus:
        f = lg.parse(text)
        assert lg.parse(lg.render(f)) == f


def test_positivity_error_mode():
    f = lg.parse("!(x<=y)")
    assert not lg.is_positive(f)
    assert lg.is_positive(lg.parse("x!=y"), mode="graph")
    assert not lg.is_positive(lg.parse("x!=y"), mode="word")


# --- evaluation --------------------------------------------------------------

def test_eval_example33_single_letter(p3):
    f = lg.parse("exists x. exists y. x<=y & a(x) & b(y)")
    w = Word.from_letters(p3, ["{a,b}"])
    assert lg.eval_word(f, w)
    assert not lg.eval_word(f, Word.from_letters(p3, ["{a}"]))
    w2 = Word.from_letters(p3, ["{a}", "{b}"])
    assert lg.eval_word(f, w2)


def test_eval_empty_word(p3):
    e = Word(p3, ())
    assert lg.eval_word(lg.parse("forall x . a(x)"), e)
    assert not lg.eval_word(lg.parse("exists x . a(x)"), e)


def test_eval_letterup_chain():
    a = OrderedAlphabet.from_pairs(["a", "b"], [("a", "b")])
    f = lg.parse("exists x . [b](x)")
    assert lg.eval_word(f, Word.from_letters(a, ["b", "a", "b"]))
    assert not lg.eval_word(f, Word.from_letters(a, ["a", "a"]))
    # a <= b so [a](x) holds at a b position too
    g = lg.parse("forall x . [a](x)")
    assert lg.eval_word(g, Word.from_letters(a, ["a", "b"]))


def test_eval_valuation(p3):
    f = lg.parse("a(x)")
    w = Word.from_letters(p3, ["{a}", "{b}"])
    assert lg.eval_word(f, w, {"x": 0})
    assert not lg.eval_word(f, w, {"x": 1})
    with pytest.raises(lg.FormulaError):
        lg.eval_word(f, w)
    with pytest.raises(lg.FormulaError):
        lg.eval_word(f, w, {"x": 5})


def test_eval_graph_atom_on_word_rejected(p3):
    with pytest.raises(lg.FormulaError):
        lg.eval_word(lg.parse("exists x . E(x,x)"), Word.from_letters(p3, ["{a}"]))


def test_quantifier_rank():
    assert lg.quantifier_rank(lg.parse("a(x)", None)) == 0
    assert lg.quantifier_rank(lg.parse("exists x . forall y . x<=y")) == 2
    f = lg.parse("(exists x . a(x)) & (exists y . exists z . y<z)")
    assert lg.quantifier_rank(f) == 2


# --- vectorized evaluator ----------------------------------------------------

def test_batch_matches_reference(p2):
    rng = random.Random(42)
    for trial in range(40):
        f = lg.random_formula(p2, rng.randint(0, 3), seed=trial)
        for n in range(0, 4):
            ws = list(product(range(len(p2)), repeat=n))
            letters = np.array(ws, dtype=np.int64).reshape(len(ws), n)
            got = lg.eval_words_batch(f, p2, letters)
            for i, idx in enumerate(ws):
                assert got[i] == lg.eval_word(f, Word(p2, idx)), (trial, idx)


def test_batch_with_valuation(p2):
    f = lg.parse("a(x) & exists y . x<=y & b(y)")
    w = Word.from_letters(p2, ["{a}", "{b}"])
    for pos in (0, 1):
        assert lg.eval_word_fast(f, w, {"x": pos}) == lg.eval_word(f, w, {"x": pos})


def test_batch_negation(p2):
    f = lg.parse("!(exists x . a(x))")
    ws = [Word.from_letters(p2, ["{b}"]), Word.from_letters(p2, ["{a}"])]
    for w in ws:
        assert lg.eval_word_fast(f, w) == lg.eval_word(f, w)


def test_eval_graph_reference_and_batch():
    # path 0 -> 1 -> 2
    edges = {(0, 1), (1, 2)}
    adj = np.zeros((3, 3), dtype=bool)
    for i, j in edges:
        adj[i, j] = True
    f = lg.parse("exists x . exists y . E(x,y) & exists z . E(y,z)")
    assert lg.eval_graph(f, 3, lambda i, j: (i, j) in edges)
    assert lg.eval_graph_batch(f, adj)
    g = lg.parse("forall x . exists y . E(x,y)")
    assert not lg.eval_graph(g, 3, lambda i, j: (i, j) in edges)
    assert not lg.eval_graph_batch(g, adj)


# --- positivization ----------------------------------------------------------

def test_positivize_letter():
    a = OrderedAlphabet.from_pairs(["a", "b", "c"], [])
    f = lg.Not(lg.LetterUp("a", "x"))
    g = lg.positivize_trivial_order(f, a)
    assert g == lg.Or((lg.LetterUp("b", "x"), lg.LetterUp("c", "x")))


def test_positivize_order_atoms():
    a = OrderedAlphabet.from_pairs(["a", "b"], [])
    assert lg.positivize_trivial_order(lg.Not(lg.Le("x", "y")), a) == lg.Lt("y", "x")
    assert lg.positivize_trivial_order(lg.Not(lg.Lt("x", "y")), a) == lg.Le("y", "x")
    f = lg.parse("exists x . a(x)")
    assert lg.positivize_trivial_order(f, a) == f


def test_positivize_requires_trivial_order():
    a = OrderedAlphabet.from_pairs(["a", "b"], [("a", "b")])
    with pytest.raises(lg.FormulaError):
        lg.positivize_trivial_order(lg.Not(lg.LetterUp("a", "x")), a)


def test_positivize_preserves_semantics_exhaustive():
    a = OrderedAlphabet.from_pairs(["a", "b", "c"], [])
    rng = random.Random(9)
    formulas = []
    for seed in range(20):
        f = lg.random_formula(a, 2, seed=seed)
        # sprinkle negations to make the rewrite do work
        formulas.append(lg.Not(f))
        formulas.append(f)
    for f in formulas:
        g = lg.positivize_trivial_order(f, a)
        assert lg.is_positive(g)
        for w in words_upto(a, 3):
            assert lg.eval_word(f, w) == lg.eval_word(g, w), lg.render(f)


# --- random formulas and the monotone-transfer property ----------------------

def test_random_formula_contract(p2):
    for seed in range(100):
        f = lg.random_formula(p2, 2, seed=seed)
        assert lg.is_positive(f)
        assert lg.quantifier_rank(f) <= 2
        assert lg.random_formula(p2, 2, seed=seed) == f
        assert not lg.free_vars(f)


def test_monotone_transfer(p2):
    """Positive formulas only define monotone languages."""
    rng = random.Random(77)
    samples = 0
    while samples < 500:
        f = lg.random_formula(p2, rng.randint(0, 3), seed=rng.randrange(10**6))
        n = rng.randint(0, 5)
        u_idx = [rng.randrange(len(p2)) for _ in range(n)]
        v_idx = [rng.choice(sorted(p2.upset_idx(i))) for i in u_idx]
        u, v = Word(p2, tuple(u_idx)), Word(p2, tuple(v_idx))
        assert leq_word(u, v)
        if lg.eval_word(f, u):
            assert lg.eval_word(f, v), lg.render(f)
        samples += 1
