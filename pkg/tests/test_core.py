from itertools import product

import pytest

from foplus.core import (AlphabetError, OrderedAlphabet, Word, leq_word,
                         make_powerset_alphabet, powerset_letter_name)


def test_powerset_one_predicate():
    a = make_powerset_alphabet(["a"])
    assert sorted(a.letters) == ["{a}", "{}"]
    assert len(a.strict_pairs()) == 1
    assert a.leq("{}", "{a}")


def test_powerset_three_predicates():
    a = make_powerset_alphabet(["a", "b", "c"])
    assert len(a.letters) == 8
    # |{(S,T) : S strictly included in T}| over the 3-element subset lattice
    count = 0
    sets = [frozenset(s) for s in
            [(), ("a",), ("b",), ("c",), ("a", "b"), ("a", "c"), ("b", "c"),
             ("a", "b", "c")]]
    for s in sets:
        for t in sets:
            if s < t:
                count += 1
    assert count == 19
    assert len(a.strict_pairs()) == 19


def test_powerset_empty():
    a = make_powerset_alphabet([])
    assert a.letters == ("{}",)
    assert a.is_trivial()


def test_powerset_duplicate_rejected():
    with pytest.raises(AlphabetError):
        make_powerset_alphabet(["a", "a"])


def test_upset():
    a = make_powerset_alphabet(["a", "b"])
    assert a.upset("{a}") == {"{a}", "{a,b}"}
    assert a.upset("{a,b}") == {"{a,b}"}
    assert not a.leq("{a}", "{b}")
    for name in a.letters:
        i = a.index(name)
        assert a.upset(name) == {b for b in a.letters if a.leq(name, b)}


def test_unknown_letter():
    a = make_powerset_alphabet(["a"])
    with pytest.raises(AlphabetError):
        a.upset("{z}")


def test_order_closure_and_cycles():
    a = OrderedAlphabet.from_pairs(["x", "y", "z"], [("x", "y"), ("y", "z")])
    assert a.leq("x", "z")
    with pytest.raises(AlphabetError):
        OrderedAlphabet.from_pairs(["x", "y"], [("x", "y"), ("y", "x")])
    with pytest.raises(AlphabetError):
        OrderedAlphabet.from_pairs(["x"], [("x", "w")])


def test_leq_word_basics():
    a = OrderedAlphabet.from_pairs(["a", "b"], [("a", "b")])
    u = Word.from_letters(a, ["a", "b"])
    v = Word.from_letters(a, ["b", "b"])
    assert leq_word(u, u)
    assert leq_word(u, v)
    assert not leq_word(v, u)
    assert not leq_word(u, Word.from_letters(a, ["b"]))


def test_leq_word_is_partial_order():
    # reflexive, antisymmetric, transitive on A^n for small alphabets
    a = make_powerset_alphabet(["a", "b"])
    for n in (0, 1, 2, 3):
        words = [Word(a, idx) for idx in product(range(len(a)), repeat=n)]
        if len(words) > 80:
            words = words[::3]
        for u in words:
            assert leq_word(u, u)
        for u in words:
            for v in words:
                if leq_word(u, v) and leq_word(v, u):
                    assert u.indices == v.indices
        for u in words:
            for v in words:
                if not leq_word(u, v):
                    continue
                for w in words:
                    if leq_word(v, w):
                        assert leq_word(u, w)


def test_word_helpers():
    a = make_powerset_alphabet(["a"])
    w = Word.from_letters(a, ["{a}", "{}", "{a}"])
    assert len(w) == 3
    assert w.letter(1) == "{}"
    assert str(w.slice(0, 1)) == "{a}{}"
    assert w.concat(w).letters_list() == w.letters_list() * 2


def test_json_round_trip():
    a = OrderedAlphabet.from_pairs(["a", "b", "c"], [("a", "b")])
    assert OrderedAlphabet.from_json(a.to_json()) == a
    p = make_powerset_alphabet(["x", "y"])
    assert OrderedAlphabet.from_json(p.to_json()) == p
    w = Word.from_letters(p, ["{x}", "{}"])
    assert Word.from_json(p, w.to_json()) == w


def test_letter_predicates():
    p = make_powerset_alphabet(["a", "b"])
    i = p.index("{a,b}")
    assert p.letter_predicates(i) == {"a", "b"}
    assert p.letter_predicates(p.index("{}")) == frozenset()
    assert p.letter_has_predicate(i, "a")
    assert p.letter_of_predicates(["b", "a"]) == i
    assert powerset_letter_name(["b", "a"]) == "{a,b}"
