import random

import pytest

from foplus import intgame as ig
from foplus.games import GameError


def arena1() -> ig.IntArena:
    return ig.IntArena(1, (1, 0), (ig.amb(1),))


# --- arena validation --------------------------------------------------------

def test_arena_rejects_bad_endpoints():
    with pytest.raises(GameError):
        ig.IntArena(1, (0, 0), (ig.amb(1),))  # V[0] must be (U[0], U[0]-1)
    with pytest.raises(GameError):
        ig.IntArena(1, (1, 1), (ig.amb(1),))  # V[-1] must be (U[-1]+1, U[-1])


def test_arena_rejects_bad_letters():
    with pytest.raises(GameError):
        ig.IntArena(1, (2, 0), (ig.amb(1),))
    with pytest.raises(GameError):
        ig.IntArena(1, (1, 0), ((1, 1),))
    with pytest.raises(GameError):
        ig.IntArena(1, (1,), ())


def test_mirrored_orientation():
    a = ig.IntArena(1, (0, 1), (ig.amb(1),), orientation=ig.MIRRORED)
    std = a.mirrored_standard()
    assert std.orientation == ig.STANDARD
    assert std.u == (1, 0)


def test_arena_json_round_trip():
    a = ig.IntArena(2, (2, 0, 1), (ig.amb(2), ig.amb(1), ig.amb(2)))
    assert ig.IntArena.from_json(a.to_json()) == a


# --- legality ----------------------------------------------------------------

def test_empty_pairing_legal():
    assert ig.is_legal_int_position(ig.IntPosition(arena1(), ()))


def test_label_clause():
    a = arena1()
    # both 1 and 0 sit below (1, 0)
    assert ig.is_legal_int_position(ig.IntPosition(a, ((0, 0),)))
    assert ig.is_legal_int_position(ig.IntPosition(a, ((1, 0),)))
    b = ig.IntArena(2, (2, 0), (ig.amb(2), ig.amb(1)))
    # letter 0 is not under (2, 1)
    assert not ig.is_legal_int_position(ig.IntPosition(b, ((1, 0),)))


def test_mix_is_illegal():
    # adjacent V tokens (2,1)(2,1) matched to U letters 2 then 1
    a = ig.IntArena(2, (2, 1, 0), (ig.amb(2), ig.amb(2), ig.amb(1)))
    mix = ig.IntPosition(a, ((0, 0), (1, 1)))
    assert not ig.is_legal_int_position(mix)
    # the same shape without the mix is fine: labels 2, 2 under (2,1)(2,1)
    b = ig.IntArena(2, (2, 2, 0), (ig.amb(2), ig.amb(2), ig.amb(1)))
    assert ig.is_legal_int_position(ig.IntPosition(b, ((0, 0), (1, 1))))


def test_neighbouring_consecutiveness():
    a = ig.IntArena(1, (1, 1, 0), (ig.amb(1), ig.amb(1), ig.amb(1)))
    # consecutive in U but not in V
    assert not ig.is_legal_int_position(ig.IntPosition(a, ((0, 0), (1, 2))))
    # consecutive in V but not in U
    assert not ig.is_legal_int_position(ig.IntPosition(a, ((0, 0), (2, 1))))
    # non-consecutive in both: allowed
    assert ig.is_legal_int_position(ig.IntPosition(a, ((0, 0), (2, 2))))


def test_out_of_range_raises():
    with pytest.raises(GameError):
        ig.is_legal_int_position(ig.IntPosition(arena1(), ((5, 0),)))


# --- exact solver ------------------------------------------------------------

def test_zero_rounds_duplicator():
    assert ig.solve_int_game(arena1(), 0).winner == "duplicator"


def test_base_arena_spoiler_in_2():
    res = ig.solve_int_game(arena1(), 2)
    assert res.winner == "spoiler"
    assert ig.solve_int_game(arena1(), 1).winner == "duplicator"


def test_rounds_budget_enforced():
    with pytest.raises(GameError):
        ig.solve_int_game(arena1(), 5)


def test_variation_is_legal_playthrough():
    a = ig.IntArena(1, (1, 1, 0), (ig.amb(1), ig.amb(1)))
    res = ig.solve_int_game(a, 4)
    assert res.winner == "spoiler"
    pairs = ()
    for move, reply in res.variation[:-1]:
        pairs += (ig._pair_of(move, reply),)
        assert ig.is_legal_int_position(ig.IntPosition(a, pairs))
    last_move, last_reply = res.variation[-1]
    assert last_reply is None
    assert ig.legal_replies(a, pairs, last_move) == []


def test_all_n1_arenas_spoiler_in_2():
    for a in ig.generate_arenas(1, 5):
        assert ig.solve_int_game(a, 2).winner == "spoiler"


# --- inductive strategy ------------------------------------------------------

def test_strategy_base_case():
    got = ig.verify_spoiler_strategy(arena1())
    assert got == 2


def test_strategy_all_n1():
    for a in ig.generate_arenas(1, 5):
        got = ig.verify_spoiler_strategy(a)
        assert got is not None and got <= 2, (a.u, a.v)


def test_strategy_n2_slice():
    for a in ig.generate_arenas(2, 4):
        got = ig.verify_spoiler_strategy(a)
        assert got is not None and got <= ig.round_budget_int(2), (a.u, a.v)


def test_solver_strategy_agree_n2_slice():
    for a in ig.generate_arenas(2, 4):
        res = ig.solve_int_game(a, ig.round_budget_int(2))
        assert res.winner == "spoiler"
        assert ig.verify_spoiler_strategy(a) is not None


def test_strategy_mirrored():
    for a in ig.generate_arenas(1, 5, orientation=ig.MIRRORED):
        got = ig.verify_spoiler_strategy(a)
        assert got is not None and got <= 2, (a.u, a.v)
    for a in ig.generate_arenas(2, 4, orientation=ig.MIRRORED):
        got = ig.verify_spoiler_strategy(a)
        assert got is not None and got <= ig.round_budget_int(2), (a.u, a.v)


def test_strategy_sampled_n3():
    rng = random.Random(0)
    for _ in range(15):
        ul = rng.randint(2, 8)
        u = ((rng.randint(1, 3),)
             + tuple(rng.randint(0, 3) for _ in range(ul - 2))
             + (rng.randint(0, 2),))
        vl = rng.randint(2, 8)
        v = ((ig.amb(u[0]),)
             + tuple(ig.amb(rng.randint(1, 3)) for _ in range(vl - 2))
             + (ig.amb(u[-1] + 1),))
        a = ig.IntArena(3, u, v)
        got = ig.verify_spoiler_strategy(a)
        assert got is not None and got <= ig.round_budget_int(3), (u, v)


def test_generate_arenas_counts():
    # |U| = 2 forces U = (1, 0); V is (1,0) or (1,0)(1,0)
    assert sum(1 for _ in ig.generate_arenas(1, 2)) == 2
    # every generated arena validates
    for a in ig.generate_arenas(2, 3):
        assert isinstance(a, ig.IntArena)
