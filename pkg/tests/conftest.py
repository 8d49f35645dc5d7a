import random

import pytest

from foplus.core import OrderedAlphabet, make_powerset_alphabet


@pytest.fixture(scope="session")
def p3():
    """Powerset alphabet over {a,b,c}: 8 letters ordered by inclusion."""
    return make_powerset_alphabet(["a", "b", "c"])


@pytest.fixture(scope="session")
def p2():
    return make_powerset_alphabet(["a", "b"])


@pytest.fixture(scope="session")
def ab_chain():
    """Two letters with a <= b."""
    return OrderedAlphabet.from_pairs(["a", "b"], [("a", "b")])


@pytest.fixture(scope="session")
def ab_trivial():
    return OrderedAlphabet.from_pairs(["a", "b"], [])


def random_nfa(alphabet, rng: random.Random, max_states=5):
    from foplus.automata import Nfa
    n = rng.randint(1, max_states)
    density = rng.uniform(0.1, 0.5)
    trans = set()
    for p in range(n):
        for a in range(len(alphabet)):
            for q in range(n):
                if rng.random() < density:
                    trans.add((p, a, q))
    initial = frozenset(rng.sample(range(n), rng.randint(1, n)))
    final = frozenset(q for q in range(n) if rng.random() < 0.4)
    return Nfa(alphabet, n, initial, final, frozenset(trans))
