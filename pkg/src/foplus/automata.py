"""NFA/DFA engine, regular-language algebra, monotone closure, and monoids.

Automata are plain immutable dataclasses over an OrderedAlphabet.  DFAs are
always complete (explicit sink) so complementation is a final-set flip.
Language inclusion is a product-with-complement emptiness check; equality is
two inclusions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import AlphabetError, OrderedAlphabet, Word


# ---------------------------------------------------------------------------
# Regexes over letter-sets


@dataclass(frozen=True)
class Regex:
    pass


@dataclass(frozen=True)
class Lit(Regex):
    """A set of letters, matched in one step."""
    letters: frozenset[str]


@dataclass(frozen=True)
class Eps(Regex):
    pass


@dataclass(frozen=True)
class Empty(Regex):
    pass


@dataclass(frozen=True)
class Concat(Regex):
    parts: tuple[Regex, ...]


@dataclass(frozen=True)
class Union(Regex):
    parts: tuple[Regex, ...]


@dataclass(frozen=True)
class Star(Regex):
    body: Regex


def lit(*letters: str) -> Regex:
    return Lit(frozenset(letters))


def up(alphabet: OrderedAlphabet, letter: str) -> Regex:
    """Literal matching the upset of `letter`."""
    return Lit(alphabet.upset(letter))


def cat(*parts: Regex) -> Regex:
    return Concat(tuple(parts))


def alt(*parts: Regex) -> Regex:
    return Union(tuple(parts))


def parse_regex(text: str, alphabet: OrderedAlphabet) -> Regex:
    """Parse the prefix s-expression regex syntax.

    Forms: (lit "x"), (up "x"), (concat e...), (union e...), (star e),
    (eps), (empty).  Letter names are double-quoted.
    """
    tokens = _tokenize_sexpr(text)
    expr, rest = _parse_sexpr(tokens, 0)
    if rest != len(tokens):
        raise ValueError(f"trailing tokens at {rest}")
    return _sexpr_to_regex(expr, alphabet)


def _tokenize_sexpr(text: str) -> list[str]:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append(c)
            i += 1
        elif c == '"':
            j = text.index('"', i + 1)
            tokens.append(text[i:j + 1])
            i = j + 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in '()"':
                j += 1
            tokens.append(text[i:j])
            i = j
    return tokens


def _parse_sexpr(tokens: list[str], i: int):
    if tokens[i] == "(":
        items = []
        i += 1
        while tokens[i] != ")":
            item, i = _parse_sexpr(tokens, i)
            items.append(item)
        return items, i + 1
    return tokens[i], i + 1


def _sexpr_to_regex(expr, alphabet: OrderedAlphabet) -> Regex:
    if not isinstance(expr, list) or not expr:
        raise ValueError(f"bad regex form: {expr!r}")
    head = expr[0]
    if head == "lit":
        name = _unquote(expr[1])
        alphabet.index(name)
        return lit(name)
    if head == "up":
        return up(alphabet, _unquote(expr[1]))
    if head == "concat":
        return Concat(tuple(_sexpr_to_regex(e, alphabet) for e in expr[1:]))
    if head == "union":
        return Union(tuple(_sexpr_to_regex(e, alphabet) for e in expr[1:]))
    if head == "star":
        return Star(_sexpr_to_regex(expr[1], alphabet))
    if head == "eps":
        return Eps()
    if head == "empty":
        return Empty()
    raise ValueError(f"unknown regex operator {head!r}")


def _unquote(tok: str) -> str:
    return tok[1:-1] if tok.startswith('"') else tok


# ---------------------------------------------------------------------------
# NFAs


@dataclass(frozen=True)
class Nfa:
    alphabet: OrderedAlphabet
    state_count: int
    initial: frozenset[int]
    final: frozenset[int]
    transitions: frozenset[tuple[int, int, int]]  # (state, letter index, state)

    def __post_init__(self):
        for p, a, q in self.transitions:
            if not (0 <= p < self.state_count and 0 <= q < self.state_count):
                raise ValueError("transition state out of range")
            if not 0 <= a < len(self.alphabet):
                raise ValueError("transition letter out of range")

    def delta(self) -> dict[tuple[int, int], set[int]]:
        d: dict[tuple[int, int], set[int]] = {}
        for p, a, q in self.transitions:
            d.setdefault((p, a), set()).add(q)
        return d

    def accepts(self, w: Word | Sequence[int]) -> bool:
        indices = w.indices if isinstance(w, Word) else tuple(w)
        current = set(self.initial)
        d = self.delta()
        for a in indices:
            current = set().union(*(d.get((p, a), set()) for p in current)) if current else set()
            if not current:
                return False
        return bool(current & self.final)

    def to_json(self) -> dict:
        return {
            "alphabet": self.alphabet.to_json(),
            "states": self.state_count,
            "initial": sorted(self.initial),
            "final": sorted(self.final),
            "transitions": sorted([p, self.alphabet.letters[a], q]
                                  for p, a, q in self.transitions),
        }

    @staticmethod
    def from_json(data: dict, alphabet: OrderedAlphabet | None = None) -> "Nfa":
        alpha = alphabet or OrderedAlphabet.from_json(data["alphabet"])
        trans = frozenset((p, alpha.index(a), q) for p, a, q in data["transitions"])
        return Nfa(alpha, data["states"], frozenset(data["initial"]),
                   frozenset(data["final"]), trans)


@dataclass(frozen=True)
class Dfa(Nfa):
    """Complete deterministic automaton: one initial state, exactly one
    transition per (state, letter)."""

    def __post_init__(self):
        super().__post_init__()
        if len(self.initial) != 1:
            raise ValueError("DFA needs exactly one initial state")
        seen = {}
        for p, a, _ in self.transitions:
            if (p, a) in seen:
                raise ValueError(f"nondeterministic at state {p}")
            seen[p, a] = True
        if len(seen) != self.state_count * len(self.alphabet):
            raise ValueError("DFA is not complete")

    @property
    def start(self) -> int:
        return next(iter(self.initial))

    def table(self) -> list[list[int]]:
        """Transition table t[state][letter]."""
        t = [[-1] * len(self.alphabet) for _ in range(self.state_count)]
        for p, a, q in self.transitions:
            t[p][a] = q
        return t


def compile_regex(expr: Regex, alphabet: OrderedAlphabet) -> Nfa:
    """Glushkov position automaton: one state per literal occurrence plus an
    initial state; epsilon-free by construction."""
    positions: list[frozenset[int]] = []  # letter-index sets, state = pos + 1

    def analyze(e: Regex) -> tuple[bool, frozenset[int], frozenset[int],
                                   set[tuple[int, int]]]:
        # returns (nullable, first, last, follow)
        if isinstance(e, Empty):
            return False, frozenset(), frozenset(), set()
        if isinstance(e, Eps):
            return True, frozenset(), frozenset(), set()
        if isinstance(e, Lit):
            p = len(positions)
            positions.append(frozenset(alphabet.index(a) for a in e.letters))
            return False, frozenset({p}), frozenset({p}), set()
        if isinstance(e, Concat):
            nullable, first, last, follow = True, frozenset(), frozenset(), set()
            for part in e.parts:
                n2, f2, l2, fo2 = analyze(part)
                follow |= fo2 | {(x, y) for x in last for y in f2}
                first = first | f2 if nullable else first
                last = last | l2 if n2 else l2
                nullable = nullable and n2
            return nullable, first, last, follow
        if isinstance(e, Union):
            nullable, first, last, follow = False, frozenset(), frozenset(), set()
            for part in e.parts:
                n2, f2, l2, fo2 = analyze(part)
                nullable = nullable or n2
                first |= f2
                last |= l2
                follow |= fo2
            return nullable, first, last, follow
        if isinstance(e, Star):
            _, f2, l2, fo2 = analyze(e.body)
            return True, f2, l2, fo2 | {(x, y) for x in l2 for y in f2}
        raise TypeError(f"unknown regex node {e!r}")

    nullable, first, last, follow = analyze(expr)
    trans = set()
    for p in first:
        for a in positions[p]:
            trans.add((0, a, p + 1))
    for x, y in follow:
        for a in positions[y]:
            trans.add((x + 1, a, y + 1))
    final = frozenset(p + 1 for p in last) | (frozenset({0}) if nullable else frozenset())
    return Nfa(alphabet, len(positions) + 1, frozenset({0}), final,
               frozenset(trans))


def nfa_empty(alphabet: OrderedAlphabet) -> Nfa:
    return Nfa(alphabet, 1, frozenset({0}), frozenset(), frozenset())


def nfa_all(alphabet: OrderedAlphabet) -> Nfa:
    trans = frozenset((0, a, 0) for a in range(len(alphabet)))
    return Nfa(alphabet, 1, frozenset({0}), frozenset({0}), trans)


def determinize(n: Nfa) -> Dfa:
    """Subset construction with explicit sink; complete by construction."""
    d = n.delta()
    letters = range(len(n.alphabet))
    start = frozenset(n.initial)
    states = {start: 0}
    order = [start]
    trans = {}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for a in letters:
            nxt = frozenset().union(*(d.get((p, a), set()) for p in cur)) if cur else frozenset()
            if nxt not in states:
                states[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            trans[states[cur], a] = states[nxt]
    final = frozenset(i for s, i in states.items() if s & n.final)
    return Dfa(n.alphabet, len(order), frozenset({0}), final,
               frozenset((p, a, q) for (p, a), q in trans.items()))


def minimize(d: Dfa) -> Dfa:
    """Moore partition refinement followed by BFS canonical renumbering."""
    t = d.table()
    n = d.state_count
    letters = range(len(d.alphabet))
    block = [1 if s in d.final else 0 for s in range(n)]
    while True:
        sig = {}
        new_block = [0] * n
        for s in range(n):
            key = (block[s], tuple(block[t[s][a]] for a in letters))
            if key not in sig:
                sig[key] = len(sig)
            new_block[s] = sig[key]
        if new_block == block:
            break
        block = new_block
    # Build quotient then renumber by BFS from initial over alphabet order.
    q_start = block[d.start]
    q_trans = {}
    q_final = set()
    for s in range(n):
        b = block[s]
        for a in letters:
            q_trans[b, a] = block[t[s][a]]
        if s in d.final:
            q_final.add(b)
    remap = {q_start: 0}
    order = [q_start]
    queue = deque([q_start])
    while queue:
        b = queue.popleft()
        for a in letters:
            nb = q_trans[b, a]
            if nb not in remap:
                remap[nb] = len(order)
                order.append(nb)
                queue.append(nb)
    # Unreachable blocks cannot exist (determinize reaches all states).
    trans = frozenset((remap[b], a, remap[q_trans[b, a]])
                      for b in order for a in letters)
    final = frozenset(remap[b] for b in q_final if b in remap)
    return Dfa(d.alphabet, len(order), frozenset({0}), final, trans)


def canonical_dfa(n: Nfa) -> Dfa:
    """Minimal complete DFA with canonical (BFS) state numbering."""
    return minimize(determinize(n))


def complement(d: Dfa) -> Dfa:
    return Dfa(d.alphabet, d.state_count, d.initial,
               frozenset(range(d.state_count)) - d.final, d.transitions)


def intersect(a: Nfa, b: Nfa) -> Nfa:
    if a.alphabet != b.alphabet:
        raise AlphabetError("alphabet mismatch")
    da, db = a.delta(), b.delta()
    letters = range(len(a.alphabet))
    start_pairs = {(p, q) for p in a.initial for q in b.initial}
    states = {s: i for i, s in enumerate(sorted(start_pairs))}
    queue = deque(sorted(start_pairs))
    trans = set()
    while queue:
        p, q = queue.popleft()
        for x in letters:
            for p2 in da.get((p, x), ()):
                for q2 in db.get((q, x), ()):
                    if (p2, q2) not in states:
                        states[p2, q2] = len(states)
                        queue.append((p2, q2))
                    trans.add((states[p, q], x, states[p2, q2]))
    final = frozenset(i for (p, q), i in states.items()
                      if p in a.final and q in b.final)
    return Nfa(a.alphabet, max(len(states), 1),
               frozenset(states[s] for s in start_pairs),
               final, frozenset(trans))


def is_empty(n: Nfa) -> bool:
    d = n.delta()
    letters = range(len(n.alphabet))
    seen = set(n.initial)
    queue = deque(n.initial)
    while queue:
        p = queue.popleft()
        if p in n.final:
            return False
        for a in letters:
            for q in d.get((p, a), ()):
                if q not in seen:
                    seen.add(q)
                    queue.append(q)
    return True


def includes(a: Nfa, b: Nfa) -> bool:
    """True iff L(b) is a subset of L(a)."""
    if a.alphabet != b.alphabet:
        raise AlphabetError("alphabet mismatch")
    comp = complement(a if isinstance(a, Dfa) else determinize(a))
    return is_empty(intersect(comp, b))


def language_equal(a: Nfa, b: Nfa) -> bool:
    return includes(a, b) and includes(b, a)


def monotone_closure(b: Nfa) -> Nfa:
    """Replace each transition letter by its whole upset; recognizes L(b)↑."""
    upsets = {a: b.alphabet.upset_idx(a) for a in range(len(b.alphabet))}
    trans = frozenset((p, c, q) for p, a, q in b.transitions for c in upsets[a])
    return Nfa(b.alphabet, b.state_count, b.initial, b.final, trans)


def is_monotone(b: Nfa) -> bool:
    """L(b) is monotone iff its closure adds nothing."""
    return includes(b, monotone_closure(b))


def universality_gadget(b: Nfa) -> Nfa:
    """Build C with L(C) = aA* + bL(b) over {a <= b}; C is monotone iff b is
    universal.  Requires a two-letter alphabet on b."""
    if len(b.alphabet) != 2:
        raise AlphabetError("gadget needs a two-letter alphabet")
    ordered = OrderedAlphabet.from_pairs(list(b.alphabet.letters),
                                         [(b.alphabet.letters[0], b.alphabet.letters[1])])
    a_idx, b_idx = 0, 1
    # states: 0 = new initial, 1 = aA* sink-accept, then shifted copy of b
    shift = 2
    trans = set()
    trans.add((0, a_idx, 1))
    for x in (a_idx, b_idx):
        trans.add((1, x, 1))
    for p, x, q in b.transitions:
        trans.add((p + shift, x, q + shift))
    for q0 in b.initial:
        trans.add((0, b_idx, q0 + shift))
    final = {1} | {f + shift for f in b.final}
    return Nfa(ordered, b.state_count + shift, frozenset({0}),
               frozenset(final), frozenset(trans))


def is_universal(n: Nfa) -> bool:
    return includes(n, nfa_all(n.alphabet))


# ---------------------------------------------------------------------------
# Monoids and Green's relations


@dataclass(frozen=True)
class Monoid:
    """Transition monoid of a DFA: elements are state transformations."""

    elements: tuple[tuple[int, ...], ...]
    table: tuple[tuple[int, ...], ...]      # table[i][j] = index of elements[i] . elements[j]
    letter_image: tuple[int, ...]           # letter index -> element index
    identity: int
    accepting: frozenset[int]
    names: tuple[str, ...] = ()             # shortest generator word per element

    def __len__(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def eval_word(self, letter_indices: Iterable[int]) -> int:
        m = self.identity
        for a in letter_indices:
            m = self.table[m][self.letter_image[a]]
        return m


def transition_monoid(d: Dfa, letter_names: Sequence[str] | None = None) -> Monoid:
    t = d.table()
    n_letters = len(d.alphabet)
    identity = tuple(range(d.state_count))
    elements = {identity: 0}
    order = [identity]
    names = [""]
    gens = []
    for a in range(n_letters):
        g = tuple(t[s][a] for s in range(d.state_count))
        gens.append(g)
    letter_image = [0] * n_letters
    queue = deque([0])
    # BFS over right-multiplication by generators; dedup by transformation map.
    def add(tr, name):
        if tr not in elements:
            elements[tr] = len(order)
            order.append(tr)
            names.append(name)
            queue.append(elements[tr])
        return elements[tr]

    name_of = letter_names or [d.alphabet.letters[a] for a in range(n_letters)]
    for a, g in enumerate(gens):
        letter_image[a] = add(g, name_of[a])
    while queue:
        i = queue.popleft()
        for a, g in enumerate(gens):
            prod = tuple(g[x] for x in order[i])
            add(prod, names[i] + name_of[a])
    size = len(order)
    index = elements
    table = []
    for i in range(size):
        row = []
        for j in range(size):
            prod = tuple(order[j][x] for x in order[i])
            row.append(index[prod])
        table.append(tuple(row))
    accepting = frozenset(i for i, tr in enumerate(order) if tr[d.start] in d.final)
    return Monoid(tuple(order), tuple(table), tuple(letter_image), 0,
                  accepting, tuple(names))


def syntactic_monoid(n: Nfa) -> Monoid:
    return transition_monoid(canonical_dfa(n))


def is_aperiodic(m: Monoid) -> bool:
    """Every element x has x^k = x^{k+1} for some k <= |m|."""
    for x in range(len(m)):
        power = x
        for _ in range(len(m) + 1):
            nxt = m.mul(power, x)
            if nxt == power:
                break
            power = nxt
        else:
            return False
    return True


def is_counter_free(n: Nfa) -> bool:
    return is_aperiodic(syntactic_monoid(n))


@dataclass(frozen=True)
class GreenReport:
    r_classes: tuple[frozenset[int], ...]
    l_classes: tuple[frozenset[int], ...]
    j_classes: tuple[frozenset[int], ...]
    h_classes: tuple[frozenset[int], ...]
    eggbox: str


def green_classes(m: Monoid) -> GreenReport:
    size = len(m)
    # Right/left/two-sided ideals (M^1 includes the identity, which is in m).
    right = [frozenset(m.mul(x, y) for y in range(size)) | {x} for x in range(size)]
    left = [frozenset(m.mul(y, x) for y in range(size)) | {x} for x in range(size)]
    two = [frozenset(m.mul(m.mul(y, x), z)
                     for y in range(size) for z in range(size)) | {x}
           for x in range(size)]

    def classes_of(ideals):
        buckets: dict[frozenset[int], set[int]] = {}
        for x in range(size):
            buckets.setdefault(ideals[x], set()).add(x)
        return tuple(frozenset(s) for s in buckets.values())

    r_cls = classes_of(right)
    l_cls = classes_of(left)
    j_cls = classes_of(two)
    h_map: dict[tuple[int, int], set[int]] = {}
    r_of = {x: i for i, c in enumerate(r_cls) for x in c}
    l_of = {x: i for i, c in enumerate(l_cls) for x in c}
    for x in range(size):
        h_map.setdefault((r_of[x], l_of[x]), set()).add(x)
    h_cls = tuple(frozenset(s) for s in h_map.values())
    eggbox = _render_eggbox(m, r_cls, l_cls, j_cls)
    return GreenReport(r_cls, l_cls, j_cls, h_cls, eggbox)


def _render_eggbox(m: Monoid, r_cls, l_cls, j_cls) -> str:
    def name(x):
        return m.names[x] if m.names and m.names[x] else ("1" if x == m.identity else str(x))

    lines = []
    for jc in sorted(j_cls, key=lambda c: min(c)):
        rows = [rc & jc for rc in r_cls if rc & jc]
        cols = [lc & jc for lc in l_cls if lc & jc]
        lines.append("J-class {" + ", ".join(name(x) for x in sorted(jc)) + "}")
        for row in rows:
            cells = []
            for col in cols:
                cell = row & col
                cells.append(",".join(name(x) for x in sorted(cell)) or ".")
            lines.append("  | " + " | ".join(cells) + " |")
    return "\n".join(lines)
