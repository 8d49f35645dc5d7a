"""FO / FO+ formulas: shared AST, concrete syntax, evaluation, rank,
positivity, and the trivial-order positivization rewrite.

One AST serves words and graphs; modes are checked, not separate types.
`eval_word` is the reference recursive interpreter.  `eval_words_batch` is a
vectorized evaluator (numpy, one axis per free variable plus a leading word
axis) used where exhaustive sweeps over all words of a given length would make
the recursive interpreter the bottleneck; the two are cross-checked in tests.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .core import OrderedAlphabet, Word


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class LetterUp(Formula):
    """a↑(x): the letter at x is >= the named letter."""
    letter: str
    var: str


@dataclass(frozen=True)
class Pred(Formula):
    """p(x): powerset-mode predicate membership."""
    name: str
    var: str


@dataclass(frozen=True)
class Le(Formula):
    x: str
    y: str


@dataclass(frozen=True)
class Lt(Formula):
    x: str
    y: str


@dataclass(frozen=True)
class EqVar(Formula):
    x: str
    y: str


@dataclass(frozen=True)
class NeqVar(Formula):
    x: str
    y: str


@dataclass(frozen=True)
class Edge(Formula):
    x: str
    y: str


@dataclass(frozen=True)
class And(Formula):
    parts: tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple[Formula, ...]


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    sub: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    sub: Formula


def conj(*parts: Formula) -> Formula:
    flat = [q for p in parts for q in (p.parts if isinstance(p, And) else (p,))]
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*parts: Formula) -> Formula:
    flat = [q for p in parts for q in (p.parts if isinstance(p, Or) else (p,))]
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def exists(vars_: str | Sequence[str], body: Formula) -> Formula:
    names = vars_.split() if isinstance(vars_, str) else list(vars_)
    for v in reversed(names):
        body = Exists(v, body)
    return body


def forall(vars_: str | Sequence[str], body: Formula) -> Formula:
    names = vars_.split() if isinstance(vars_, str) else list(vars_)
    for v in reversed(names):
        body = Forall(v, body)
    return body


TRUE = And(())
FALSE = Or(())


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, (LetterUp, Pred)):
        return frozenset({f.var})
    if isinstance(f, (Le, Lt, EqVar, NeqVar, Edge)):
        return frozenset({f.x, f.y})
    if isinstance(f, (And, Or)):
        out: frozenset[str] = frozenset()
        for p in f.parts:
            out |= free_vars(p)
        return out
    if isinstance(f, Not):
        return free_vars(f.sub)
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.sub) - {f.var}
    raise TypeError(f)


def quantifier_rank(f: Formula) -> int:
    if isinstance(f, (And, Or)):
        return max((quantifier_rank(p) for p in f.parts), default=0)
    if isinstance(f, Not):
        return quantifier_rank(f.sub)
    if isinstance(f, (Exists, Forall)):
        return 1 + quantifier_rank(f.sub)
    return 0


def is_positive(f: Formula, mode: str = "word") -> bool:
    if isinstance(f, Not):
        return False
    if mode == "word" and isinstance(f, (NeqVar, Edge)):
        return False
    if isinstance(f, (And, Or)):
        return all(is_positive(p, mode) for p in f.parts)
    if isinstance(f, (Exists, Forall)):
        return is_positive(f.sub, mode)
    return True


def check_scope(f: Formula, bound: frozenset[str] = frozenset()) -> None:
    """Raise if any variable occurrence is unbound (and not declared free)."""
    unbound = free_vars(f) - bound
    if unbound:
        raise FormulaError(f"unbound variables: {sorted(unbound)}")


# ---------------------------------------------------------------------------
# Concrete syntax

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<bracket>\[[^\]]*\])
  | (?P<op><=|!=|<|=|\||&|!|\(|\)|\.|,)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise FormulaError(f"syntax error at position {pos}: {text[pos:pos+10]!r}")
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, -1)

    def take(self, value=None, kind=None):
        k, v, p = self.peek()
        if k is None:
            raise FormulaError("unexpected end of formula")
        if value is not None and v != value:
            raise FormulaError(f"expected {value!r} at position {p}, got {v!r}")
        if kind is not None and k != kind:
            raise FormulaError(f"expected {kind} at position {p}, got {v!r}")
        self.i += 1
        return v

    def formula(self) -> Formula:
        return self.or_expr()

    def or_expr(self) -> Formula:
        parts = [self.and_expr()]
        while self.peek()[1] == "|":
            self.take("|")
            parts.append(self.and_expr())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def and_expr(self) -> Formula:
        parts = [self.unary()]
        while self.peek()[1] == "&":
            self.take("&")
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Formula:
        k, v, p = self.peek()
        if v == "!":
            self.take("!")
            return Not(self.unary())
        if v in ("exists", "forall"):
            self.take(v)
            names = []
            while self.peek()[0] == "ident":
                names.append(self.take(kind="ident"))
            if not names:
                raise FormulaError(f"quantifier without variables at position {p}")
            self.take(".")
            body = self.formula()  # body extends right
            ctor = Exists if v == "exists" else Forall
            for name in reversed(names):
                body = ctor(name, body)
            return body
        if v == "(":
            self.take("(")
            f = self.formula()
            self.take(")")
            return f
        if k == "bracket":
            letter = self.take(kind="bracket")[1:-1]
            self.take("(")
            var = self.take(kind="ident")
            self.take(")")
            return LetterUp(letter, var)
        if k == "ident":
            name = self.take(kind="ident")
            nxt = self.peek()[1]
            if name == "true" and nxt not in ("(", "<=", "<", "=", "!="):
                return TRUE
            if name == "false" and nxt not in ("(", "<=", "<", "=", "!="):
                return FALSE
            if self.peek()[1] == "(":
                self.take("(")
                a = self.take(kind="ident")
                if self.peek()[1] == ",":
                    self.take(",")
                    b = self.take(kind="ident")
                    self.take(")")
                    if name != "E":
                        raise FormulaError(f"unknown binary predicate {name!r}")
                    return Edge(a, b)
                self.take(")")
                return Pred(name, a)
            op = self.take(kind="op")
            other = self.take(kind="ident")
            if op == "<=":
                return Le(name, other)
            if op == "<":
                return Lt(name, other)
            if op == "=":
                return EqVar(name, other)
            if op == "!=":
                return NeqVar(name, other)
            raise FormulaError(f"unexpected operator {op!r} at position {p}")
        raise FormulaError(f"unexpected token {v!r} at position {p}")


def parse(text: str, alphabet: OrderedAlphabet | None = None) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if p.i != len(p.tokens):
        _, v, pos = p.peek()
        raise FormulaError(f"trailing input at position {pos}: {v!r}")
    if alphabet is not None:
        _check_letters(f, alphabet)
    return f


def _check_letters(f: Formula, alphabet: OrderedAlphabet) -> None:
    if isinstance(f, LetterUp):
        if f.letter not in alphabet:
            raise FormulaError(f"unknown letter {f.letter!r}")
    elif isinstance(f, Pred):
        if alphabet.predicates is not None and f.name not in alphabet.predicates:
            raise FormulaError(f"unknown predicate {f.name!r}")
    elif isinstance(f, (And, Or)):
        for p in f.parts:
            _check_letters(p, alphabet)
    elif isinstance(f, Not):
        _check_letters(f.sub, alphabet)
    elif isinstance(f, (Exists, Forall)):
        _check_letters(f.sub, alphabet)


def render(f: Formula) -> str:
    def wrap(g: Formula) -> str:
        if isinstance(g, (And, Or, Not, Exists, Forall)) and not (
                isinstance(g, (And, Or)) and len(g.parts) <= 1):
            return "(" + render(g) + ")"
        return render(g)

    if isinstance(f, LetterUp):
        return f"[{f.letter}]({f.var})"
    if isinstance(f, Pred):
        return f"{f.name}({f.var})"
    if isinstance(f, Le):
        return f"{f.x}<={f.y}"
    if isinstance(f, Lt):
        return f"{f.x}<{f.y}"
    if isinstance(f, EqVar):
        return f"{f.x}={f.y}"
    if isinstance(f, NeqVar):
        return f"{f.x}!={f.y}"
    if isinstance(f, Edge):
        return f"E({f.x},{f.y})"
    if isinstance(f, And):
        if not f.parts:
            return "true"
        return " & ".join(wrap(p) for p in f.parts)
    if isinstance(f, Or):
        if not f.parts:
            return "false"
        return " | ".join(wrap(p) for p in f.parts)
    if isinstance(f, Not):
        return "!" + wrap(f.sub)
    if isinstance(f, Exists):
        return f"exists {f.var} . {render(f.sub)}"
    if isinstance(f, Forall):
        return f"forall {f.var} . {render(f.sub)}"
    raise TypeError(f)


# ---------------------------------------------------------------------------
# Evaluation on words (reference interpreter)

Valuation = Mapping[str, int]


def eval_word(f: Formula, u: Word, valuation: Valuation | None = None) -> bool:
    alpha = u.alphabet
    n = len(u)

    def ev(g: Formula, env: dict[str, int]) -> bool:
        if isinstance(g, LetterUp):
            return alpha.leq_idx(alpha.index(g.letter), u[_pos(g.var, env)])
        if isinstance(g, Pred):
            return alpha.letter_has_predicate(u[_pos(g.var, env)], g.name)
        if isinstance(g, Le):
            return _pos(g.x, env) <= _pos(g.y, env)
        if isinstance(g, Lt):
            return _pos(g.x, env) < _pos(g.y, env)
        if isinstance(g, EqVar):
            return _pos(g.x, env) == _pos(g.y, env)
        if isinstance(g, NeqVar):
            return _pos(g.x, env) != _pos(g.y, env)
        if isinstance(g, Edge):
            raise FormulaError("graph atom evaluated on a word")
        if isinstance(g, And):
            return all(ev(p, env) for p in g.parts)
        if isinstance(g, Or):
            return any(ev(p, env) for p in g.parts)
        if isinstance(g, Not):
            return not ev(g.sub, env)
        if isinstance(g, Exists):
            return any(ev(g.sub, {**env, g.var: i}) for i in range(n))
        if isinstance(g, Forall):
            return all(ev(g.sub, {**env, g.var: i}) for i in range(n))
        raise TypeError(g)

    def _pos(var: str, env: dict[str, int]) -> int:
        if var not in env:
            raise FormulaError(f"unbound variable {var!r}")
        p = env[var]
        if not 0 <= p < n:
            raise FormulaError(f"valuation for {var!r} out of range")
        return p

    return ev(f, dict(valuation or {}))


def eval_graph(f: Formula, vertex_count: int,
               has_edge: Callable[[int, int], bool],
               valuation: Valuation | None = None) -> bool:
    """Reference interpreter over a graph given by its edge predicate."""

    def ev(g: Formula, env: dict[str, int]) -> bool:
        if isinstance(g, Edge):
            return has_edge(env[g.x], env[g.y])
        if isinstance(g, EqVar):
            return env[g.x] == env[g.y]
        if isinstance(g, NeqVar):
            return env[g.x] != env[g.y]
        if isinstance(g, (LetterUp, Pred, Le, Lt)):
            raise FormulaError("word atom evaluated on a graph")
        if isinstance(g, And):
            return all(ev(p, env) for p in g.parts)
        if isinstance(g, Or):
            return any(ev(p, env) for p in g.parts)
        if isinstance(g, Not):
            return not ev(g.sub, env)
        if isinstance(g, Exists):
            return any(ev(g.sub, {**env, g.var: i}) for i in range(vertex_count))
        if isinstance(g, Forall):
            return all(ev(g.sub, {**env, g.var: i}) for i in range(vertex_count))
        raise TypeError(g)

    return ev(f, dict(valuation or {}))


# ---------------------------------------------------------------------------
# Vectorized evaluation

def eval_words_batch(f: Formula, alphabet: OrderedAlphabet,
                     letters: np.ndarray,
                     valuation: Valuation | None = None) -> np.ndarray:
    """Evaluate f on many same-length words at once.

    `letters` has shape (W, n): W words of length n as letter indices.
    Returns a bool array of shape (W,).  Internally each subformula is an
    array with a leading word axis and one axis per free variable (sorted by
    name); quantifiers reduce their variable's axis.
    """
    letters = np.asarray(letters)
    W, n = letters.shape
    env = dict(valuation or {})
    size = len(alphabet)
    leq = np.zeros((size, size), dtype=bool)
    for i, j in alphabet.order:
        leq[i, j] = True
    # The valuation is fixed for the whole call, so a subformula's value
    # depends only on its structure: shared subtrees are computed once.
    memo: dict[Formula, tuple[np.ndarray, tuple[str, ...]]] = {}

    def ev(g: Formula) -> tuple[np.ndarray, tuple[str, ...]]:
        hit = memo.get(g)
        if hit is None:
            hit = memo[g] = _ev(g)
        return hit

    def _ev(g: Formula) -> tuple[np.ndarray, tuple[str, ...]]:
        if isinstance(g, LetterUp):
            return _unary(g.var, leq[alphabet.index(g.letter)][letters])
        if isinstance(g, Pred):
            mask = np.array([alphabet.letter_has_predicate(i, g.name)
                             for i in range(size)])
            return _unary(g.var, mask[letters])
        if isinstance(g, (Le, Lt, EqVar, NeqVar)):
            idx = np.arange(n)
            if isinstance(g, Le):
                rel = idx[:, None] <= idx[None, :]
            elif isinstance(g, Lt):
                rel = idx[:, None] < idx[None, :]
            elif isinstance(g, EqVar):
                rel = idx[:, None] == idx[None, :]
            else:
                rel = idx[:, None] != idx[None, :]
            return _binary(g.x, g.y, np.broadcast_to(rel, (W, n, n)))
        if isinstance(g, Edge):
            raise FormulaError("graph atom evaluated on words")
        if isinstance(g, (And, Or)):
            if not g.parts:
                val = np.full((W,), isinstance(g, And))
                return val, ()
            arrs = [ev(p) for p in g.parts]
            fvs = tuple(sorted(set().union(*(set(v) for _, v in arrs))))
            combined = None
            for arr, have in arrs:
                a = _expand(arr, have, fvs)
                if combined is None:
                    combined = a.copy() if a.base is not None else a
                elif isinstance(g, And):
                    combined = combined & a
                else:
                    combined = combined | a
            return combined, fvs
        if isinstance(g, Not):
            arr, fvs = ev(g.sub)
            return ~arr, fvs
        if isinstance(g, (Exists, Forall)):
            arr, fvs = ev(g.sub)
            if g.var in fvs:
                axis = 1 + fvs.index(g.var)
                out = arr.any(axis=axis) if isinstance(g, Exists) else arr.all(axis=axis)
                return out, tuple(v for v in fvs if v != g.var)
            nonempty = n > 0
            if isinstance(g, Exists):
                return (arr if nonempty else np.zeros_like(arr)), fvs
            return (arr if nonempty else np.ones_like(arr)), fvs
        raise TypeError(g)

    def _unary(var: str, vals: np.ndarray):
        if var in env:
            return vals[:, env[var]], ()
        return vals, (var,)

    def _binary(x: str, y: str, rel: np.ndarray):
        if x == y:
            return _unary(x, rel[:, np.arange(n), np.arange(n)])
        if x in env and y in env:
            return rel[:, env[x], env[y]], ()
        if x in env:
            return rel[:, env[x], :], (y,)
        if y in env:
            return rel[:, :, env[y]], (x,)
        if x < y:
            return rel, (x, y)
        return np.swapaxes(rel, 1, 2), (y, x)

    def _expand(arr: np.ndarray, have: tuple[str, ...], want: tuple[str, ...]) -> np.ndarray:
        slicer: list = [slice(None)]
        for v in want:
            slicer.append(slice(None) if v in have else None)
        out = arr[tuple(slicer)]
        shape = (W,) + tuple(n for _ in want)
        return np.broadcast_to(out, shape)

    result, fvs = ev(f)
    if fvs:
        raise FormulaError(f"free variables without valuation: {fvs}")
    return np.asarray(result).reshape(W)


def eval_word_fast(f: Formula, u: Word, valuation: Valuation | None = None) -> bool:
    letters = np.array([u.indices], dtype=np.int64)
    return bool(eval_words_batch(f, u.alphabet, letters, valuation)[0])


def eval_graph_batch(f: Formula, adjacency: np.ndarray,
                     valuation: Valuation | None = None) -> bool:
    """Vectorized graph evaluation (single graph, leading axis of size 1)."""
    adjacency = np.asarray(adjacency, dtype=bool)
    V = adjacency.shape[0]
    env = dict(valuation or {})
    memo: dict[Formula, tuple[np.ndarray, tuple[str, ...]]] = {}

    def ev(g: Formula) -> tuple[np.ndarray, tuple[str, ...]]:
        hit = memo.get(g)
        if hit is None:
            hit = memo[g] = _ev(g)
        return hit

    def _ev(g: Formula) -> tuple[np.ndarray, tuple[str, ...]]:
        if isinstance(g, (Edge, EqVar, NeqVar)):
            if isinstance(g, Edge):
                rel = adjacency
            elif isinstance(g, EqVar):
                rel = np.eye(V, dtype=bool)
            else:
                rel = ~np.eye(V, dtype=bool)
            x, y = g.x, g.y
            if x == y:
                vals = rel[np.arange(V), np.arange(V)]
                if x in env:
                    return vals[env[x]], ()
                return vals, (x,)
            if x in env and y in env:
                return rel[env[x], env[y]], ()
            if x in env:
                return rel[env[x], :], (y,)
            if y in env:
                return rel[:, env[y]], (x,)
            if x < y:
                return rel, (x, y)
            return rel.T, (y, x)
        if isinstance(g, (LetterUp, Pred, Le, Lt)):
            raise FormulaError("word atom evaluated on a graph")
        if isinstance(g, (And, Or)):
            if not g.parts:
                return np.array(isinstance(g, And)), ()
            arrs = [ev(p) for p in g.parts]
            fvs = tuple(sorted(set().union(*(set(v) for _, v in arrs))))
            combined = None
            for arr, have in arrs:
                a = _expand(arr, have, fvs)
                combined = a if combined is None else (
                    combined & a if isinstance(g, And) else combined | a)
            return combined, fvs
        if isinstance(g, Not):
            arr, fvs = ev(g.sub)
            return ~arr, fvs
        if isinstance(g, (Exists, Forall)):
            arr, fvs = ev(g.sub)
            if g.var in fvs:
                axis = fvs.index(g.var)
                out = arr.any(axis=axis) if isinstance(g, Exists) else arr.all(axis=axis)
                return out, tuple(v for v in fvs if v != g.var)
            if V == 0:
                return np.array(not isinstance(g, Exists)), fvs
            return arr, fvs
        raise TypeError(g)

    def _expand(arr: np.ndarray, have: tuple[str, ...], want: tuple[str, ...]) -> np.ndarray:
        slicer = tuple(slice(None) if v in have else None for v in want)
        out = np.asarray(arr)[slicer if slicer else ()]
        return np.broadcast_to(out, tuple(V for _ in want))

    result, fvs = ev(f)
    if fvs:
        raise FormulaError(f"free variables without valuation: {fvs}")
    return bool(np.asarray(result))


# ---------------------------------------------------------------------------
# Positivization (trivial orders) and random formulas

def positivize_trivial_order(f: Formula, alphabet: OrderedAlphabet) -> Formula:
    """Push negations to the leaves and eliminate them; only meaningful when
    no two distinct letters are comparable (then a↑(x) means exactly a(x))."""
    if not alphabet.is_trivial():
        raise FormulaError("alphabet order is not trivial")

    def pos(g: Formula) -> Formula:
        if isinstance(g, And):
            return And(tuple(pos(p) for p in g.parts))
        if isinstance(g, Or):
            return Or(tuple(pos(p) for p in g.parts))
        if isinstance(g, Exists):
            return Exists(g.var, pos(g.sub))
        if isinstance(g, Forall):
            return Forall(g.var, pos(g.sub))
        if isinstance(g, Not):
            return neg(g.sub)
        return g

    def neg(g: Formula) -> Formula:
        if isinstance(g, Not):
            return pos(g.sub)
        if isinstance(g, And):
            return Or(tuple(neg(p) for p in g.parts))
        if isinstance(g, Or):
            return And(tuple(neg(p) for p in g.parts))
        if isinstance(g, Exists):
            return Forall(g.var, neg(g.sub))
        if isinstance(g, Forall):
            return Exists(g.var, neg(g.sub))
        if isinstance(g, LetterUp):
            others = [b for b in alphabet.letters if b != g.letter]
            return Or(tuple(LetterUp(b, g.var) for b in others))
        if isinstance(g, Le):
            return Lt(g.y, g.x)
        if isinstance(g, Lt):
            return Le(g.y, g.x)
        if isinstance(g, EqVar):
            return Or((Lt(g.x, g.y), Lt(g.y, g.x)))
        if isinstance(g, NeqVar):
            return EqVar(g.x, g.y)
        if isinstance(g, Pred):
            raise FormulaError("cannot positivize predicate atoms without "
                               "the letter table; use LetterUp atoms")
        raise TypeError(g)

    return pos(f)


def random_formula(alphabet: OrderedAlphabet, rank: int, seed: int,
                   mode: str = "word", free: Sequence[str] = ()) -> Formula:
    """Random positive formula of quantifier rank <= rank; deterministic."""
    rng = random.Random(seed)
    var_pool = ["x", "y", "z", "w", "t", "s"]

    def atom(scope: list[str]) -> Formula:
        if not scope:
            return TRUE if rng.random() < 0.5 else FALSE
        kinds = ["letter", "le", "lt", "eq"]
        if alphabet.predicates:
            kinds.append("pred")
        kind = rng.choice(kinds)
        if kind == "letter":
            return LetterUp(rng.choice(alphabet.letters), rng.choice(scope))
        if kind == "pred":
            return Pred(rng.choice(alphabet.predicates), rng.choice(scope))
        x, y = rng.choice(scope), rng.choice(scope)
        return {"le": Le, "lt": Lt, "eq": EqVar}[kind](x, y)

    def build(budget: int, bool_depth: int, scope: list[str]) -> Formula:
        choices = ["atom"]
        if budget > 0:
            choices += ["exists", "forall", "exists"]
        if bool_depth > 0:
            choices += ["and", "or"]
        kind = rng.choice(choices)
        if kind == "atom":
            return atom(scope)
        if kind in ("exists", "forall"):
            fresh = next((v for v in var_pool if v not in scope), f"v{len(scope)}")
            body = build(budget - 1, bool_depth, scope + [fresh])
            return Exists(fresh, body) if kind == "exists" else Forall(fresh, body)
        k = rng.randint(2, 3)
        parts = tuple(build(budget, bool_depth - 1, scope) for _ in range(k))
        return And(parts) if kind == "and" else Or(parts)

    return build(rank, 3, list(free))
