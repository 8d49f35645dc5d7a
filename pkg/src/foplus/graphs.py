"""Graph encodings of words over P({a,b,c}) and EF+ games on graphs.

Directed case: three pointed sources x_a, x_b, x_c carry the letter
predicates, the remaining "square" vertices carry word positions, and the
edge relation on squares is the strict total order.  A graph is a word
encoding (member of G_w) iff it satisfies the rules (sources), (in-edge),
(cycle), (order), (direction); equivalently, iff it models psi_minus but not
psi_plus for the designated sources.

Undirected case: 12 sources in disjoint 3/4/5-cycles replace the pointed
triple, squares are the non-sources adjacent to a source, and the position
order is carried by directed meta-edges built from diamond vertices.  The
meta-edge gadget here is a path x - d1 - d2 - d3 - y of fresh diamonds plus a
pendant d4 on d1; the pendant marks the tail, and the length-4 path keeps
every cycle through two squares at length >= 6 even when they share a
source.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from . import logic as lg
from .core import Word, make_powerset_alphabet
from .games import GameError

PREDICATES = ("a", "b", "c")


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class DiGraph:
    vertex_count: int
    edges: frozenset[tuple[int, int]]
    sources: tuple[int, int, int]

    def __post_init__(self):
        for i, j in self.edges:
            if not (0 <= i < self.vertex_count and 0 <= j < self.vertex_count):
                raise GraphError(f"edge ({i},{j}) out of range")
        if len(set(self.sources)) != 3:
            raise GraphError("sources must be three distinct vertices")
        for s in self.sources:
            if not 0 <= s < self.vertex_count:
                raise GraphError(f"source {s} out of range")

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self.edges

    def adjacency(self) -> np.ndarray:
        m = np.zeros((self.vertex_count, self.vertex_count), dtype=bool)
        for i, j in self.edges:
            m[i, j] = True
        return m

    def add_edge(self, i: int, j: int) -> "DiGraph":
        return DiGraph(self.vertex_count, self.edges | {(i, j)}, self.sources)

    def to_json(self) -> dict:
        return {"v": 1, "directed": True, "vertices": self.vertex_count,
                "edges": sorted([i, j] for i, j in self.edges),
                "sources": list(self.sources)}

    @staticmethod
    def from_json(data: dict) -> "DiGraph":
        return DiGraph(data["vertices"],
                       frozenset((i, j) for i, j in data["edges"]),
                       tuple(data["sources"]))


@dataclass(frozen=True)
class UGraph:
    """Undirected graph with 12 designated sources: a-cycle (3), b-cycle (4),
    c-cycle (5), in that order."""

    vertex_count: int
    edges: frozenset[tuple[int, int]]  # normalized (min, max)
    sources: tuple[int, ...]

    def __post_init__(self):
        for i, j in self.edges:
            if not (0 <= i < self.vertex_count and 0 <= j < self.vertex_count):
                raise GraphError(f"edge ({i},{j}) out of range")
            if i >= j:
                raise GraphError(f"edge ({i},{j}) not normalized")
        if len(self.sources) != 12 or len(set(self.sources)) != 12:
            raise GraphError("need 12 distinct sources")
        for s in self.sources:
            if not 0 <= s < self.vertex_count:
                raise GraphError(f"source {s} out of range")

    def source_group(self, pred: str) -> tuple[int, ...]:
        lo, hi = {"a": (0, 3), "b": (3, 7), "c": (7, 12)}[pred]
        return self.sources[lo:hi]

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges if i != j else False

    def neighbors(self, v: int) -> set[int]:
        out = set()
        for i, j in self.edges:
            if i == v:
                out.add(j)
            elif j == v:
                out.add(i)
        return out

    def adjacency(self) -> np.ndarray:
        m = np.zeros((self.vertex_count, self.vertex_count), dtype=bool)
        for i, j in self.edges:
            m[i, j] = m[j, i] = True
        return m

    def add_edge(self, i: int, j: int) -> "UGraph":
        if i == j:
            raise GraphError("no self-loops on undirected graphs")
        return UGraph(self.vertex_count,
                      self.edges | {(min(i, j), max(i, j))}, self.sources)

    def to_json(self) -> dict:
        return {"v": 1, "directed": False, "vertices": self.vertex_count,
                "edges": sorted([i, j] for i, j in self.edges),
                "sources": list(self.sources)}

    @staticmethod
    def from_json(data: dict) -> "UGraph":
        return UGraph(data["vertices"],
                      frozenset((min(i, j), max(i, j))
                                for i, j in data["edges"]),
                      tuple(data["sources"]))


def load_graph(data: dict):
    return DiGraph.from_json(data) if data["directed"] else UGraph.from_json(data)


# ---------------------------------------------------------------------------
# Directed encoding


def encode_digraph(u: Word) -> DiGraph:
    """Sources 0,1,2; squares 3.. in word order with the full strict total
    order as edges; predicate alpha at i becomes an edge x_alpha -> square_i."""
    alpha = u.alphabet
    if len(u) and not alpha.letter_predicates(u[0]):
        raise GraphError("first letter must be nonempty (in-edge rule)")
    edges = {(0, 1), (1, 2), (2, 1)}
    for i in range(len(u)):
        for j in range(i + 1, len(u)):
            edges.add((3 + i, 3 + j))
        for p in alpha.letter_predicates(u[i]):
            edges.add((PREDICATES.index(p), 3 + i))
    return DiGraph(3 + len(u), frozenset(edges), (0, 1, 2))


def check_digraph(g: DiGraph) -> list[str]:
    """Violated rule names, empty iff g is in G_w."""
    out = []
    xa, xb, xc = g.sources
    src = set(g.sources)
    induced = {(i, j) for i, j in g.edges if i in src and j in src}
    if induced != {(xa, xb), (xb, xc), (xc, xb)}:
        out.append("sources")
    has_in = {j for _, j in g.edges}
    if xa in has_in or any(v not in has_in for v in range(g.vertex_count)
                           if v != xa):
        out.append("in-edge")
    cyc = any((v, v) in g.edges for v in range(g.vertex_count))
    for i, j in g.edges:
        if i < j and (j, i) in g.edges and {i, j} != {xb, xc}:
            cyc = True
    for i, j in g.edges:
        for k in range(g.vertex_count):
            if (j, k) in g.edges and (k, i) in g.edges:
                cyc = True
    if cyc:
        out.append("cycle")
    squares = [v for v in range(g.vertex_count) if v not in src]
    if any(x != y and (x, y) not in g.edges and (y, x) not in g.edges
           for x in squares for y in squares):
        out.append("order")
    if any(i not in src and j in src for i, j in g.edges):
        out.append("direction")
    return out


def is_Gw_digraph(g: DiGraph) -> bool:
    return not check_digraph(g)


def decode_digraph(g: DiGraph) -> Word:
    bad = check_digraph(g)
    if bad:
        raise GraphError("not a word encoding; violated: " + ", ".join(bad))
    squares = [v for v in range(g.vertex_count) if v not in set(g.sources)]
    # strict total order: sort by out-degree inside the squares
    squares.sort(key=lambda v: sum((v, w) in g.edges for w in squares),
                 reverse=True)
    alpha = make_powerset_alphabet(list(PREDICATES))
    idx = [alpha.letter_of_predicates(
        {p for p, s in zip(PREDICATES, g.sources) if (s, v) in g.edges})
        for v in squares]
    return Word(alpha, tuple(idx))


# ---------------------------------------------------------------------------
# Directed formulas

XA, XB, XC = "xa", "xb", "xc"
_SRC3 = (XA, XB, XC)


def _circ(x: str) -> lg.Formula:
    return lg.disj(*[lg.EqVar(x, s) for s in _SRC3])


def _square(x: str) -> lg.Formula:
    return lg.conj(*[lg.NeqVar(x, s) for s in _SRC3])


def _square_a(x: str) -> lg.Formula:
    return lg.conj(lg.NeqVar(x, XB), lg.NeqVar(x, XC))


def build_psi_digraph() -> tuple[lg.Formula, lg.Formula]:
    """(psi_minus, psi_plus) with free source variables xa, xb, xc."""
    e_o = [(XA, XB), (XB, XC), (XC, XB)]
    e_bar = [(x, y) for x in _SRC3 for y in _SRC3 if (x, y) not in e_o]

    minus = lg.conj(
        # (sources)
        lg.conj(*[lg.conj(lg.Edge(x, y), lg.NeqVar(x, y)) for x, y in e_o]),
        # (in-edge)
        lg.Forall("y", lg.disj(lg.EqVar("y", XA),
                               lg.Exists("x", lg.Edge("x", "y")))),
        # (order)
        lg.Forall("x", lg.Forall("y", lg.disj(
            _circ("x"), _circ("y"), lg.EqVar("x", "y"),
            lg.Edge("x", "y"), lg.Edge("y", "x")))))

    plus = lg.disj(
        # (sources)
        lg.disj(*[lg.Edge(x, y) for x, y in e_bar]),
        # (in-edge)
        lg.Exists("x", lg.Edge("x", XA)),
        # (cycle)
        lg.Exists("x", lg.Edge("x", "x")),
        lg.Exists("x", lg.Exists("y", lg.conj(
            lg.disj(_square_a("x"), _square_a("y")),
            lg.Edge("x", "y"), lg.Edge("y", "x")))),
        lg.Exists("x", lg.Exists("y", lg.Exists("z", lg.conj(
            lg.Edge("x", "y"), lg.Edge("y", "z"), lg.Edge("z", "x"))))),
        # (direction)
        lg.Exists("x", lg.Exists("y", lg.conj(
            _square("x"), _circ("y"), lg.Edge("x", "y")))))
    return minus, plus


def translate_digraph(f: lg.Formula) -> lg.Formula:
    """The inductive word-to-graph translation over sources xa, xb, xc."""
    src = dict(zip(PREDICATES, _SRC3))

    def tr(g: lg.Formula) -> lg.Formula:
        if isinstance(g, lg.Le):
            return lg.disj(lg.Edge(g.x, g.y), lg.EqVar(g.x, g.y))
        if isinstance(g, lg.Lt):
            return lg.Edge(g.x, g.y)
        if isinstance(g, (lg.EqVar, lg.NeqVar)):
            return g
        if isinstance(g, lg.Pred):
            return lg.Edge(src[g.name], g.var)
        if isinstance(g, lg.LetterUp):
            preds = sorted(set(g.letter[1:-1].split(",")) - {""})
            return lg.conj(*[lg.Edge(src[p], g.var) for p in preds])
        if isinstance(g, lg.Edge):
            raise lg.FormulaError("input already contains graph atoms")
        if isinstance(g, lg.And):
            return lg.And(tuple(tr(p) for p in g.parts))
        if isinstance(g, lg.Or):
            return lg.Or(tuple(tr(p) for p in g.parts))
        if isinstance(g, lg.Not):
            return lg.Not(tr(g.sub))
        if isinstance(g, lg.Exists):
            return lg.Exists(g.var, lg.conj(_square(g.var), tr(g.sub)))
        if isinstance(g, lg.Forall):
            return lg.Forall(g.var, lg.disj(_circ(g.var), tr(g.sub)))
        raise lg.FormulaError(f"cannot translate {type(g).__name__}")

    return tr(f)


def build_phi_digraph() -> lg.Formula:
    """exists xa xb xc . (psi_minus and (phi_K^G or psi_plus)); the
    parenthesization matters for the source choice."""
    from .klang import build_phi_K

    minus, plus = build_psi_digraph()
    phi_k_g = translate_digraph(build_phi_K())
    body = lg.conj(minus, lg.disj(phi_k_g, plus))
    return lg.Exists(XA, lg.Exists(XB, lg.Exists(XC, body)))


def digraph_valuation(g: DiGraph) -> dict[str, int]:
    xa, xb, xc = g.sources
    return {XA: xa, XB: xb, XC: xc}


def eval_digraph(f: lg.Formula, g: DiGraph,
                 valuation: dict[str, int] | None = None) -> bool:
    return lg.eval_graph_batch(f, g.adjacency(), valuation)


# ---------------------------------------------------------------------------
# EF+ games on graphs


@dataclass(frozen=True)
class GraphGamePosition:
    g1: object  # DiGraph | UGraph
    g2: object
    pairs: tuple[tuple[int, int], ...]


def is_valid_graph_position(p: GraphGamePosition) -> bool:
    for a, b in p.pairs:
        if not (0 <= a < p.g1.vertex_count and 0 <= b < p.g2.vertex_count):
            raise GameError(f"token ({a},{b}) out of range")
    for a1, b1 in p.pairs:
        for a2, b2 in p.pairs:
            if p.g1.has_edge(a1, a2) and not p.g2.has_edge(b1, b2):
                return False
            if (a1 == a2) != (b1 == b2):
                return False
    return True


class _GraphSolver:
    def __init__(self, g1, g2):
        self.g1, self.g2 = g1, g2
        self.memo: dict[tuple, bool] = {}

    def extends_ok(self, pairs, a: int, b: int) -> bool:
        for a2, b2 in pairs + ((a, b),):
            if self.g1.has_edge(a, a2) and not self.g2.has_edge(b, b2):
                return False
            if self.g1.has_edge(a2, a) and not self.g2.has_edge(b2, b):
                return False
            if (a == a2) != (b == b2):
                return False
        return True

    def replies(self, pairs, side: str, pos: int) -> list[int]:
        if side == "g1":
            return [b for b in range(self.g2.vertex_count)
                    if self.extends_ok(pairs, pos, b)]
        return [a for a in range(self.g1.vertex_count)
                if self.extends_ok(pairs, a, pos)]

    def dup_wins(self, pairs, rounds: int) -> bool:
        if rounds == 0:
            return True
        key = (tuple(sorted(set(pairs))), rounds)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        result = True
        for side, count in (("g1", self.g1.vertex_count),
                            ("g2", self.g2.vertex_count)):
            for pos in range(count):
                if not any(self.dup_wins(
                        pairs + ((pos, r) if side == "g1" else (r, pos),),
                        rounds - 1)
                        for r in self.replies(pairs, side, pos)):
                    result = False
                    break
            if not result:
                break
        self.memo[key] = result
        return result


def ef_game_graph(g1, g2, n: int, cap: int = 4) -> bool:
    """Duplicator wins the n-round EF+ game with E monotone and = rigid."""
    if n > cap:
        raise GameError(f"round count {n} exceeds cap {cap}")
    if type(g1) is not type(g2):
        raise GameError("mixed graph kinds")
    return _GraphSolver(g1, g2).dup_wins((), n)


# ---------------------------------------------------------------------------
# Undirected encoding

_CYCLE_SIZES = {"a": 3, "b": 4, "c": 5}


def encode_ugraph(u: Word) -> UGraph:
    """Canonical undirected encoding: sources 0..11 in 3/4/5 cycles, squares
    12.., then 4 fresh diamonds per ordered square pair (the meta-edge
    gadget).  The k-th square carrying predicate alpha attaches to alpha's
    source number k mod cycle-size, so no two squares share two sources."""
    alpha = u.alphabet
    for i in range(len(u)):
        if not alpha.letter_predicates(u[i]):
            raise GraphError("the empty letter cannot be encoded undirected")
    edges: set[tuple[int, int]] = set()

    def add(i, j):
        edges.add((min(i, j), max(i, j)))

    groups = {"a": [0, 1, 2], "b": [3, 4, 5, 6], "c": [7, 8, 9, 10, 11]}
    for grp in groups.values():
        for k in range(len(grp)):
            add(grp[k], grp[(k + 1) % len(grp)])
    n = len(u)
    sq = [12 + i for i in range(n)]
    seen = {p: 0 for p in PREDICATES}
    for i in range(n):
        for p in sorted(alpha.letter_predicates(u[i])):
            grp = groups[p]
            add(grp[seen[p] % len(grp)], sq[i])
            seen[p] += 1
    nxt = 12 + n
    for i in range(n):
        for j in range(i + 1, n):
            d1, d2, d3, d4 = nxt, nxt + 1, nxt + 2, nxt + 3
            nxt += 4
            add(sq[i], d1)
            add(d1, d2)
            add(d2, d3)
            add(d3, sq[j])
            add(d1, d4)
    return UGraph(nxt, frozenset(edges), tuple(range(12)))


@lru_cache(maxsize=32)
def _analysis(g: UGraph):
    """Cached (neighbors, sources, squares, rest, diamond-like) structure."""
    nbrs: dict[int, set[int]] = {v: set() for v in range(g.vertex_count)}
    for i, j in g.edges:
        nbrs[i].add(j)
        nbrs[j].add(i)
    src = set(g.sources)
    squares = {v for v in range(g.vertex_count)
               if v not in src and nbrs[v] & src}
    rest = set(range(g.vertex_count)) - src - squares

    def diamond_like(v: int) -> bool:
        if v in src:
            return False
        if nbrs[v] & squares - {v}:
            return True
        for m in nbrs[v]:
            if m in src or m == v:
                continue
            if (nbrs[m] & squares) - {v, m}:
                return True
        return False

    dia_like = {v for v in range(g.vertex_count) if diamond_like(v)}
    return nbrs, src, squares, rest, dia_like


def meta_edge(g: UGraph, x: int, y: int,
              collect: set | None = None) -> bool:
    """Gadget match: path x-d1-d2-d3-y of diamonds with a pendant d4 on d1."""
    if x == y:
        return False
    nbrs, src, squares, rest, dia_like = _analysis(g)
    dia = rest & dia_like
    found = False
    for d1 in nbrs[x] & dia:
        for d2 in nbrs[d1] & dia:
            if d2 == d1:
                continue
            for d3 in nbrs[d2] & dia:
                if d3 in (d1, d2) or y not in nbrs[d3]:
                    continue
                for d4 in nbrs[d1] & dia:
                    if d4 in (d2, d3):
                        continue
                    found = True
                    if collect is not None:
                        collect.update({d1, d2, d3, d4})
    return found


def _cycle_through_nonsource(g: UGraph, limit: int = 5) -> bool:
    """Is there a cycle of length <= limit containing a non-source vertex?"""
    nbrs, src, _, _, _ = _analysis(g)
    for v in range(g.vertex_count):
        if v in src:
            continue
        nv = sorted(nbrs[v])
        for i1 in range(len(nv)):
            for i2 in range(i1 + 1, len(nv)):
                # shortest path between the two neighbors avoiding v
                start, goal = nv[i1], nv[i2]
                dist = {start: 0}
                q = deque([start])
                while q:
                    w = q.popleft()
                    if dist[w] >= limit - 2:
                        continue
                    for z in nbrs[w]:
                        if z == v or z in dist:
                            continue
                        dist[z] = dist[w] + 1
                        q.append(z)
                if goal in dist and dist[goal] + 2 <= limit:
                    return True
    return False


def check_ugraph(g: UGraph) -> list[str]:
    out = []
    nbrs, src, squares, rest, dia_like = _analysis(g)
    ok = True
    for p in PREDICATES:
        grp = set(g.source_group(p))
        for v in grp:
            if len(nbrs[v] & src) != 2 or nbrs[v] & (src - grp):
                ok = False
        # connectivity of the cycle inside the group
        if ok and grp:
            comp = {next(iter(grp))}
            q = deque(comp)
            while q:
                w = q.popleft()
                for z in nbrs[w] & grp:
                    if z not in comp:
                        comp.add(z)
                        q.append(z)
            if comp != grp:
                ok = False
    if not ok:
        out.append("sources")
    if rest - dia_like:
        out.append("partition")
    elif squares & dia_like:
        out.append("partition")
    if _cycle_through_nonsource(g):
        out.append("cycle")
    sq = sorted(squares)
    m = {(x, y): meta_edge(g, x, y) for x in sq for y in sq if x != y}
    total = all(m[x, y] or m[y, x] for x in sq for y in sq if x != y)
    antisym = not any(m[x, y] and m[y, x] for x in sq for y in sq if x != y)
    trans = all(m[x, z] for x in sq for y in sq for z in sq
                if len({x, y, z}) == 3 and m[x, y] and m[y, z])
    if not (total and antisym and trans):
        out.append("order")
    used: dict[int, set] = {}
    for x in sq:
        for y in sq:
            if x != y and m[x, y]:
                got: set = set()
                meta_edge(g, x, y, collect=got)
                for d in got:
                    used.setdefault(d, set()).add((x, y))
    if any(len(pairs) > 1 for pairs in used.values()):
        out.append("diamonds")
    return out


def is_Gw_ugraph(g: UGraph) -> bool:
    return not check_ugraph(g)


def decode_ugraph(g: UGraph) -> Word:
    bad = check_ugraph(g)
    if bad:
        raise GraphError("not a word encoding; violated: " + ", ".join(bad))
    _, src, squares, _, _ = _analysis(g)
    sq = sorted(squares)
    sq.sort(key=lambda x: sum(meta_edge(g, x, y) for y in squares if y != x),
            reverse=True)
    alpha = make_powerset_alphabet(list(PREDICATES))
    nbrs = _analysis(g)[0]
    idx = []
    for v in sq:
        preds = {p for p in PREDICATES
                 if nbrs[v] & set(g.source_group(p))}
        idx.append(alpha.letter_of_predicates(preds))
    return Word(alpha, tuple(idx))


# ---------------------------------------------------------------------------
# Undirected formulas

USRC = tuple(f"xs{i}" for i in range(12))
_UGROUP = {"a": USRC[0:3], "b": USRC[3:7], "c": USRC[7:12]}


def _ucirc(x: str) -> lg.Formula:
    return lg.disj(*[lg.EqVar(x, s) for s in USRC])


def _unoncirc(x: str) -> lg.Formula:
    return lg.conj(*[lg.NeqVar(x, s) for s in USRC])


def _usquare(x: str) -> lg.Formula:
    return lg.conj(_unoncirc(x), lg.disj(*[lg.Edge(s, x) for s in USRC]))


def _udia(x: str, s: str = "ds", m: str = "dm") -> lg.Formula:
    near = lg.disj(
        lg.Edge(x, s),
        lg.Exists(m, lg.conj(_unoncirc(m), lg.NeqVar(m, x), lg.NeqVar(m, s),
                             lg.Edge(x, m), lg.Edge(m, s))))
    return lg.conj(_unoncirc(x),
                   lg.Exists(s, lg.conj(_usquare(s), lg.NeqVar(s, x), near)))


def meta_edge_formula(x: str, y: str) -> lg.Formula:
    """M(x, y) with quantifiers nested to keep evaluation narrow."""
    d1, d2, d3, d4 = "dd1", "dd2", "dd3", "dd4"
    inner3 = lg.Exists(d3, lg.conj(
        _udia(d3), lg.NeqVar(d3, d1), lg.NeqVar(d3, d2),
        lg.Edge(d2, d3), lg.Edge(d3, y)))
    inner4 = lg.Exists(d4, lg.conj(_udia(d4), lg.NeqVar(d4, d2),
                                   lg.Edge(d1, d4)))
    inner2 = lg.Exists(d2, lg.conj(
        _udia(d2), lg.NeqVar(d2, d1), lg.Edge(d1, d2), inner3, inner4))
    return lg.conj(lg.NeqVar(x, y),
                   lg.Exists(d1, lg.conj(_udia(d1), lg.Edge(x, d1), inner2)))


def build_psi_ugraph() -> tuple[lg.Formula, lg.Formula]:
    """(psi_minus, psi_plus) over the 12 free source variables.

    The (order) psi_minus includes the x = y disjunct: without it no graph
    with a square could satisfy the universal clause, since the meta-edge
    relation is irreflexive.
    """
    minus_parts: list[lg.Formula] = []
    plus_parts: list[lg.Formula] = []

    # (sources): the imposed 3/4/5 cycles, missing edges in psi_minus,
    # extra source-source edges in psi_plus
    cycle_edges = set()
    for grp in _UGROUP.values():
        for k in range(len(grp)):
            e = frozenset({grp[k], grp[(k + 1) % len(grp)]})
            cycle_edges.add(e)
            a, b = sorted(e)
            minus_parts.append(lg.conj(lg.Edge(a, b), lg.NeqVar(a, b)))
    for a in USRC:
        for b in USRC:
            if a < b and frozenset({a, b}) not in cycle_edges:
                plus_parts.append(lg.Edge(a, b))
    minus_parts.append(lg.conj(*[
        lg.NeqVar(a, b) for a in USRC for b in USRC if a < b]))

    # (partition)
    minus_parts.append(lg.Forall("x", lg.disj(
        _ucirc("x"), _usquare("x"), _udia("x"))))
    plus_parts.append(lg.Exists("x", lg.conj(_usquare("x"), _udia("x"))))

    # (cycle): cycles of length 3..5 touching a non-source
    for length in (1, 2, 3, 4, 5):
        if length < 3:
            continue
        vs = [f"c{i}" for i in range(length)]
        ring = [lg.Edge(vs[i], vs[(i + 1) % length]) for i in range(length)]
        distinct = [lg.NeqVar(a, b) for i, a in enumerate(vs)
                    for b in vs[i + 1:]]
        body = lg.conj(lg.disj(*[_unoncirc(v) for v in vs]), *ring, *distinct)
        for v in reversed(vs):
            body = lg.Exists(v, body)
        plus_parts.append(body)

    # (order): total on squares modulo equality; cycles/reflexivity in plus
    minus_parts.append(lg.Forall("x", lg.Forall("y", lg.disj(
        lg.disj(_ucirc("x"), _udia("x")), lg.disj(_ucirc("y"), _udia("y")),
        lg.EqVar("x", "y"),
        meta_edge_formula("x", "y"), meta_edge_formula("y", "x")))))
    plus_parts.append(lg.Exists("x", lg.Exists("y", lg.conj(
        _usquare("x"), _usquare("y"),
        meta_edge_formula("x", "y"), meta_edge_formula("y", "x")))))

    return lg.conj(*minus_parts), lg.disj(*plus_parts)


def translate_ugraph(f: lg.Formula) -> lg.Formula:
    """Word-to-undirected-graph translation: order atoms become meta-edges,
    letters become source adjacency, quantifiers relativize to squares."""

    def tr(g: lg.Formula) -> lg.Formula:
        if isinstance(g, lg.Le):
            return lg.disj(meta_edge_formula(g.x, g.y), lg.EqVar(g.x, g.y))
        if isinstance(g, lg.Lt):
            return meta_edge_formula(g.x, g.y)
        if isinstance(g, (lg.EqVar, lg.NeqVar)):
            return g
        if isinstance(g, lg.Pred):
            return lg.disj(*[lg.Edge(s, g.var) for s in _UGROUP[g.name]])
        if isinstance(g, lg.LetterUp):
            preds = sorted(set(g.letter[1:-1].split(",")) - {""})
            return lg.conj(*[lg.disj(*[lg.Edge(s, g.var)
                                       for s in _UGROUP[p]])
                             for p in preds])
        if isinstance(g, lg.Edge):
            raise lg.FormulaError("input already contains graph atoms")
        if isinstance(g, lg.And):
            return lg.And(tuple(tr(p) for p in g.parts))
        if isinstance(g, lg.Or):
            return lg.Or(tuple(tr(p) for p in g.parts))
        if isinstance(g, lg.Not):
            return lg.Not(tr(g.sub))
        if isinstance(g, lg.Exists):
            return lg.Exists(g.var, lg.conj(_usquare(g.var), tr(g.sub)))
        if isinstance(g, lg.Forall):
            return lg.Forall(g.var, lg.disj(
                _ucirc(g.var), _udia(g.var), tr(g.sub)))
        raise lg.FormulaError(f"cannot translate {type(g).__name__}")

    return tr(f)


def ugraph_valuation(g: UGraph) -> dict[str, int]:
    return dict(zip(USRC, g.sources))


def eval_ugraph(f: lg.Formula, g: UGraph,
                valuation: dict[str, int] | None = None) -> bool:
    return lg.eval_graph_batch(f, g.adjacency(), valuation)
