"""HTTP JSON service backing the game arena UI.

Three game kinds share one session protocol: word (EF+ on two words over an
ordered alphabet), graph (EF+ with monotone edges and rigid equality), and
integer (the n-integer abstraction).  A session alternates Spoiler moves and
Duplicator replies; the human plays one side, the exact solver plays the
other.  Sessions live in memory with an eviction cap and no persistence.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from . import games as gm
from . import graphs as gr
from . import intgame as ig
from . import klang
from .core import OrderedAlphabet, Word

SESSION_CAP = 256

Move = tuple[str, int]


# ---------------------------------------------------------------------------
# Engine adapters: one uniform surface over the three exact solvers


class WordEngine:
    """Wraps the word-game solver; sides are "u" and "v"."""

    sides = ("u", "v")

    def __init__(self, u: Word, v: Word):
        self.u, self.v = u, v
        self.solver = gm.Solver(u, v)

    def arena_json(self) -> dict:
        return {"alphabet": self.u.alphabet.to_json(),
                "u": self.u.to_json(), "v": self.v.to_json()}

    def size(self, side: str) -> int:
        return len(self.u) if side == "u" else len(self.v)

    def pair_of(self, move: Move, reply: int):
        word, pos = move
        return (pos, reply) if word == "u" else (reply, pos)

    def reply_ok(self, pairs, move: Move, reply: int) -> bool:
        p, q = self.pair_of(move, reply)
        return self.solver.extends_ok(pairs, p, q)

    def violation(self, pairs, move: Move, reply: int) -> str:
        p, q = self.pair_of(move, reply)
        if not self.solver.leq_uv[p][q]:
            return "label"
        return "order"

    def dup_wins(self, pairs, rounds: int) -> bool:
        return self.solver.dup_wins(pairs, rounds)

    def winning_move(self, pairs, rounds: int) -> Optional[Move]:
        return self.solver.winning_spoiler_move(pairs, rounds)

    def best_reply(self, pairs, move: Move, rounds: int) -> Optional[int]:
        return self.solver.best_reply(pairs, move, rounds)

    def legal_replies(self, pairs, move: Move) -> list[int]:
        return self.solver.valid_replies(pairs, move[0], move[1])


class GraphEngine:
    """Wraps the graph-game solver; sides are "u" (first graph) and "v"."""

    sides = ("u", "v")

    def __init__(self, g1, g2):
        if type(g1) is not type(g2):
            raise gm.GameError("mixed graph kinds")
        self.g1, self.g2 = g1, g2
        self.solver = gr._GraphSolver(g1, g2)

    def arena_json(self) -> dict:
        return {"g1": self.g1.to_json(), "g2": self.g2.to_json()}

    def size(self, side: str) -> int:
        return (self.g1 if side == "u" else self.g2).vertex_count

    def pair_of(self, move: Move, reply: int):
        word, pos = move
        return (pos, reply) if word == "u" else (reply, pos)

    def reply_ok(self, pairs, move: Move, reply: int) -> bool:
        a, b = self.pair_of(move, reply)
        return self.solver.extends_ok(pairs, a, b)

    def violation(self, pairs, move: Move, reply: int) -> str:
        a, b = self.pair_of(move, reply)
        for a2, b2 in pairs + ((a, b),):
            if (a == a2) != (b == b2):
                return "order"
        return "label"

    def dup_wins(self, pairs, rounds: int) -> bool:
        return self.solver.dup_wins(pairs, rounds)

    def winning_move(self, pairs, rounds: int) -> Optional[Move]:
        if rounds == 0:
            return None
        for side in self.sides:
            for pos in range(self.size(side)):
                move = (side, pos)
                if not any(self.dup_wins(pairs + (self.pair_of(move, r),),
                                         rounds - 1)
                           for r in self.legal_replies(pairs, move)):
                    return move
        return None

    def best_reply(self, pairs, move: Move, rounds: int) -> Optional[int]:
        for r in self.legal_replies(pairs, move):
            if self.dup_wins(pairs + (self.pair_of(move, r),), rounds - 1):
                return r
        return None

    def legal_replies(self, pairs, move: Move) -> list[int]:
        side, pos = move
        return self.solver.replies(pairs, "g1" if side == "u" else "g2", pos)


class IntEngine:
    """Wraps the integer-game solver; sides are "U" and "V"."""

    sides = ("U", "V")

    def __init__(self, arena: ig.IntArena):
        self.arena = arena
        self.solver = ig._IntSolver(arena)

    def arena_json(self) -> dict:
        return self.arena.to_json()

    def size(self, side: str) -> int:
        return len(self.arena.u) if side == "U" else len(self.arena.v)

    def pair_of(self, move: Move, reply: int):
        return ig._pair_of(move, reply)

    def reply_ok(self, pairs, move: Move, reply: int) -> bool:
        return reply in self.legal_replies(pairs, move)

    def violation(self, pairs, move: Move, reply: int) -> str:
        x, y = self.pair_of(move, reply)
        if not ig._label_ok(self.arena, x, y):
            return "label"
        for x1, y1 in pairs:
            if (x1, y1) == (x, y):
                continue
            if (x1 < x) != (y1 < y) or (x1 == x) != (y1 == y):
                return "order"
        return "neighbouring"

    def dup_wins(self, pairs, rounds: int) -> bool:
        return self.solver.dup_wins(pairs, rounds)

    def winning_move(self, pairs, rounds: int) -> Optional[Move]:
        return self.solver.winning_spoiler_move(pairs, rounds)

    def best_reply(self, pairs, move: Move, rounds: int) -> Optional[int]:
        return self.solver.best_reply(pairs, move, rounds)

    def legal_replies(self, pairs, move: Move) -> list[int]:
        return ig.legal_replies(self.arena, pairs, move)


def build_engine(kind: str, arena: dict):
    if kind == "word":
        alphabet = OrderedAlphabet.from_json(arena["alphabet"])
        return WordEngine(Word.from_letters(alphabet, arena["u"]),
                          Word.from_letters(alphabet, arena["v"]))
    if kind == "graph":
        return GraphEngine(gr.load_graph(arena["g1"]),
                           gr.load_graph(arena["g2"]))
    if kind == "integer":
        return IntEngine(ig.IntArena.from_json(arena))
    raise ValueError(f"unknown game kind {kind!r}")


# ---------------------------------------------------------------------------
# Sessions


@dataclass
class GameSession:
    id: str
    kind: str
    engine: object
    human_side: str  # "spoiler" | "duplicator"
    rounds: int
    solver_cap: int
    history: list[dict] = field(default_factory=list)
    pairs: tuple = ()
    pending: Optional[Move] = None  # engine Spoiler move awaiting the human
    status: str = "ongoing"
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def rounds_left(self) -> int:
        return self.rounds - len(self.pairs)

    def depth(self) -> int:
        return min(self.rounds_left, self.solver_cap)

    def state(self) -> dict:
        if self.status != "ongoing":
            turn = None
        elif self.human_side == "spoiler":
            turn = "spoiler"
        else:
            turn = "duplicator" if self.pending else "spoiler"
        return {"v": 1, "id": self.id, "kind": self.kind,
                "human_side": self.human_side, "rounds": self.rounds,
                "rounds_played": len(self.pairs), "status": self.status,
                "arena": self.engine.arena_json(),
                "history": list(self.history),
                "pairs": [list(p) for p in self.pairs],
                "pending_move": ({"word": self.pending[0],
                                  "position": self.pending[1]}
                                 if self.pending else None),
                "turn": turn}

    # -- engine turns ------------------------------------------------------

    def engine_spoiler_move(self) -> None:
        """Pick the engine's Spoiler move and store it as pending."""
        if self.status != "ongoing" or self.human_side != "duplicator":
            return
        move = self.engine.winning_move(self.pairs, self.depth())
        if move is None:
            # no winning move within the search depth: keep the game going
            move = next(((s, p) for s in self.engine.sides
                         for p in range(self.engine.size(s))
                         if self.engine.legal_replies(self.pairs, (s, p))),
                        None)
            if move is None:
                move = (self.engine.sides[0], 0)
        self.pending = move
        self.history.append({"side": "spoiler", "word": move[0],
                             "position": move[1]})

    def engine_duplicator_reply(self, move: Move) -> Optional[int]:
        reply = self.engine.best_reply(self.pairs, move, self.depth())
        if reply is None:
            replies = self.engine.legal_replies(self.pairs, move)
            reply = replies[0] if replies else None
        return reply

    def finish_round(self, move: Move, reply: int) -> None:
        self.pairs += (self.engine.pair_of(move, reply),)
        if self.rounds_left == 0:
            self.status = "duplicator_won"


# ---------------------------------------------------------------------------
# Presets


def builtin_presets() -> dict[str, dict]:
    out = {}
    for n in (1, 2, 3):
        u, v = klang.lemma44_words(n)
        out[f"lemma44-n{n}"] = {
            "kind": "word", "rounds": n,
            "arena": {"alphabet": u.alphabet.to_json(),
                      "u": u.to_json(), "v": v.to_json()}}
    arena = ig.IntArena(1, (1, 0), (ig.amb(1),))
    out["int-game-n1"] = {"kind": "integer", "rounds": 2,
                          "arena": arena.to_json()}
    u1, v1 = klang.lemma44_words(1)
    out["graph-lemma513-n1"] = {
        "kind": "graph", "rounds": 1,
        "arena": {"g1": gr.encode_digraph(u1).to_json(),
                  "g2": gr.encode_digraph(v1).to_json()}}
    return out


def load_preset_dir(path: str) -> dict[str, dict]:
    out = {}
    for name in sorted(os.listdir(path)):
        if name.endswith(".json"):
            with open(os.path.join(path, name)) as f:
                out[name[:-5]] = json.load(f)
    return out


# ---------------------------------------------------------------------------
# Application


def create_app(solver_cap: int = 6,
               preset_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="foplus game arena")
    app.add_middleware(
        CORSMiddleware,
        allow_origin_regex=r"http://(localhost|127\.0\.0\.1)(:\d+)?",
        allow_methods=["*"], allow_headers=["*"])

    presets = builtin_presets()
    if preset_dir:
        presets.update(load_preset_dir(preset_dir))
    sessions: OrderedDict[str, GameSession] = OrderedDict()
    store_lock = threading.Lock()

    def get_session(sid: str) -> GameSession:
        with store_lock:
            s = sessions.get(sid)
        if s is None:
            raise HTTPException(404, f"unknown session {sid}")
        return s

    @app.get("/api/presets")
    def list_presets():
        return {"v": 1,
                "presets": [{"name": k, "kind": p["kind"],
                             "rounds": p["rounds"], "arena": p["arena"]}
                            for k, p in presets.items()]}

    @app.post("/api/games", status_code=201)
    def create_game(body: dict):
        if "preset" in body:
            preset = presets.get(body["preset"])
            if preset is None:
                raise HTTPException(404, f"unknown preset {body['preset']!r}")
            kind = preset["kind"]
            arena = preset["arena"]
            rounds = body.get("rounds", preset["rounds"])
        else:
            try:
                kind, arena = body["kind"], body["arena"]
            except KeyError as e:
                raise HTTPException(422, f"missing field {e}") from None
            rounds = body.get("rounds")
        human_side = body.get("human_side", "spoiler")
        if human_side not in ("spoiler", "duplicator"):
            raise HTTPException(422, f"bad human_side {human_side!r}")
        if not isinstance(rounds, int) or rounds < 0:
            raise HTTPException(422, "rounds must be a non-negative integer")
        try:
            engine = build_engine(kind, arena)
        except (KeyError, ValueError, TypeError) as e:
            raise HTTPException(422, f"bad arena: {e}") from None
        s = GameSession(id=secrets.token_hex(8), kind=kind, engine=engine,
                        human_side=human_side, rounds=rounds,
                        solver_cap=solver_cap)
        if rounds == 0:
            s.status = "duplicator_won"
        else:
            s.engine_spoiler_move()
        with store_lock:
            sessions[s.id] = s
            while len(sessions) > SESSION_CAP:
                sessions.popitem(last=False)
        return {"v": 1, "id": s.id, "state": s.state()}

    @app.get("/api/games/{sid}")
    def get_game(sid: str):
        return get_session(sid).state()

    @app.post("/api/games/{sid}/move")
    def play_move(sid: str, body: dict):
        s = get_session(sid)
        with s.lock:
            if s.status != "ongoing":
                raise HTTPException(409, "game is finished")
            try:
                word, pos = body["word"], body["position"]
            except KeyError as e:
                raise HTTPException(422, f"missing field {e}") from None
            if word not in s.engine.sides:
                raise HTTPException(
                    409, f"word must be one of {list(s.engine.sides)}")
            if not isinstance(pos, int) or \
                    not 0 <= pos < s.engine.size(word):
                raise HTTPException(409, f"position {pos} out of range")

            if s.human_side == "spoiler":
                move = (word, pos)
                s.history.append({"side": "spoiler", "word": word,
                                  "position": pos})
                reply = s.engine_duplicator_reply(move)
                if reply is None:
                    s.status = "spoiler_won"
                    return {"v": 1, "state": s.state(), "legal": True,
                            "engine_reply": None}
                other = next(w for w in s.engine.sides if w != word)
                s.history.append({"side": "duplicator", "word": other,
                                  "position": reply})
                s.finish_round(move, reply)
                return {"v": 1, "state": s.state(), "legal": True,
                        "engine_reply": {"word": other, "position": reply}}

            # human plays Duplicator: the move answers the pending
            # engine Spoiler move, in the other word
            if s.pending is None:
                raise HTTPException(409, "no pending Spoiler move")
            if word == s.pending[0]:
                raise HTTPException(
                    409, f"reply must be in the other word, not {word!r}")
            if s.engine.reply_ok(s.pairs, s.pending, pos):
                move, s.pending = s.pending, None
                s.history.append({"side": "duplicator", "word": word,
                                  "position": pos})
                s.finish_round(move, pos)
                if s.status == "ongoing":
                    s.engine_spoiler_move()
                return {"v": 1, "state": s.state(), "legal": True,
                        "engine_reply": ({"word": s.pending[0],
                                          "position": s.pending[1]}
                                         if s.pending else None)}
            # validity-breaking placement loses the game on the spot
            violation = s.engine.violation(s.pairs, s.pending, pos)
            s.history.append({"side": "duplicator", "word": word,
                              "position": pos, "violation": violation})
            s.status = "spoiler_won"
            raise HTTPException(409, {
                "message": f"move violates the {violation} clause",
                "violation": violation, "legal": False,
                "state": s.state()})

    @app.get("/api/games/{sid}/hint")
    def hint(sid: str):
        s = get_session(sid)
        with s.lock:
            if s.status != "ongoing":
                raise HTTPException(409, "game is finished")
            if s.rounds_left > s.solver_cap:
                return {"v": 1, "hint": "unknown"}
            if s.human_side == "spoiler":
                move = s.engine.winning_move(s.pairs, s.rounds_left)
            else:
                if s.pending is None:
                    raise HTTPException(409, "no pending Spoiler move")
                reply = s.engine.best_reply(s.pairs, s.pending,
                                            s.rounds_left)
                if reply is None:
                    return {"v": 1, "hint": None}
                other = next(w for w in s.engine.sides
                             if w != s.pending[0])
                move = (other, reply)
            if move is None:
                return {"v": 1, "hint": None}
            return {"v": 1, "hint": {"word": move[0], "position": move[1]}}

    return app
