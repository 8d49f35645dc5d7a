/** View model: a pure function of the last server state. No game rules are
 * re-implemented here beyond mirroring the server's bounds checks. */

import type {
  AlphabetJson,
  Arena,
  GameState,
  GraphArena,
  IntArena,
  MoveRef,
  Side,
  Status,
  WordArena,
} from "./api.js";

export interface Tile {
  /** display label: letter name, integer, or height pair */
  label: string;
  /** strictly larger letters, shown as the hover badge (word games only) */
  upset: string[];
  /** 1-based round numbers of tokens on this position */
  tokens: number[];
  /** the engine's pending Spoiler token, not yet answered */
  pending: boolean;
}

export interface Row {
  /** the "word" field to send when clicking this row */
  word: string;
  tiles: Tile[];
}

export interface GraphView {
  word: string;
  vertices: { id: number; role: "source" | "square"; tokens: number[]; pending: boolean }[];
  edges: [number, number][];
  directed: boolean;
}

export interface ViewState {
  sessionId: string;
  kind: GameState["kind"];
  status: Status;
  turn: Side | null;
  humanSide: Side;
  roundsPlayed: number;
  rounds: number;
  rows: Row[];
  graphs: GraphView[];
  banner: string | null;
}

function isWordArena(a: Arena): a is WordArena {
  return "alphabet" in a;
}

function isGraphArena(a: Arena): a is GraphArena {
  return "g1" in a;
}

/** Letters strictly above each letter, derived from the alphabet schema. */
export function upsets(alphabet: AlphabetJson): Map<string, string[]> {
  const out = new Map<string, string[]>();
  if (alphabet.powerset_of) {
    const preds = [...alphabet.powerset_of].sort();
    const subsets: string[][] = [[]];
    for (const p of preds) {
      subsets.push(...subsets.map((s) => [...s, p]));
    }
    const name = (s: string[]) => `{${[...s].sort().join(",")}}`;
    for (const s of subsets) {
      const mine = new Set(s);
      const above = subsets
        .filter((t) => t.length > s.length && s.every((p) => t.includes(p)))
        .map(name);
      out.set(name([...mine]), above);
    }
    return out;
  }
  for (const letter of alphabet.letters ?? []) {
    out.set(letter, []);
  }
  for (const [lo, hi] of alphabet.order ?? []) {
    out.get(lo)?.push(hi);
  }
  return out;
}

function tokensAt(
  pairs: [number, number][],
  sideIndex: 0 | 1,
  position: number,
): number[] {
  const rounds: number[] = [];
  pairs.forEach((pair, i) => {
    if (pair[sideIndex] === position) rounds.push(i + 1);
  });
  return rounds;
}

function pendingAt(
  pending: MoveRef | null,
  word: string,
  position: number,
): boolean {
  return pending !== null && pending.word === word && pending.position === position;
}

function wordRows(state: GameState, arena: WordArena): Row[] {
  const ups = upsets(arena.alphabet);
  const row = (word: "u" | "v", letters: string[], sideIndex: 0 | 1): Row => ({
    word,
    tiles: letters.map((label, i) => ({
      label,
      upset: ups.get(label) ?? [],
      tokens: tokensAt(state.pairs, sideIndex, i),
      pending: pendingAt(state.pending_move, word, i),
    })),
  });
  return [row("u", arena.u, 0), row("v", arena.v, 1)];
}

function intRows(state: GameState, arena: IntArena): Row[] {
  const row = (word: "U" | "V", labels: string[], sideIndex: 0 | 1): Row => ({
    word,
    tiles: labels.map((label, i) => ({
      label,
      upset: [],
      tokens: tokensAt(state.pairs, sideIndex, i),
      pending: pendingAt(state.pending_move, word, i),
    })),
  });
  return [
    row("U", arena.u.map(String), 0),
    row("V", arena.V.map(([a, b]) => `(${a},${b})`), 1),
  ];
}

function graphViews(state: GameState, arena: GraphArena): GraphView[] {
  const view = (word: "u" | "v", g: GraphArena["g1"], sideIndex: 0 | 1): GraphView => {
    const sources = new Set(g.sources);
    return {
      word,
      directed: g.directed,
      edges: g.edges,
      vertices: Array.from({ length: g.vertices }, (_, id) => ({
        id,
        role: sources.has(id) ? "source" : "square",
        tokens: tokensAt(state.pairs, sideIndex, id),
        pending: pendingAt(state.pending_move, word, id),
      })),
    };
  };
  return [view("u", arena.g1, 0), view("v", arena.g2, 1)];
}

export function viewState(state: GameState, banner: string | null = null): ViewState {
  let rows: Row[] = [];
  let graphs: GraphView[] = [];
  if (isWordArena(state.arena)) {
    rows = wordRows(state, state.arena);
  } else if (isGraphArena(state.arena)) {
    graphs = graphViews(state, state.arena);
  } else {
    rows = intRows(state, state.arena);
  }
  let computed = banner;
  if (computed === null) {
    if (state.status === "spoiler_won") computed = "Spoiler wins";
    else if (state.status === "duplicator_won") computed = "Duplicator wins";
  }
  return {
    sessionId: state.id,
    kind: state.kind,
    status: state.status,
    turn: state.turn,
    humanSide: state.human_side,
    roundsPlayed: state.rounds_played,
    rounds: state.rounds,
    rows,
    graphs,
    banner: computed,
  };
}

/** Client-side mirror of the server's bounds check: which row/position pairs
 * the human may submit right now. Never replaces server validation. */
export function clickableMoves(state: GameState): MoveRef[] {
  if (state.status !== "ongoing" || state.turn !== state.human_side) return [];
  const sizes = new Map<string, number>();
  if (isWordArena(state.arena)) {
    sizes.set("u", state.arena.u.length);
    sizes.set("v", state.arena.v.length);
  } else if (isGraphArena(state.arena)) {
    sizes.set("u", state.arena.g1.vertices);
    sizes.set("v", state.arena.g2.vertices);
  } else {
    sizes.set("U", state.arena.u.length);
    sizes.set("V", state.arena.V.length);
  }
  const words: string[] = [];
  if (state.human_side === "spoiler") {
    words.push(...sizes.keys());
  } else if (state.pending_move) {
    for (const w of sizes.keys()) {
      if (w !== state.pending_move.word) words.push(w);
    }
  }
  const out: MoveRef[] = [];
  for (const word of words) {
    const n = sizes.get(word) ?? 0;
    for (let position = 0; position < n; position++) {
      out.push({ word, position });
    }
  }
  return out;
}
