/** Canned server payloads for tests, shaped exactly like the service's
 * JSON (schemas carry "v": 1). The word fixture mirrors the lemma44-n1
 * preset: |u| = 6, |v| = 5, one round, Duplicator wins with best play. */

import type { GameState, Preset } from "./api.js";

export const P3 = { powerset_of: ["a", "b", "c"] };

export const LEMMA44_N1_ARENA = {
  alphabet: P3,
  u: ["{a}", "{b}", "{c}", "{a}", "{b}", "{c}"],
  v: ["{a}", "{b}", "{a}", "{b}", "{c}"],
};

export const WORD_PRESET: Preset = {
  name: "lemma44-n1",
  kind: "word",
  rounds: 1,
  arena: LEMMA44_N1_ARENA,
};

export function freshWordState(overrides: Partial<GameState> = {}): GameState {
  return {
    v: 1,
    id: "s1",
    kind: "word",
    human_side: "spoiler",
    rounds: 1,
    rounds_played: 0,
    status: "ongoing",
    arena: LEMMA44_N1_ARENA,
    history: [],
    pairs: [],
    pending_move: null,
    turn: "spoiler",
    ...overrides,
  };
}

export const INT_ARENA = {
  v: 1,
  n: 1,
  u: [1, 0],
  V: [[1, 0]] as [number, number][],
  orientation: "standard",
};

export const GRAPH_ARENA = {
  g1: {
    v: 1,
    directed: true,
    vertices: 4,
    edges: [[0, 3], [0, 1]] as [number, number][],
    sources: [0, 1, 2],
  },
  g2: {
    v: 1,
    directed: true,
    vertices: 4,
    edges: [[1, 3], [1, 2]] as [number, number][],
    sources: [0, 1, 2],
  },
};
