/** End-to-end arena flow against a mocked server: create a preset game,
 * one legal and one illegal move, hint legality, and the finished winner
 * matching the batch solver verdict for the same arena (Duplicator wins
 * the 1-round lemma44-n1 game; value frozen from the exact solver). */

import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiError, ArenaClient, type GameState } from "./api.js";
import { freshWordState, WORD_PRESET } from "./fixtures.js";
import { render } from "./render.js";
import { clickableMoves, viewState } from "./state.js";

const BATCH_VERDICT = "duplicator_won";

/** Minimal stateful double of the game service for the word preset. */
function mockServer() {
  let state: GameState | null = null;

  const json = (body: unknown, status = 200) =>
    new Response(JSON.stringify(body), { status });

  return async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const body = init?.body ? JSON.parse(String(init.body)) : null;
    if (url.endsWith("/api/presets")) {
      return json({ v: 1, presets: [WORD_PRESET] });
    }
    if (url.endsWith("/api/games") && init?.method === "POST") {
      if (body.preset !== "lemma44-n1") {
        return json({ detail: "unknown preset" }, 404);
      }
      state = freshWordState({ human_side: body.human_side ?? "spoiler" });
      return json({ v: 1, id: state.id, state }, 201);
    }
    if (url.endsWith("/api/games/s1/hint")) {
      // any first Spoiler move is answerable; the engine suggests u0
      return json({ v: 1, hint: { word: "u", position: 0 } });
    }
    if (url.endsWith("/api/games/s1/move")) {
      if (!state || state.status !== "ongoing") {
        return json({ detail: "game is finished" }, 409);
      }
      const size = body.word === "u" ? 6 : 5;
      if (body.word !== "u" && body.word !== "v") {
        return json({ detail: "word must be one of ['u', 'v']" }, 409);
      }
      if (body.position < 0 || body.position >= size) {
        return json({ detail: `position ${body.position} out of range` }, 409);
      }
      // engine Duplicator answers position-for-position; 1 round ends it
      const reply = { word: body.word === "u" ? "v" : "u", position: 0 };
      state = {
        ...state,
        pairs: [body.word === "u" ? [body.position, 0] : [0, body.position]],
        rounds_played: 1,
        status: BATCH_VERDICT,
        turn: null,
        history: [
          { side: "spoiler", word: body.word, position: body.position },
          { side: "duplicator", ...reply },
        ],
      };
      return json({ v: 1, state, legal: true, engine_reply: reply });
    }
    return json({ detail: "unknown route" }, 404);
  };
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("arena flow (criterion: preset, legal + illegal move, hint, winner)", () => {
  it("plays a full game whose winner matches the batch verdict", async () => {
    vi.stubGlobal("fetch", vi.fn(mockServer()));
    const client = new ArenaClient();

    const presets = await client.listPresets();
    expect(presets.map((p) => p.name)).toContain("lemma44-n1");

    let state = await client.newGame({
      preset: "lemma44-n1",
      human_side: "spoiler",
    });
    expect(state.status).toBe("ongoing");
    expect(viewState(state).rows[0].tiles).toHaveLength(6);

    // the hint is a move the UI considers clickable (legal by contract)
    const hint = await client.hint(state.id);
    expect(hint).not.toBe("unknown");
    expect(hint).not.toBeNull();
    expect(clickableMoves(state)).toContainEqual(hint);

    // an illegal (out-of-bounds) move is rejected and mutates nothing
    const err = await client
      .playMove(state.id, { word: "u", position: 99 })
      .then(
        () => null,
        (e) => e,
      );
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(409);
    const unchanged = viewState(state, String((err as ApiError).message));
    expect(unchanged.status).toBe("ongoing");
    expect(unchanged.banner).toContain("out of range");

    // the legal (hinted) move finishes the 1-round game
    const res = await client.playMove(state.id, hint as { word: string; position: number });
    expect(res.legal).toBe(true);
    expect(res.engine_reply).not.toBeNull();
    state = res.state;
    expect(state.status).toBe(BATCH_VERDICT);

    const finalView = viewState(state);
    expect(finalView.banner).toBe("Duplicator wins");
    const html = render(finalView);
    expect(html).toContain("Duplicator wins");
    expect(html).toContain("round 1/1");
  });

  it("renders token overlays for the played round", async () => {
    vi.stubGlobal("fetch", vi.fn(mockServer()));
    const client = new ArenaClient();
    const state = await client.newGame({ preset: "lemma44-n1" });
    const res = await client.playMove(state.id, { word: "u", position: 2 });
    const view = viewState(res.state);
    expect(view.rows[0].tiles[2].tokens).toEqual([1]);
    const html = render(view);
    expect(html).toContain("<sup>1</sup>");
  });
});
