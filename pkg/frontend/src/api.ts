/** Typed client for the foplus game service. All game logic stays on the
 * server; this module only shapes requests and decodes responses. */

export type GameKind = "word" | "graph" | "integer";
export type Side = "spoiler" | "duplicator";
export type Status = "ongoing" | "spoiler_won" | "duplicator_won";

export interface AlphabetJson {
  powerset_of?: string[];
  letters?: string[];
  order?: [string, string][];
}

export interface WordArena {
  alphabet: AlphabetJson;
  u: string[];
  v: string[];
}

export interface GraphJson {
  v: number;
  directed: boolean;
  vertices: number;
  edges: [number, number][];
  sources: number[];
}

export interface GraphArena {
  g1: GraphJson;
  g2: GraphJson;
}

export interface IntArena {
  v: number;
  n: number;
  u: number[];
  V: [number, number][];
  orientation: string;
}

export type Arena = WordArena | GraphArena | IntArena;

export interface MoveRef {
  word: string;
  position: number;
}

export interface HistoryEntry extends MoveRef {
  side: Side;
  violation?: string;
}

export interface GameState {
  v: number;
  id: string;
  kind: GameKind;
  human_side: Side;
  rounds: number;
  rounds_played: number;
  status: Status;
  arena: Arena;
  history: HistoryEntry[];
  pairs: [number, number][];
  pending_move: MoveRef | null;
  turn: Side | null;
}

export interface Preset {
  name: string;
  kind: GameKind;
  rounds: number;
  arena: Arena;
}

export interface MoveResponse {
  state: GameState;
  legal: boolean;
  engine_reply: MoveRef | null;
}

export type Hint = MoveRef | "unknown" | null;

/** Raised for non-2xx responses; a 409 on an invalid Duplicator placement
 * carries the violated clause and the updated state in `detail`. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(typeof detail === "string" ? detail : `HTTP ${status}`);
  }

  get violation(): string | null {
    if (this.detail && typeof this.detail === "object") {
      const v = (this.detail as Record<string, unknown>).violation;
      if (typeof v === "string") return v;
    }
    return null;
  }

  get state(): GameState | null {
    if (this.detail && typeof this.detail === "object") {
      const s = (this.detail as Record<string, unknown>).state;
      if (s && typeof s === "object") return s as GameState;
    }
    return null;
  }
}

async function request<T>(
  base: string,
  path: string,
  init?: RequestInit,
): Promise<T> {
  const res = await fetch(base + path, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  const body = await res.json().catch(() => null);
  if (!res.ok) {
    const detail =
      body && typeof body === "object" && "detail" in body
        ? (body as { detail: unknown }).detail
        : body;
    throw new ApiError(res.status, detail);
  }
  return body as T;
}

export class ArenaClient {
  constructor(readonly base: string = "") {}

  async listPresets(): Promise<Preset[]> {
    const body = await request<{ presets: Preset[] }>(this.base, "/api/presets");
    return body.presets;
  }

  async newGame(options: {
    preset?: string;
    kind?: GameKind;
    arena?: Arena;
    rounds?: number;
    human_side?: Side;
  }): Promise<GameState> {
    const body = await request<{ id: string; state: GameState }>(
      this.base,
      "/api/games",
      { method: "POST", body: JSON.stringify(options) },
    );
    return body.state;
  }

  getGame(id: string): Promise<GameState> {
    return request<GameState>(this.base, `/api/games/${id}`);
  }

  playMove(id: string, move: MoveRef): Promise<MoveResponse> {
    return request<MoveResponse>(this.base, `/api/games/${id}/move`, {
      method: "POST",
      body: JSON.stringify(move),
    });
  }

  async hint(id: string): Promise<Hint> {
    const body = await request<{ hint: Hint }>(
      this.base,
      `/api/games/${id}/hint`,
    );
    return body.hint;
  }
}
