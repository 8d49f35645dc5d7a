/** Browser bootstrap: wires the API client, the pure view model, and the
 * HTML renderer to one active session per tab. */

import { ApiError, ArenaClient, type GameState, type Side } from "./api.js";
import { render } from "./render.js";
import { clickableMoves, viewState } from "./state.js";

const client = new ArenaClient("");
const root = document.getElementById("app") as HTMLElement;
const controls = document.getElementById("controls") as HTMLElement;

let current: GameState | null = null;

function draw(banner: string | null = null): void {
  if (!current) return;
  root.innerHTML = render(viewState(current, banner));
  const allowed = new Set(
    clickableMoves(current).map((m) => `${m.word}:${m.position}`),
  );
  root.querySelectorAll<HTMLButtonElement>("button[data-word]").forEach((b) => {
    const key = `${b.dataset.word}:${b.dataset.position}`;
    b.disabled = !allowed.has(key);
    b.addEventListener("click", () =>
      play(b.dataset.word as string, Number(b.dataset.position)),
    );
  });
}

async function play(word: string, position: number): Promise<void> {
  if (!current) return;
  try {
    const res = await client.playMove(current.id, { word, position });
    current = res.state;
    draw();
  } catch (err) {
    if (err instanceof ApiError) {
      // a violation 409 carries the finished state; others leave state alone
      if (err.state) current = err.state;
      draw(
        err.violation
          ? `illegal: ${err.violation} clause`
          : String(err.message),
      );
      return;
    }
    throw err;
  }
}

async function newGame(preset: string, side: Side): Promise<void> {
  current = await client.newGame({ preset, human_side: side });
  draw();
}

async function showHint(): Promise<void> {
  if (!current) return;
  const hint = await client.hint(current.id);
  if (hint === "unknown") draw("hint: unknown (solver cap exceeded)");
  else if (hint === null) draw("hint: no saving move");
  else draw(`hint: ${hint.word} position ${hint.position}`);
}

async function init(): Promise<void> {
  const presets = await client.listPresets();
  controls.innerHTML =
    `<select id="preset">` +
    presets.map((p) => `<option>${p.name}</option>`).join("") +
    `</select>` +
    `<select id="side"><option>spoiler</option><option>duplicator</option></select>` +
    `<button id="start">new game</button>` +
    `<button id="hint">hint</button>`;
  (document.getElementById("start") as HTMLButtonElement).addEventListener(
    "click",
    () => {
      const preset = (document.getElementById("preset") as HTMLSelectElement)
        .value;
      const side = (document.getElementById("side") as HTMLSelectElement)
        .value as Side;
      void newGame(preset, side);
    },
  );
  (document.getElementById("hint") as HTMLButtonElement).addEventListener(
    "click",
    () => void showHint(),
  );
}

void init();
