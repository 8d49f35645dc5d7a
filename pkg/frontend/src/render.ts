/** HTML rendering of a ViewState. Pure string output so it is testable
 * without a DOM; main.ts assigns the result to innerHTML. */

import type { Row, GraphView, ViewState } from "./state.js";

function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function renderRow(row: Row): string {
  const tiles = row.tiles
    .map((t, i) => {
      const classes = ["tile"];
      if (t.tokens.length) classes.push("tokened");
      if (t.pending) classes.push("pending");
      const badge = t.upset.length
        ? ` title="below: ${esc(t.upset.join(" "))}"`
        : "";
      const tokens = t.tokens.map((r) => `<sup>${r}</sup>`).join("");
      return (
        `<button class="${classes.join(" ")}" data-word="${esc(row.word)}" ` +
        `data-position="${i}"${badge}>${esc(t.label)}${tokens}</button>`
      );
    })
    .join("");
  return `<div class="row" data-row="${esc(row.word)}">` +
    `<span class="row-name">${esc(row.word)}</span>${tiles}</div>`;
}

function renderGraph(g: GraphView): string {
  const nodes = g.vertices
    .map((v) => {
      const classes = ["node", v.role];
      if (v.tokens.length) classes.push("tokened");
      if (v.pending) classes.push("pending");
      const tokens = v.tokens.map((r) => `<sup>${r}</sup>`).join("");
      return (
        `<button class="${classes.join(" ")}" data-word="${esc(g.word)}" ` +
        `data-position="${v.id}">${v.id}${tokens}</button>`
      );
    })
    .join("");
  const edges = g.edges
    .map(([a, b]) => `<li>${a} ${g.directed ? "&rarr;" : "&mdash;"} ${b}</li>`)
    .join("");
  return (
    `<div class="graph" data-graph="${esc(g.word)}">` +
    `<span class="row-name">${esc(g.word)}</span>` +
    `<div class="nodes">${nodes}</div><ul class="edges">${edges}</ul></div>`
  );
}

export function render(view: ViewState): string {
  const header =
    `<header><span class="kind">${esc(view.kind)}</span> ` +
    `<span class="rounds">round ${view.roundsPlayed}/${view.rounds}</span> ` +
    `<span class="turn">${view.turn ? esc(view.turn) + " to move" : "game over"}</span>` +
    `</header>`;
  const banner = view.banner
    ? `<div class="banner">${esc(view.banner)}</div>`
    : "";
  const board = view.rows.length
    ? view.rows.map(renderRow).join("")
    : view.graphs.map(renderGraph).join("");
  return `${header}${banner}<main>${board}</main>`;
}
