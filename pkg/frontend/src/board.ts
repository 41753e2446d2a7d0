// DOM renderer for a session view: grid-of-grids with mark, threat, and
// winning-subspace classes.  Pure build-from-state; the caller swaps the
// returned element in whole.  No optimism anywhere: what the server said is
// what gets drawn.

import { boardLayout, cellToPoint, MAX_GEOMETRIC_M } from "./codec.js";
import type { SessionView } from "./types.js";

export interface BoardHandlers {
  onCell?: (point: number) => void;
}

export function renderBoard(view: SessionView, handlers: BoardHandlers = {}): HTMLElement {
  if (view.m > MAX_GEOMETRIC_M) {
    return renderFlatFallback(view);
  }
  const layout = boardLayout(view.q, view.m);
  const p1 = new Set(view.a1);
  const p2 = new Set(view.a2);
  const winning = new Set(view.winning_subspace ?? []);
  const threatOf = new Map<number, "p1" | "p2">();
  const hot = new Set<number>();
  for (const side of ["p1", "p2"] as const) {
    for (const t of view.threats[side]) {
      for (const p of t.subspace) threatOf.set(p, side);
      for (const p of t.missing) hot.add(p);
    }
  }
  const finished = view.status !== "Ongoing";
  const lastPoints = new Set(view.move_log.slice(-2).map(([, p]) => p));

  const board = document.createElement("div");
  board.className = "board";
  board.dataset.q = String(view.q);
  board.dataset.m = String(view.m);
  if (finished) board.classList.add("board-finished");

  for (let oy = 0; oy < layout.outerRows; oy++) {
    const outerRow = document.createElement("div");
    outerRow.className = "outer-row";
    for (let ox = 0; ox < layout.outerCols; ox++) {
      const block = document.createElement("div");
      block.className = "block";
      block.style.gridTemplateColumns = `repeat(${layout.innerCols}, auto)`;
      for (let iy = 0; iy < layout.innerRows; iy++) {
        for (let ix = 0; ix < layout.innerCols; ix++) {
          const point = cellToPoint(layout, { innerX: ix, innerY: iy, outerX: ox, outerY: oy });
          block.appendChild(
            buildCell(point, { p1, p2, winning, threatOf, hot, lastPoints, finished }, handlers),
          );
        }
      }
      outerRow.appendChild(block);
    }
    board.appendChild(outerRow);
  }
  return board;
}

interface CellContext {
  p1: Set<number>;
  p2: Set<number>;
  winning: Set<number>;
  threatOf: Map<number, "p1" | "p2">;
  hot: Set<number>;
  lastPoints: Set<number>;
  finished: boolean;
}

function buildCell(point: number, ctx: CellContext, handlers: BoardHandlers): HTMLElement {
  const cell = document.createElement("button");
  cell.type = "button";
  cell.className = "cell";
  cell.dataset.point = String(point);
  if (ctx.p1.has(point)) {
    cell.classList.add("mark-p1");
    cell.textContent = "X";
  } else if (ctx.p2.has(point)) {
    cell.classList.add("mark-p2");
    cell.textContent = "O";
  } else {
    cell.textContent = "";
  }
  const threat = ctx.threatOf.get(point);
  if (threat) cell.classList.add(`threat-${threat}`);
  if (ctx.hot.has(point)) cell.classList.add("threat-hot");
  if (ctx.winning.has(point)) cell.classList.add("win-cell");
  if (ctx.lastPoints.has(point)) cell.classList.add("just-played");
  if (ctx.finished) {
    cell.disabled = true;
  } else if (handlers.onCell) {
    const cb = handlers.onCell;
    cell.addEventListener("click", () => cb(point));
  }
  return cell;
}

// m > 4: no geometric picture, just the occupancy lists and a notice.
function renderFlatFallback(view: SessionView): HTMLElement {
  const wrap = document.createElement("div");
  wrap.className = "board board-flat";
  const notice = document.createElement("p");
  notice.className = "flat-notice";
  notice.textContent = `no grid layout for m = ${view.m}; showing point lists`;
  const p1 = document.createElement("p");
  p1.textContent = `P1: [${view.a1.join(", ")}]`;
  const p2 = document.createElement("p");
  p2.textContent = `P2: [${view.a2.join(", ")}]`;
  wrap.append(notice, p1, p2);
  return wrap;
}

// Occupancy as drawn, for tests and for the round-trip check: point ids
// carrying each mark, sorted ascending.
export function renderedOccupancy(board: HTMLElement): { p1: number[]; p2: number[] } {
  const collect = (selector: string) =>
    Array.from(board.querySelectorAll<HTMLElement>(selector))
      .map((el) => Number(el.dataset.point))
      .sort((a, b) => a - b);
  return { p1: collect(".mark-p1"), p2: collect(".mark-p2") };
}

export function renderedWinningCells(board: HTMLElement): number[] {
  return Array.from(board.querySelectorAll<HTMLElement>(".win-cell"))
    .map((el) => Number(el.dataset.point))
    .sort((a, b) => a - b);
}
