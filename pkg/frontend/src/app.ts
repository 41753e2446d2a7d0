// Page wiring: pickers, session lifecycle, toasts, the victory banner.
// Every interaction ends by re-rendering from a server payload; the client
// keeps no board state of its own.

import { ApiClient, ApiError } from "./api.js";
import { renderBoard } from "./board.js";
import type { PlayerName, SessionView, SpecsPayload } from "./types.js";

const ENGINE_ORDER = ["ThreatGreedy", "Perfect", "PairingEven", "PairingOdd", "ESBreaker", "Random"];

export class App {
  view: SessionView | null = null;
  private root: HTMLElement;
  private api: ApiClient;
  private specs: SpecsPayload | null = null;
  private boardHost: HTMLElement;
  private statusLine: HTMLElement;
  private toastHost: HTMLElement;
  private banner: HTMLElement;
  private boardSelect: HTMLSelectElement;
  private engineSelect: HTMLSelectElement;
  private sideSelect: HTMLSelectElement;
  private hintButton: HTMLButtonElement;
  // serializes user actions so a click during a pending request waits its turn
  private chain: Promise<void> = Promise.resolve();

  constructor(root: HTMLElement, api: ApiClient) {
    this.root = root;
    this.api = api;
    root.innerHTML = "";

    const controls = document.createElement("div");
    controls.className = "controls";
    this.boardSelect = document.createElement("select");
    this.boardSelect.className = "board-select";
    this.engineSelect = document.createElement("select");
    this.engineSelect.className = "engine-select";
    this.sideSelect = document.createElement("select");
    this.sideSelect.className = "side-select";
    for (const side of ["P1", "P2"]) {
      const opt = document.createElement("option");
      opt.value = side;
      opt.textContent = `you play ${side}`;
      this.sideSelect.appendChild(opt);
    }
    const newGame = document.createElement("button");
    newGame.type = "button";
    newGame.className = "new-game";
    newGame.textContent = "new game";
    newGame.addEventListener("click", () => this.enqueue(() => this.newGameFromControls()));
    this.hintButton = document.createElement("button");
    this.hintButton.type = "button";
    this.hintButton.className = "hint";
    this.hintButton.textContent = "hint";
    this.hintButton.addEventListener("click", () => this.enqueue(() => this.showHint()));
    controls.append(this.boardSelect, this.engineSelect, this.sideSelect, newGame, this.hintButton);

    this.statusLine = document.createElement("p");
    this.statusLine.className = "status-line";
    this.statusLine.textContent = "pick a board and start";
    this.banner = document.createElement("div");
    this.banner.className = "banner";
    this.banner.hidden = true;
    this.boardHost = document.createElement("div");
    this.boardHost.className = "board-host";
    this.toastHost = document.createElement("div");
    this.toastHost.className = "toasts";

    root.append(controls, this.statusLine, this.banner, this.boardHost, this.toastHost);
  }

  // ------------------------------------------------------------------ setup

  async init(): Promise<void> {
    this.specs = await this.api.getSpecs();
    this.boardSelect.innerHTML = "";
    for (const b of this.specs.grid) {
      const opt = document.createElement("option");
      opt.value = `${b.q},${b.m},${b.n}`;
      opt.textContent = `(${b.m},${b.n}) over F_${b.q}  [${b.q ** b.m} cells]`;
      this.boardSelect.appendChild(opt);
    }
    this.boardSelect.value = "3,2,1"; // classical 3x3 by default
    this.boardSelect.addEventListener("change", () => this.refreshEngineOptions());
    this.refreshEngineOptions();
  }

  private refreshEngineOptions(): void {
    if (!this.specs) return;
    const [q] = this.boardSelect.value.split(",").map(Number);
    const prev = this.engineSelect.value;
    this.engineSelect.innerHTML = "";
    const kinds = [...this.specs.engines].sort(
      (a, b) => ENGINE_ORDER.indexOf(a.kind) - ENGINE_ORDER.indexOf(b.kind),
    );
    for (const e of kinds) {
      // pairing engines only exist for one field parity
      if (e.q_parity === "even" && q! % 2 !== 0) continue;
      if (e.q_parity === "odd" && q! % 2 !== 1) continue;
      const opt = document.createElement("option");
      opt.value = e.kind;
      opt.textContent = e.note ? `${e.kind} (${e.note})` : e.kind;
      this.engineSelect.appendChild(opt);
    }
    const values = Array.from(this.engineSelect.options).map((o) => o.value);
    this.engineSelect.value = values.includes(prev) ? prev : "ThreatGreedy";
  }

  // ------------------------------------------------------------ game actions

  enqueue(action: () => Promise<void>): Promise<void> {
    this.chain = this.chain.then(action, action);
    return this.chain;
  }

  idle(): Promise<void> {
    return this.chain;
  }

  private async newGameFromControls(): Promise<void> {
    const [q, m, n] = this.boardSelect.value.split(",").map(Number);
    await this.newGame({
      q: q!,
      m: m!,
      n: n!,
      engine: this.engineSelect.value,
      human_side: this.sideSelect.value as PlayerName,
    });
  }

  async newGame(req: { q: number; m: number; n: number; engine: string; human_side: PlayerName }): Promise<void> {
    try {
      const view = await this.api.createSession(req);
      this.banner.hidden = true;
      this.applyView(view);
    } catch (err) {
      this.toastError(err);
    }
  }

  async clickCell(point: number): Promise<void> {
    if (!this.view || this.view.status !== "Ongoing") return;
    try {
      const view = await this.api.postMove(this.view.id, point);
      this.applyView(view);
    } catch (err) {
      // 409/422: the board is untouched, just surface the reason
      this.toastError(err);
    }
  }

  private async showHint(): Promise<void> {
    if (!this.view) return;
    try {
      const hint = await this.api.getHint(this.view.id);
      const grade = hint.heuristic ? "heuristic" : `exact, ${hint.outcome_if_optimal}`;
      this.toast(`hint: point ${hint.point} (${grade})`, "info");
      this.boardHost
        .querySelector(`[data-point="${hint.point}"]`)
        ?.classList.add("hint-cell");
    } catch (err) {
      this.toastError(err);
    }
  }

  // -------------------------------------------------------------- rendering

  private applyView(view: SessionView): void {
    this.view = view;
    const board = renderBoard(view, {
      onCell: (point) => void this.enqueue(() => this.clickCell(point)),
    });
    this.boardHost.innerHTML = "";
    this.boardHost.appendChild(board);
    this.statusLine.textContent = this.describe(view);
    if (view.status !== "Ongoing") {
      this.banner.hidden = false;
      this.banner.textContent =
        view.status === "Draw"
          ? "draw: the board filled with no winner"
          : view.status === (view.human_side === "P1" ? "P1Won" : "P2Won")
            ? "you win"
            : `${view.engine} wins`;
    }
  }

  private describe(view: SessionView): string {
    const base = `(${view.m},${view.n}) over F_${view.q} vs ${view.engine}, you are ${view.human_side}`;
    if (view.status !== "Ongoing") return `${base}, finished: ${view.status}`;
    const turn = view.to_move === view.human_side ? "your move" : "engine thinking";
    return `${base}, ${turn}`;
  }

  private toast(message: string, kind: "info" | "error"): void {
    const el = document.createElement("div");
    el.className = `toast toast-${kind}`;
    el.textContent = message;
    this.toastHost.appendChild(el);
    setTimeout(() => el.remove(), 4000);
  }

  private toastError(err: unknown): void {
    if (err instanceof ApiError) {
      this.toast(`${err.status}: ${err.detail}`, "error");
    } else {
      this.toast(String(err), "error");
    }
  }
}

export async function mountApp(root: HTMLElement, api = new ApiClient()): Promise<App> {
  const app = new App(root, api);
  await app.init();
  return app;
}
