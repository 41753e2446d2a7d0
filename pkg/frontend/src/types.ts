// Server payload shapes, verbatim from the JSON API.

export type PlayerName = "P1" | "P2";
export type StatusName = "Ongoing" | "P1Won" | "P2Won" | "Draw";

export interface Threat {
  subspace: number[];
  missing: number[];
}

export interface SessionView {
  id: string;
  q: number;
  m: number;
  n: number;
  a1: number[];
  a2: number[];
  to_move: PlayerName;
  status: StatusName;
  threats: { p1: Threat[]; p2: Threat[] };
  move_log: [PlayerName, number][];
  winning_subspace: number[] | null;
  engine: string;
  human_side: PlayerName;
  // present only on move responses: the engine's immediate answer, if any
  engine_reply?: number | null;
}

export interface BoardSpec {
  m: number;
  n: number;
  q: number;
}

export interface EngineSpec {
  kind: string;
  note?: string;
  q_parity?: "even" | "odd";
  board?: string;
}

export interface SpecsPayload {
  grid: BoardSpec[];
  engines: EngineSpec[];
}

export interface HintPayload {
  point: number;
  heuristic: boolean;
  outcome_if_optimal?: string;
}

export interface CreateSessionRequest {
  m: number;
  n: number;
  q: number;
  engine?: string;
  human_side?: PlayerName;
  seed?: number;
}
