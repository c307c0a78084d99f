// Wire types for the session API. Rationals arrive as "p/q" strings with
// float approximations alongside; the exact strings are authoritative and
// the client only does display arithmetic.

export type Mode = "subset" | "one-per-factor" | "one-per-factor-prefer-empty";

export interface DivisionWire {
  exact: string[][];
  approx: number[][];
}

export interface QueryWire {
  query_id: number;
  player: string;
  mode: Mode;
  k: number;
  division: DivisionWire;
  supports: number[][];
  empties: number[][];
}

export type SessionState =
  | { state: "scanning"; session_id: string }
  | { state: "awaiting-answer"; session_id: string; query: QueryWire }
  | { state: "done"; session_id: string; answered?: number }
  | { state: "failed"; session_id: string; error?: string };

export interface OutcomeEntry {
  player: string;
  selection: number[];
}

export interface Report {
  mode: string;
  n: number;
  k: number;
  p: number;
  division: string[][];
  bound: { guaranteed: number; achieved: number; form: string };
  satisfied?: OutcomeEntry[];
  cover?: OutcomeEntry[];
  flags: { unstable: boolean; tie_hit: boolean };
}

export interface CreateSessionRequest {
  mode: string;
  n: number;
  k: number;
  players: number | string[];
  interactive: string[];
  seed?: number;
  mesh?: number;
  rounds?: number;
  epsilon?: string;
  timeout_s?: number;
  valuations?: unknown;
}

export interface ApiError {
  status: number;
  error: string;
  rule?: string;
}
