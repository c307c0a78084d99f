import type {
  ApiError,
  CreateSessionRequest,
  Report,
  SessionState,
} from "./types.js";

export class SessionApiError extends Error {
  status: number;
  rule?: string;

  constructor(err: ApiError) {
    super(err.error);
    this.status = err.status;
    this.rule = err.rule;
  }
}

async function parseOrThrow<T>(res: Response): Promise<T> {
  if (res.ok) {
    return (await res.json()) as T;
  }
  let body: { error?: string; rule?: string } = {};
  try {
    body = await res.json();
  } catch {
    // non-JSON error body; fall through with the status text
  }
  throw new SessionApiError({
    status: res.status,
    error: body.error ?? res.statusText,
    rule: body.rule,
  });
}

export class SessionApi {
  constructor(private baseUrl: string) {}

  async createSession(body: CreateSessionRequest): Promise<string> {
    const res = await fetch(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    const data = await parseOrThrow<{ session_id: string }>(res);
    return data.session_id;
  }

  async nextQuery(sessionId: string, waitSeconds = 10): Promise<SessionState> {
    const res = await fetch(
      `${this.baseUrl}/sessions/${sessionId}/next?wait=${waitSeconds}`,
    );
    return parseOrThrow<SessionState>(res);
  }

  async submitAnswer(
    sessionId: string,
    queryId: number,
    selection: number[],
  ): Promise<void> {
    const res = await fetch(`${this.baseUrl}/sessions/${sessionId}/answers`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ query_id: queryId, selection }),
    });
    await parseOrThrow<unknown>(res);
  }

  async result(sessionId: string): Promise<Report> {
    const res = await fetch(`${this.baseUrl}/sessions/${sessionId}/result`);
    const data = await parseOrThrow<{ report: Report }>(res);
    return data.report;
  }
}
