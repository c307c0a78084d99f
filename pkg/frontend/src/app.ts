// Session driver: create (or attach to) a session, poll for the next
// query with backoff, render it, submit the user's selection, and show the
// final allocation. One request is in flight at a time.

import { SessionApi, SessionApiError } from "./api.js";
import type { CreateSessionRequest, Report } from "./types.js";
import {
  renderFailed,
  renderQuery,
  renderReport,
  renderServerError,
  renderWaiting,
} from "./view.js";

export interface AppOptions {
  pollSeconds?: number;
  maxPolls?: number;
}

export class SessionApp {
  private api: SessionApi;

  constructor(
    private root: HTMLElement,
    baseUrl: string,
    private opts: AppOptions = {},
  ) {
    this.api = new SessionApi(baseUrl);
  }

  async create(body: CreateSessionRequest): Promise<string> {
    return this.api.createSession(body);
  }

  /** Drive a session to completion, rendering as it goes. */
  async run(sessionId: string): Promise<Report> {
    const wait = this.opts.pollSeconds ?? 10;
    const maxPolls = this.opts.maxPolls ?? 10000;
    let answeredQuery = -1;
    for (let polls = 0; polls < maxPolls; polls++) {
      const state = await this.api.nextQuery(sessionId, wait);
      if (state.state === "done") {
        const report = await this.api.result(sessionId);
        renderReport(this.root, report);
        return report;
      }
      if (state.state === "failed") {
        renderFailed(this.root, state.error ?? "session failed");
        throw new Error(state.error ?? "session failed");
      }
      if (state.state === "awaiting-answer") {
        const query = state.query;
        if (query.query_id === answeredQuery) {
          continue; // our answer is still being processed
        }
        const selection = await this.collectSelection(sessionId, query);
        answeredQuery = query.query_id;
        void selection;
      } else {
        renderWaiting(this.root, "searching for balanced divisions...");
      }
    }
    throw new Error("poll budget exhausted");
  }

  private collectSelection(
    sessionId: string,
    query: import("./types.js").QueryWire,
  ): Promise<number[]> {
    return new Promise((resolve) => {
      const submit = async (selection: number[]) => {
        try {
          await this.api.submitAnswer(sessionId, query.query_id, selection);
          resolve(selection);
        } catch (err) {
          if (err instanceof SessionApiError && err.status === 422) {
            // violated rule named by the server; re-enable editing
            renderServerError(this.root, `${err.rule}: ${err.message}`);
            return;
          }
          if (err instanceof SessionApiError && err.status === 409) {
            resolve([]); // stale query: silently refresh via the poll loop
            return;
          }
          throw err;
        }
      };
      renderQuery(this.root, query, { onSubmit: (sel) => void submit(sel) });
    });
  }
}
