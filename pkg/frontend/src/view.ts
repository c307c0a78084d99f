// DOM rendering for one query at a time plus the final allocation table.
// Selections are drafted locally; the submit button stays disabled until
// the draft arity matches the query mode. Rule warnings (a priced room
// drafted while a free room exists) surface inline before submission, but
// the server stays the authority for hungry / prefer-empty.

import type { Mode, OutcomeEntry, QueryWire, Report } from "./types.js";

export type Draft = Array<number | null> | Set<number>;

export interface QueryHandlers {
  onSubmit: (selection: number[]) => void;
}

export function requiredArity(query: QueryWire): number {
  if (query.mode === "subset") {
    return Math.min(query.k, query.supports[0].length);
  }
  return query.division.exact.length;
}

export function draftComplete(query: QueryWire, draft: Draft): boolean {
  if (draft instanceof Set) {
    return draft.size === requiredArity(query);
  }
  return draft.every((c) => c !== null);
}

export function draftWarnings(query: QueryWire, draft: Draft): string[] {
  const warnings: string[] = [];
  if (query.mode === "one-per-factor-prefer-empty" && !(draft instanceof Set)) {
    draft.forEach((choice, f) => {
      const empties = query.empties[f];
      if (choice !== null && empties.length > 0 && !empties.includes(choice)) {
        warnings.push(
          `building ${f + 1}: room ${choice + 1} is priced but a free room exists`,
        );
      }
    });
  }
  return warnings;
}

export function draftSelection(query: QueryWire, draft: Draft): number[] {
  if (draft instanceof Set) {
    return [...draft].sort((a, b) => a - b);
  }
  return draft.map((c) => c as number);
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function cardLabel(query: QueryWire, f: number, i: number): string {
  const exact = query.division.exact[f][i];
  const approx = query.division.approx[f][i].toFixed(4);
  return `${exact} (~${approx})`;
}

export function renderQuery(
  root: HTMLElement,
  query: QueryWire,
  handlers: QueryHandlers,
): void {
  const doc = root.ownerDocument;
  root.innerHTML = "";
  const container = el(doc, "div", "query");
  container.dataset.queryId = String(query.query_id);

  container.appendChild(
    el(
      doc,
      "h2",
      "query-title",
      `${query.player}: pick ${
        query.mode === "subset" ? `${requiredArity(query)} pieces` : "one per row"
      }`,
    ),
  );

  const tuple = query.mode !== "subset";
  const draft: Draft = tuple
    ? new Array(query.division.exact.length).fill(null)
    : new Set<number>();

  const warnBox = el(doc, "div", "rule-warning");
  const errorBox = el(doc, "div", "server-error");
  const submit = el(doc, "button", "submit", "submit selection");
  submit.disabled = true;

  const refresh = () => {
    submit.disabled = !draftComplete(query, draft);
    warnBox.textContent = draftWarnings(query, draft).join("; ");
  };

  query.division.exact.forEach((factor, f) => {
    const row = el(doc, "div", "factor-row");
    row.dataset.factor = String(f);
    factor.forEach((_, i) => {
      const card = el(doc, "button", "room-card", `room ${i + 1}`);
      card.dataset.factor = String(f);
      card.dataset.piece = String(i);
      card.appendChild(el(doc, "span", "price", cardLabel(query, f, i)));
      if (query.empties[f].includes(i)) {
        card.appendChild(el(doc, "span", "free-badge", "free"));
      }
      card.addEventListener("click", () => {
        if (draft instanceof Set) {
          if (draft.has(i)) {
            draft.delete(i);
            card.classList.remove("selected");
          } else if (draft.size < requiredArity(query)) {
            draft.add(i);
            card.classList.add("selected");
          }
        } else {
          draft[f] = i;
          for (const other of row.querySelectorAll(".room-card")) {
            other.classList.remove("selected");
          }
          card.classList.add("selected");
        }
        refresh();
      });
      row.appendChild(card);
    });
    container.appendChild(row);
  });

  submit.addEventListener("click", () => {
    if (!draftComplete(query, draft)) {
      return; // belt and braces: the button should be disabled
    }
    handlers.onSubmit(draftSelection(query, draft));
  });

  container.appendChild(warnBox);
  container.appendChild(errorBox);
  container.appendChild(submit);
  root.appendChild(container);
}

export function renderServerError(root: HTMLElement, message: string): void {
  const box = root.querySelector(".server-error");
  if (box) box.textContent = message;
  const submit = root.querySelector<HTMLButtonElement>("button.submit");
  if (submit) submit.disabled = false;
}

export function renderWaiting(root: HTMLElement, note: string): void {
  root.innerHTML = "";
  root.appendChild(el(root.ownerDocument, "p", "waiting", note));
}

export function renderFailed(root: HTMLElement, message: string): void {
  root.innerHTML = "";
  root.appendChild(el(root.ownerDocument, "p", "failed", message));
}

export function renderReport(root: HTMLElement, report: Report): void {
  const doc = root.ownerDocument;
  root.innerHTML = "";
  const box = el(doc, "div", "report");
  const rows: OutcomeEntry[] = report.cover ?? report.satisfied ?? [];
  box.appendChild(
    el(
      doc,
      "h2",
      "report-title",
      `${rows.length} ${report.cover ? "renters cover every room" : "players satisfied"}`,
    ),
  );
  const table = el(doc, "table", "allocation");
  const head = el(doc, "tr");
  head.appendChild(el(doc, "th", undefined, "player"));
  report.division.forEach((_, f) => {
    head.appendChild(el(doc, "th", undefined, `building ${f + 1}`));
  });
  table.appendChild(head);
  for (const entry of rows) {
    const tr = el(doc, "tr", "allocation-row");
    tr.dataset.player = entry.player;
    tr.appendChild(el(doc, "td", undefined, entry.player));
    entry.selection.forEach((room) => {
      tr.appendChild(el(doc, "td", "assigned-room", `room ${room + 1}`));
    });
    table.appendChild(tr);
  }
  box.appendChild(table);
  root.appendChild(box);
}
