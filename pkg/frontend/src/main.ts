// Entry point: a small create-session form, then the query/report flow.

import { SessionApp } from "./app.js";

function param(name: string): string | null {
  return new URL(window.location.href).searchParams.get(name);
}

async function boot() {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const baseUrl = param("api") ?? "";
  const app = new SessionApp(root, baseUrl);

  const existing = param("session");
  if (existing) {
    await app.run(existing);
    return;
  }

  const form = document.getElementById("create-form") as HTMLFormElement | null;
  if (!form) return;
  form.addEventListener("submit", async (ev) => {
    ev.preventDefault();
    const data = new FormData(form);
    const sessionId = await app.create({
      mode: "shifts",
      n: Number(data.get("rooms") ?? 3),
      k: Number(data.get("buildings") ?? 2),
      players: Number(data.get("players") ?? 5),
      interactive: [String(data.get("you") ?? "p1")],
      seed: Number(data.get("seed") ?? 0),
      mesh: 1,
      rounds: 2,
      epsilon: "3/10",
    });
    history.replaceState(null, "", `?session=${sessionId}`);
    form.hidden = true;
    await app.run(sessionId);
  });
}

void boot();
