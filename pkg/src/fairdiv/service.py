"""HTTP session service.

Endpoints:
    POST /sessions                  create a session
    GET  /sessions/{id}/next        pending query or session state
    POST /sessions/{id}/answers     submit a selection
    GET  /sessions/{id}/result      final report when done
    GET  /sessions/{id}/log         accepted-answer log (for replay)
    GET  /healthz

All rationals on the wire are "p/q" strings; divisions additionally carry
4-decimal approximations for display. Exact values are authoritative.
"""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import solver
from .oracles import InvalidSelectionError, random_profile
from .serialize import parse_frac, parse_profile
from .sessions import (
    STATE_DONE,
    STATE_FAILED,
    SessionError,
    SessionManager,
    StaleQueryError,
)

# Interactive sessions default to small searches: humans cannot answer
# thousands of queries.
INTERACTIVE_DEFAULTS = {"mesh": 1, "rounds": 2}


def _error(status: int, message: str, **extra):
    return JSONResponse({"error": message, **extra}, status_code=status)


def build_spec(body: dict) -> tuple[solver.ProblemSpec, object, list[str]]:
    mode = body.get("mode")
    n = int(body["n"])
    k = int(body["k"])
    players = body.get("players")
    if isinstance(players, int):
        players = [f"p{i+1}" for i in range(players)]
    players = [str(p) for p in players]
    interactive = [str(p) for p in body.get("interactive", [])]
    seed = body.get("seed")
    mesh = int(body.get("mesh", INTERACTIVE_DEFAULTS["mesh"]))
    rounds = int(body.get("rounds", INTERACTIVE_DEFAULTS["rounds"]))
    epsilon = (
        parse_frac(body["epsilon"]) if "epsilon" in body else solver.DEFAULT_EPSILON
    )
    spec = solver.ProblemSpec(
        mode,
        n=n,
        k=k,
        players=tuple(players),
        mesh=mesh,
        max_rounds=rounds,
        epsilon=epsilon,
        seed=seed,
    )
    simulated = [p for p in players if p not in interactive]
    profile = None
    if simulated:
        if body.get("valuations"):
            profile = parse_profile(body["valuations"])
            missing = [p for p in simulated if p not in profile.players]
            if missing:
                raise ValueError(f"valuations missing for players: {missing}")
        else:
            if seed is None:
                raise ValueError("need a seed or a valuations file for simulated players")
            profile = random_profile(
                players, 1 if mode == solver.MODE_CAKE else k, int(seed)
            )
    return spec, profile, interactive


def create_app(manager: SessionManager | None = None) -> FastAPI:
    app = FastAPI(title="fairdiv session service")
    mgr = manager or SessionManager()
    app.state.manager = mgr

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions")
    async def create_session(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "request body is not valid JSON")
        try:
            spec, profile, interactive = build_spec(body)
            if not interactive:
                return _error(400, "interactive sessions need at least one interactive player")
            timeout_s = float(body.get("timeout_s", 600.0))
            session = mgr.create(spec, profile, interactive, timeout_s)
        except (KeyError, TypeError) as exc:
            return _error(400, f"missing or malformed field: {exc}")
        except (ValueError, solver.HypothesisError) as exc:
            return _error(400, str(exc))
        return {"session_id": session.id}

    def _session_or_none(sid):
        return mgr.get(sid)

    @app.get("/sessions/{sid}/next")
    def next_query(sid: str, wait: float = 10.0):
        session = _session_or_none(sid)
        if session is None:
            return _error(404, f"unknown session {sid}")
        return session.wait_settled(timeout_s=wait)

    @app.post("/sessions/{sid}/answers")
    async def submit_answer(sid: str, request: Request):
        session = _session_or_none(sid)
        if session is None:
            return _error(404, f"unknown session {sid}")
        try:
            body = await request.json()
            query_id = int(body["query_id"])
            selection = body["selection"]
        except Exception:
            return _error(400, "answer must carry query_id and selection")
        try:
            return session.submit(query_id, selection)
        except InvalidSelectionError as exc:
            return _error(422, str(exc), rule=exc.rule)
        except StaleQueryError as exc:
            return _error(409, str(exc))
        except SessionError as exc:
            return _error(409, str(exc))

    @app.get("/sessions/{sid}/result")
    def result(sid: str):
        session = _session_or_none(sid)
        if session is None:
            return _error(404, f"unknown session {sid}")
        st = session.status()
        if st["state"] == STATE_DONE:
            return {"state": STATE_DONE, "report": session.report}
        if st["state"] == STATE_FAILED:
            return _error(409, session.error or "failed", state=STATE_FAILED)
        return st

    @app.get("/sessions/{sid}/log")
    def answer_log(sid: str):
        session = _session_or_none(sid)
        if session is None:
            return _error(404, f"unknown session {sid}")
        return {"answers": session.answer_log}

    return app


app = create_app()
