"""Live solve sessions: one query at a time to human players.

A session runs the solver in a worker thread. When a label is needed for an
interactive player, the worker publishes the query and blocks until the
session receives a valid answer; invalid answers (hungry / prefer-empty /
arity violations) are rejected with the violated rule named and the query
stays pending, so human intent is never silently rewritten. Every accepted
answer is appended to a log from which the session can be replayed.
"""
from __future__ import annotations

import threading
import time
from dataclasses import dataclass

from . import solver
from .geometry import PolytopePoint, support, empty_set
from .oracles import (
    MODE_SUBSET,
    SimulatedOracle,
    ValuationProfile,
    validate_selection,
)
from .serialize import point_approx, point_json

STATE_SCANNING = "scanning"
STATE_AWAITING = "awaiting-answer"
STATE_DONE = "done"
STATE_FAILED = "failed"


class SessionError(RuntimeError):
    pass


class StaleQueryError(SessionError):
    pass


class SessionTimeoutError(SessionError):
    pass


@dataclass
class PendingQuery:
    query_id: int
    player: str
    mode: str
    k: int
    division: PolytopePoint

    def to_json(self):
        return {
            "query_id": self.query_id,
            "player": self.player,
            "mode": self.mode,
            "k": self.k,
            "division": {
                "exact": point_json(self.division),
                "approx": point_approx(self.division),
            },
            "supports": [sorted(support(f)) for f in self.division.factors],
            "empties": [sorted(empty_set(f)) for f in self.division.factors],
        }


class _SessionOracle:
    """Routes selections to the simulated profile or to the human queue."""

    def __init__(self, session, profile: ValuationProfile | None, interactive):
        self.session = session
        self.simulated = SimulatedOracle(profile) if profile else None
        self.interactive = frozenset(interactive)
        self._cache: dict = {}

    def select(self, player, mode, division, k):
        if player not in self.interactive:
            return self.simulated.select(player, mode, division, k)
        key = (player, mode, division)
        hit = self._cache.get(key)
        if hit is None:
            hit = self.session._ask_human(player, mode, division, k)
            self._cache[key] = hit
        return hit

    def ties(self, player, mode, division, k):
        if player not in self.interactive:
            return self.simulated.ties(player, mode, division, k)
        return False  # a human's indifference is not observable


class Session:
    """State machine: scanning -> awaiting-answer -> ... -> done | failed."""

    def __init__(
        self,
        session_id: str,
        spec: solver.ProblemSpec,
        profile: ValuationProfile | None,
        interactive,
        timeout_s: float = 600.0,
    ):
        missing = [p for p in interactive if p not in spec.players]
        if missing:
            raise ValueError(f"interactive players not in spec: {missing}")
        self.id = session_id
        self.spec = spec
        self.timeout_s = timeout_s
        self.created_at = time.time()
        self._cond = threading.Condition()
        self._state = STATE_SCANNING
        self._pending: PendingQuery | None = None
        self._answer = None
        self._next_query_id = 1
        self.answer_log: list[dict] = []
        self.report: dict | None = None
        self.error: str | None = None
        self.oracle = _SessionOracle(self, profile, interactive)
        self._worker = threading.Thread(target=self._run, daemon=True)
        self._worker.start()

    # -- worker side --------------------------------------------------------

    def _run(self):
        try:
            report = solver.refine_until_stable(self.spec, self.oracle)
        except SessionTimeoutError as exc:
            with self._cond:
                if self._state not in (STATE_DONE, STATE_FAILED):
                    self._state = STATE_FAILED
                    self.error = str(exc)
                self._pending = None
                self._cond.notify_all()
            return
        except Exception as exc:  # surfaced through the API as failed
            with self._cond:
                self._state = STATE_FAILED
                self.error = f"{type(exc).__name__}: {exc}"
                self._pending = None
                self._cond.notify_all()
            return
        with self._cond:
            self._state = STATE_DONE
            self.report = report
            self._pending = None
            self._cond.notify_all()

    def _ask_human(self, player, mode, division, k):
        with self._cond:
            query = PendingQuery(self._next_query_id, player, mode, k, division)
            self._next_query_id += 1
            self._pending = query
            self._state = STATE_AWAITING
            self._answer = None
            self._cond.notify_all()
            deadline = time.monotonic() + self.timeout_s
            while self._answer is None:
                remaining = deadline - time.monotonic()
                if remaining <= 0 or not self._cond.wait(timeout=remaining):
                    self._state = STATE_FAILED
                    self.error = f"timed out waiting for {player}"
                    self._pending = None
                    self._cond.notify_all()
                    raise SessionTimeoutError(self.error)
            # submit() already cleared the pending query and moved the
            # session back to scanning, so observers never see a stale
            # awaiting state after their answer was accepted
            answer = self._answer
            self._answer = None
            return answer

    # -- API side -----------------------------------------------------------

    def status(self) -> dict:
        with self._cond:
            out = {"session_id": self.id, "state": self._state}
            if self._state == STATE_AWAITING and self._pending is not None:
                out["query"] = self._pending.to_json()
            if self._state == STATE_FAILED:
                out["error"] = self.error
            if self._state == STATE_DONE:
                out["answered"] = len(self.answer_log)
            return out

    def submit(self, query_id: int, selection) -> dict:
        with self._cond:
            if self._state in (STATE_DONE, STATE_FAILED):
                raise SessionError(f"session is {self._state}")
            if self._pending is None or self._state != STATE_AWAITING:
                raise StaleQueryError("no query is awaiting an answer")
            if query_id != self._pending.query_id:
                raise StaleQueryError(
                    f"query {query_id} is stale; pending is {self._pending.query_id}"
                )
            q = self._pending
            if q.mode == MODE_SUBSET:
                normalized = frozenset(int(v) for v in selection)
            else:
                normalized = tuple(int(v) for v in selection)
            # raises InvalidSelectionError with the violated rule; the
            # query stays pending and the human is re-prompted
            validate_selection(q.mode, q.division, normalized, q.k)
            self.answer_log.append(
                {
                    "query_id": q.query_id,
                    "player": q.player,
                    "mode": q.mode,
                    "division": point_json(q.division),
                    "selection": sorted(normalized)
                    if isinstance(normalized, frozenset)
                    else list(normalized),
                }
            )
            self._answer = normalized
            self._pending = None
            self._state = STATE_SCANNING
            self._cond.notify_all()
            return {"status": "accepted", "query_id": q.query_id}

    def wait_settled(self, timeout_s: float = 30.0) -> dict:
        """Block until the session needs input or has finished."""
        with self._cond:
            self._cond.wait_for(
                lambda: self._state in (STATE_AWAITING, STATE_DONE, STATE_FAILED),
                timeout=timeout_s,
            )
            return self.status()


class SessionManager:
    def __init__(self):
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}
        self._counter = 0

    def create(self, spec, profile, interactive, timeout_s=600.0) -> Session:
        with self._lock:
            self._counter += 1
            sid = f"s{self._counter:04d}"
            session = Session(sid, spec, profile, interactive, timeout_s)
            self._sessions[sid] = session
            return session

    def get(self, sid: str) -> Session | None:
        with self._lock:
            return self._sessions.get(sid)


def replay_answers(session: Session, answer_log) -> dict:
    """Feed a recorded answer log to a session, in order, and return the
    final report. The session must pose the identical query sequence."""
    for rec in answer_log:
        st = session.wait_settled()
        if st["state"] != STATE_AWAITING:
            raise SessionError(f"expected a pending query, got {st['state']}")
        q = st["query"]
        if q["player"] != rec["player"] or q["division"]["exact"] != rec["division"]:
            raise SessionError(
                f"replay divergence at query {q['query_id']}: "
                f"expected {rec['player']}, got {q['player']}"
            )
        session.submit(q["query_id"], rec["selection"])
    st = session.wait_settled()
    if st["state"] != STATE_DONE:
        raise SessionError(f"replay did not finish: {st}")
    return session.report
