"""Timed search sessions: per-user state, interaction log, task scoring.

A session wraps one user's interaction with the engine: last results,
marked positives, submissions, and an append-only event log rich enough
to replay the whole session afterwards and check where the correct shots
sat in each ranking.  Query and feedback events store both the request
and the produced ranked list, so replays can be compared bit for bit.

The clock is injected: the live service uses wall time, the benchmark
harness a simulated clock, which is what makes harness runs and replays
deterministic.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from .config import EngineConfig
from .engine import CompositeQuery, Engine
from .fusion import feedback_rerank
from .ranking import RankedList

EVENT_KINDS = ("query", "feedback", "filter_change", "browse", "submit")


class SessionError(RuntimeError):
    pass


class UnknownSessionError(SessionError):
    pass


class BudgetExpiredError(SessionError):
    pass


class TaskEndedError(SessionError):
    pass


class SystemClock:
    def now(self) -> float:
        return time.time()


class SimulatedClock:
    """Manually advanced clock for deterministic harness runs and replays."""

    def __init__(self, t: float = 0.0):
        self.t = float(t)

    def now(self) -> float:
        return self.t

    def set_time(self, t: float) -> None:
        if t < self.t:
            raise ValueError("simulated clock cannot run backwards")
        self.t = float(t)

    def advance(self, dt: float) -> None:
        self.set_time(self.t + dt)


@dataclass(frozen=True)
class KisTask:
    id: str
    video_id: str
    target_start_s: float
    target_end_s: float
    budget_s: float = 300.0
    kind: str = "visual"      # "visual" or "textual"
    prompt: str = ""

    def __post_init__(self):
        if self.kind not in ("visual", "textual"):
            raise ValueError(f"unknown task kind {self.kind!r}")
        if self.target_end_s <= self.target_start_s:
            raise ValueError("target segment must have positive length")

    @classmethod
    def from_dict(cls, data: dict) -> "KisTask":
        return cls(
            id=str(data["id"]),
            video_id=str(data["video_id"]),
            target_start_s=float(data["target_start_s"]),
            target_end_s=float(data["target_end_s"]),
            budget_s=float(data.get("budget_s", 300.0)),
            kind=str(data.get("kind", "visual")),
            prompt=str(data.get("prompt", "")),
        )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "video_id": self.video_id,
            "target_start_s": self.target_start_s,
            "target_end_s": self.target_end_s,
            "budget_s": self.budget_s,
            "kind": self.kind,
            "prompt": self.prompt,
        }


def validate_task(task: KisTask, engine: Engine, target_len_s: float = 20.0) -> None:
    video = engine.corpus.videos.get(task.video_id)
    if video is None:
        raise ValueError(f"task {task.id!r}: unknown video {task.video_id!r}")
    length = task.target_end_s - task.target_start_s
    if abs(length - target_len_s) > 1e-9:
        raise ValueError(
            f"task {task.id!r}: target segment must be {target_len_s:g} s, got {length:g}"
        )
    if task.target_start_s < 0 or task.target_end_s > video.duration_s:
        raise ValueError(f"task {task.id!r}: target segment outside the video")


@dataclass(frozen=True)
class LogEvent:
    at: float
    kind: str
    payload: dict

    def to_dict(self) -> dict:
        return {"at": self.at, "kind": self.kind, "payload": self.payload}

    @classmethod
    def from_dict(cls, data: dict) -> "LogEvent":
        return cls(float(data["at"]), str(data["kind"]), dict(data["payload"]))


@dataclass(frozen=True)
class Submission:
    shot_id: str
    at: float
    correct: bool


@dataclass
class Session:
    id: str
    task: KisTask | None
    started_at: float
    last_results: RankedList | None = None
    positives: list[str] = field(default_factory=list)
    log: list[LogEvent] = field(default_factory=list)
    submissions: list[Submission] = field(default_factory=list)
    solved: bool = False
    last_flags: dict | None = None
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


def overlap_s(a_start: float, a_end: float, b_start: float, b_end: float) -> float:
    return min(a_end, b_end) - max(a_start, b_start)


def score_session(
    session: Session, task: KisTask, config: EngineConfig | None = None
) -> float:
    """Score in [0, 100]: zero when unsolved, otherwise the time and
    wrong-submission penalties are deducted from 100."""
    cfg = (config or EngineConfig()).session
    correct = [s for s in session.submissions if s.correct]
    if not correct:
        return 0.0
    t_correct = correct[0].at
    wrong = sum(1 for s in session.submissions if not s.correct)
    raw = 100.0 - cfg.time_penalty * (t_correct / task.budget_s) - cfg.wrong_penalty * wrong
    return max(0.0, raw)


class SessionManager:
    """All mutable service state: sessions keyed by id, under per-session
    locks; the engine and task table are shared read-only."""

    def __init__(
        self,
        engine: Engine,
        tasks: dict[str, KisTask] | None = None,
        clock=None,
        log_dir: str | Path | None = None,
    ):
        self.engine = engine
        self.tasks = dict(tasks or {})
        self.clock = clock or SystemClock()
        self.log_dir = Path(log_dir) if log_dir else None
        self.sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        for task in self.tasks.values():
            validate_task(task, engine, engine.config.session.target_len_s)

    # -- lifecycle ---------------------------------------------------------

    def create_session(self, task_id: str | None = None, session_id: str | None = None) -> Session:
        task = None
        if task_id is not None:
            task = self.tasks.get(task_id)
            if task is None:
                raise UnknownSessionError(f"unknown task {task_id!r}")
        session = Session(
            id=session_id or uuid.uuid4().hex,
            task=task,
            started_at=self.clock.now(),
        )
        with self._lock:
            self.sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self.sessions.get(session_id)
        if session is None:
            raise UnknownSessionError(f"unknown session {session_id!r}")
        return session

    def elapsed(self, session: Session) -> float:
        return self.clock.now() - session.started_at

    def _check_alive(self, session: Session) -> None:
        if session.task is None:
            return
        if session.solved:
            raise TaskEndedError(f"task {session.task.id!r} already solved")
        if self.elapsed(session) > session.task.budget_s:
            raise BudgetExpiredError(f"budget of task {session.task.id!r} expired")

    def _append(self, session: Session, kind: str, payload: dict) -> LogEvent:
        event = LogEvent(at=self.elapsed(session), kind=kind, payload=payload)
        session.log.append(event)
        if self.log_dir is not None:
            self.log_dir.mkdir(parents=True, exist_ok=True)
            with open(self.log_dir / f"{session.id}.jsonl", "a", encoding="utf-8") as fh:
                fh.write(json.dumps(event.to_dict(), sort_keys=True) + "\n")
        return event

    # -- operations ----------------------------------------------------------

    def execute_query(self, session_id: str, query: CompositeQuery) -> RankedList:
        session = self.get(session_id)
        with session.lock:
            self._check_alive(session)
            flags = query.flags.to_dict()
            if session.last_flags is not None and flags != session.last_flags:
                self._append(
                    session,
                    "filter_change",
                    {"old": session.last_flags, "new": flags},
                )
            session.last_flags = flags
            results = self.engine.execute(query)
            session.last_results = results
            self._append(
                session,
                "query",
                {"request": query.to_dict(), "result": results.to_jsonable()},
            )
            return results

    def results_view(self, session_id: str, view: str = "flat"):
        session = self.get(session_id)
        with session.lock:
            if session.last_results is None:
                raise SessionError("no results yet")
            self._append(session, "browse", {"view": view})
            if view == "grouped":
                return self.engine.group_by_video(session.last_results)
            if view == "flat":
                return self.engine.flat_view(session.last_results)
            raise ValueError(f"unknown view {view!r}")

    def mark_positive(self, session_id: str, shot_id: str) -> Session:
        session = self.get(session_id)
        with session.lock:
            self._check_alive(session)
            if shot_id not in self.engine.corpus.shots:
                raise KeyError(f"unknown shot {shot_id!r}")
            if shot_id not in session.positives:
                session.positives.append(shot_id)
            self._append(session, "feedback", {"action": "mark", "shot_id": shot_id})
            return session

    def run_feedback(self, session_id: str, lam: float | None = None) -> RankedList:
        session = self.get(session_id)
        with session.lock:
            self._check_alive(session)
            if not session.positives:
                raise SessionError("no positive shots marked")
            if session.last_results is None:
                raise SessionError("no results to re-rank")
            lam = self.engine.config.fusion.feedback_lambda if lam is None else lam
            results = feedback_rerank(
                session.last_results,
                session.positives,
                self.engine.color_index,
                self.engine.corpus.banks,
                lam=lam,
            )
            session.last_results = results
            self._append(
                session,
                "feedback",
                {"action": "run", "lambda": lam, "result": results.to_jsonable()},
            )
            return results

    def submit(self, session_id: str, shot_id: str) -> bool:
        """Judge a submission. Correct ends the task; wrong ones only cost
        score; late ones are rejected but still logged."""
        session = self.get(session_id)
        with session.lock:
            if session.task is None:
                raise SessionError("session has no task to submit against")
            if session.solved:
                raise TaskEndedError(f"task {session.task.id!r} already solved")
            shot = self.engine.corpus.shots.get(shot_id)
            if shot is None:
                raise KeyError(f"unknown shot {shot_id!r}")
            at = self.elapsed(session)
            if at > session.task.budget_s:
                self._append(
                    session, "submit", {"shot_id": shot_id, "late": True}
                )
                raise BudgetExpiredError("submission after budget expiry")
            task = session.task
            correct = shot.video_id == task.video_id and (
                overlap_s(shot.start_s, shot.end_s, task.target_start_s, task.target_end_s)
                > 0.0
            )
            session.submissions.append(Submission(shot_id, at, correct))
            if correct:
                session.solved = True
            self._append(
                session, "submit", {"shot_id": shot_id, "correct": correct, "late": False}
            )
            return correct

    def get_log(self, session_id: str) -> list[LogEvent]:
        return list(self.get(session_id).log)


def replay_log(
    engine: Engine, events: list[LogEvent]
) -> list[tuple[str, list, list]]:
    """Re-execute a session log against the same engine.

    Returns one (kind, stored, recomputed) triple per query/feedback
    event; replay determinism means stored == recomputed for all of them.
    """
    manager = SessionManager(engine, clock=SimulatedClock())
    session = manager.create_session()
    out = []
    for event in events:
        manager.clock.set_time(max(manager.clock.now(), event.at))
        if event.kind == "query":
            query = CompositeQuery.from_dict(event.payload["request"])
            recomputed = manager.execute_query(session.id, query)
            out.append(("query", event.payload["result"], recomputed.to_jsonable()))
        elif event.kind == "feedback":
            if event.payload.get("action") == "mark":
                manager.mark_positive(session.id, event.payload["shot_id"])
            elif event.payload.get("action") == "run":
                recomputed = manager.run_feedback(session.id, event.payload["lambda"])
                out.append(
                    ("feedback", event.payload["result"], recomputed.to_jsonable())
                )
    return out
