"""Timed known-item-search benchmark harness.

Runs scripted agents against tasks under a simulated clock, so an entire
benchmark session is deterministic and replayable.  An agent script is a
JSON list of timed operations whose bodies mirror the HTTP API payloads:

    [{"at": 2.0, "op": "query",    "body": {...composite query...}},
     {"at": 3.0, "op": "browse",   "view": "grouped"},
     {"at": 4.0, "op": "positive", "shot_id": "v01_s03"},
     {"at": 5.0, "op": "feedback", "lambda": 0.5},
     {"at": 6.0, "op": "submit",   "rank": 1}]

``submit`` takes either a literal ``shot_id`` or a 1-based ``rank`` into
the current result list.  The agent file may be such a list (applied to
every task) or an object mapping task ids to lists.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .engine import CompositeQuery, Engine
from .session import (
    BudgetExpiredError,
    KisTask,
    LogEvent,
    SessionError,
    SessionManager,
    SimulatedClock,
    score_session,
)


@dataclass(frozen=True)
class AgentOp:
    at: float
    op: str
    body: dict

    @classmethod
    def from_dict(cls, data: dict) -> "AgentOp":
        body = {k: v for k, v in data.items() if k not in ("at", "op")}
        return cls(at=float(data.get("at", 0.0)), op=str(data["op"]), body=body)


@dataclass
class TaskReport:
    task_id: str
    solved: bool
    t_correct: float | None
    wrong_count: int
    score: float
    errors: list[str] = field(default_factory=list)
    log: list[LogEvent] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "solved": self.solved,
            "t_correct": self.t_correct,
            "wrong_count": self.wrong_count,
            "score": self.score,
            "errors": list(self.errors),
            "log": [e.to_dict() for e in self.log],
        }


@dataclass
class HarnessReport:
    tasks: list[TaskReport]

    @property
    def solved_count(self) -> int:
        return sum(1 for t in self.tasks if t.solved)

    @property
    def total_score(self) -> float:
        return sum(t.score for t in self.tasks)

    def to_dict(self) -> dict:
        return {
            "tasks": [t.to_dict() for t in self.tasks],
            "solved": self.solved_count,
            "task_count": len(self.tasks),
            "total_score": self.total_score,
        }


def load_tasks(path: str | Path) -> list[KisTask]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return [KisTask.from_dict(rec) for rec in data]


def load_agent(path: str | Path) -> dict[str, list[AgentOp]] | list[AgentOp]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(data, list):
        return [AgentOp.from_dict(rec) for rec in data]
    return {
        str(tid): [AgentOp.from_dict(rec) for rec in ops] for tid, ops in data.items()
    }


def _ops_for(agent, task_id: str) -> list[AgentOp]:
    if isinstance(agent, list):
        return agent
    return agent.get(task_id, [])


def run_harness(
    engine: Engine,
    tasks: list[KisTask],
    agent,
    log_dir: str | Path | None = None,
) -> HarnessReport:
    """Execute the agent script against each task under a simulated clock."""
    reports = []
    for task in tasks:
        clock = SimulatedClock()
        manager = SessionManager(engine, {task.id: task}, clock=clock, log_dir=log_dir)
        session = manager.create_session(task_id=task.id)
        errors: list[str] = []
        for op in sorted(_ops_for(agent, task.id), key=lambda o: o.at):
            if session.solved:
                break
            clock.set_time(max(clock.now(), op.at))
            try:
                _dispatch(manager, session.id, op)
            except BudgetExpiredError as exc:
                errors.append(f"t={op.at:g} {op.op}: {exc}")
            except (SessionError, KeyError, ValueError) as exc:
                errors.append(f"t={op.at:g} {op.op}: {exc}")
        correct = [s for s in session.submissions if s.correct]
        reports.append(
            TaskReport(
                task_id=task.id,
                solved=session.solved,
                t_correct=correct[0].at if correct else None,
                wrong_count=sum(1 for s in session.submissions if not s.correct),
                score=score_session(session, task, engine.config),
                errors=errors,
                log=list(session.log),
            )
        )
    return HarnessReport(reports)


def _dispatch(manager: SessionManager, session_id: str, op: AgentOp) -> None:
    if op.op == "query":
        manager.execute_query(session_id, CompositeQuery.from_dict(op.body["body"]))
    elif op.op == "browse":
        manager.results_view(session_id, op.body.get("view", "flat"))
    elif op.op == "positive":
        manager.mark_positive(session_id, op.body["shot_id"])
    elif op.op == "feedback":
        manager.run_feedback(session_id, op.body.get("lambda"))
    elif op.op == "submit":
        shot_id = op.body.get("shot_id")
        if shot_id is None:
            rank = int(op.body["rank"])
            session = manager.get(session_id)
            if session.last_results is None or rank > len(session.last_results):
                raise SessionError(f"no result at rank {rank}")
            shot_id = session.last_results.entries[rank - 1][0]
        manager.submit(session_id, shot_id)
    else:
        raise ValueError(f"unknown agent op {op.op!r}")
