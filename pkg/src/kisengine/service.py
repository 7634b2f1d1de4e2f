"""HTTP+JSON service over the engine and session manager.

All endpoints are thin wrappers: validation and ranking live in the
library modules, and the service only translates between JSON and the
domain types.  Concept query syntax errors surface with their character
offset so clients can point at the exact spot.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Response
from fastapi.staticfiles import StaticFiles

from .colorsketch import lab_to_rgb, recommend_colors
from .concepts import ParseError, UnresolvedLabelError, list_concepts
from .engine import CompositeQuery, Engine
from .png import encode_png
from .ranking import RankedList
from .session import (
    BudgetExpiredError,
    SessionError,
    SessionManager,
    TaskEndedError,
    UnknownSessionError,
)


def _ranked_json(rl: RankedList) -> dict:
    return {
        "provenance": rl.provenance,
        "entries": [{"shot_id": sid, "score": score} for sid, score in rl.entries],
    }


def _task_public(task, engine: Engine) -> dict:
    """Task view safe to show a player: textual tasks expose the prompt,
    visual tasks expose only opaque frame handles."""
    base = {"id": task.id, "kind": task.kind, "budget_s": task.budget_s}
    if task.kind == "textual":
        base["prompt"] = task.prompt
    else:
        video = engine.corpus.videos[task.video_id]
        n = sum(
            1
            for sid in video.shot_ids
            if min(engine.corpus.shots[sid].end_s, task.target_end_s)
            - max(engine.corpus.shots[sid].start_s, task.target_start_s)
            > 0
        )
        base["target_frames"] = n
    return base


def _target_shots(task, engine: Engine) -> list[str]:
    video = engine.corpus.videos[task.video_id]
    return [
        sid
        for sid in video.shot_ids
        if min(engine.corpus.shots[sid].end_s, task.target_end_s)
        - max(engine.corpus.shots[sid].start_s, task.target_start_s)
        > 0
    ]


def create_app(manager: SessionManager, static_dir: str | Path | None = None) -> FastAPI:
    engine = manager.engine
    app = FastAPI(title="kisengine", docs_url=None, redoc_url=None)

    def _http(exc: Exception) -> HTTPException:
        if isinstance(exc, ParseError):
            return HTTPException(
                400, {"error": exc.message, "offset": exc.offset, "kind": "parse"}
            )
        if isinstance(exc, UnknownSessionError):
            return HTTPException(404, {"error": str(exc)})
        if isinstance(exc, (BudgetExpiredError, TaskEndedError)):
            return HTTPException(409, {"error": str(exc)})
        if isinstance(exc, (SessionError, UnresolvedLabelError, KeyError, ValueError)):
            return HTTPException(400, {"error": str(exc)})
        raise exc

    @app.post("/session")
    def create_session(body: dict | None = None):
        body = body or {}
        try:
            session = manager.create_session(task_id=body.get("task_id"))
        except Exception as exc:
            raise _http(exc)
        task = (
            _task_public(session.task, engine) if session.task is not None else None
        )
        return {
            "session_id": session.id,
            "started_at": session.started_at,
            "task": task,
        }

    @app.post("/session/{session_id}/query")
    def query(session_id: str, body: dict):
        try:
            results = manager.execute_query(session_id, CompositeQuery.from_dict(body))
        except Exception as exc:
            raise _http(exc)
        return _ranked_json(results)

    @app.get("/session/{session_id}/results")
    def results(session_id: str, view: str = "flat"):
        try:
            data = manager.results_view(session_id, view)
        except Exception as exc:
            raise _http(exc)
        if view == "grouped":
            return {
                "view": "grouped",
                "groups": [
                    {
                        "video_id": g.video_id,
                        "best_score": g.best_score,
                        "entries": [
                            {"shot_id": sid, "score": score} for sid, score in g.entries
                        ],
                    }
                    for g in data
                ],
            }
        return {"view": "flat", **_ranked_json(data)}

    @app.post("/session/{session_id}/positive")
    def positive(session_id: str, body: dict):
        try:
            session = manager.mark_positive(session_id, str(body["shot_id"]))
        except Exception as exc:
            raise _http(exc)
        return {"positives": list(session.positives)}

    @app.post("/session/{session_id}/feedback")
    def feedback(session_id: str, body: dict | None = None):
        body = body or {}
        lam = body.get("lambda")
        try:
            results = manager.run_feedback(
                session_id, float(lam) if lam is not None else None
            )
        except Exception as exc:
            raise _http(exc)
        return _ranked_json(results)

    @app.post("/session/{session_id}/submit")
    def submit(session_id: str, body: dict):
        try:
            correct = manager.submit(session_id, str(body["shot_id"]))
        except Exception as exc:
            raise _http(exc)
        return {"verdict": "correct" if correct else "incorrect"}

    @app.get("/session/{session_id}/log")
    def get_log(session_id: str):
        try:
            events = manager.get_log(session_id)
        except Exception as exc:
            raise _http(exc)
        return {"events": [e.to_dict() for e in events]}

    @app.get("/concepts")
    def concepts(prefix: str = "", bank: str = "concept", limit: int = 20):
        score_bank = engine.corpus.banks.get(bank)
        if score_bank is None:
            raise HTTPException(404, {"error": f"no {bank!r} bank in corpus"})
        labels = list_concepts(prefix, score_bank, limit)
        total = len(
            [l for l in score_bank.labels if l.lower().startswith(prefix.lower())]
        )
        return {"bank": bank, "labels": labels, "total": total}

    @app.get("/recommend")
    def recommend(x: float, y: float, n: int = 8):
        try:
            colors = recommend_colors(x, y, engine.color_index, n)
        except Exception as exc:
            raise _http(exc)
        return {
            "enabled": engine.color_index.recommendation_enabled,
            "colors": [
                {
                    "index": index,
                    "rgb": list(lab_to_rgb(color)),
                    "lab": {"L": color.L, "a": color.a, "b": color.b},
                    "frequency": freq,
                }
                for index, color, freq in colors
            ],
        }

    @app.get("/keyframe/{shot_id}")
    def keyframe(shot_id: str):
        if shot_id not in engine.corpus.shots:
            raise HTTPException(404, {"error": f"unknown shot {shot_id!r}"})
        kf = engine.corpus.keyframe(shot_id)
        return Response(encode_png(kf.pixels), media_type="image/png")

    @app.get("/task/{task_id}")
    def task(task_id: str):
        t = manager.tasks.get(task_id)
        if t is None:
            raise HTTPException(404, {"error": f"unknown task {task_id!r}"})
        return _task_public(t, engine)

    @app.get("/task/{task_id}/frame/{index}")
    def task_frame(task_id: str, index: int):
        t = manager.tasks.get(task_id)
        if t is None:
            raise HTTPException(404, {"error": f"unknown task {task_id!r}"})
        if t.kind != "visual":
            raise HTTPException(400, {"error": "textual tasks have no target frames"})
        sids = _target_shots(t, engine)
        if not 0 <= index < len(sids):
            raise HTTPException(404, {"error": f"no target frame {index}"})
        kf = engine.corpus.keyframe(sids[index])
        return Response(encode_png(kf.pixels), media_type="image/png")

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
