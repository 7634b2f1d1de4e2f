"""Command line entry points: index, serve, harness."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .colorsketch import load_color_index, save_color_index
from .config import EngineConfig
from .corpus import load_manifest
from .engine import Engine
from .harness import load_agent, load_tasks, run_harness
from .session import KisTask, SessionManager


def _load_config(path: str | None) -> EngineConfig:
    return EngineConfig.from_file(path) if path else EngineConfig()


def cmd_index(args) -> int:
    config = _load_config(args.config)
    if args.k is not None:
        config.sketch.k = args.k
    if args.no_recommend:
        config.sketch.recommendation_enabled = False
    corpus = load_manifest(args.manifest)
    engine = Engine.build(corpus, config)
    out = Path(args.out) if args.out else Path(args.manifest).with_suffix(".colorindex")
    save_color_index(engine.color_index, out)
    print(f"indexed {len(corpus.shots)} shots from {len(corpus.videos)} videos")
    print(f"wrote color index cache: {out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config = _load_config(args.config)
    corpus = load_manifest(args.manifest)
    cache = None
    if args.index_cache:
        cache = load_color_index(args.index_cache)
    engine = Engine.build(corpus, config, color_index=cache)
    tasks: dict[str, KisTask] = {}
    if args.tasks:
        tasks = {t.id: t for t in load_tasks(args.tasks)}
    manager = SessionManager(engine, tasks, log_dir=args.log_dir)
    static = args.ui if args.ui and Path(args.ui).is_dir() else None
    app = create_app(manager, static_dir=static)
    print(f"serving {len(corpus.shots)} shots on port {args.port}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_harness(args) -> int:
    config = _load_config(args.config)
    if args.seed is not None:
        config.sketch.seed = args.seed
    corpus = load_manifest(args.manifest)
    engine = Engine.build(corpus, config)
    tasks = load_tasks(args.tasks)
    agent = load_agent(args.agent)
    report = run_harness(engine, tasks, agent, log_dir=args.log_dir)
    doc = report.to_dict()
    if not args.full_logs:
        for task in doc["tasks"]:
            task.pop("log", None)
    print(json.dumps(doc, indent=1))
    return 0 if report.solved_count == len(tasks) else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="engine",
        description="known-item search engine for shot-segmented video corpora",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="build indexes and write the color index cache")
    p.add_argument("manifest")
    p.add_argument("--k", type=int, default=None, help="centroids per signature")
    p.add_argument("--no-recommend", action="store_true")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None, help="cache file path")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("manifest")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--config", default=None)
    p.add_argument("--tasks", default=None, help="tasks JSON file")
    p.add_argument("--index-cache", default=None)
    p.add_argument("--ui", default=None, help="static UI directory")
    p.add_argument("--log-dir", default=None, help="persist session logs here")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("harness", help="run scripted agents against timed tasks")
    p.add_argument("manifest")
    p.add_argument("tasks")
    p.add_argument("agent")
    p.add_argument("--seed", type=int, default=None, help="signature sampling seed")
    p.add_argument("--config", default=None)
    p.add_argument("--log-dir", default=None)
    p.add_argument("--full-logs", action="store_true")
    p.set_defaults(func=cmd_harness)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
