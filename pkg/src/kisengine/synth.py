"""Synthetic corpus generation for tests, demos, and benchmarks.

Generates shot-segmented corpora with distinct colorful keyframes,
deterministic text fields, score banks, and planted search tasks.  Every
artifact is a pure function of the seed, so generated corpora double as
ground truth: the generator knows which shot a query should retrieve.

Run as a module to write a corpus to disk:

    python -m kisengine.synth out_dir --videos 20 --shots 10 --seed 7 \
        --concept-labels 16 --tasks 2 --planted
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

import numpy as np

from .colorsketch import build_color_index, lab_to_rgb, sketch_from_signature
from .config import EngineConfig
from .corpus import Corpus, load_manifest, write_score_matrix
from .ppm import encode_ppm
from .session import KisTask

_COLOR_WORDS = (
    "crimson", "amber", "jade", "cobalt", "violet", "sand", "teal", "rust",
    "olive", "plum", "coral", "slate", "mint", "ochre", "navy", "pearl",
)
_SCENE_WORDS = (
    "street", "harbor", "kitchen", "forest", "studio", "market", "bridge",
    "station", "garden", "rooftop", "desert", "stadium",
)


def quadrant_image(size: int, colors: np.ndarray) -> np.ndarray:
    """Four flat color quadrants (tl, tr, bl, br), (size, size, 3) uint8."""
    img = np.zeros((size, size, 3), dtype=np.uint8)
    half = size // 2
    img[:half, :half] = colors[0]
    img[:half, half:] = colors[1]
    img[half:, :half] = colors[2]
    img[half:, half:] = colors[3]
    return img


def uniform_image(size: int, color) -> np.ndarray:
    img = np.zeros((size, size, 3), dtype=np.uint8)
    img[:, :] = color
    return img


def grayscale_image(size: int, rng: np.random.Generator) -> np.ndarray:
    gray = rng.integers(0, 256, size=(size, size, 1), dtype=np.uint8)
    return np.repeat(gray, 3, axis=2)


def letterbox_image(
    base: np.ndarray, bar: int, noise_fraction: float = 0.0,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Add black horizontal bars of the given height, with an optional
    fraction of bright noise pixels inside the bars."""
    img = base.copy()
    h, w = img.shape[:2]
    img[:bar] = 0
    img[h - bar :] = 0
    if noise_fraction > 0 and bar > 0:
        rng = rng or np.random.default_rng(0)
        n_noise = int(noise_fraction * bar * w)
        for region in (img[:bar], img[h - bar :]):
            ys = rng.integers(0, bar, n_noise)
            xs = rng.integers(0, w, n_noise)
            region[ys, xs] = rng.integers(128, 256, (n_noise, 3))
    return img


def _shot_colors(rng: np.random.Generator) -> np.ndarray:
    """Four saturated, well-separated colors; distinct across draws a.s."""
    return rng.integers(0, 256, size=(4, 3)).astype(np.uint8)


def generate_corpus(
    root: str | Path,
    n_videos: int = 20,
    shots_per_video: int = 10,
    *,
    seed: int = 7,
    image_size: int = 64,
    shot_len_s: float = 5.0,
    concept_labels: int = 16,
    object_labels: int = 0,
    mirror_object_bank: bool = False,
) -> Path:
    """Write a complete synthetic corpus; returns the manifest path.

    ``mirror_object_bank`` writes the object bank with the same matrix as
    the concept bank (padded/truncated to ``object_labels`` columns is not
    attempted; label counts must match), which is useful for checking that
    both banks rank identically.
    """
    root = Path(root)
    (root / "keyframes").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    videos, shots = [], []
    for v in range(n_videos):
        vid = f"v{v:02d}"
        videos.append(
            {
                "id": vid,
                "duration_s": shots_per_video * shot_len_s,
                "title": f"synthetic video {v}",
            }
        )
        for s in range(shots_per_video):
            sid = f"{vid}_s{s:02d}"
            img = quadrant_image(image_size, _shot_colors(rng))
            ref = f"keyframes/{sid}.ppm"
            (root / ref).write_bytes(encode_ppm(img))
            color = _COLOR_WORDS[int(rng.integers(0, len(_COLOR_WORDS)))]
            scene = _SCENE_WORDS[int(rng.integers(0, len(_SCENE_WORDS)))]
            shots.append(
                {
                    "id": sid,
                    "video_id": vid,
                    "start_s": s * shot_len_s,
                    "end_s": (s + 1) * shot_len_s,
                    "keyframe": ref,
                    "description": f"{color} {scene} shot {sid}",
                    "speech": f"talking about the {scene} near the {color} wall",
                    "ocr": f"{sid} caption",
                }
            )

    n_shots = len(shots)
    banks = []
    if concept_labels > 0:
        labels = [f"concept_{i:03d}" for i in range(concept_labels)]
        matrix = rng.random((n_shots, concept_labels)).astype(np.float32)
        (root / "concept_labels.txt").write_text("\n".join(labels) + "\n")
        write_score_matrix(root / "concept_scores.f32", matrix)
        banks.append(
            {
                "kind": "concept",
                "labels_file": "concept_labels.txt",
                "matrix_file": "concept_scores.f32",
            }
        )
        if mirror_object_bank:
            if object_labels and object_labels != concept_labels:
                raise ValueError("mirrored banks need matching label counts")
            obj_labels = [f"object_{i:03d}" for i in range(concept_labels)]
            (root / "object_labels.txt").write_text("\n".join(obj_labels) + "\n")
            write_score_matrix(root / "object_scores.f32", matrix)
            banks.append(
                {
                    "kind": "object",
                    "labels_file": "object_labels.txt",
                    "matrix_file": "object_scores.f32",
                }
            )
    if object_labels > 0 and not mirror_object_bank:
        labels = [f"object_{i:03d}" for i in range(object_labels)]
        matrix = rng.random((n_shots, object_labels)).astype(np.float32)
        (root / "object_labels.txt").write_text("\n".join(labels) + "\n")
        write_score_matrix(root / "object_scores.f32", matrix)
        banks.append(
            {
                "kind": "object",
                "labels_file": "object_labels.txt",
                "matrix_file": "object_scores.f32",
            }
        )

    manifest = {"videos": videos, "shots": shots, "banks": banks}
    path = root / "manifest.json"
    path.write_text(json.dumps(manifest, indent=1))
    return path


def plant_task(
    corpus: Corpus,
    task_id: str = "task-0",
    *,
    video_index: int = 0,
    target_start_s: float | None = None,
    target_len_s: float = 20.0,
    budget_s: float = 300.0,
    kind: str = "visual",
) -> KisTask:
    """A task whose target window is known to the generator.

    With no explicit start the window is centered in the video.
    """
    video = corpus.videos[sorted(corpus.videos)[video_index]]
    if target_start_s is None:
        target_start_s = max(0.0, (video.duration_s - target_len_s) / 2.0)
    if target_start_s + target_len_s > video.duration_s:
        raise ValueError("target window does not fit in the video")
    prompt = ""
    if kind == "textual":
        first = next(
            s for s in video.shot_ids
            if corpus.shots[s].end_s > target_start_s
        )
        prompt = corpus.shots[first].description
    return KisTask(
        id=task_id,
        video_id=video.id,
        target_start_s=target_start_s,
        target_end_s=target_start_s + target_len_s,
        budget_s=budget_s,
        kind=kind,
        prompt=prompt,
    )


def target_shot(corpus: Corpus, task: KisTask) -> str:
    """First shot overlapping the task's target window."""
    video = corpus.videos[task.video_id]
    for sid in video.shot_ids:
        shot = corpus.shots[sid]
        if min(shot.end_s, task.target_end_s) - max(shot.start_s, task.target_start_s) > 0:
            return sid
    raise ValueError(f"task {task.id!r} has no overlapping shot")


def planted_sketch_payload(corpus: Corpus, task: KisTask, config: EngineConfig | None = None) -> dict:
    """Sketch data for the task's target shot, as canvas cell placements.

    Cell colors are given as RGB (for a color picker) alongside the exact
    Lab values, so both scripted agents and UI tests can reproduce the
    target's signature on an 8 x 8 canvas.
    """
    cfg = config or EngineConfig()
    idx = build_color_index(corpus, config=cfg.sketch)
    sid = target_shot(corpus, task)
    sketch = sketch_from_signature(idx.signatures[sid])
    cells = []
    for p in sketch.points:
        r, g, b = lab_to_rgb(p.color)
        cells.append(
            {
                "cell": [min(int(p.x * 8), 7), min(int(p.y * 8), 7)],
                "rgb": [r, g, b],
                "x": p.x,
                "y": p.y,
                "lab": {"L": p.color.L, "a": p.color.a, "b": p.color.b},
            }
        )
    return {"task_id": task.id, "target_shot": sid, "cells": cells}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="python -m kisengine.synth", description="generate a synthetic corpus"
    )
    parser.add_argument("out", help="output directory")
    parser.add_argument("--videos", type=int, default=20)
    parser.add_argument("--shots", type=int, default=10)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--size", type=int, default=64)
    parser.add_argument("--concept-labels", type=int, default=16)
    parser.add_argument("--object-labels", type=int, default=0)
    parser.add_argument("--tasks", type=int, default=0, help="plant N tasks")
    parser.add_argument("--budget", type=float, default=300.0)
    parser.add_argument(
        "--planted", action="store_true",
        help="also write planted.json with the first task's target sketch",
    )
    args = parser.parse_args(argv)

    out = Path(args.out)
    manifest = generate_corpus(
        out,
        args.videos,
        args.shots,
        seed=args.seed,
        image_size=args.size,
        concept_labels=args.concept_labels,
        object_labels=args.object_labels,
    )
    print(f"wrote {manifest}")
    if args.tasks > 0:
        corpus = load_manifest(manifest)
        tasks = [
            plant_task(
                corpus, f"task-{i}", video_index=i % len(corpus.videos),
                budget_s=args.budget,
            )
            for i in range(args.tasks)
        ]
        (out / "tasks.json").write_text(
            json.dumps([t.to_dict() for t in tasks], indent=1)
        )
        print(f"wrote {out / 'tasks.json'}")
        if args.planted:
            payload = planted_sketch_payload(corpus, tasks[0])
            (out / "planted.json").write_text(json.dumps(payload, indent=1))
            print(f"wrote {out / 'planted.json'}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
