"""Rank fusion across modalities and relevance-feedback re-ranking.

Fusion is weighted reciprocal-rank fusion (RRF): rank-based, so sketch
dissimilarities, BM25 scores, and fuzzy-boolean scores combine without
any score calibration.  Relevance feedback re-ranks the current result
list by similarity to user-marked positive shots, using features the
engine already has: the shot's concept-bank row and its color signature
rasterized onto the recommendation grid/palette.
"""

from __future__ import annotations

import numpy as np

from .colorsketch import ColorIndex, grid_cell_of, nearest_palette_bin
from .corpus import ScoreBank
from .ranking import RankedList, ranked


def fuse(
    weighted_lists: list[tuple[RankedList, float]], k: float = 60.0
) -> RankedList:
    """Weighted reciprocal-rank fusion over one or more ranked lists.

    Each list contributes weight / (k + rank) per shot, rank 1-based;
    shots absent from a list contribute nothing for it.  Zero-weight
    lists are ignored entirely.
    """
    if not weighted_lists:
        raise ValueError("fuse requires at least one list")
    if k <= 0:
        raise ValueError("smoothing constant k must be positive")
    if not any(w > 0 for _, w in weighted_lists):
        raise ValueError("at least one fusion weight must be positive")
    if any(w < 0 for _, w in weighted_lists):
        raise ValueError("fusion weights must be nonnegative")
    acc: dict[str, float] = {}
    for rl, weight in weighted_lists:
        if weight == 0.0:
            continue
        for rank, (sid, _) in enumerate(rl.entries, start=1):
            acc[sid] = acc.get(sid, 0.0) + weight / (k + rank)
    return ranked(acc, "fused")


def _feature_vector(
    shot_id: str,
    idx: ColorIndex,
    bank: ScoreBank | None,
    row_of: dict[str, int],
) -> np.ndarray:
    """Concept-bank row and palette-rasterized signature, each block
    L2-normalized, concatenated.  All entries nonnegative."""
    blocks = []
    if bank is not None:
        row = bank.scores[row_of[shot_id]].astype(np.float64)
        norm = np.linalg.norm(row)
        blocks.append(row / norm if norm > 0 else row)
    g, p = idx.grid_size, len(idx.palette_lab)
    raster = np.zeros(g * g * p)
    sig = idx.signatures[shot_id]
    for c in sig.centroids:
        cx, cy = grid_cell_of(c.x, c.y, g)
        bin_ = int(nearest_palette_bin(c.color.as_array(), idx.palette_lab)[0])
        raster[(cy * g + cx) * p + bin_] += c.weight
    norm = np.linalg.norm(raster)
    blocks.append(raster / norm if norm > 0 else raster)
    return np.concatenate(blocks)


def _cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def feedback_rerank(
    base: RankedList,
    positives,
    idx: ColorIndex,
    banks: dict[str, ScoreBank],
    lam: float = 0.5,
) -> RankedList:
    """Re-rank a result list toward shots similar to the marked positives.

    new_score = lam * minmax(base score) + (1 - lam) * max cosine
    similarity to any positive.  Positives are pinned to the top in their
    base order (marked shots missing from the base list follow, by id)
    and carry score 1.0, the ceiling of the mixing range.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lambda must be within [0, 1]")
    if len(base) == 0:
        raise ValueError("cannot re-rank an empty list")
    positives = list(dict.fromkeys(positives))
    if not positives:
        raise ValueError("feedback requires at least one positive shot")
    known = set(idx.shot_ids)
    for sid in positives:
        if sid not in known:
            raise KeyError(f"unknown positive shot {sid!r}")

    row_of = {sid: i for i, sid in enumerate(idx.shot_ids)}
    bank = banks.get("concept")
    cache: dict[str, np.ndarray] = {}

    def vec(sid: str) -> np.ndarray:
        if sid not in cache:
            cache[sid] = _feature_vector(sid, idx, bank, row_of)
        return cache[sid]

    pos_vecs = [vec(p) for p in positives]

    base_scores = np.array([s for _, s in base.entries])
    lo, hi = float(base_scores.min()), float(base_scores.max())
    if hi > lo:
        norm_scores = (base_scores - lo) / (hi - lo)
    else:
        norm_scores = np.ones_like(base_scores)

    pos_set = set(positives)
    rescored: dict[str, float] = {}
    for (sid, _), norm in zip(base.entries, norm_scores):
        if sid in pos_set:
            continue
        sim = max(_cosine(vec(sid), pv) for pv in pos_vecs)
        rescored[sid] = lam * float(norm) + (1.0 - lam) * sim

    pinned = [sid for sid, _ in base.entries if sid in pos_set]
    pinned += sorted(pos_set.difference(pinned))
    tail = ranked(rescored)
    entries = tuple((sid, 1.0) for sid in pinned) + tail.entries
    return RankedList(entries, "feedback")
