"""Black-and-white and black-border keyframe detection and list filtering.

Verdicts are pure functions of the keyframe, so the engine computes them
once at index time and filtering a ranked list is a cheap lookup.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Keyframe
from .ranking import RankedList


@dataclass(frozen=True)
class FilterFlags:
    drop_black_and_white: bool = False
    drop_black_bordered: bool = False

    @classmethod
    def from_dict(cls, data: dict) -> "FilterFlags":
        return cls(
            drop_black_and_white=bool(data.get("drop_black_and_white", False)),
            drop_black_bordered=bool(data.get("drop_black_bordered", False)),
        )

    def to_dict(self) -> dict:
        return {
            "drop_black_and_white": self.drop_black_and_white,
            "drop_black_bordered": self.drop_black_bordered,
        }


@dataclass(frozen=True)
class FilterVerdict:
    shot_id: str
    is_bw: bool
    border: tuple[int, int, int, int]  # top, bottom, left, right widths (px)


def is_black_and_white(
    kf: Keyframe, chroma_threshold: int = 12, pixel_fraction: float = 0.98
) -> bool:
    """True iff at least pixel_fraction of pixels have per-pixel channel
    spread max(R,G,B) - min(R,G,B) <= chroma_threshold."""
    px = kf.pixels.astype(np.int16)
    spread = px.max(axis=2) - px.min(axis=2)
    return bool((spread <= chroma_threshold).mean() >= pixel_fraction)


def detect_black_border(
    kf: Keyframe, luma_threshold: int = 24, row_fraction: float = 0.95
) -> tuple[int, int, int, int]:
    """Widths of dark borders on each side (top, bottom, left, right).

    A border line counts when at least row_fraction of its pixels have
    luma (0.299 R + 0.587 G + 0.114 B) <= luma_threshold; each side is the
    maximal run of consecutive such lines from the edge, capped at half
    the corresponding dimension.
    """
    px = kf.pixels.astype(np.float64)
    luma = 0.299 * px[:, :, 0] + 0.587 * px[:, :, 1] + 0.114 * px[:, :, 2]
    dark = luma <= luma_threshold
    h, w = dark.shape

    def run(frac: np.ndarray, cap: int) -> int:
        width = 0
        for value in frac:
            if value >= row_fraction and width < cap:
                width += 1
            else:
                break
        return width

    row_frac = dark.mean(axis=1)
    col_frac = dark.mean(axis=0)
    top = run(row_frac, h // 2)
    bottom = run(row_frac[::-1], h // 2)
    left = run(col_frac, w // 2)
    right = run(col_frac[::-1], w // 2)
    return top, bottom, left, right


def compute_verdict(
    shot_id: str,
    kf: Keyframe,
    *,
    chroma_threshold: int = 12,
    bw_pixel_fraction: float = 0.98,
    luma_threshold: int = 24,
    border_row_fraction: float = 0.95,
) -> FilterVerdict:
    return FilterVerdict(
        shot_id=shot_id,
        is_bw=is_black_and_white(kf, chroma_threshold, bw_pixel_fraction),
        border=detect_black_border(kf, luma_threshold, border_row_fraction),
    )


def apply_filters(
    rl: RankedList,
    flags: FilterFlags,
    verdicts: dict[str, FilterVerdict],
    border_min: int = 4,
) -> RankedList:
    """Drop flagged shots; survivors keep their order and scores."""
    if not flags.drop_black_and_white and not flags.drop_black_bordered:
        return rl
    kept = []
    for sid, score in rl.entries:
        verdict = verdicts.get(sid)
        if verdict is None:
            raise KeyError(f"missing filter verdict for shot {sid!r}")
        if flags.drop_black_and_white and verdict.is_bw:
            continue
        if flags.drop_black_bordered and max(verdict.border) >= border_min:
            continue
        kept.append((sid, score))
    return RankedList(tuple(kept), rl.provenance)
