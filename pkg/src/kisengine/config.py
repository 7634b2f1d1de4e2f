"""Engine configuration: every tunable knob, grouped by subsystem.

A config file is a JSON object whose top-level keys name the groups below
(``sketch``, ``text``, ``fusion``, ``filters``, ``session``); unknown keys
are rejected so typos do not silently fall back to defaults.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path


@dataclass
class SketchConfig:
    alpha: float = 2.0            # spatial vs color tradeoff in sketch scoring
    k: int = 8                    # target centroids per signature
    k_max: int = 16               # hard cap on centroids per signature
    sample_size: int = 2048       # pixels sampled per keyframe
    seed: int = 0                 # sampling seed, fixed for reproducibility
    grid_size: int = 8            # recommendation grid is grid_size x grid_size
    palette_size: int = 64        # quantized palette size, must be a perfect cube
    recommendation_enabled: bool = True


@dataclass
class TextConfig:
    k1: float = 1.2
    b: float = 0.75


@dataclass
class FusionConfig:
    rrf_k: float = 60.0           # reciprocal-rank smoothing constant
    feedback_lambda: float = 0.5  # base-score vs similarity mixing weight


@dataclass
class FilterConfig:
    chroma_threshold: int = 12        # max(R,G,B) - min(R,G,B) cutoff
    bw_pixel_fraction: float = 0.98   # fraction of low-chroma pixels for B&W
    luma_threshold: int = 24          # luma cutoff for border rows/columns
    border_row_fraction: float = 0.95 # fraction of dark pixels per border line
    border_min: int = 4               # min border width (px) that drops a shot


@dataclass
class SessionConfig:
    budget_s: float = 300.0       # task time budget
    target_len_s: float = 20.0    # required target segment length
    time_penalty: float = 50.0    # score penalty scale for elapsed time
    wrong_penalty: float = 10.0   # score penalty per wrong submission
    default_limit: int = 1000     # default result list truncation


_GROUPS = {
    "sketch": SketchConfig,
    "text": TextConfig,
    "fusion": FusionConfig,
    "filters": FilterConfig,
    "session": SessionConfig,
}


@dataclass
class EngineConfig:
    sketch: SketchConfig = field(default_factory=SketchConfig)
    text: TextConfig = field(default_factory=TextConfig)
    fusion: FusionConfig = field(default_factory=FusionConfig)
    filters: FilterConfig = field(default_factory=FilterConfig)
    session: SessionConfig = field(default_factory=SessionConfig)

    @classmethod
    def from_dict(cls, data: dict) -> "EngineConfig":
        cfg = cls()
        for group_name, values in data.items():
            if group_name not in _GROUPS:
                raise ValueError(f"unknown config group {group_name!r}")
            group_cls = _GROUPS[group_name]
            known = {f.name for f in fields(group_cls)}
            for key in values:
                if key not in known:
                    raise ValueError(f"unknown config key {group_name}.{key}")
            setattr(cfg, group_name, group_cls(**values))
        return cfg

    @classmethod
    def from_file(cls, path: str | Path) -> "EngineConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return asdict(self)
