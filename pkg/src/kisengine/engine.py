"""Composite query execution: modalities, fusion, filters, browsing views.

The Engine owns everything immutable: the corpus, the per-modality
indexes, and the precomputed filter verdicts.  Queries are pure reads,
so any number can run concurrently; session state lives elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .colorsketch import ColorIndex, SketchQuery, build_color_index, rank_by_sketch
from .concepts import parse_concept_query, rank_by_expr
from .config import EngineConfig
from .corpus import Corpus, load_manifest
from .filters import FilterFlags, FilterVerdict, apply_filters, compute_verdict
from .fusion import fuse
from .ranking import RankedList
from .textsearch import TextIndex, TextQuery, build_text_index, search_text

MODALITIES = ("sketch", "text", "concept")


@dataclass(frozen=True)
class CompositeQuery:
    sketch: SketchQuery | None = None
    text: TextQuery | None = None
    concept: str | None = None
    modality_weights: dict[str, float] = field(default_factory=dict)
    flags: FilterFlags = field(default_factory=FilterFlags)
    limit: int = 1000

    def __post_init__(self):
        if self.sketch is None and self.text is None and self.concept is None:
            raise ValueError("composite query needs at least one modality")
        if self.limit < 1:
            raise ValueError("limit must be >= 1")
        for name, w in self.modality_weights.items():
            if name not in MODALITIES:
                raise ValueError(f"unknown modality {name!r}")
            if w < 0:
                raise ValueError(f"negative weight for modality {name!r}")

    def weight(self, name: str) -> float:
        return float(self.modality_weights.get(name, 1.0))

    @classmethod
    def from_dict(cls, data: dict) -> "CompositeQuery":
        sketch = data.get("sketch")
        text = data.get("text")
        concept = data.get("concept")
        return cls(
            sketch=SketchQuery.from_dict(sketch) if sketch else None,
            text=TextQuery.from_dict(text) if text else None,
            concept=str(concept) if concept else None,
            modality_weights={
                str(k): float(v)
                for k, v in (data.get("modality_weights") or {}).items()
            },
            flags=FilterFlags.from_dict(data.get("flags") or {}),
            limit=int(data.get("limit", 1000)),
        )

    def to_dict(self) -> dict:
        return {
            "sketch": self.sketch.to_dict() if self.sketch else None,
            "text": self.text.to_dict() if self.text else None,
            "concept": self.concept,
            "modality_weights": dict(self.modality_weights),
            "flags": self.flags.to_dict(),
            "limit": self.limit,
        }


@dataclass(frozen=True)
class VideoGroup:
    video_id: str
    entries: tuple[tuple[str, float], ...]  # candidate shots in list order
    best_score: float


class Engine:
    """Immutable search engine over one corpus."""

    def __init__(
        self,
        corpus: Corpus,
        config: EngineConfig,
        color_index: ColorIndex,
        text_index: TextIndex,
        verdicts: dict[str, FilterVerdict],
    ):
        self.corpus = corpus
        self.config = config
        self.color_index = color_index
        self.text_index = text_index
        self.verdicts = verdicts

    @classmethod
    def build(
        cls,
        corpus: Corpus,
        config: EngineConfig | None = None,
        color_index: ColorIndex | None = None,
    ) -> "Engine":
        """Build all indexes; decodes each keyframe once for both the
        color signature and the filter verdict.  A prebuilt (cached)
        color index can be supplied to skip signature extraction."""
        cfg = config or EngineConfig()
        fc = cfg.filters
        verdicts = {}
        for sid in corpus.shot_order:
            kf = corpus.keyframe(sid)
            verdicts[sid] = compute_verdict(
                sid,
                kf,
                chroma_threshold=fc.chroma_threshold,
                bw_pixel_fraction=fc.bw_pixel_fraction,
                luma_threshold=fc.luma_threshold,
                border_row_fraction=fc.border_row_fraction,
            )
        if color_index is None:
            color_index = build_color_index(corpus, config=cfg.sketch)
        elif tuple(color_index.shot_ids) != tuple(corpus.shot_order):
            raise ValueError("cached color index does not match corpus")
        return cls(corpus, cfg, color_index, build_text_index(corpus), verdicts)

    @classmethod
    def from_manifest(
        cls, path, config: EngineConfig | None = None, color_index=None
    ) -> "Engine":
        return cls.build(load_manifest(path), config, color_index)

    def execute(self, query: CompositeQuery) -> RankedList:
        """Run each present modality, fuse, filter, truncate."""
        parts: list[tuple[RankedList, float]] = []
        if query.sketch is not None:
            parts.append(
                (
                    rank_by_sketch(
                        query.sketch,
                        self.color_index,
                        self.corpus,
                        alpha=self.config.sketch.alpha,
                    ),
                    query.weight("sketch"),
                )
            )
        if query.text is not None:
            parts.append(
                (
                    search_text(
                        query.text,
                        self.text_index,
                        k1=self.config.text.k1,
                        b=self.config.text.b,
                    ),
                    query.weight("text"),
                )
            )
        if query.concept is not None:
            expr = parse_concept_query(query.concept)
            parts.append(
                (rank_by_expr(expr, self.corpus.banks, self.corpus), query.weight("concept"))
            )
        fused = fuse(parts, k=self.config.fusion.rrf_k)
        filtered = apply_filters(
            fused, query.flags, self.verdicts, self.config.filters.border_min
        )
        return filtered.truncate(query.limit)

    def group_by_video(self, rl: RankedList) -> list[VideoGroup]:
        """Group a ranked list by video for the dynamic-image browser.

        Videos appear in order of their best-ranked shot; within a video,
        candidate shots keep their ranked order.
        """
        order: list[str] = []
        groups: dict[str, list[tuple[str, float]]] = {}
        for sid, score in rl.entries:
            vid = self.corpus.shots[sid].video_id
            if vid not in groups:
                groups[vid] = []
                order.append(vid)
            groups[vid].append((sid, score))
        return [
            VideoGroup(vid, tuple(groups[vid]), groups[vid][0][1]) for vid in order
        ]

    @staticmethod
    def flat_view(rl: RankedList) -> RankedList:
        """Identity; exists so the wire protocol names both browsing shapes."""
        return rl
