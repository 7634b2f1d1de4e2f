"""Ranked shot lists: the common currency among modalities and stages."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class RankedList:
    """Ordered (shot_id, score) pairs, scores non-increasing, ids unique."""

    entries: tuple[tuple[str, float], ...] = ()
    provenance: str = ""

    def __post_init__(self):
        ids = [sid for sid, _ in self.entries]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate shot id in ranked list")
        scores = [s for _, s in self.entries]
        if any(a < b for a, b in zip(scores, scores[1:])):
            raise ValueError("scores must be non-increasing")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def ids(self) -> list[str]:
        return [sid for sid, _ in self.entries]

    def truncate(self, limit: int) -> "RankedList":
        if limit >= len(self.entries):
            return self
        return RankedList(self.entries[:limit], self.provenance)

    def to_jsonable(self) -> list[list]:
        return [[sid, score] for sid, score in self.entries]

    @classmethod
    def from_jsonable(cls, data, provenance: str = "") -> "RankedList":
        return cls(tuple((str(sid), float(s)) for sid, s in data), provenance)


def ranked(scored: dict[str, float], provenance: str = "") -> RankedList:
    """Sort id->score descending, ties broken by ascending shot id."""
    order = sorted(scored.items(), key=lambda kv: (-kv[1], kv[0]))
    return RankedList(tuple((sid, float(s)) for sid, s in order), provenance)
