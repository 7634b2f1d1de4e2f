"""Fielded full-text retrieval over shot description, speech, and OCR text.

A separate inverted index is kept per field; queries score each field with
BM25 and mix the fields by caller-supplied weights.  There is no stemming
and no stopword list: the tokenizer is deterministic and language-agnostic
(lowercase, split on every non-alphanumeric codepoint).
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field

from .corpus import Corpus
from .ranking import RankedList, ranked

FIELDS = ("description", "speech", "ocr")

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase and split on every non-alphanumeric codepoint."""
    return _TOKEN_RE.findall(text.lower())


@dataclass
class FieldIndex:
    postings: dict[str, list[tuple[str, int]]] = field(default_factory=dict)
    doc_len: dict[str, int] = field(default_factory=dict)
    avg_len: float = 0.0


@dataclass
class TextIndex:
    fields: dict[str, FieldIndex]
    n_docs: int


@dataclass(frozen=True)
class TextQuery:
    text: str
    field_weights: dict[str, float] = None  # type: ignore[assignment]

    def __post_init__(self):
        weights = self.field_weights or {f: 1.0 for f in FIELDS}
        for name in weights:
            if name not in FIELDS:
                raise ValueError(f"unknown text field {name!r}")
        if any(w < 0 for w in weights.values()):
            raise ValueError("field weights must be nonnegative")
        if not any(w > 0 for w in weights.values()):
            raise ValueError("at least one field weight must be positive")
        object.__setattr__(self, "field_weights", dict(weights))

    @classmethod
    def from_dict(cls, data: dict) -> "TextQuery":
        return cls(
            text=str(data["text"]),
            field_weights={
                str(k): float(v) for k, v in data.get("field_weights", {}).items()
            }
            or None,
        )

    def to_dict(self) -> dict:
        return {"text": self.text, "field_weights": dict(self.field_weights)}


def build_text_index(corpus: Corpus) -> TextIndex:
    """Index all three text fields; empty fields are zero-length documents."""
    out: dict[str, FieldIndex] = {}
    n = len(corpus.shot_order)
    for name in FIELDS:
        fi = FieldIndex()
        raw: dict[str, list[tuple[str, int]]] = {}
        total_len = 0
        for sid in corpus.shot_order:
            tokens = tokenize(getattr(corpus.shots[sid], name))
            fi.doc_len[sid] = len(tokens)
            total_len += len(tokens)
            for term, tf in Counter(tokens).items():
                raw.setdefault(term, []).append((sid, tf))
        for term, plist in raw.items():
            fi.postings[term] = sorted(plist)
        fi.avg_len = total_len / n if n else 0.0
        out[name] = fi
    return TextIndex(fields=out, n_docs=n)


def _bm25_scores(
    tokens: list[str], fi: FieldIndex, n_docs: int, k1: float, b: float
) -> dict[str, float]:
    """BM25 with +1-smoothed idf; query tokens contribute with multiplicity."""
    scores: dict[str, float] = {}
    if fi.avg_len == 0.0:
        return scores
    for term in tokens:
        plist = fi.postings.get(term)
        if not plist:
            continue
        df = len(plist)
        idf = math.log((n_docs - df + 0.5) / (df + 0.5) + 1.0)
        for sid, tf in plist:
            dl = fi.doc_len[sid]
            denom = tf + k1 * (1.0 - b + b * dl / fi.avg_len)
            scores[sid] = scores.get(sid, 0.0) + idf * tf * (k1 + 1.0) / denom
    return scores


def search_text(
    query: TextQuery, idx: TextIndex, k1: float = 1.2, b: float = 0.75
) -> RankedList:
    """Weighted sum of per-field BM25 scores; zero-score shots are omitted
    so downstream fusion never rewards mere presence."""
    tokens = tokenize(query.text)
    combined: dict[str, float] = {}
    for name, weight in query.field_weights.items():
        if weight <= 0.0:
            continue
        for sid, s in _bm25_scores(tokens, idx.fields[name], idx.n_docs, k1, b).items():
            combined[sid] = combined.get(sid, 0.0) + weight * s
    combined = {sid: s for sid, s in combined.items() if s > 0.0}
    rl = ranked(combined, "text")
    return rl
