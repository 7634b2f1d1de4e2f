"""Shot-segmented video corpus: manifest loading, keyframes, score banks.

A corpus is loaded from a single JSON manifest that names videos, shots
(with keyframe paths and free-text fields), and optional precomputed
concept/object score banks.  Loading is all-or-nothing: any integrity
problem aborts the load with a message naming the offending record, so a
partially loaded corpus can never silently skew rankings.

Score banks are dense float32 matrices with a tiny binary header plus a
sidecar label list (one label per line); rows follow manifest shot order.
"""

from __future__ import annotations

import hashlib
import json
import struct
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .ppm import PpmError, decode_ppm, encode_ppm

BANK_KINDS = ("concept", "object")


class CorpusError(ValueError):
    """Raised when a manifest or one of its referenced files is invalid."""


@dataclass(frozen=True)
class Video:
    id: str
    duration_s: float
    shot_ids: tuple[str, ...] = ()
    title: str = ""


@dataclass(frozen=True)
class Shot:
    id: str
    video_id: str
    start_s: float
    end_s: float
    keyframe_ref: str
    description: str = ""
    speech: str = ""
    ocr: str = ""


@dataclass(frozen=True)
class Keyframe:
    """Decoded keyframe: row-major RGB, 8 bits per channel."""

    pixels: np.ndarray  # (height, width, 3) uint8

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])


@dataclass(frozen=True)
class ScoreBank:
    kind: str                 # "concept" or "object"
    labels: tuple[str, ...]   # column order
    scores: np.ndarray        # (n_shots, n_labels) float32 in [0, 1]

    def column(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None


@dataclass(frozen=True)
class Violation:
    entity_id: str
    rule: str
    detail: str = ""


@dataclass(frozen=True)
class Corpus:
    videos: dict[str, Video]
    shots: dict[str, Shot]
    banks: dict[str, ScoreBank]
    shot_order: tuple[str, ...]   # manifest order; bank rows follow it
    root: Path                    # keyframe paths resolve relative to this
    built_at: float = field(default_factory=time.time)

    def shot_row(self, shot_id: str) -> int:
        return self.shot_order.index(shot_id)

    def keyframe(self, shot_id: str) -> Keyframe:
        """Load and decode the master keyframe of a shot."""
        shot = self.shots[shot_id]
        path = self.root / shot.keyframe_ref
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise CorpusError(f"shot {shot_id!r}: cannot read keyframe: {exc}") from exc
        try:
            return Keyframe(decode_ppm(data))
        except PpmError as exc:
            raise CorpusError(f"shot {shot_id!r}: bad keyframe: {exc}") from exc

    def fingerprint(self) -> str:
        """Stable content hash, used to assert corpus immutability."""
        h = hashlib.sha256()
        for vid in sorted(self.videos):
            v = self.videos[vid]
            h.update(repr((v.id, v.duration_s, v.shot_ids, v.title)).encode())
        for sid in sorted(self.shots):
            s = self.shots[sid]
            h.update(
                repr(
                    (s.id, s.video_id, s.start_s, s.end_s, s.keyframe_ref,
                     s.description, s.speech, s.ocr)
                ).encode()
            )
        for kind in sorted(self.banks):
            bank = self.banks[kind]
            h.update(repr((bank.kind, bank.labels)).encode())
            h.update(bank.scores.tobytes())
        h.update(repr(self.shot_order).encode())
        return h.hexdigest()


def decode_keyframe(data: bytes) -> Keyframe:
    """Decode raw P6 bytes into a Keyframe with exact pixel values."""
    return Keyframe(decode_ppm(data))


def encode_keyframe(kf: Keyframe) -> bytes:
    """Encode a Keyframe into canonical P6 bytes (inverse of decode)."""
    return encode_ppm(kf.pixels)


def _require(record: dict, key: str, locus: str):
    if key not in record:
        raise CorpusError(f"{locus}: missing field {key!r}")
    return record[key]


def read_score_matrix(path: Path) -> np.ndarray:
    """Read a dense score matrix: 8-byte header (rows, cols as LE uint32),
    then row-major little-endian float32."""
    data = path.read_bytes()
    if len(data) < 8:
        raise CorpusError(f"{path}: matrix file too short for header")
    rows, cols = struct.unpack("<II", data[:8])
    expected = rows * cols * 4
    if len(data) - 8 != expected:
        raise CorpusError(
            f"{path}: payload is {len(data) - 8} bytes, header implies {expected}"
        )
    mat = np.frombuffer(data, dtype="<f4", offset=8).reshape(rows, cols)
    return mat.copy()


def write_score_matrix(path: Path, scores: np.ndarray) -> None:
    arr = np.ascontiguousarray(scores, dtype="<f4")
    with open(path, "wb") as fh:
        fh.write(struct.pack("<II", arr.shape[0], arr.shape[1]))
        fh.write(arr.tobytes())


def _load_bank(record: dict, index: int, root: Path, n_shots: int) -> ScoreBank:
    locus = f"banks[{index}]"
    kind = _require(record, "kind", locus)
    if kind not in BANK_KINDS:
        raise CorpusError(f"{locus}: unknown bank kind {kind!r}")
    labels_path = root / _require(record, "labels_file", locus)
    matrix_path = root / _require(record, "matrix_file", locus)
    if not labels_path.is_file():
        raise CorpusError(f"{locus}: labels file not found: {labels_path}")
    if not matrix_path.is_file():
        raise CorpusError(f"{locus}: matrix file not found: {matrix_path}")
    labels = tuple(
        line for line in labels_path.read_text(encoding="utf-8").splitlines() if line
    )
    seen: set[str] = set()
    for label in labels:
        if label in seen:
            raise CorpusError(f"{locus}: duplicate label {label!r}")
        seen.add(label)
    scores = read_score_matrix(matrix_path)
    if scores.shape[0] != n_shots:
        raise CorpusError(
            f"{locus}: matrix has {scores.shape[0]} rows, corpus has {n_shots} shots"
        )
    if scores.shape[1] != len(labels):
        raise CorpusError(
            f"{locus}: matrix has {scores.shape[1]} columns, "
            f"labels file declares {len(labels)}"
        )
    if scores.size and (scores.min() < 0.0 or scores.max() > 1.0):
        bad = np.argwhere((scores < 0.0) | (scores > 1.0))[0]
        raise CorpusError(
            f"{locus}: score out of [0,1] at row {bad[0]}, column {bad[1]}"
        )
    return ScoreBank(kind=kind, labels=labels, scores=scores)


def load_manifest(path: str | Path) -> Corpus:
    """Load, validate, and freeze a corpus from a JSON manifest.

    Raises CorpusError on the first integrity problem (missing file,
    malformed record, dangling reference, score out of range, duplicate
    id); nothing is returned unless the whole corpus is consistent.
    """
    path = Path(path)
    if not path.is_file():
        raise CorpusError(f"manifest not found: {path}")
    root = path.parent
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CorpusError(f"{path}: not valid JSON: {exc}") from exc

    videos: dict[str, Video] = {}
    for i, rec in enumerate(doc.get("videos", [])):
        locus = f"videos[{i}]"
        vid = str(_require(rec, "id", locus))
        if vid in videos:
            raise CorpusError(f"{locus}: duplicate video id {vid!r}")
        duration = float(_require(rec, "duration_s", locus))
        if duration < 0:
            raise CorpusError(f"{locus} (id={vid!r}): negative duration")
        videos[vid] = Video(id=vid, duration_s=duration, title=str(rec.get("title", "")))

    shots: dict[str, Shot] = {}
    per_video: dict[str, list[str]] = {vid: [] for vid in videos}
    shot_order: list[str] = []
    for i, rec in enumerate(doc.get("shots", [])):
        locus = f"shots[{i}]"
        sid = str(_require(rec, "id", locus))
        if sid in shots:
            raise CorpusError(f"{locus}: duplicate shot id {sid!r}")
        vid = str(_require(rec, "video_id", locus))
        if vid not in videos:
            raise CorpusError(f"{locus} (id={sid!r}): dangling video reference {vid!r}")
        keyframe_ref = str(_require(rec, "keyframe", locus))
        if not (root / keyframe_ref).is_file():
            raise CorpusError(
                f"{locus} (id={sid!r}): keyframe file not found: {keyframe_ref}"
            )
        shot = Shot(
            id=sid,
            video_id=vid,
            start_s=float(_require(rec, "start_s", locus)),
            end_s=float(_require(rec, "end_s", locus)),
            keyframe_ref=keyframe_ref,
            description=str(rec.get("description", "")),
            speech=str(rec.get("speech", "")),
            ocr=str(rec.get("ocr", "")),
        )
        shots[sid] = shot
        per_video[vid].append(sid)
        shot_order.append(sid)

    # Per-video shot lists are kept in start-time order.
    for vid, sids in per_video.items():
        sids.sort(key=lambda s: (shots[s].start_s, shots[s].end_s, s))
        videos[vid] = Video(
            id=vid,
            duration_s=videos[vid].duration_s,
            shot_ids=tuple(sids),
            title=videos[vid].title,
        )

    banks: dict[str, ScoreBank] = {}
    for i, rec in enumerate(doc.get("banks", [])):
        bank = _load_bank(rec, i, root, len(shots))
        if bank.kind in banks:
            raise CorpusError(f"banks[{i}]: duplicate bank kind {bank.kind!r}")
        banks[bank.kind] = bank

    corpus = Corpus(
        videos=videos,
        shots=shots,
        banks=banks,
        shot_order=tuple(shot_order),
        root=root,
    )
    violations = validate_corpus(corpus)
    if violations:
        v = violations[0]
        raise CorpusError(
            f"invalid corpus: {v.rule} on {v.entity_id!r}: {v.detail}"
            + (f" (+{len(violations) - 1} more)" if len(violations) > 1 else "")
        )
    return corpus


def validate_corpus(corpus: Corpus) -> list[Violation]:
    """Check every corpus invariant; violations are data, not failures."""
    out: list[Violation] = []

    for sid, shot in corpus.shots.items():
        video = corpus.videos.get(shot.video_id)
        if video is None:
            out.append(Violation(sid, "shot.video_missing", shot.video_id))
            continue
        if not (0 <= shot.start_s < shot.end_s):
            out.append(
                Violation(sid, "shot.bad_interval", f"[{shot.start_s}, {shot.end_s}]")
            )
        elif shot.end_s > video.duration_s:
            out.append(
                Violation(
                    sid,
                    "shot.exceeds_video",
                    f"end {shot.end_s} > duration {video.duration_s}",
                )
            )

    for vid, video in corpus.videos.items():
        prev_end = None
        for sid in video.shot_ids:
            shot = corpus.shots.get(sid)
            if shot is None:
                out.append(Violation(vid, "video.dangling_shot", sid))
                continue
            if shot.video_id != vid:
                out.append(Violation(vid, "video.backref_mismatch", sid))
            if prev_end is not None and shot.start_s < prev_end:
                out.append(
                    Violation(vid, "video.shots_overlap", f"{sid} starts {shot.start_s}")
                )
            prev_end = max(prev_end, shot.end_s) if prev_end is not None else shot.end_s

    for sid in corpus.shot_order:
        if sid not in corpus.shots:
            out.append(Violation(sid, "corpus.order_dangling"))

    for kind, bank in corpus.banks.items():
        if bank.kind != kind:
            out.append(Violation(kind, "bank.kind_mismatch", bank.kind))
        if len(set(bank.labels)) != len(bank.labels):
            out.append(Violation(kind, "bank.duplicate_label"))
        if bank.scores.shape[0] != len(corpus.shots):
            out.append(
                Violation(
                    kind,
                    "bank.row_count",
                    f"{bank.scores.shape[0]} rows vs {len(corpus.shots)} shots",
                )
            )
        if bank.scores.shape[1] != len(bank.labels):
            out.append(
                Violation(
                    kind,
                    "bank.dimension_mismatch",
                    f"{bank.scores.shape[1]} columns vs {len(bank.labels)} labels",
                )
            )
        if bank.scores.size and (bank.scores.min() < 0.0 or bank.scores.max() > 1.0):
            out.append(Violation(kind, "bank.score_range"))

    return out


__all__ = [
    "BANK_KINDS",
    "Corpus",
    "CorpusError",
    "Keyframe",
    "ScoreBank",
    "Shot",
    "Video",
    "Violation",
    "decode_keyframe",
    "encode_keyframe",
    "load_manifest",
    "read_score_matrix",
    "validate_corpus",
    "write_score_matrix",
]
