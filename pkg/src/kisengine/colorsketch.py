"""Color-sketch retrieval: position-color signatures and their ranking.

Each keyframe is summarized by a small set of weighted centroids in a
joint position-color space (normalized x, y plus CIELAB).  A user sketch
is a handful of colored points on the same canvas; shots are ranked by
how cheaply every sketch point can be explained by some signature
centroid, mixing spatial distance and perceptual color distance.

The module also maintains a corpus-wide grid of quantized-color counts
so the UI can recommend, for any canvas position, the colors that
actually occur there in the dataset.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .config import SketchConfig
from .corpus import Corpus, Keyframe
from .ranking import RankedList

# ---------------------------------------------------------------------------
# CIELAB conversion (sRGB, D65 reference white, 2 degree observer)

_SRGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
_WHITE = np.array([0.95047, 1.0, 1.08883])
_EPS = (6.0 / 29.0) ** 3


@dataclass(frozen=True)
class LabColor:
    L: float
    a: float
    b: float

    def as_array(self) -> np.ndarray:
        return np.array([self.L, self.a, self.b])


def _f_lab(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    return np.where(t > _EPS, np.cbrt(t), t / (3 * (6.0 / 29.0) ** 2) + 4.0 / 29.0)


def lab_from_rgb_array(rgb: np.ndarray) -> np.ndarray:
    """Vectorized sRGB (0..255) to Lab. Input (..., 3), output (..., 3) float64."""
    c = np.asarray(rgb, dtype=np.float64) / 255.0
    linear = np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)
    xyz = linear @ _SRGB_TO_XYZ.T
    fxyz = _f_lab(xyz / _WHITE)
    lab = np.empty_like(fxyz)
    lab[..., 0] = 116.0 * fxyz[..., 1] - 16.0
    lab[..., 1] = 500.0 * (fxyz[..., 0] - fxyz[..., 1])
    lab[..., 2] = 200.0 * (fxyz[..., 1] - fxyz[..., 2])
    return lab


def rgb_to_lab(r: int, g: int, b: int) -> LabColor:
    """Convert one 8-bit sRGB triple to CIELAB (D65). Deterministic."""
    for name, v in (("r", r), ("g", g), ("b", b)):
        if not 0 <= v <= 255:
            raise ValueError(f"channel {name} out of [0, 255]: {v}")
    lab = lab_from_rgb_array(np.array([r, g, b], dtype=np.float64))
    return LabColor(float(lab[0]), float(lab[1]), float(lab[2]))


def lab_to_rgb(color: LabColor) -> tuple[int, int, int]:
    """Inverse conversion, clamped to the sRGB gamut (for display only)."""
    fy = (color.L + 16.0) / 116.0
    fx = fy + color.a / 500.0
    fz = fy - color.b / 200.0

    def inv_f(t: float) -> float:
        return t**3 if t**3 > _EPS else 3 * (6.0 / 29.0) ** 2 * (t - 4.0 / 29.0)

    xyz = np.array([inv_f(fx), inv_f(fy), inv_f(fz)]) * _WHITE
    linear = np.linalg.solve(_SRGB_TO_XYZ, xyz)
    linear = np.clip(linear, 0.0, 1.0)
    c = np.where(linear <= 0.0031308, linear * 12.92, 1.055 * linear ** (1 / 2.4) - 0.055)
    rgb = np.clip(np.round(c * 255.0), 0, 255).astype(int)
    return int(rgb[0]), int(rgb[1]), int(rgb[2])


def delta_e76(c1: LabColor, c2: LabColor) -> float:
    """Euclidean distance in Lab space."""
    return float(
        np.sqrt((c1.L - c2.L) ** 2 + (c1.a - c2.a) ** 2 + (c1.b - c2.b) ** 2)
    )


# ---------------------------------------------------------------------------
# Quantized Lab palette

def make_palette(size: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Fixed palette spanning the sRGB cube: cell-center samples of an
    n x n x n RGB grid, converted to Lab.  Returns (rgb uint8, lab float64),
    both (size, 3), ordered r-major.  ``size`` must be a perfect cube."""
    side = round(size ** (1 / 3))
    if side**3 != size:
        raise ValueError(f"palette size must be a perfect cube, got {size}")
    levels = np.array([(i + 0.5) * 256.0 / side for i in range(side)])
    levels = np.clip(levels, 0, 255).astype(np.uint8)
    rgb = np.array(
        [(r, g, b) for r in levels for g in levels for b in levels], dtype=np.uint8
    )
    return rgb, lab_from_rgb_array(rgb)


def nearest_palette_bin(lab: np.ndarray, palette_lab: np.ndarray) -> np.ndarray:
    """Index of the nearest palette color (Lab distance, ties to lowest index)."""
    lab = np.atleast_2d(lab)
    d2 = ((lab[:, None, :] - palette_lab[None, :, :]) ** 2).sum(axis=2)
    return d2.argmin(axis=1)


# ---------------------------------------------------------------------------
# Signatures

@dataclass(frozen=True)
class SignatureCentroid:
    x: float
    y: float
    color: LabColor
    weight: float


@dataclass(frozen=True)
class ColorSignature:
    shot_id: str
    centroids: tuple[SignatureCentroid, ...]


@dataclass(frozen=True)
class SketchPoint:
    x: float
    y: float
    color: LabColor


@dataclass(frozen=True)
class SketchQuery:
    points: tuple[SketchPoint, ...]
    level: str = "frame"  # "frame" or "shot"

    def __post_init__(self):
        if not 1 <= len(self.points) <= 16:
            raise ValueError("sketch must have between 1 and 16 points")
        if self.level not in ("frame", "shot"):
            raise ValueError(f"unknown sketch level {self.level!r}")
        for p in self.points:
            if not (0.0 <= p.x <= 1.0 and 0.0 <= p.y <= 1.0):
                raise ValueError(f"sketch point out of canvas: ({p.x}, {p.y})")

    @classmethod
    def from_dict(cls, data: dict) -> "SketchQuery":
        points = tuple(
            SketchPoint(
                float(p["x"]),
                float(p["y"]),
                LabColor(
                    float(p["color"]["L"]),
                    float(p["color"]["a"]),
                    float(p["color"]["b"]),
                ),
            )
            for p in data["points"]
        )
        return cls(points=points, level=data.get("level", "frame"))

    def to_dict(self) -> dict:
        return {
            "points": [
                {
                    "x": p.x,
                    "y": p.y,
                    "color": {"L": p.color.L, "a": p.color.a, "b": p.color.b},
                }
                for p in self.points
            ],
            "level": self.level,
        }


def _sample_features(kf: Keyframe, sample_size: int, seed: int) -> np.ndarray:
    """Uniform pixel sample as rows of (x, y, L/100, a/256, b/256)."""
    h, w = kf.pixels.shape[:2]
    n = h * w
    flat = kf.pixels.reshape(n, 3)
    if n > sample_size:
        rng = np.random.default_rng(seed)
        idx = np.sort(rng.choice(n, size=sample_size, replace=False))
    else:
        idx = np.arange(n)
    rows, cols = idx // w, idx % w
    lab = lab_from_rgb_array(flat[idx])
    feats = np.empty((len(idx), 5))
    feats[:, 0] = (cols + 0.5) / w
    feats[:, 1] = (rows + 0.5) / h
    feats[:, 2] = lab[:, 0] / 100.0
    feats[:, 3] = lab[:, 1] / 256.0
    feats[:, 4] = lab[:, 2] / 256.0
    return feats


def _seed_centers(feats: np.ndarray, k: int) -> np.ndarray:
    """Initial centers from the k most frequent coarse color bins.

    Seeding by color frequency (rather than by random points) makes the
    cluster count collapse naturally on flat or low-color images: an image
    with fewer distinct coarse colors than k yields fewer centroids.
    """
    lab_l = np.clip((feats[:, 2] * 100.0 / 12.5).astype(np.int64), 0, 7)
    lab_a = np.clip(((feats[:, 3] * 256.0 + 128.0) / 32.0).astype(np.int64), 0, 7)
    lab_b = np.clip(((feats[:, 4] * 256.0 + 128.0) / 32.0).astype(np.int64), 0, 7)
    keys = lab_l * 64 + lab_a * 8 + lab_b
    uniq, counts = np.unique(keys, return_counts=True)
    order = np.lexsort((uniq, -counts))  # count desc, bin key asc
    chosen = uniq[order[:k]]
    centers = np.stack([feats[keys == key].mean(axis=0) for key in chosen])
    return centers


def _lloyd(feats: np.ndarray, centers: np.ndarray, max_iter: int = 32):
    """Plain Lloyd iterations; ties in assignment go to the lowest center."""
    assign = None
    for _ in range(max_iter):
        d2 = ((feats[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_assign = d2.argmin(axis=1)
        if assign is not None and np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for j in range(len(centers)):
            members = feats[assign == j]
            if len(members):
                centers[j] = members.mean(axis=0)
    return centers, assign


def extract_signature(
    kf: Keyframe,
    k: int,
    *,
    shot_id: str = "",
    sample_size: int = 2048,
    seed: int = 0,
    k_max: int = 16,
) -> ColorSignature:
    """Cluster a keyframe into at most k weighted position-color centroids.

    Runs k-means over a uniform pixel sample in (x, y, L/100, a/256, b/256)
    space, seeded from the most frequent coarse colors; weights are cluster
    fractions.  Deterministic for a fixed seed.  Degenerate images simply
    yield fewer centroids.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    k = min(k, k_max)
    feats = _sample_features(kf, sample_size, seed)
    centers = _seed_centers(feats, k)
    centers, assign = _lloyd(feats, centers)

    centroids = []
    n = len(feats)
    for j in range(len(centers)):
        count = int((assign == j).sum())
        if count == 0:
            continue
        c = centers[j]
        centroids.append(
            SignatureCentroid(
                x=float(c[0]),
                y=float(c[1]),
                color=LabColor(float(c[2] * 100.0), float(c[3] * 256.0), float(c[4] * 256.0)),
                weight=count / n,
            )
        )
    return ColorSignature(shot_id=shot_id, centroids=tuple(centroids))


# ---------------------------------------------------------------------------
# Index

@dataclass
class ColorIndex:
    """Per-shot signatures plus the grid/palette statistics for
    recommendations and feedback features.  Immutable after build."""

    shot_ids: tuple[str, ...]                 # corpus order
    signatures: dict[str, ColorSignature]
    grid_size: int
    palette_rgb: np.ndarray                   # (P, 3) uint8
    palette_lab: np.ndarray                   # (P, 3) float64
    cell_counts: np.ndarray                   # (G, G, P) int64
    recommendation_enabled: bool
    k: int
    sample_size: int
    seed: int
    # Packed centroid arrays for vectorized scoring, derived from signatures.
    _flat: np.ndarray | None = None           # (N, 5): x, y, L, a, b
    _offsets: np.ndarray | None = None        # (n_shots,) start of each shot

    def __post_init__(self):
        if self._flat is None:
            rows, offsets, pos = [], [], 0
            for sid in self.shot_ids:
                offsets.append(pos)
                for c in self.signatures[sid].centroids:
                    rows.append((c.x, c.y, c.color.L, c.color.a, c.color.b))
                    pos += 1
            self._flat = np.array(rows, dtype=np.float64).reshape(pos, 5)
            self._offsets = np.array(offsets, dtype=np.intp)

    def grid_cell(self, x: float, y: float) -> tuple[int, int]:
        g = self.grid_size
        cx = min(int(x * g), g - 1)
        cy = min(int(y * g), g - 1)
        return cx, cy


def grid_cell_of(x: float, y: float, grid_size: int) -> tuple[int, int]:
    return min(int(x * grid_size), grid_size - 1), min(int(y * grid_size), grid_size - 1)


def build_color_index(corpus: Corpus, k: int = 8, *, config: SketchConfig | None = None) -> ColorIndex:
    """Extract one signature per corpus shot and accumulate the per-cell
    palette histograms.  Raises with the shot id if a keyframe fails to
    decode."""
    cfg = config or SketchConfig()
    if config is not None:
        k = cfg.k
    palette_rgb, palette_lab = make_palette(cfg.palette_size)
    g = cfg.grid_size
    counts = np.zeros((g, g, cfg.palette_size), dtype=np.int64)
    signatures: dict[str, ColorSignature] = {}
    for sid in corpus.shot_order:
        kf = corpus.keyframe(sid)
        sig = extract_signature(
            kf, k, shot_id=sid, sample_size=cfg.sample_size, seed=cfg.seed, k_max=cfg.k_max
        )
        signatures[sid] = sig
        for c in sig.centroids:
            cx, cy = grid_cell_of(c.x, c.y, g)
            bin_ = int(nearest_palette_bin(c.color.as_array(), palette_lab)[0])
            counts[cy, cx, bin_] += 1
    return ColorIndex(
        shot_ids=corpus.shot_order,
        signatures=signatures,
        grid_size=g,
        palette_rgb=palette_rgb,
        palette_lab=palette_lab,
        cell_counts=counts,
        recommendation_enabled=cfg.recommendation_enabled,
        k=k,
        sample_size=cfg.sample_size,
        seed=cfg.seed,
    )


# ---------------------------------------------------------------------------
# Scoring and ranking

def score_sketch(query: SketchQuery, sig: ColorSignature, alpha: float = 2.0) -> float:
    """Dissimilarity between a sketch and one signature (lower is better).

    Each sketch point pays for its best-matching centroid:
    alpha * spatial distance + Lab distance / 100, summed over points.
    """
    if not sig.centroids:
        return float("inf")
    total = 0.0
    for p in query.points:
        best = float("inf")
        for c in sig.centroids:
            spatial = np.hypot(p.x - c.x, p.y - c.y)
            color = delta_e76(p.color, c.color) / 100.0
            cost = alpha * spatial + color
            if cost < best:
                best = cost
        total += best
    return total


def _scores_against_index(query: SketchQuery, idx: ColorIndex, alpha: float) -> np.ndarray:
    """Vectorized per-shot sketch dissimilarity in index shot order."""
    flat, offsets = idx._flat, idx._offsets
    n_shots = len(idx.shot_ids)
    if flat is None or len(flat) == 0:
        return np.full(n_shots, np.inf)
    totals = np.zeros(n_shots)
    cx, cy = flat[:, 0], flat[:, 1]
    clab = flat[:, 2:5]
    for p in query.points:
        spatial = np.hypot(p.x - cx, p.y - cy)
        dlab = clab - p.color.as_array()
        color = np.sqrt((dlab**2).sum(axis=1)) / 100.0
        cost = alpha * spatial + color
        totals += np.minimum.reduceat(cost, offsets)
    return totals


def rank_by_sketch(
    query: SketchQuery, idx: ColorIndex, corpus: Corpus, alpha: float = 2.0
) -> RankedList:
    """Rank all shots against a sketch; relevance is 1 / (1 + dissimilarity).

    Frame level scores each shot's own signature.  Shot level pools each
    shot with its immediate temporal neighbors in the same video and keeps
    the best score, so a sketch matching an adjacent frame still surfaces
    the shot.
    """
    if tuple(idx.shot_ids) != tuple(corpus.shot_order):
        raise ValueError("color index does not match corpus")
    if not idx.shot_ids:
        return RankedList((), "sketch")
    scores = _scores_against_index(query, idx, alpha)
    if query.level == "shot":
        pos = {sid: i for i, sid in enumerate(idx.shot_ids)}
        pooled = scores.copy()
        for video in corpus.videos.values():
            sids = video.shot_ids
            for j, sid in enumerate(sids):
                best = scores[pos[sid]]
                if j > 0:
                    best = min(best, scores[pos[sids[j - 1]]])
                if j + 1 < len(sids):
                    best = min(best, scores[pos[sids[j + 1]]])
                pooled[pos[sid]] = best
        scores = pooled
    order = sorted(range(len(scores)), key=lambda i: (scores[i], idx.shot_ids[i]))
    entries = tuple(
        (idx.shot_ids[i], float(1.0 / (1.0 + scores[i]))) for i in order
    )
    return RankedList(entries, "sketch")


def recommend_colors(
    x: float, y: float, idx: ColorIndex, n: int = 8
) -> list[tuple[int, LabColor, float]]:
    """Top-n palette colors for the grid cell containing (x, y).

    Returns (palette index, Lab color, frequency) tuples in descending
    frequency, ties broken by palette index.  Empty when recommendations
    are disabled or the cell has never seen a centroid.
    """
    if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
        raise ValueError(f"coordinates out of canvas: ({x}, {y})")
    if not idx.recommendation_enabled:
        return []
    cx, cy = idx.grid_cell(x, y)
    counts = idx.cell_counts[cy, cx]
    total = int(counts.sum())
    if total == 0:
        return []
    order = np.lexsort((np.arange(len(counts)), -counts))
    out = []
    for bin_ in order[:n]:
        if counts[bin_] == 0:
            break
        lab = idx.palette_lab[bin_]
        out.append(
            (int(bin_), LabColor(float(lab[0]), float(lab[1]), float(lab[2])),
             float(counts[bin_] / total))
        )
    return out


def sketch_from_signature(sig: ColorSignature, level: str = "frame") -> SketchQuery:
    """Turn a signature's centroids into a sketch (at most 16 points)."""
    points = tuple(
        SketchPoint(c.x, c.y, c.color) for c in sig.centroids[:16]
    )
    return SketchQuery(points=points, level=level)


# ---------------------------------------------------------------------------
# Index cache file

_MAGIC = b"KISCIDX1"


def color_index_bytes(idx: ColorIndex) -> bytes:
    """Serialize an index to a deterministic versioned binary blob."""
    parts = [_MAGIC, struct.pack("<IIIIIqB", 1, idx.grid_size, len(idx.palette_rgb),
                                 idx.k, idx.sample_size, idx.seed,
                                 1 if idx.recommendation_enabled else 0)]
    parts.append(struct.pack("<I", len(idx.shot_ids)))
    for sid in idx.shot_ids:
        raw = sid.encode("utf-8")
        parts.append(struct.pack("<H", len(raw)))
        parts.append(raw)
        cents = idx.signatures[sid].centroids
        parts.append(struct.pack("<H", len(cents)))
        for c in cents:
            parts.append(
                struct.pack("<6d", c.x, c.y, c.color.L, c.color.a, c.color.b, c.weight)
            )
    parts.append(idx.palette_rgb.astype("<u1").tobytes())
    parts.append(np.ascontiguousarray(idx.cell_counts, dtype="<i8").tobytes())
    return b"".join(parts)


def save_color_index(idx: ColorIndex, path: str | Path) -> None:
    Path(path).write_bytes(color_index_bytes(idx))


def load_color_index(path: str | Path) -> ColorIndex:
    data = Path(path).read_bytes()
    if data[: len(_MAGIC)] != _MAGIC:
        raise ValueError("not a color index cache file")
    pos = len(_MAGIC)
    version, grid, palette_size, k, sample, seed, rec = struct.unpack_from(
        "<IIIIIqB", data, pos
    )
    if version != 1:
        raise ValueError(f"unsupported color index version {version}")
    pos += struct.calcsize("<IIIIIqB")
    (n_shots,) = struct.unpack_from("<I", data, pos)
    pos += 4
    shot_ids = []
    signatures: dict[str, ColorSignature] = {}
    for _ in range(n_shots):
        (id_len,) = struct.unpack_from("<H", data, pos)
        pos += 2
        sid = data[pos : pos + id_len].decode("utf-8")
        pos += id_len
        (n_cents,) = struct.unpack_from("<H", data, pos)
        pos += 2
        cents = []
        for _ in range(n_cents):
            x, y, L, a, b, w = struct.unpack_from("<6d", data, pos)
            pos += struct.calcsize("<6d")
            cents.append(SignatureCentroid(x, y, LabColor(L, a, b), w))
        shot_ids.append(sid)
        signatures[sid] = ColorSignature(shot_id=sid, centroids=tuple(cents))
    palette_rgb = np.frombuffer(
        data, dtype="<u1", count=palette_size * 3, offset=pos
    ).reshape(palette_size, 3).copy()
    pos += palette_size * 3
    counts = np.frombuffer(
        data, dtype="<i8", count=grid * grid * palette_size, offset=pos
    ).reshape(grid, grid, palette_size).copy()
    return ColorIndex(
        shot_ids=tuple(shot_ids),
        signatures=signatures,
        grid_size=grid,
        palette_rgb=palette_rgb,
        palette_lab=lab_from_rgb_array(palette_rgb),
        cell_counts=counts,
        recommendation_enabled=bool(rec),
        k=k,
        sample_size=sample,
        seed=seed,
    )


def with_recommendation(idx: ColorIndex, enabled: bool) -> ColorIndex:
    """Copy of the index with the recommendation toggle set."""
    return replace(idx, recommendation_enabled=enabled)
