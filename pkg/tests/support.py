"""Shared independent oracles and generators for the test suite.

Everything here is deliberately written as plain, direct Python, separate
from the library's implementations, so tests compare two code paths.
"""

import math
from functools import reduce

import numpy as np

from kisengine.concepts import And, Leaf, Not, Or
from kisengine.textsearch import tokenize

LABELS = ["person", "dog", "indoor", "car", "tree", "x1", "a-b", "N_2"]


def random_expr(rng: np.random.Generator, depth: int):
    """Random concept AST with random positive weights, depth-bounded."""
    if depth <= 0 or rng.random() < 0.35:
        weight = float(
            rng.choice([1.0, 0.5, 2.0, 3.25, float(round(rng.random() * 5 + 0.01, 6))])
        )
        bank = "object" if rng.random() < 0.3 else "concept"
        return Leaf(str(rng.choice(LABELS)), weight, bank)
    kind = rng.integers(0, 3)
    if kind == 0:
        return Not(random_expr(rng, depth - 1))
    n = int(rng.integers(2, 4))
    children = tuple(random_expr(rng, depth - 1) for _ in range(n))
    return And(children) if kind == 1 else Or(children)


def random_scores(rng: np.random.Generator, crisp: bool = False) -> dict:
    if crisp:
        return {l: float(rng.integers(0, 2)) for l in LABELS}
    return {l: float(rng.random()) for l in LABELS}


def oracle_eval(expr, scores, objects):
    """Independent recursive fuzzy-boolean evaluator (reduce-based)."""

    def weight(e):
        if isinstance(e, Leaf):
            return e.weight
        if isinstance(e, Not):
            return weight(e.child)
        return 1.0

    if isinstance(expr, Leaf):
        return (objects if expr.bank == "object" else scores)[expr.label]
    if isinstance(expr, Not):
        return 1.0 - oracle_eval(expr.child, scores, objects)
    ws = [weight(c) for c in expr.children]
    total = sum(ws)
    if isinstance(expr, And):
        vals = [
            oracle_eval(c, scores, objects) ** (w / total)
            for c, w in zip(expr.children, ws)
        ]
        return reduce(lambda x, y: x * y, vals, 1.0)
    vals = [
        (1.0 - oracle_eval(c, scores, objects)) ** (w / total)
        for c, w in zip(expr.children, ws)
    ]
    return 1.0 - reduce(lambda x, y: x * y, vals, 1.0)


def crisp_eval(expr, scores, objects):
    if isinstance(expr, Leaf):
        return bool((objects if expr.bank == "object" else scores)[expr.label])
    if isinstance(expr, Not):
        return not crisp_eval(expr.child, scores, objects)
    if isinstance(expr, And):
        return all(crisp_eval(c, scores, objects) for c in expr.children)
    return any(crisp_eval(c, scores, objects) for c in expr.children)


def oracle_bm25(corpus, query_text, weights, k1=1.2, b=0.75):
    """Full-corpus-scan BM25, straight from the formula."""
    scores = {}
    tokens = tokenize(query_text)
    n = len(corpus.shot_order)
    for field_name, weight in weights.items():
        if weight <= 0:
            continue
        docs = {
            sid: tokenize(getattr(corpus.shots[sid], field_name))
            for sid in corpus.shot_order
        }
        avg = sum(len(d) for d in docs.values()) / n if n else 0.0
        if avg == 0:
            continue
        for term in tokens:
            df = sum(1 for d in docs.values() if term in d)
            if df == 0:
                continue
            idf = math.log((n - df + 0.5) / (df + 0.5) + 1.0)
            for sid, doc in docs.items():
                tf = doc.count(term)
                if tf == 0:
                    continue
                part = idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len(doc) / avg))
                scores[sid] = scores.get(sid, 0.0) + weight * part
    return {sid: s for sid, s in scores.items() if s > 0}


def oracle_is_bw(pixels, chroma_threshold=12, pixel_fraction=0.98):
    h, w = pixels.shape[:2]
    ok = 0
    for y in range(h):
        for x in range(w):
            r, g, b = (int(v) for v in pixels[y, x])
            if max(r, g, b) - min(r, g, b) <= chroma_threshold:
                ok += 1
    return ok / (h * w) >= pixel_fraction


def oracle_border(pixels, luma_threshold=24, row_fraction=0.95):
    h, w = pixels.shape[:2]

    def dark(y, x):
        r, g, b = (float(v) for v in pixels[y, x])
        return 0.299 * r + 0.587 * g + 0.114 * b <= luma_threshold

    def run(lines, length, cap):
        width = 0
        for line in lines:
            if sum(line) / length >= row_fraction and width < cap:
                width += 1
            else:
                break
        return width

    rows = [[dark(y, x) for x in range(w)] for y in range(h)]
    cols = [[dark(y, x) for y in range(h)] for x in range(w)]
    return (
        run(rows, w, h // 2),
        run(rows[::-1], w, h // 2),
        run(cols, h, w // 2),
        run(cols[::-1], h, w // 2),
    )
