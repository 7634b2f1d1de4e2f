"""
Fusion, relevance feedback, and result filters
==============================================

Combine sketch + text + concept rankings with reciprocal-rank fusion,
re-rank with user-marked positives, and drop black-and-white or
letterboxed keyframes from the list.
"""

import tempfile
from pathlib import Path

import numpy as np

from kisengine import load_manifest, rgb_to_lab
from kisengine.colorsketch import SketchPoint, SketchQuery
from kisengine.corpus import Keyframe
from kisengine.engine import CompositeQuery, Engine
from kisengine.filters import FilterFlags, detect_black_border, is_black_and_white
from kisengine.fusion import feedback_rerank, fuse
from kisengine.synth import generate_corpus, letterbox_image, uniform_image
from kisengine.textsearch import TextQuery

workdir = Path(tempfile.mkdtemp(prefix="kis-demo-"))
corpus = load_manifest(generate_corpus(workdir, 10, 6, seed=4, concept_labels=8))
engine = Engine.build(corpus)

sketch = SketchQuery((SketchPoint(0.5, 0.5, rgb_to_lab(200, 50, 50)),))
query = CompositeQuery(
    sketch=sketch,
    text=TextQuery("teal market"),
    concept="concept_001 OR concept_005:2",
    modality_weights={"sketch": 1.0, "text": 1.5, "concept": 0.75},
    limit=20,
)
fused = engine.execute(query)
print("fused top 5 (weighted reciprocal-rank fusion):")
for sid, score in fused.entries[:5]:
    print(f"  {sid}  {score:.5f}")

# fusing a single list keeps its ordering (scores become rank-based)
single = engine.execute(CompositeQuery(text=TextQuery("teal market")))
print(f"\nsingle-modality fusion preserves ordering: {single.ids()[:4]}")

# --- feedback ---------------------------------------------------------------
positives = fused.ids()[:2]
print(f"\nmarking positives: {positives}")
for lam in (1.0, 0.5, 0.0):
    rr = feedback_rerank(fused, positives, engine.color_index, corpus.banks, lam=lam)
    print(f"  lambda={lam}: top 4 -> {rr.ids()[:4]}")

# --- filters ----------------------------------------------------------------
gray = np.repeat(np.random.default_rng(0).integers(0, 256, (48, 48, 1), np.uint8), 3, 2)
boxed = letterbox_image(uniform_image(48, (180, 120, 90)), bar=6)
print(f"\ngray frame is B&W: {is_black_and_white(Keyframe(gray))}")
print(f"letterboxed frame borders (t,b,l,r): {detect_black_border(Keyframe(boxed))}")

flags = FilterFlags(drop_black_and_white=True, drop_black_bordered=True)
filtered = engine.execute(
    CompositeQuery(sketch=sketch, flags=flags, limit=20)
)
unfiltered = engine.execute(CompositeQuery(sketch=sketch, limit=20))
print(f"\nwith filters on, {len(unfiltered) - len(filtered)} of "
      f"{len(unfiltered)} shots were dropped (synthetic corpus is colorful,"
      " so usually none)")
