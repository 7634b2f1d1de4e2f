"""
Text and weighted boolean concept queries
=========================================

Fielded BM25 over description/speech/OCR, then the concept query
language: parsing, canonical printing, fuzzy evaluation, and ranking
against precomputed score banks.
"""

import tempfile
from pathlib import Path

from kisengine import load_manifest
from kisengine.concepts import (
    eval_expr,
    list_concepts,
    parse_concept_query,
    print_expr,
    rank_by_expr,
)
from kisengine.textsearch import TextQuery, build_text_index, search_text
from kisengine.synth import generate_corpus

workdir = Path(tempfile.mkdtemp(prefix="kis-demo-"))
corpus = load_manifest(generate_corpus(workdir, 8, 8, seed=3, concept_labels=12))

# --- text ------------------------------------------------------------------
tidx = build_text_index(corpus)
for text, weights in [
    ("crimson harbor", None),
    ("crimson harbor", {"description": 0.0, "speech": 1.0, "ocr": 0.0}),
]:
    q = TextQuery(text, field_weights=weights)
    rl = search_text(q, tidx)
    label = "all fields" if weights is None else "speech only"
    print(f"text {text!r} ({label}): {len(rl)} hits, top: {rl.entries[:3]}")

# --- concepts ---------------------------------------------------------------
print("\nautocomplete 'concept_00':", list_concepts("concept_00", corpus.banks["concept"], 4))

query = "concept_001:2 AND (concept_002 OR NOT concept_003)"
expr = parse_concept_query(query)
print(f"\nparsed   {query!r}")
print(f"canonical {print_expr(expr)!r}")

scores = {"concept_001": 0.9, "concept_002": 0.2, "concept_003": 0.7}
print(f"fuzzy value at {scores}: {eval_expr(expr, scores):.4f}")

rl = rank_by_expr(expr, corpus.banks, corpus)
print(f"\nranking over the corpus bank: {len(rl)} shots, top 3:")
for sid, score in rl.entries[:3]:
    print(f"  {sid}  {score:.4f}")

# the algebra keeps exact De Morgan duality
left = eval_expr(parse_concept_query("NOT (concept_001:3 AND concept_002)"), scores)
right = eval_expr(parse_concept_query("NOT concept_001:3 OR NOT concept_002"), scores)
print(f"\nDe Morgan check: {left:.15f} == {right:.15f}")

# parse errors carry character offsets
try:
    parse_concept_query("AND person")
except Exception as exc:
    print(f"\nparse error example: {exc}")
