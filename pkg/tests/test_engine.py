import threading

import numpy as np
import pytest

from kisengine.colorsketch import LabColor, SketchPoint, SketchQuery, sketch_from_signature
from kisengine.concepts import parse_concept_query, rank_by_expr
from kisengine.engine import CompositeQuery
from kisengine.filters import FilterFlags, apply_filters
from kisengine.fusion import fuse
from kisengine.ranking import RankedList
from kisengine.textsearch import TextQuery, search_text


def some_sketch(seed=1):
    rng = np.random.default_rng(seed)
    points = tuple(
        SketchPoint(rng.random(), rng.random(),
                    LabColor(rng.random() * 100, rng.random() * 80 - 40, rng.random() * 80 - 40))
        for _ in range(3)
    )
    return SketchQuery(points)


def test_text_only_matches_module_ordering(synth_engine):
    tq = TextQuery("crimson street")
    composite = CompositeQuery(text=tq)
    out = synth_engine.execute(composite)
    direct = search_text(tq, synth_engine.text_index)
    assert out.ids() == direct.ids()[: composite.limit]


def test_zero_weight_modality_is_ignored(synth_engine):
    sketch = some_sketch()
    label = synth_engine.corpus.banks["concept"].labels[0]
    sketch_only = synth_engine.execute(CompositeQuery(sketch=sketch))
    both = synth_engine.execute(
        CompositeQuery(sketch=sketch, concept=label, modality_weights={"concept": 0.0})
    )
    assert both.ids() == sketch_only.ids()
    assert [s for _, s in both.entries] == [s for _, s in sketch_only.entries]


def test_three_modalities_match_module_pipeline(synth_engine):
    """Composite execution equals composing the already-tested pieces."""
    corpus = synth_engine.corpus
    sketch = some_sketch(3)
    text = TextQuery("harbor teal")
    label = corpus.banks["concept"].labels[2]
    weights = {"sketch": 1.5, "text": 0.8, "concept": 1.0}
    flags = FilterFlags(drop_black_and_white=True, drop_black_bordered=True)
    q = CompositeQuery(
        sketch=sketch, text=text, concept=label,
        modality_weights=weights, flags=flags, limit=50,
    )
    out = synth_engine.execute(q)

    from kisengine.colorsketch import rank_by_sketch

    parts = [
        (rank_by_sketch(sketch, synth_engine.color_index, corpus,
                        alpha=synth_engine.config.sketch.alpha), 1.5),
        (search_text(text, synth_engine.text_index), 0.8),
        (rank_by_expr(parse_concept_query(label), corpus.banks, corpus), 1.0),
    ]
    fused = fuse(parts, k=synth_engine.config.fusion.rrf_k)
    filtered = apply_filters(fused, flags, synth_engine.verdicts,
                             synth_engine.config.filters.border_min)
    assert out.entries == filtered.truncate(50).entries


def test_limit_truncates(synth_engine):
    q = CompositeQuery(sketch=some_sketch(4), limit=7)
    assert len(synth_engine.execute(q)) == 7


def test_composite_requires_a_modality():
    with pytest.raises(ValueError):
        CompositeQuery()
    with pytest.raises(ValueError):
        CompositeQuery(concept="a", limit=0)


def test_composite_roundtrips_via_dict(synth_engine):
    q = CompositeQuery(
        sketch=some_sketch(5),
        text=TextQuery("mint rooftop"),
        concept="concept_001:2 AND NOT concept_002",
        modality_weights={"sketch": 2.0},
        flags=FilterFlags(drop_black_and_white=True),
        limit=10,
    )
    q2 = CompositeQuery.from_dict(q.to_dict())
    assert q2 == q
    assert synth_engine.execute(q).entries == synth_engine.execute(q2).entries


def test_group_by_video_partitions(synth_engine):
    out = synth_engine.execute(CompositeQuery(sketch=some_sketch(6), limit=100))
    groups = synth_engine.group_by_video(out)

    # conservation: the multiset of shots across groups equals the list
    flattened = [sid for g in groups for sid, _ in g.entries]
    assert sorted(flattened) == sorted(out.ids())

    # order: by best shot's rank; within groups, ranked order
    rank = {sid: i for i, (sid, _) in enumerate(out.entries)}
    best = [min(rank[sid] for sid, _ in g.entries) for g in groups]
    assert best == sorted(best)
    for g in groups:
        ranks = [rank[sid] for sid, _ in g.entries]
        assert ranks == sorted(ranks)
        assert g.best_score == g.entries[0][1]
        for sid, _ in g.entries:
            assert synth_engine.corpus.shots[sid].video_id == g.video_id


def test_group_by_video_empty(synth_engine):
    assert synth_engine.group_by_video(RankedList(())) == []


def test_flat_view_identity(synth_engine):
    out = synth_engine.execute(CompositeQuery(sketch=some_sketch(7)))
    assert synth_engine.flat_view(out) is out
    assert synth_engine.flat_view(RankedList(())) == RankedList(())


def test_corpus_unchanged_by_querying(synth_engine):
    before = synth_engine.corpus.fingerprint()
    for seed in range(3):
        synth_engine.execute(
            CompositeQuery(sketch=some_sketch(seed), text=TextQuery("navy bridge"))
        )
    assert synth_engine.corpus.fingerprint() == before


def test_concurrent_queries_match_serial(synth_engine):
    queries = [CompositeQuery(sketch=some_sketch(s), limit=30) for s in range(8)]
    serial = [synth_engine.execute(q).entries for q in queries]
    results = [None] * len(queries)

    def work(i):
        results[i] = synth_engine.execute(queries[i]).entries

    threads = [threading.Thread(target=work, args=(i,)) for i in range(len(queries))]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert results == serial


def test_self_sketch_query_through_engine(synth_engine):
    corpus = synth_engine.corpus
    sid = corpus.shot_order[42]
    q = CompositeQuery(sketch=sketch_from_signature(synth_engine.color_index.signatures[sid]))
    out = synth_engine.execute(q)
    assert out.ids()[0] == sid
