import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kisengine.concepts import (
    And,
    Leaf,
    Not,
    Or,
    ParseError,
    UnresolvedLabelError,
    eval_expr,
    list_concepts,
    parse_concept_query,
    print_expr,
    rank_by_expr,
)
from kisengine.corpus import ScoreBank

# ---------------------------------------------------------------------------
# Parsing


def test_bare_leaf_defaults():
    assert parse_concept_query("person") == Leaf("person", 1.0, "concept")


def test_weighted_nested_query():
    expr = parse_concept_query("person:2 AND (obj/dog OR NOT indoor)")
    assert expr == And(
        (
            Leaf("person", 2.0, "concept"),
            Or((Leaf("dog", 1.0, "object"), Not(Leaf("indoor", 1.0, "concept")))),
        )
    )


def test_keywords_case_insensitive():
    assert parse_concept_query("a and b") == parse_concept_query("a AND b")
    assert parse_concept_query("not a") == Not(Leaf("a"))


def test_multiway_flattening():
    expr = parse_concept_query("a AND b AND c")
    assert expr == And((Leaf("a"), Leaf("b"), Leaf("c")))
    expr = parse_concept_query("a OR b OR c OR d")
    assert isinstance(expr, Or) and len(expr.children) == 4


def test_quoted_labels():
    expr = parse_concept_query('"traffic light" AND person')
    assert expr.children[0] == Leaf("traffic light")
    expr = parse_concept_query('"obj/traffic light":2')
    assert expr == Leaf("traffic light", 2.0, "object")


def test_precedence_not_over_and_over_or():
    expr = parse_concept_query("a OR NOT b AND c")
    assert expr == Or((Leaf("a"), And((Not(Leaf("b")), Leaf("c")))))


# Malformed fixtures with exact character offsets.


def test_error_dangling_operator_offset_zero():
    with pytest.raises(ParseError) as exc:
        parse_concept_query("AND person")
    assert exc.value.offset == 0
    assert "dangling operator" in exc.value.message


def test_error_unbalanced_parenthesis():
    query = "person AND (dog OR cat"
    with pytest.raises(ParseError) as exc:
        parse_concept_query(query)
    assert exc.value.offset == len(query)
    assert "parenthesis" in exc.value.message

    with pytest.raises(ParseError) as exc:
        parse_concept_query("person) AND dog")
    assert exc.value.offset == 6


def test_error_nonpositive_weight():
    with pytest.raises(ParseError) as exc:
        parse_concept_query("person:0")
    assert exc.value.offset == 7
    assert "nonpositive" in exc.value.message


def test_error_unknown_token():
    with pytest.raises(ParseError) as exc:
        parse_concept_query("person & dog")
    assert exc.value.offset == 7
    assert "unknown token" in exc.value.message


def test_error_trailing_operator():
    with pytest.raises(ParseError) as exc:
        parse_concept_query("a AND")
    assert exc.value.offset == 5


# ---------------------------------------------------------------------------
# Printing and round-trips


def test_print_plain_leaf():
    assert print_expr(Leaf("person")) == "person"


def test_print_not():
    assert print_expr(Not(Leaf("indoor"))) == "(NOT indoor)"


def test_print_weight_and_bank():
    assert print_expr(Leaf("person", 2.0)) == "person:2"
    assert print_expr(Leaf("dog", 1.0, "object")) == "obj/dog"
    assert print_expr(Leaf("traffic light", 0.5, "object")) == '"obj/traffic light":0.5'


from support import crisp_eval, oracle_eval, random_expr, random_scores


def test_roundtrip_random_asts():
    rng = np.random.default_rng(42)
    for _ in range(500):
        expr = random_expr(rng, 5)
        assert parse_concept_query(print_expr(expr)) == expr


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), depth=st.integers(0, 5))
def test_roundtrip_property(seed, depth):
    expr = random_expr(np.random.default_rng(seed), depth)
    assert parse_concept_query(print_expr(expr)) == expr


# ---------------------------------------------------------------------------
# Evaluation semantics


def test_leaf_and_not_values():
    assert eval_expr(parse_concept_query("a"), {"a": 0.7}) == 0.7
    assert eval_expr(parse_concept_query("NOT a"), {"a": 0.7}) == pytest.approx(0.3)


def test_idempotence_at_equal_arguments():
    scores = {"a": 0.5, "b": 0.5}
    assert eval_expr(parse_concept_query("a AND b"), scores) == pytest.approx(0.5, abs=1e-12)
    assert eval_expr(parse_concept_query("a OR b"), scores) == pytest.approx(0.5, abs=1e-12)


def test_weighted_and_value():
    got = eval_expr(parse_concept_query("a:3 AND b:1"), {"a": 0.9, "b": 0.1})
    assert got == pytest.approx(0.9**0.75 * 0.1**0.25, abs=1e-15)


def test_conjunction_with_zero_is_zero():
    assert eval_expr(parse_concept_query("a AND b"), {"a": 0.0, "b": 0.9}) == 0.0


def negate_children(children):
    return tuple(Not(c) for c in children)


def test_algebra_laws_randomized():
    rng = np.random.default_rng(7)
    for _ in range(300):
        expr = random_expr(rng, 4)
        scores = random_scores(rng)
        objects = random_scores(rng)
        v = eval_expr(expr, scores, objects)

        assert 0.0 <= v <= 1.0
        # double negation
        assert eval_expr(Not(Not(expr)), scores, objects) == pytest.approx(v, abs=1e-12)
        # oracle equivalence
        assert v == oracle_eval(expr, scores, objects)

        # De Morgan, including randomized weights
        if isinstance(expr, And):
            dual = Or(negate_children(expr.children))
            assert eval_expr(Not(expr), scores, objects) == pytest.approx(
                eval_expr(dual, scores, objects), abs=1e-12
            )
        if isinstance(expr, Or):
            dual = And(negate_children(expr.children))
            assert eval_expr(Not(expr), scores, objects) == pytest.approx(
                eval_expr(dual, scores, objects), abs=1e-12
            )


def test_crisp_boundary_agreement():
    rng = np.random.default_rng(8)
    for _ in range(300):
        expr = random_expr(rng, 4)
        scores = random_scores(rng, crisp=True)
        objects = random_scores(rng, crisp=True)
        assert eval_expr(expr, scores, objects) == float(crisp_eval(expr, scores, objects))


def test_monotonicity_in_positive_leaf():
    rng = np.random.default_rng(9)
    for _ in range(100):
        expr = And((Leaf("a", 2.0), Or((Leaf("b"), Not(Leaf("c"))))))
        scores = random_scores(rng)
        scores.update({"a": float(rng.random()), "b": float(rng.random()), "c": float(rng.random())})
        lo = dict(scores)
        hi = dict(scores)
        lo["a"], hi["a"] = 0.2, 0.9
        assert eval_expr(expr, hi) >= eval_expr(expr, lo) - 1e-12
        # negated leaf: increasing c never increases the value
        lo2, hi2 = dict(scores), dict(scores)
        lo2["c"], hi2["c"] = 0.1, 0.8
        assert eval_expr(expr, hi2) <= eval_expr(expr, lo2) + 1e-12


def test_unresolved_label_error():
    with pytest.raises(UnresolvedLabelError):
        eval_expr(Leaf("missing"), {"present": 1.0})


# ---------------------------------------------------------------------------
# Ranking over banks


def make_bank(kind, labels, scores):
    return ScoreBank(kind=kind, labels=tuple(labels), scores=np.asarray(scores, dtype=np.float32))


def test_single_leaf_ranks_by_column(synth_corpus):
    bank = synth_corpus.banks["concept"]
    label = bank.labels[0]
    rl = rank_by_expr(Leaf(label), synth_corpus.banks, synth_corpus)
    col = bank.scores[:, 0]
    expected = sorted(
        (sid for i, sid in enumerate(synth_corpus.shot_order) if col[i] > 0),
        key=lambda sid: (-col[synth_corpus.shot_row(sid)], sid),
    )
    assert rl.ids() == expected


def test_self_contradiction_bounded(synth_corpus):
    label = synth_corpus.banks["concept"].labels[1]
    rl = rank_by_expr(
        parse_concept_query(f"{label} AND NOT {label}"), synth_corpus.banks, synth_corpus
    )
    for sid, score in rl.entries:
        s = float(synth_corpus.banks["concept"].scores[synth_corpus.shot_row(sid), 1])
        assert score == pytest.approx(math.sqrt(s * (1 - s)), abs=1e-9)
        assert score <= 0.5 + 1e-12


def test_rank_matches_bruteforce(synth_corpus):
    rng = np.random.default_rng(10)
    bank = synth_corpus.banks["concept"]
    labels = list(bank.labels[:6])
    expr = parse_concept_query(
        f"({labels[0]}:2 OR NOT {labels[1]}) AND ({labels[2]} OR {labels[3]}:0.5) AND NOT {labels[4]}"
    )
    rl = rank_by_expr(expr, synth_corpus.banks, synth_corpus)

    expected = {}
    for i, sid in enumerate(synth_corpus.shot_order):
        scores = {l: float(bank.scores[i, bank.labels.index(l)]) for l in labels}
        v = oracle_eval(expr, scores, scores)
        if v > 0:
            expected[sid] = v
    assert set(rl.ids()) == set(expected)
    for sid, score in rl.entries:
        assert score == expected[sid]
    order = sorted(expected.items(), key=lambda kv: (-kv[1], kv[0]))
    assert rl.ids() == [sid for sid, _ in order]


def test_unresolved_label_suggestions(synth_corpus):
    with pytest.raises(UnresolvedLabelError) as exc:
        rank_by_expr(Leaf("concept_00"), synth_corpus.banks, synth_corpus)
    assert exc.value.suggestions  # near misses offered


def test_autocomplete():
    bank = make_bank("concept", ["Car", "cat", "dog", "cart"], np.zeros((0, 4)))
    assert list_concepts("ca", bank, 10) == ["Car", "cart", "cat"]
    assert list_concepts("", bank, 2) == ["Car", "cart"]
    assert list_concepts("zz", bank, 5) == []
