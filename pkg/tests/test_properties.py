"""Randomized checks of the laws the pipeline relies on."""
import math
import random

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from src.data.corpus import Document, retrieve
from src.data.query import And, Keyword, Or, match_tokens, parse_query, print_query
from src.enums.enums import (
    POLARITY_TERMS,
    DocumentSource,
    FactPredicate,
    Orientation,
    PosTag,
    SpeedTerm,
)
from src.features.extract import OpinionWord
from src.features.pos_tagger import Token
from src.features.preprocess import ProcessedDocument, clean
from src.features.relevance import CITY_KEY, WeightVector, ngrams, score
from src.features.stemmer import stem
from src.inference.metrics import Confusion, accuracy, evaluate, fmeasure, precision, recall
from src.model.fuzzy_inference import aggregate, classify_interval, words_polarity
from src.model.fuzzy_rules import parse_rule
from src.model.membership import TriangularMF, triangular_mu
from src.model.swrl import Fact, apply_rules, fact_universe_size, parse_causal_rule

VOCABULARY = ["road", "car", "bus", "jam", "closed", "accident"]

_unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False, allow_infinity=False)
_words = st.sampled_from(VOCABULARY)
_keywords = st.lists(_words, min_size=1, max_size=2).map(lambda w: Keyword(" ".join(w)))
_queries = st.recursive(
    _keywords,
    lambda children: st.one_of(
        st.lists(children, min_size=2, max_size=3).map(lambda c: And(tuple(c))),
        st.lists(children, min_size=2, max_size=3).map(lambda c: Or(tuple(c))),
    ),
    max_leaves=8,
)
_documents = st.lists(_words, max_size=8).map(tuple)

POLARITY_RULES = [
    parse_rule(f"rule ow_{t.value.lower()}: IF ow IS {t.value} THEN {t.value}")
    for t in POLARITY_TERMS
]


@settings(max_examples=1000, deadline=None)
@given(_queries, _queries, _documents)
def test_query_boolean_laws(a, b, tokens):
    assert match_tokens(Or((a, b)), tokens) == (match_tokens(a, tokens) or match_tokens(b, tokens))
    assert match_tokens(And((a, b)), tokens) == (
        match_tokens(a, tokens) and match_tokens(b, tokens)
    )
    assert match_tokens(And((a, b)), tokens) == match_tokens(And((b, a)), tokens)


@settings(max_examples=1000, deadline=None)
@given(_queries)
def test_print_parse_print_is_stable(q):
    printed = print_query(q)
    assert print_query(parse_query(printed)) == printed


@settings(max_examples=1000, deadline=None)
@given(_queries, _documents, _documents)
def test_more_tokens_never_unmatch(q, tokens, extra):
    if match_tokens(q, tokens):
        assert match_tokens(q, tokens + extra)


@settings(max_examples=200, deadline=None)
@given(_queries, st.lists(_documents, max_size=6))
def test_retrieve_returns_a_subset(q, texts):
    corpus = [
        Document(str(i), " ".join(t) or "-", DocumentSource.TWEET, "Quezon")
        for i, t in enumerate(texts)
    ]
    retrieved = retrieve(corpus, [q])
    assert all(d in corpus for d in retrieved)
    assert retrieve(corpus, []) == []


@settings(max_examples=10000, deadline=None)
@given(
    st.lists(st.floats(-10, 10), min_size=3, max_size=3),
    st.floats(-100, 100),
    st.booleans(),
    st.booleans(),
)
def test_triangular_mu_is_a_degree(corners, x, shoulder_left, shoulder_right):
    a, b, c = sorted(corners)
    assume(not a == b == c)
    mf = TriangularMF(a, b, c, shoulder_left, shoulder_right)
    assert 0.0 <= triangular_mu(x, mf) <= 1.0


@settings(max_examples=1000, deadline=None)
@given(st.lists(st.floats(min_value=1e-6, max_value=1.0), min_size=1, max_size=10), _unit)
def test_aggregate_with_one_ip(fitness, p):
    result = aggregate((f, p) for f in fitness)
    expected = p * math.fsum(f * f for f in fitness) / math.fsum(fitness)
    assert math.isclose(result, expected, rel_tol=1e-9, abs_tol=1e-12)
    assert result <= p + 1e-12
    assert math.isclose(aggregate((1.0, p) for _ in fitness), p, rel_tol=1e-9, abs_tol=1e-12)


@settings(max_examples=1000, deadline=None)
@given(
    st.lists(st.tuples(st.floats(min_value=1e-6, max_value=1.0), _unit), min_size=1, max_size=6),
    st.data(),
)
def test_aggregate_is_monotone_in_ip(fired, data):
    i = data.draw(st.integers(0, len(fired) - 1))
    bump = data.draw(st.floats(0.0, 1.0))
    raised = list(fired)
    raised[i] = (fired[i][0], fired[i][1] + bump)
    assert aggregate(raised) >= aggregate(fired) - 1e-12


@settings(max_examples=10000, deadline=None)
@given(st.lists(st.tuples(_unit, st.booleans()), min_size=1, max_size=6))
def test_polarity_term_matches_value(values):
    words = [
        OpinionWord(f"w{i}", f"w{i}", PosTag.ADJECTIVE, v, Orientation.UNKNOWN, negated, i)
        for i, (v, negated) in enumerate(values)
    ]
    result = words_polarity(words, POLARITY_RULES)
    assert result.term == classify_interval(result.value)
    assert result.is_determined


@settings(max_examples=1000, deadline=None)
@given(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50), st.integers(0, 50))
def test_metrics_ranges_and_scale_invariance(tp, fp, fn, tn):
    c = Confusion(tp, fp, fn, tn)
    doubled = c + c
    assume(tp > 0)
    p, r = precision(c), recall(c)
    assert 0.0 <= p <= 100.0 and 0.0 <= r <= 100.0
    assert 0.0 <= accuracy(c) <= 1.0
    assert fmeasure(p, r) <= (p + r) / 2 + 1e-9
    assert math.isclose(precision(doubled), p)
    assert math.isclose(recall(doubled), r)
    assert math.isclose(accuracy(doubled), accuracy(c))


@settings(max_examples=1000, deadline=None)
@given(_unit)
def test_fmeasure_of_equal_inputs(p):
    assume(p > 0)
    assert fmeasure(100 * p, 100 * p) == 100 * p


@settings(max_examples=1000, deadline=None)
@given(st.text(alphabet="abc #@/-019 ", max_size=40))
def test_clean_is_idempotent(text):
    assert clean(clean(text)) == clean(text)


@settings(max_examples=1000, deadline=None)
@given(st.text(alphabet="abcdeilnorstuy", min_size=1, max_size=12))
def test_stem_is_idempotent(word):
    assert stem(stem(word)) == stem(word)


@settings(max_examples=300, deadline=None)
@given(
    st.lists(st.sampled_from(VOCABULARY), max_size=8),
    st.booleans(),
    st.floats(min_value=0.01, max_value=100),
)
def test_score_scales_linearly(words, mentions_city, alpha):
    document = Document("d", " ".join(words) or "-", DocumentSource.TWEET, "Quezon")
    tokens = tuple(Token(w, stem(w), PosTag.NOUN) for w in words)
    processed = ProcessedDocument(document, (tokens,), (), 0, mentions_city)
    w = WeightVector({stem("road"): 0.5, stem("accident"): 0.6, CITY_KEY: -0.3})
    assert math.isclose(
        score(processed, w.scaled(alpha)), alpha * score(processed, w), abs_tol=1e-9
    )
    assert ngrams(words, 1) == [(x,) for x in words]
    assert len(ngrams(words, 2)) == max(len(words) - 1, 0)


_CAUSAL_RULES = [
    parse_causal_rule(
        "rule jam: Accident(?B), Road(?A), Traffic(?D), Vehicle(?C), OpinionOf(?B, SN), "
        "Speed(?C, VerySlow) -> OpinionOf(?D, SN), PolarityIs(?A, SN), TrafficIsJammedBy(?A, ?B)"
    ),
    parse_causal_rule(
        "rule flow: Accident(?B), Road(?A), Traffic(?D), Vehicle(?C), OpinionOf(?B, SP), "
        "Speed(?C, Fast) -> OpinionOf(?D, P), PolarityIs(?A, P)"
    ),
    parse_causal_rule(
        "rule chained: IF PolarityIs(Road, SN) THEN PolarityIs(Transportation, SN)"
    ),
    parse_causal_rule(
        "rule unanimous: IF OpinionOf(Road, P) AND OpinionOf(Traffic, P) "
        "THEN PolarityIs(Safety, P)"
    ),
]
_TERMS = [t.value for t in POLARITY_TERMS]


@settings(max_examples=100, deadline=None)
@given(
    st.dictionaries(
        st.sampled_from(["Accident", "Road", "Traffic", "Vehicle"]),
        st.sampled_from(_TERMS),
    ),
    st.sampled_from([s.value for s in SpeedTerm] + [None]),
    st.randoms(use_true_random=False),
)
def test_forward_chaining_reaches_a_fixpoint(opinions, speed, rng: random.Random):
    facts = {Fact(FactPredicate.OPINION_OF, s, t) for s, t in opinions.items()}
    if speed is not None:
        facts.add(Fact(FactPredicate.SPEED, "Vehicle", speed))
    result = apply_rules(facts, _CAUSAL_RULES)
    assert result.iterations <= fact_universe_size(facts, _CAUSAL_RULES)
    assert facts <= result.facts

    shuffled = list(_CAUSAL_RULES)
    rng.shuffle(shuffled)
    assert apply_rules(facts, shuffled).facts == result.facts


_FEATURES = ["Road", "Traffic", "Hotel"]
_labels = st.dictionaries(st.sampled_from(_FEATURES), st.sampled_from(POLARITY_TERMS))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(_labels, _labels), min_size=1, max_size=12))
def test_evaluate_matches_counting_oracle(fixtures):
    documents = [
        Document(f"d{i}", "road", DocumentSource.TWEET, "Quezon", gold)
        for i, (gold, _) in enumerate(fixtures)
    ]
    predictions = {f"d{i}": predicted for i, (_, predicted) in enumerate(fixtures)}
    rows = {row.feature: row for row in evaluate(documents, predictions, _FEATURES).rows}

    for feature in _FEATURES:
        pairs = [(gold.get(feature), predicted.get(feature)) for gold, predicted in fixtures]
        tp = sum(1 for g, p in pairs if g is not None and g == p)
        wrong = sum(1 for g, p in pairs if g is not None and p is not None and g != p)
        fp = wrong + sum(1 for g, p in pairs if g is None and p is not None)
        fn = wrong + sum(1 for g, p in pairs if g is not None and p is None)
        tn = sum(1 for g, p in pairs if g is None and p is None)
        assert rows[feature].confusion == Confusion(tp, fp, fn, tn)
        if tp + fp:
            assert math.isclose(rows[feature].precision, 100 * tp / (tp + fp), abs_tol=1e-9)
        else:
            assert rows[feature].precision is None
        assert math.isclose(rows[feature].accuracy, (tp + tn) / len(pairs), abs_tol=1e-9)
