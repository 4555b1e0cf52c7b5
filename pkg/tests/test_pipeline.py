import pytest

from src.enums.enums import FactPredicate, PolarityTerm
from src.inference.metrics import evaluate
from src.inference.pipeline import analyze_corpus, corpus_cities
from src.model.swrl import Fact


@pytest.fixture(scope="module")
def quezon(resources):
    return analyze_corpus(resources, "Quezon")


def _analysis(corpus_analysis, doc_id: str):
    return next(a for a in corpus_analysis.documents if a.document.id == doc_id)


def test_corpus_cities(resources):
    assert corpus_cities(resources.corpus) == ["New York", "Quezon"]


def test_corpus_size(resources):
    assert len(resources.corpus) == 45
    assert sum(d.city == "New York" for d in resources.corpus) == 23


def test_retrieval_and_relevance(quezon):
    ids = [a.document.id for a in quezon.documents]
    assert ids == sorted(ids)
    assert "qc-018" not in ids
    movie = _analysis(quezon, "qc-017")
    assert not movie.relevant
    assert movie.relevance < 0
    assert movie.pairs == ()
    assert all(a.relevant for a in quezon.documents if a.document.id != "qc-017")


def test_document_predictions(quezon):
    assert _analysis(quezon, "qc-002").predictions == {
        "Accident": PolarityTerm.SN,
        "Road": PolarityTerm.SN,
    }
    assert _analysis(quezon, "qc-009").predictions["Location"] == PolarityTerm.SP
    # dangerous alone lands in the strongly negative interval
    assert _analysis(quezon, "qc-006").predictions["Road"] == PolarityTerm.SN


def test_city_is_not_a_feature(quezon):
    assert "Quezon" not in quezon.features
    assert quezon.features["Road"].term == PolarityTerm.SN
    assert quezon.features["Vehicle"].term == PolarityTerm.NEG


def test_causal_facts(quezon):
    facts = quezon.facts
    assert Fact(FactPredicate.SPEED, "Vehicle", "VerySlow") in facts.facts
    assert set(facts.derived) == {
        Fact(FactPredicate.POLARITY_IS, "Road", "SN"),
        Fact(FactPredicate.TRAFFIC_IS_JAMMED_BY, "Road", "Accident"),
    }
    assert facts.disagreements == ()
    assert quezon.causes["Road"] == [("Accident", "cause-of-jam")]
    assert quezon.causes["Traffic"] == []


def test_city_polarity(quezon):
    assert quezon.city.term == PolarityTerm.NEG
    assert quezon.city.value == pytest.approx(0.4466, abs=1e-3)
    assert quezon.incomplete_sentences == 3


def test_evaluate_on_gold_labels(resources, quezon):
    documents = [d for d in resources.corpus if d.city == "Quezon"]
    table = evaluate(documents, quezon.predictions)
    rows = {row.feature: row for row in table.rows}
    assert rows["Accident"].confusion.fp == 0
    assert rows["Road"].confusion.fp == 1
