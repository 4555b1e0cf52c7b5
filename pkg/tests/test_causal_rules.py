"""The bundled accident and speed rows derive exactly their consequents."""
from pathlib import Path

import pytest

from src.config.config_defaults import PATH_DATA
from src.enums.enums import FactPredicate
from src.model.swrl import Fact, apply_rules, load_causal_rules


def _opinion(subject: str, term: str) -> Fact:
    return Fact(FactPredicate.OPINION_OF, subject, term)


def _road(term: str) -> Fact:
    return Fact(FactPredicate.POLARITY_IS, "Road", term)


def _jammed_by(cause: str) -> Fact:
    return Fact(FactPredicate.TRAFFIC_IS_JAMMED_BY, "Road", cause)


# rule id, accident opinion, vehicle speed, derived facts
SPEED_ROWS = [
    (
        "jam_sn_very_slow",
        "SN",
        "VerySlow",
        {_opinion("Traffic", "SN"), _road("SN"), _jammed_by("Accident")},
    ),
    (
        "jam_neg_very_slow",
        "Neg",
        "VerySlow",
        {_opinion("Traffic", "Neg"), _road("Neg"), _jammed_by("Accident")},
    ),
    (
        "jam_neu_very_slow",
        "Neu",
        "VerySlow",
        {_opinion("Traffic", "Neg"), _road("Neu"), _jammed_by("Vehicle")},
    ),
    (
        "jam_p_very_slow",
        "P",
        "VerySlow",
        {_opinion("Traffic", "P"), _road("Neu"), _jammed_by("Vehicle")},
    ),
    (
        "jam_sp_slow",
        "SP",
        "Slow",
        {_opinion("Traffic", "Neu"), _road("Neu"), _jammed_by("Vehicle")},
    ),
    ("flow_sp_normal", "SP", "Normal", {_opinion("Traffic", "P"), _road("Neu")}),
    ("flow_sp_fast", "SP", "Fast", {_opinion("Traffic", "P"), _road("P")}),
]


@pytest.fixture(scope="module")
def causal_rules():
    return load_causal_rules(Path(PATH_DATA, "causal_rules.txt"))


def test_every_speed_row_is_bundled(causal_rules):
    ids = [r.id for r in causal_rules if not r.id.startswith("transport_")]
    assert ids == [row[0] for row in SPEED_ROWS]


@pytest.mark.parametrize("rule_id, accident, speed, expected", SPEED_ROWS)
def test_speed_row_derivation(causal_rules, rule_id, accident, speed, expected):
    facts = {_opinion("Accident", accident), Fact(FactPredicate.SPEED, "Vehicle", speed)}

    result = apply_rules(facts, causal_rules)
    assert set(result.derived) == expected
    assert result.disagreements == ()
    assert result.iterations == 1

    alone = apply_rules(facts, [r for r in causal_rules if r.id == rule_id])
    assert set(alone.derived) == expected


def test_unanimous_features_set_transportation(causal_rules):
    features = ["Road", "Vehicle", "Location", "Accident", "Traffic", "Safety"]
    facts = {_opinion(f, "P") for f in features}
    result = apply_rules(facts, causal_rules)
    assert set(result.derived) == {Fact(FactPredicate.POLARITY_IS, "Transportation", "P")}

    facts.discard(_opinion("Safety", "P"))
    facts.add(_opinion("Safety", "Neg"))
    assert apply_rules(facts, causal_rules).derived == ()
