"""Fuzzy inference: fuzzify opinion words, fire rules with min fitness, aggregate and classify.

Rule i fires with fitness[i] = min of its antecedent memberships and contributes
output[i] = fitness[i] * IP[i]. The polarity is sum(output[i] * fitness[i]) / sum(fitness[i]).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from src.enums.enums import (
    ADJECTIVE_TAGS,
    ADVERB_TAGS,
    VERB_TAGS,
    Orientation,
    PolarityTerm,
    PosTag,
)
from src.features.extract import FeatureOpinion, OpinionWord
from src.features.stemmer import stem
from src.model.fuzzy_rules import (
    SLOT_ADJECTIVE,
    SLOT_ADVERB,
    SLOT_ANY,
    SLOT_VERB,
    FuzzyRule,
    Overrides,
    RuleSet,
    parse_rule,
)
from src.model.membership import DEFAULT_MF_BANK, MFBank, triangular_mu
from src.utils.utils_exceptions import ValueOutOfRange

_CLASS_SLOT_TAGS = {
    SLOT_ADJECTIVE: ADJECTIVE_TAGS,
    SLOT_ADVERB: ADVERB_TAGS,
    SLOT_VERB: VERB_TAGS,
}


@dataclass(frozen=True)
class RuleFiring:
    rule_id: str
    fitness: float
    output: float

    # Opinion words bound to the rule's slots
    words: tuple[str, ...] = ()


def classify_interval(value: float | None) -> PolarityTerm:
    """SN [0, 0.25), Neg [0.25, 0.5), Neu {0.5}, P (0.5, 0.75], SP (0.75, 1].

    A shared boundary belongs to the more neutral term. None means no rule fired.
    """
    if value is None:
        return PolarityTerm.UNDETERMINED
    if not (math.isfinite(value) and 0.0 <= value <= 1.0):
        raise ValueOutOfRange(f"polarity has to be in [0, 1], got {value}")
    if value < 0.25:
        return PolarityTerm.SN
    if value < 0.5:
        return PolarityTerm.NEG
    if value == 0.5:
        return PolarityTerm.NEU
    if value <= 0.75:
        return PolarityTerm.P
    return PolarityTerm.SP


@dataclass(frozen=True)
class PolarityResult:
    value: float | None
    term: PolarityTerm
    trace: tuple[RuleFiring, ...] = ()

    # Clauses which contributed opinion words
    sentence_count: int = 1

    def __post_init__(self):
        expected = classify_interval(self.value)
        if self.term != expected:
            raise ValueError(f"term {self.term} doesn't match value {self.value} ({expected})")
        if self.value is not None and not self.trace:
            raise ValueError("a defined polarity needs at least one fired rule")

    @property
    def is_determined(self) -> bool:
        return self.value is not None


def rule_fitness(degrees: Sequence[float]) -> float:
    if not degrees:
        raise ValueError("rule_fitness needs at least one degree")
    return min(degrees)


def aggregate(rules_fired: Iterable[tuple[float, float]]) -> float | None:
    """Weighted mean of the rule outputs fitness * ip, weighted by fitness.

    Returns None when no rule fired with a positive fitness.

    Example:
        rules_fired = [(0.23, 0.25), (0.7, 0.25)]
        returns 0.14594...
    """
    fired = [(f, ip) for f, ip in rules_fired if f > 0]
    if not fired:
        return None
    for f, ip in fired:
        if not (math.isfinite(f) and math.isfinite(ip)):
            raise ValueOutOfRange(f"fitness and IP have to be finite, got ({f}, {ip})")
    numerator = math.fsum(f * ip * f for f, ip in fired)
    denominator = math.fsum(f for f, _ in fired)
    return numerator / denominator


def word_scalar(word: OpinionWord) -> float:
    """Negated words are complemented."""
    return 1.0 - word.value if word.negated else word.value


def _distinct(words: Iterable[OpinionWord]) -> list[OpinionWord]:
    seen = set()
    distinct = []
    for w in words:
        key = (w.surface, w.negated)
        if key not in seen:
            seen.add(key)
            distinct.append(w)
    return distinct


def _candidates(slot: str, words: Sequence[OpinionWord]) -> list[OpinionWord]:
    if slot == SLOT_ANY:
        return list(words)
    if slot in _CLASS_SLOT_TAGS:
        return [w for w in words if w.pos in _CLASS_SLOT_TAGS[slot]]
    slot_stem = stem(slot)
    return [w for w in words if w.surface == slot or w.stem == slot_stem]


def fire_rule(
    rule: FuzzyRule,
    words: Sequence[OpinionWord],
    bank: MFBank = DEFAULT_MF_BANK,
    overrides: Overrides | None = None,
) -> list[RuleFiring]:
    """One firing per binding of the rule's slots to distinct opinion words."""
    overrides = overrides or {}
    per_slot = [_candidates(slot, words) for slot in rule.slots]
    firings = []
    for binding in itertools.product(*per_slot):
        if len({id(w) for w in binding}) != len(binding):
            continue
        degrees = []
        for (slot, term), word in zip(rule.antecedent, binding):
            if (rule.id, slot) in overrides:
                degrees.append(overrides[(rule.id, slot)])
            else:
                degrees.append(triangular_mu(word_scalar(word), bank[term]))
        fitness = rule_fitness(degrees)
        if fitness > 0:
            firings.append(
                RuleFiring(
                    rule_id=rule.id,
                    fitness=fitness,
                    output=fitness * rule.ip,
                    words=tuple(w.surface for w in binding),
                )
            )
    return firings


def words_polarity(
    words: Sequence[OpinionWord],
    rules: RuleSet | Sequence[FuzzyRule],
    bank: MFBank = DEFAULT_MF_BANK,
    overrides: Overrides | None = None,
    sentence_count: int = 1,
) -> PolarityResult:
    """Polarity of a set of opinion words. Repeated words count once."""
    if overrides is None:
        overrides = rules.overrides if isinstance(rules, RuleSet) else {}
    distinct = _distinct(words)
    ip_by_rule = {r.id: r.ip for r in rules}
    trace = tuple(
        firing for rule in rules for firing in fire_rule(rule, distinct, bank, overrides)
    )
    value = aggregate((f.fitness, ip_by_rule[f.rule_id]) for f in trace)
    return PolarityResult(
        value=value,
        term=classify_interval(value),
        trace=trace if value is not None else (),
        sentence_count=sentence_count,
    )


def feature_polarity(
    pair: FeatureOpinion,
    rules: RuleSet | Sequence[FuzzyRule],
    bank: MFBank = DEFAULT_MF_BANK,
    overrides: Overrides | None = None,
) -> PolarityResult:
    """
    Example:
        pair = Road with {very: 0.5, busy: 0.375, closed: 0.25}
        rules = road_1, road_2 with IP 0.25 and the memberships of the worked example pinned
        returns PolarityResult(0.1459..., SN)
    """
    if not pair.opinion_words:
        raise ValueError(f"{pair.feature.name} has no opinion words")
    return words_polarity(pair.opinion_words, rules, bank, overrides)


def _word(surface: str, value: float, negated: bool = False, pos=None) -> OpinionWord:
    return OpinionWord(
        surface=surface,
        stem=stem(surface),
        pos=pos or PosTag.ADJECTIVE,
        value=value,
        orientation=Orientation.UNKNOWN,
        negated=negated,
        index=0,
    )


def test_rule_fitness():
    assert rule_fitness([0.9, 0.23, 1]) == 0.23
    assert rule_fitness([0.9, 0.7, 1]) == 0.7
    assert rule_fitness([0.4]) == 0.4


def test_aggregate():
    road = aggregate([(0.23, 0.25), (0.7, 0.25)])
    assert abs(road - 0.1459) < 0.0005
    assert aggregate([(3.4, 0.0), (3.6, 0.0)]) == 0.0
    assert aggregate([(1.0, 0.3)]) == 0.3
    assert aggregate([(0.0, 0.3)]) is None
    assert aggregate([]) is None


def test_classify_interval():
    expected = {
        0.0: PolarityTerm.SN,
        0.14: PolarityTerm.SN,
        0.25: PolarityTerm.NEG,
        0.5: PolarityTerm.NEU,
        0.62: PolarityTerm.P,
        0.75: PolarityTerm.P,
        0.9: PolarityTerm.SP,
        1.0: PolarityTerm.SP,
    }
    for value, term in expected.items():
        assert classify_interval(value) == term
    assert classify_interval(None) == PolarityTerm.UNDETERMINED


def test_road_worked_example():
    rules = [
        parse_rule("rule road_1: IF very IS Neu AND busy IS Neu AND closed IS SN THEN SN IP 0.25"),
        parse_rule("rule road_2: IF very IS Neu AND busy IS Neg AND closed IS SN THEN SN IP 0.25"),
    ]
    overrides = {
        ("road_1", "very"): 0.9,
        ("road_1", "busy"): 0.23,
        ("road_1", "closed"): 1.0,
        ("road_2", "very"): 0.9,
        ("road_2", "busy"): 0.7,
        ("road_2", "closed"): 1.0,
    }
    words = [_word("very", 0.5), _word("busy", 0.375), _word("closed", 0.25)]
    result = words_polarity(words, rules, overrides=overrides)
    assert abs(result.value - 0.1459) < 0.0005
    assert result.term == PolarityTerm.SN
    assert [round(f.output, 4) for f in result.trace] == [0.0575, 0.175]


def test_single_identity_rule():
    rules = [parse_rule("rule id: IF ow IS Neu THEN Neu IP 0.5")]
    result = words_polarity([_word("very", 0.5)], rules)
    assert result.value == 0.5
    assert result.term == PolarityTerm.NEU


def test_negated_word_is_complemented():
    rules = [
        parse_rule(f"rule ow_{t.value}: IF ow IS {t.value} THEN {t.value}")
        for t in DEFAULT_MF_BANK
    ]
    result = words_polarity([_word("clean", 0.875, negated=True)], rules)
    assert result.term == PolarityTerm.SN
    assert result.value == 0.125


def test_no_rule_fired_is_undetermined():
    rules = [parse_rule("rule only_sp: IF ow IS SP THEN SP")]
    result = words_polarity([_word("busy", 0.375)], rules)
    assert result.value is None
    assert result.term == PolarityTerm.UNDETERMINED
    assert result.trace == ()
