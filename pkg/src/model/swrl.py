"""Forward chaining over polarity facts.

Causal rule file, one rule per line:

    rule <id>: IF <atom> [AND <atom> ...] THEN <atom> [AND <atom> ...]
    rule <id>: <atom>, <atom>, ... -> <atom>, ...

An atom is a class atom `Road(?A)`, which binds ?A to the concept name, or a predicate atom
`OpinionOf(?B, SN)`, `PolarityIs(?A, Neg)`, `Speed(?C, VerySlow)`, `TrafficIsJammedBy(?A, ?B)`.
Arguments are variables (`?x`) or constants.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence, Union

import pyparsing as pp

from src.config.logger import log
from src.enums.enums import (
    FUNCTIONAL_PREDICATES,
    NEGATIVE_TERMS,
    POLARITY_TERMS,
    FactPredicate,
    PolarityTerm,
    SpeedTerm,
)
from src.features.extract import OpinionWord
from src.features.stemmer import stem
from src.knowledge.ontology import Concept, FuzzyOntology, subfeatures
from src.model.fuzzy_inference import PolarityResult, RuleFiring, classify_interval, word_scalar
from src.model.membership import parse_term
from src.utils.utils_exceptions import (
    InconsistentFacts,
    RuleConflict,
    RuleParseError,
    ValueOutOfRange,
)
from src.utils.utils_functions import read_data_lines

CAUSE_OF_JAM = "cause-of-jam"
VARIABLE_PREFIX = "?"

_POLARITY_VALUES = frozenset(t.value for t in POLARITY_TERMS)
_SPEED_VALUES = frozenset(t.value for t in SpeedTerm)
_TERM_PREDICATES = {
    FactPredicate.OPINION_OF: _POLARITY_VALUES,
    FactPredicate.POLARITY_IS: _POLARITY_VALUES,
    FactPredicate.SPEED: _SPEED_VALUES,
}


@dataclass(frozen=True)
class Fact:
    predicate: FactPredicate
    subject: str
    object: str

    def __post_init__(self):
        if not self.subject or not self.object:
            raise ValueError(f"Fact arguments can't be empty: {self}")
        allowed = _TERM_PREDICATES.get(self.predicate)
        if allowed is not None and self.object not in allowed:
            raise ValueError(
                f"{self.predicate.value} object has to be one of {sorted(allowed)}, "
                f"got {self.object!r}"
            )

    def __lt__(self, other: Fact) -> bool:
        return self.sort_key < other.sort_key

    @property
    def sort_key(self) -> tuple[str, str, str]:
        return (self.predicate.value, self.subject, self.object)

    def __str__(self) -> str:
        return f"{self.predicate.value}({self.subject}, {self.object})"


def _is_variable(arg: str) -> bool:
    return arg.startswith(VARIABLE_PREFIX)


@dataclass(frozen=True)
class ClassAtom:
    concept: str
    variable: str


@dataclass(frozen=True)
class PredicateAtom:
    predicate: FactPredicate
    subject: str
    object: str

    @property
    def variables(self) -> set[str]:
        return {a for a in (self.subject, self.object) if _is_variable(a)}


Atom = Union[ClassAtom, PredicateAtom]
Binding = Mapping[str, str]


@dataclass(frozen=True)
class CausalRule:
    id: str
    antecedent: tuple[Atom, ...]
    consequent: tuple[PredicateAtom, ...]

    def __post_init__(self):
        if not any(isinstance(a, PredicateAtom) for a in self.antecedent):
            raise ValueError(f"Rule {self.id} needs at least one predicate atom in its body.")
        if not self.consequent:
            raise ValueError(f"Rule {self.id} has an empty head.")
        bound = set()
        for atom in self.antecedent:
            if isinstance(atom, ClassAtom):
                bound.add(atom.variable)
            else:
                bound |= atom.variables
        for atom in self.consequent:
            unbound = atom.variables - bound
            if unbound:
                raise ValueError(f"Rule {self.id}: head variables {sorted(unbound)} are unbound")


@dataclass(frozen=True)
class Disagreement:
    input_fact: Fact
    derived_fact: Fact
    rule_id: str


@dataclass(frozen=True)
class ApplyResult:
    facts: frozenset[Fact]
    derived: tuple[Fact, ...]
    disagreements: tuple[Disagreement, ...]

    # Rounds which added at least one fact
    iterations: int


def _normalize_object(predicate: FactPredicate, raw: str) -> str:
    if _is_variable(raw):
        return raw
    if predicate in (FactPredicate.OPINION_OF, FactPredicate.POLARITY_IS):
        return parse_term(raw).value
    if predicate == FactPredicate.SPEED:
        for term in SpeedTerm:
            if term.value.lower() == raw.lower():
                return term.value
        raise ValueError(f"unknown speed term {raw!r}")
    return raw


def _build_grammar() -> pp.ParserElement:
    RULE, IF, AND, THEN = map(pp.Keyword, ["rule", "IF", "AND", "THEN"])
    variable = pp.Regex(r"\?[A-Za-z_]\w*")

    def name(results_name: str = "") -> pp.ParserElement:
        word = pp.Word(pp.alphas, pp.alphanums + "_-")
        return ~(IF | AND | THEN) + (word(results_name) if results_name else word)

    argument = variable | name()
    atom = pp.Group(
        name("name")
        + pp.Suppress("(")
        + pp.Group(pp.delimited_list(argument))("args")
        + pp.Suppress(")")
    )
    atoms = pp.Group(atom + pp.ZeroOrMore((AND | pp.Literal(",")).suppress() + atom))
    body = (IF.suppress() + atoms("antecedent") + THEN.suppress() + atoms("consequent")) | (
        atoms("antecedent") + pp.Suppress("->") + atoms("consequent")
    )
    identifier = pp.Word(pp.alphanums + "_-")
    return RULE.suppress() + identifier("id") + pp.Suppress(":") + body


_RULE = _build_grammar()
_PREDICATES = {p.value: p for p in FactPredicate}


def _atom(name: str, args: list[str]) -> Atom:
    if name in _PREDICATES:
        predicate = _PREDICATES[name]
        if len(args) != 2:
            raise ValueError(f"{name} takes 2 arguments, got {len(args)}")
        return PredicateAtom(predicate, args[0], _normalize_object(predicate, args[1]))
    if len(args) != 1 or not _is_variable(args[0]):
        raise ValueError(f"class atom {name} takes one variable")
    return ClassAtom(name, args[0])


def parse_causal_rule(text: str, line_number: int | None = None) -> CausalRule:
    """
    Example:
        text = "rule r1: IF Accident(?B) AND OpinionOf(?B, SN) THEN OpinionOf(Traffic, SN)"
        returns CausalRule("r1", (ClassAtom, PredicateAtom), (PredicateAtom,))
    """
    try:
        parsed = _RULE.parse_string(text, parse_all=True)
    except pp.ParseBaseException as e:
        raise RuleParseError(f"column {e.col}: {e.msg}", line_number)
    try:
        antecedent = tuple(_atom(a["name"], list(a["args"])) for a in parsed["antecedent"])
        consequent = tuple(_atom(a["name"], list(a["args"])) for a in parsed["consequent"])
        if not all(isinstance(a, PredicateAtom) for a in consequent):
            raise ValueError("rule heads can only hold predicate atoms")
        return CausalRule(parsed["id"], antecedent, consequent)
    except ValueError as e:
        raise RuleParseError(str(e), line_number)


def load_causal_rules(path: Path) -> tuple[CausalRule, ...]:
    rules: list[CausalRule] = []
    for line_number, line in read_data_lines(path):
        rule = parse_causal_rule(line, line_number)
        if any(r.id == rule.id for r in rules):
            raise RuleParseError(f"rule id {rule.id!r} used twice", line_number)
        rules.append(rule)
    log.info(f"Loaded {len(rules)} causal rules from {path}")
    return tuple(rules)


def check_consistent(facts: Iterable[Fact]):
    """Functional predicates allow one object per subject."""
    seen: dict[tuple[FactPredicate, str], Fact] = {}
    for fact in sorted(facts):
        if fact.predicate not in FUNCTIONAL_PREDICATES:
            continue
        key = (fact.predicate, fact.subject)
        if key in seen and seen[key].object != fact.object:
            raise InconsistentFacts(f"{seen[key]} contradicts {fact}")
        seen[key] = fact


def _resolve(arg: str, binding: Binding) -> str | None:
    return binding.get(arg) if _is_variable(arg) else arg


def _unify(arg: str, value: str, binding: dict[str, str]) -> bool:
    if not _is_variable(arg):
        return arg == value
    bound = binding.get(arg)
    if bound is None:
        binding[arg] = value
        return True
    return bound == value


def _matches(rule: CausalRule, facts: Sequence[Fact]) -> Iterator[dict[str, str]]:
    by_predicate: dict[FactPredicate, list[Fact]] = defaultdict(list)
    for fact in facts:
        by_predicate[fact.predicate].append(fact)

    initial: dict[str, str] = {}
    for atom in rule.antecedent:
        if isinstance(atom, ClassAtom) and not _unify(atom.variable, atom.concept, initial):
            return
    predicate_atoms = [a for a in rule.antecedent if isinstance(a, PredicateAtom)]

    def extend(i: int, binding: dict[str, str]) -> Iterator[dict[str, str]]:
        if i == len(predicate_atoms):
            yield binding
            return
        atom = predicate_atoms[i]
        for fact in by_predicate[atom.predicate]:
            candidate = dict(binding)
            if _unify(atom.subject, fact.subject, candidate) and _unify(
                atom.object, fact.object, candidate
            ):
                yield from extend(i + 1, candidate)

    yield from extend(0, initial)


def _instantiate(atom: PredicateAtom, binding: Binding) -> Fact:
    return Fact(atom.predicate, _resolve(atom.subject, binding), _resolve(atom.object, binding))


def _conflicts(derived_by: Mapping[Fact, set[str]]) -> list[tuple[str, str]]:
    groups: dict[tuple[FactPredicate, str], list[Fact]] = defaultdict(list)
    for fact in derived_by:
        if fact.predicate in FUNCTIONAL_PREDICATES:
            groups[(fact.predicate, fact.subject)].append(fact)
    conflicts = set()
    for facts in groups.values():
        for i, first in enumerate(facts):
            for second in facts[i + 1 :]:
                if first.object == second.object:
                    continue
                for a in derived_by[first]:
                    for b in derived_by[second]:
                        conflicts.add(tuple(sorted((a, b))))
    return sorted(conflicts)


def apply_rules(facts: Iterable[Fact], rules: Sequence[CausalRule]) -> ApplyResult:
    """Naive forward chaining to a fixpoint.

    Every round evaluates all rules against the facts known at its start. Derived facts never
    overwrite input facts: a derived functional fact which contradicts an input fact is recorded
    as a disagreement and dropped. Two rules deriving different objects for one functional
    (predicate, subject) raise RuleConflict naming every such pair.
    """
    input_facts = frozenset(facts)
    check_consistent(input_facts)
    input_objects = {
        (f.predicate, f.subject): f
        for f in input_facts
        if f.predicate in FUNCTIONAL_PREDICATES
    }

    derived_by: dict[Fact, set[str]] = {}
    disagreements: dict[tuple[Fact, str], Disagreement] = {}
    iterations = 0
    while True:
        snapshot = sorted(input_facts | derived_by.keys())
        known = set(snapshot)
        new: dict[Fact, set[str]] = defaultdict(set)
        for rule in rules:
            for binding in _matches(rule, snapshot):
                for atom in rule.consequent:
                    fact = _instantiate(atom, binding)
                    if fact in input_facts:
                        continue
                    clash = input_objects.get((fact.predicate, fact.subject))
                    if clash is not None and clash.object != fact.object:
                        disagreements.setdefault(
                            (fact, rule.id), Disagreement(clash, fact, rule.id)
                        )
                        continue
                    if fact in known:
                        derived_by[fact].add(rule.id)
                    else:
                        new[fact].add(rule.id)

        if not new:
            break
        iterations += 1
        for fact, rule_ids in new.items():
            derived_by.setdefault(fact, set()).update(rule_ids)
        conflicts = _conflicts(derived_by)
        if conflicts:
            raise RuleConflict(conflicts)

    for disagreement in sorted(disagreements.values(), key=lambda d: (d.derived_fact, d.rule_id)):
        log.warning(
            f"Rule {disagreement.rule_id} derived {disagreement.derived_fact}, "
            f"input says {disagreement.input_fact}"
        )
    derived = tuple(sorted(derived_by))
    return ApplyResult(
        facts=input_facts | frozenset(derived),
        derived=derived,
        disagreements=tuple(
            sorted(disagreements.values(), key=lambda d: (d.derived_fact, d.rule_id))
        ),
        iterations=iterations,
    )


def fact_universe_size(facts: Iterable[Fact], rules: Sequence[CausalRule]) -> int:
    """Upper bound on the number of distinct facts the rules can ever hold."""
    names: set[str] = set()
    for fact in facts:
        names |= {fact.subject, fact.object}
    for rule in rules:
        for atom in [*rule.antecedent, *rule.consequent]:
            if isinstance(atom, ClassAtom):
                names.add(atom.concept)
            else:
                names |= {a for a in (atom.subject, atom.object) if not _is_variable(a)}
    names |= _POLARITY_VALUES | _SPEED_VALUES
    return len(FactPredicate) * len(names) * len(names)


def city_polarity(feature_results: Mapping[str, PolarityResult]) -> PolarityResult:
    """Sentence count weighted mean of the feature values, classified.

    The intervals are convex, so a unanimous term is kept.

    Undetermined features are left out. Each contributing feature shows up in the trace.

    Example:
        feature_results = {A: 0.2 (10 sentences), B: 0.8 (10 sentences)}
        returns PolarityResult(0.5, Neu)
    """
    determined = {
        name: r for name, r in sorted(feature_results.items()) if r.is_determined
    }
    if not determined:
        return PolarityResult(None, PolarityTerm.UNDETERMINED, (), 0)

    trace = tuple(
        RuleFiring(rule_id=name, fitness=float(r.sentence_count), output=r.value)
        for name, r in determined.items()
    )
    sentence_count = sum(r.sentence_count for r in determined.values())
    weights = [max(r.sentence_count, 0) for r in determined.values()]
    if sum(weights) == 0:
        weights = [1] * len(weights)
    value = math.fsum(w * r.value for w, r in zip(weights, determined.values())) / sum(weights)
    return PolarityResult(value, classify_interval(value), trace, sentence_count)


def cause_report(
    feature: Concept | str, facts: Iterable[Fact], ontology: FuzzyOntology
) -> list[tuple[str, str]]:
    """Causes of a negative feature: its negative subfeatures and what jams it.

    Example:
        feature = Road, facts = {PolarityIs(Road, SN), TrafficIsJammedBy(Road, Accident)}
        returns [("Accident", "cause-of-jam")]
    """
    name = feature if isinstance(feature, str) else feature.name
    facts = sorted(facts)
    negative = {t.value for t in NEGATIVE_TERMS}
    polarity = {
        (f.predicate, f.subject): f.object
        for f in facts
        if f.predicate in (FactPredicate.OPINION_OF, FactPredicate.POLARITY_IS)
    }

    def is_negative(subject: str) -> str | None:
        for predicate in (FactPredicate.OPINION_OF, FactPredicate.POLARITY_IS):
            term = polarity.get((predicate, subject))
            if term in negative:
                return term
        return None

    if is_negative(name) is None:
        return []
    report = []
    for child in subfeatures(name, ontology):
        term = is_negative(child.name)
        if term is not None:
            report.append((child.name, term))
    for fact in facts:
        if fact.predicate == FactPredicate.TRAFFIC_IS_JAMMED_BY and fact.subject == name:
            report.append((fact.object, CAUSE_OF_JAM))
    return report


@dataclass(frozen=True)
class SpeedTable:
    words: frozenset[str]
    ranges: tuple[tuple[SpeedTerm, float, float], ...]

    def term(self, value: float) -> SpeedTerm:
        """Ranges are half open [lo, hi) except for the one ending at 1."""
        if not 0.0 <= value <= 1.0:
            raise ValueOutOfRange(f"speed value has to be in [0, 1], got {value}")
        for speed, lo, hi in self.ranges:
            if lo <= value < hi or (value == hi == 1.0):
                return speed
        raise ValueOutOfRange(f"no speed range covers {value}")


def load_speed_table(path: Path) -> SpeedTable:
    """Reads `speedword <word>` and `range <SpeedTerm> <lo> <hi>` lines."""
    words: set[str] = set()
    ranges: list[tuple[SpeedTerm, float, float]] = []
    for line_number, line in read_data_lines(path):
        parts = line.split()
        if parts[0] == "speedword" and len(parts) == 2:
            words.add(stem(parts[1].lower()))
        elif parts[0] == "range" and len(parts) == 4:
            try:
                speed = SpeedTerm(parts[1])
                lo, hi = float(parts[2]), float(parts[3])
            except ValueError as e:
                raise RuleParseError(str(e), line_number)
            if not 0.0 <= lo < hi <= 1.0:
                raise RuleParseError(f"range [{lo}, {hi}) has to lie within [0, 1]", line_number)
            ranges.append((speed, lo, hi))
        else:
            raise RuleParseError(
                "expected `speedword <word>` or `range <SpeedTerm> <lo> <hi>`", line_number
            )
    return SpeedTable(frozenset(words), tuple(sorted(ranges, key=lambda r: r[1])))


def speed_fact(
    words: Sequence[OpinionWord], table: SpeedTable, subject: str = "Vehicle"
) -> Fact | None:
    """Speed of the subject from the mean value of its speed words, None without any."""
    speed_words = {(w.surface, w.negated): w for w in words if w.stem in table.words}
    if not speed_words:
        return None
    mean = math.fsum(word_scalar(w) for w in speed_words.values()) / len(speed_words)
    return Fact(FactPredicate.SPEED, subject, table.term(mean).value)


_JAM_BY_ACCIDENT = (
    "rule jam_accident: IF Accident(?B) AND Road(?A) AND Traffic(?D) AND Vehicle(?C) "
    "AND OpinionOf(?B, SN) AND Speed(?C, VerySlow) "
    "THEN OpinionOf(?D, SN) AND PolarityIs(?A, SN) AND TrafficIsJammedBy(?A, ?B)"
)
_JAM_BY_VEHICLE = (
    "rule jam_vehicle: Accident(?B), Road(?A), Traffic(?D), Vehicle(?C), OpinionOf(?B, Neu), "
    "Speed(?C, VerySlow) -> OpinionOf(?D, N), PolarityIs(?A, Neu), TrafficIsJammedBy(?A, ?C)"
)


def test_jam_by_accident_derivation():
    rules = [parse_causal_rule(_JAM_BY_ACCIDENT), parse_causal_rule(_JAM_BY_VEHICLE)]
    facts = {
        Fact(FactPredicate.OPINION_OF, "Accident", "SN"),
        Fact(FactPredicate.SPEED, "Vehicle", "VerySlow"),
    }
    result = apply_rules(facts, rules)
    assert set(result.derived) == {
        Fact(FactPredicate.OPINION_OF, "Traffic", "SN"),
        Fact(FactPredicate.POLARITY_IS, "Road", "SN"),
        Fact(FactPredicate.TRAFFIC_IS_JAMMED_BY, "Road", "Accident"),
    }
    assert result.iterations == 1


def test_jam_by_vehicle_derivation():
    rules = [parse_causal_rule(_JAM_BY_ACCIDENT), parse_causal_rule(_JAM_BY_VEHICLE)]
    facts = {
        Fact(FactPredicate.OPINION_OF, "Accident", "Neu"),
        Fact(FactPredicate.SPEED, "Vehicle", "VerySlow"),
    }
    assert set(apply_rules(facts, rules).derived) == {
        Fact(FactPredicate.OPINION_OF, "Traffic", "Neg"),
        Fact(FactPredicate.POLARITY_IS, "Road", "Neu"),
        Fact(FactPredicate.TRAFFIC_IS_JAMMED_BY, "Road", "Vehicle"),
    }


def test_empty_facts():
    result = apply_rules(set(), [parse_causal_rule(_JAM_BY_ACCIDENT)])
    assert result.facts == frozenset()
    assert result.iterations == 0


def test_disagreement_is_kept_apart():
    facts = {
        Fact(FactPredicate.OPINION_OF, "Accident", "SN"),
        Fact(FactPredicate.SPEED, "Vehicle", "VerySlow"),
        Fact(FactPredicate.OPINION_OF, "Traffic", "P"),
    }
    result = apply_rules(facts, [parse_causal_rule(_JAM_BY_ACCIDENT)])
    assert Fact(FactPredicate.OPINION_OF, "Traffic", "P") in result.facts
    assert Fact(FactPredicate.OPINION_OF, "Traffic", "SN") not in result.facts
    assert [d.rule_id for d in result.disagreements] == ["jam_accident"]


def test_rule_conflict():
    rules = [
        parse_causal_rule("rule a: IF OpinionOf(Road, SN) THEN PolarityIs(City, SN)"),
        parse_causal_rule("rule b: IF OpinionOf(Road, SN) THEN PolarityIs(City, P)"),
    ]
    try:
        apply_rules({Fact(FactPredicate.OPINION_OF, "Road", "SN")}, rules)
    except RuleConflict as e:
        assert e.conflicts == [("a", "b")]
    else:
        raise AssertionError("RuleConflict not raised")


def test_parse_causal_rule_errors():
    for text in [
        "rule x: IF Road(?A) THEN PolarityIs(?A, SN)",
        "rule x: IF OpinionOf(?A, SN) THEN PolarityIs(?B, SN)",
        "rule x: IF OpinionOf(?A, Great) THEN PolarityIs(?A, SN)",
        "rule x: IF OpinionOf(?A, SN) THEN",
    ]:
        try:
            parse_causal_rule(text, 3)
        except RuleParseError as e:
            assert e.line == 3
        else:
            raise AssertionError(f"RuleParseError not raised for {text!r}")


def test_city_polarity():
    def result(value, count):
        return PolarityResult(value, classify_interval(value), (RuleFiring("r", 1.0, value),), count)

    assert city_polarity({"A": result(0.1, 1), "B": result(0.2, 5)}).term == PolarityTerm.SN
    assert city_polarity({"A": result(0.6, 3), "B": result(0.7, 1)}).term == PolarityTerm.P
    mixed = city_polarity({"A": result(0.2, 10), "B": result(0.8, 10)})
    assert mixed.value == 0.5
    assert mixed.term == PolarityTerm.NEU
    assert city_polarity({}).term == PolarityTerm.UNDETERMINED


def test_speed_table_ranges():
    table = SpeedTable(
        frozenset([stem("slowly")]),
        (
            (SpeedTerm.VERY_SLOW, 0.0, 0.25),
            (SpeedTerm.SLOW, 0.25, 0.5),
            (SpeedTerm.NORMAL, 0.5, 0.75),
            (SpeedTerm.FAST, 0.75, 1.0),
        ),
    )
    assert table.term(0.125) == SpeedTerm.VERY_SLOW
    assert table.term(0.25) == SpeedTerm.SLOW
    assert table.term(1.0) == SpeedTerm.FAST
