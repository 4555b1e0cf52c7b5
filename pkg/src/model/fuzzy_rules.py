"""Fuzzy rule files.

    rule <id>: IF <slot> IS <term> [AND <slot> IS <term> ...] THEN <term> [IP <value>]
    override <rule id> <slot> <membership>

A slot is a class slot (`ow` any opinion word, `adjective`, `adverb`, `verb`) or a specific opinion
word. An override pins the membership degree of one rule slot and bypasses the membership function
bank.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import pyparsing as pp

from src.config.logger import log
from src.enums.enums import PolarityTerm
from src.model.membership import parse_term
from src.utils.utils_exceptions import RuleParseError
from src.utils.utils_functions import read_data_lines

SLOT_ANY = "ow"
SLOT_ADJECTIVE = "adjective"
SLOT_ADVERB = "adverb"
SLOT_VERB = "verb"
CLASS_SLOTS = frozenset([SLOT_ANY, SLOT_ADJECTIVE, SLOT_ADVERB, SLOT_VERB])

# IP of a rule which doesn't declare one
TERM_REPRESENTATIVE = {
    PolarityTerm.SN: 0.125,
    PolarityTerm.NEG: 0.375,
    PolarityTerm.NEU: 0.5,
    PolarityTerm.P: 0.625,
    PolarityTerm.SP: 0.875,
}

Overrides = Mapping[tuple[str, str], float]


@dataclass(frozen=True)
class FuzzyRule:
    id: str
    antecedent: tuple[tuple[str, PolarityTerm], ...]
    consequent: PolarityTerm
    ip: float

    def __post_init__(self):
        if not self.antecedent:
            raise ValueError(f"Rule {self.id} has an empty antecedent.")
        if not (math.isfinite(self.ip) and 0.0 <= self.ip <= 1.0):
            raise ValueError(f"Rule {self.id}: IP has to be in [0, 1], got {self.ip}")

    @property
    def slots(self) -> tuple[str, ...]:
        return tuple(slot for slot, _ in self.antecedent)


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[FuzzyRule, ...]
    overrides: Overrides = field(default_factory=dict)

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def rule(self, rule_id: str) -> FuzzyRule:
        for r in self.rules:
            if r.id == rule_id:
                return r
        raise KeyError(rule_id)


def _build_grammar() -> tuple[pp.ParserElement, pp.ParserElement]:
    RULE, IF, IS, AND, THEN, IP, OVERRIDE = map(
        pp.Keyword, ["rule", "IF", "IS", "AND", "THEN", "IP", "override"]
    )
    reserved = IF | IS | AND | THEN | IP

    def identifier(name: str) -> pp.ParserElement:
        return ~reserved + pp.Word(pp.alphanums + "_-")(name)

    def term(name: str) -> pp.ParserElement:
        return ~reserved + pp.Word(pp.alphas)(name)

    number = pp.pyparsing_common.number

    condition = pp.Group(identifier("slot") + IS + term("term"))
    rule = (
        RULE
        + identifier("id")
        + pp.Suppress(":")
        + IF
        + pp.Group(condition + pp.ZeroOrMore(AND.suppress() + condition))("antecedent")
        + THEN
        + term("consequent")
        + pp.Optional(IP + number("ip"))
    )
    override = OVERRIDE + identifier("rule_id") + identifier("slot") + number("mu")
    return rule, override


_RULE, _OVERRIDE = _build_grammar()


def parse_rule(text: str, line_number: int | None = None) -> FuzzyRule:
    """
    Example:
        text = "rule road_1: IF very IS Neu AND busy IS Neu AND closed IS SN THEN SN IP 0.25"
        returns FuzzyRule("road_1", ((very, Neu), (busy, Neu), (closed, SN)), SN, 0.25)
    """
    try:
        parsed = _RULE.parse_string(text, parse_all=True)
    except pp.ParseBaseException as e:
        raise RuleParseError(f"column {e.col}: {e.msg}", line_number)
    try:
        antecedent = tuple(
            (c["slot"].lower(), parse_term(c["term"])) for c in parsed["antecedent"]
        )
        consequent = parse_term(parsed["consequent"])
        ip = float(parsed["ip"]) if "ip" in parsed else TERM_REPRESENTATIVE[consequent]
        return FuzzyRule(parsed["id"], antecedent, consequent, ip)
    except ValueError as e:
        raise RuleParseError(str(e), line_number)


def load_fuzzy_rules(path: Path) -> RuleSet:
    rules: list[FuzzyRule] = []
    overrides: dict[tuple[str, str], float] = {}
    pending_overrides: list[tuple[str, str, int]] = []
    for line_number, line in read_data_lines(path):
        if line.startswith("override"):
            try:
                parsed = _OVERRIDE.parse_string(line, parse_all=True)
            except pp.ParseBaseException as e:
                raise RuleParseError(f"column {e.col}: {e.msg}", line_number)
            mu = float(parsed["mu"])
            if not math.isfinite(mu) or mu < 0:
                raise RuleParseError(f"membership override {mu} has to be >= 0", line_number)
            key = (parsed["rule_id"], parsed["slot"].lower())
            overrides[key] = mu
            pending_overrides.append((*key, line_number))
            continue

        rule = parse_rule(line, line_number)
        if any(r.id == rule.id for r in rules):
            raise RuleParseError(f"rule id {rule.id!r} used twice", line_number)
        rules.append(rule)

    by_id = {r.id: r for r in rules}
    for rule_id, slot, line_number in pending_overrides:
        if rule_id not in by_id:
            raise RuleParseError(f"override of unknown rule {rule_id!r}", line_number)
        if slot not in by_id[rule_id].slots:
            raise RuleParseError(f"rule {rule_id!r} has no slot {slot!r}", line_number)
    if not rules:
        raise RuleParseError(f"no rules in {path}")

    log.info(f"Loaded {len(rules)} fuzzy rules and {len(overrides)} overrides from {path}")
    return RuleSet(tuple(rules), overrides)


def test_parse_rule():
    rule = parse_rule("rule road_1: IF very IS Neu AND busy IS Neu AND closed IS SN THEN SN IP 0.25")
    assert rule.id == "road_1"
    assert rule.antecedent == (
        ("very", PolarityTerm.NEU),
        ("busy", PolarityTerm.NEU),
        ("closed", PolarityTerm.SN),
    )
    assert rule.consequent == PolarityTerm.SN
    assert rule.ip == 0.25


def test_parse_rule_default_ip():
    rule = parse_rule("rule ow_p: IF ow IS P THEN P")
    assert rule.ip == 0.625
    assert parse_rule("rule x: IF ow IS n THEN neg").consequent == PolarityTerm.NEG


def test_parse_rule_errors():
    for text in [
        "rule x: IF ow IS P",
        "rule x: THEN P",
        "rule x: IF ow IS Great THEN P",
        "rule x: IF ow IS P THEN P IP 1.5",
    ]:
        try:
            parse_rule(text, 4)
        except RuleParseError as e:
            assert e.line == 4
        else:
            raise AssertionError(f"RuleParseError not raised for {text!r}")


def test_load_fuzzy_rules_with_overrides(tmp_path):
    path = Path(tmp_path, "rules.txt")
    path.write_text(
        "rule accident_1: IF horrible IS SN AND closed IS SN AND killed IS SN THEN SN IP 0\n"
        "override accident_1 killed 3.4\n",
        encoding="utf-8",
    )
    rule_set = load_fuzzy_rules(path)
    assert len(rule_set) == 1
    assert rule_set.overrides == {("accident_1", "killed"): 3.4}

    path.write_text("override nope ow 0.5\nrule a: IF ow IS P THEN P\n", encoding="utf-8")
    try:
        load_fuzzy_rules(path)
    except RuleParseError as e:
        assert e.line == 1
    else:
        raise AssertionError("RuleParseError not raised")
