"""SentiWordNet scores, the positive/negative opinion word lists and opinion phrase lists."""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from src.config.config_defaults import PATH_DATA
from src.config.logger import log
from src.enums.enums import (
    ADJECTIVE_TAGS,
    ADVERB_TAGS,
    NOUN_TAGS,
    VERB_TAGS,
    Orientation,
    PosTag,
    WordClass,
)
from src.features.stemmer import stem
from src.utils.utils_exceptions import LexiconParseError, ScoreSumViolation
from src.utils.utils_functions import read_data_lines

SCORE_SUM_TOLERANCE = 1e-9

# Scalar of a phrase which has no SentiWordNet entry
PHRASE_DEFAULT_VALUE = {
    Orientation.POSITIVE: 0.625,
    Orientation.NEUTRAL: 0.5,
    Orientation.NEGATIVE: 0.375,
}

_SWN_CLASSES = {
    "a": WordClass.ADJECTIVE,
    "s": WordClass.ADJECTIVE,
    "r": WordClass.ADVERB,
    "v": WordClass.VERB,
    "n": WordClass.NOUN,
}


@dataclass(frozen=True)
class LexiconEntry:
    word: str
    pos: WordClass
    pos_score: float
    obj_score: float
    neg_score: float

    def __post_init__(self):
        for score in (self.pos_score, self.obj_score, self.neg_score):
            if not 0.0 <= score <= 1.0:
                raise ScoreSumViolation(f"{self.word}: score {score} is outside [0, 1]")
        total = self.pos_score + self.obj_score + self.neg_score
        if abs(total - 1.0) > SCORE_SUM_TOLERANCE:
            raise ScoreSumViolation(f"{self.word}: scores sum to {total}, expected 1")

    @property
    def scalar(self) -> float:
        """Single value fed to fuzzification.

        pos_score when it dominates, otherwise 0.25 * (1 - neg_score) which lands in the
        strongly negative interval.
        """
        if self.pos_score >= self.neg_score:
            return self.pos_score
        return min(max(0.25 * (1.0 - self.neg_score), 0.0), 0.25)


@dataclass(frozen=True)
class Lexicon:
    entries: Mapping[tuple[str, WordClass], LexiconEntry] = field(default_factory=dict)

    def by_word(self, word_stem: str) -> list[LexiconEntry]:
        return [
            self.entries[(word_stem, wc)]
            for wc in WordClass
            if (word_stem, wc) in self.entries
        ]

    def __contains__(self, word_stem: str) -> bool:
        return bool(self.by_word(word_stem))


@dataclass(frozen=True)
class OpinionLexicon:
    positive_words: frozenset[str] = frozenset()
    negative_words: frozenset[str] = frozenset()

    def __post_init__(self):
        both = self.positive_words & self.negative_words
        if both:
            raise LexiconParseError(
                f"words listed as both positive and negative: {sorted(both)}"
            )


@dataclass(frozen=True)
class PhraseLexicon:
    """Opinionated phrases, keyed by their lowercase words."""

    phrases: Mapping[tuple[str, ...], Orientation] = field(default_factory=dict)

    def orientation_of(self, merged: str) -> Orientation | None:
        return self.phrases.get(tuple(merged.split("_")))

    @property
    def max_length(self) -> int:
        return max((len(p) for p in self.phrases), default=0)


@dataclass(frozen=True)
class SentimentLexicon:
    """Everything extraction needs to judge and score opinion words."""

    scores: Lexicon
    opinion: OpinionLexicon
    phrases: PhraseLexicon

    def is_sentiment_bearing(self, word_stem: str, surface: str = "") -> bool:
        return (
            word_stem in self.scores
            or word_stem in self.opinion.positive_words
            or word_stem in self.opinion.negative_words
            or self.phrases.orientation_of(surface or word_stem) is not None
        )


def word_class(pos: PosTag | WordClass | None) -> WordClass | None:
    if pos is None or isinstance(pos, WordClass):
        return pos
    if pos in ADJECTIVE_TAGS:
        return WordClass.ADJECTIVE
    if pos in ADVERB_TAGS:
        return WordClass.ADVERB
    if pos in VERB_TAGS:
        return WordClass.VERB
    if pos in NOUN_TAGS:
        return WordClass.NOUN
    return None


def _strip_sense(term: str) -> str:
    """
    Example:
        term = "closed#1"
        returns "closed"
    """
    return term.split("#", 1)[0]


def load_sentiwordnet(path: Path) -> Lexicon:
    """Reads SentiWordNet 3.0 TSV rows `POS ID PosScore NegScore SynsetTerms Gloss`.

    Synsets sharing a (word stem, POS) are averaged into one entry.
    """
    collected: dict[tuple[str, WordClass], list[tuple[float, float]]] = defaultdict(list)
    for line_number, line in read_data_lines(path):
        columns = line.split("\t")
        if len(columns) < 5:
            raise LexiconParseError(
                "expected columns POS, ID, PosScore, NegScore, SynsetTerms", line_number
            )
        pos_letter, _, raw_pos, raw_neg, terms = (c.strip() for c in columns[:5])
        if pos_letter not in _SWN_CLASSES:
            raise LexiconParseError(f"unknown POS {pos_letter!r}", line_number)
        try:
            pos_score, neg_score = float(raw_pos), float(raw_neg)
        except ValueError:
            raise LexiconParseError("scores have to be numbers", line_number)
        if not (0.0 <= pos_score <= 1.0 and 0.0 <= neg_score <= 1.0):
            raise ScoreSumViolation("scores have to be in [0, 1]", line_number)
        if pos_score + neg_score > 1.0 + SCORE_SUM_TOLERANCE:
            raise ScoreSumViolation(
                f"PosScore + NegScore = {pos_score + neg_score} exceeds 1", line_number
            )
        wc = _SWN_CLASSES[pos_letter]
        for term in terms.split():
            word = _strip_sense(term).lower()
            if word:
                collected[(stem(word), wc)].append((pos_score, neg_score))

    entries = {}
    for (word, wc), scores in collected.items():
        pos_score = math.fsum(p for p, _ in scores) / len(scores)
        neg_score = math.fsum(n for _, n in scores) / len(scores)
        obj_score = max(0.0, 1.0 - pos_score - neg_score)
        entries[(word, wc)] = LexiconEntry(word, wc, pos_score, obj_score, neg_score)
    log.info(f"Loaded {len(entries)} SentiWordNet entries from {path}")
    return Lexicon(entries)


def _read_word_list(path: Path) -> frozenset[str]:
    # Word lists use `;` for comments
    return frozenset(
        stem(line.lower())
        for _, line in read_data_lines(path)
        if not line.startswith(";")
    )


def load_opinion_lexicon(positive_path: Path, negative_path: Path) -> OpinionLexicon:
    return OpinionLexicon(_read_word_list(positive_path), _read_word_list(negative_path))


def load_phrases(
    positive_path: Path, neutral_path: Path, negative_path: Path
) -> PhraseLexicon:
    """One phrase per line in each file. Phrases are underscore-joined when merged."""
    phrases: dict[tuple[str, ...], Orientation] = {}
    for path, orientation in [
        (positive_path, Orientation.POSITIVE),
        (neutral_path, Orientation.NEUTRAL),
        (negative_path, Orientation.NEGATIVE),
    ]:
        for line_number, line in read_data_lines(path):
            words = tuple(line.lower().replace("_", " ").split())
            if words in phrases and phrases[words] != orientation:
                raise LexiconParseError(
                    f"phrase {' '.join(words)!r} listed with two orientations", line_number
                )
            phrases[words] = orientation
    return PhraseLexicon(phrases)


def lookup(word: str, pos: PosTag | WordClass | None, lex: Lexicon) -> LexiconEntry | None:
    entries = lex.by_word(stem(word))
    wc = word_class(pos)
    for entry in entries:
        if entry.pos == wc:
            return entry
    return None


def opinion_value(word: str, pos: PosTag | WordClass | None, lex: Lexicon) -> float:
    """Scalar in [0, 1] of a word.

    The (word, POS) entry is used when present, otherwise the mean over the word's other POS
    entries. Unknown words are 0.

    Example:
        word = "big", pos = Adjective
        returns 0.75 with the bundled lexicon
    """
    entry = lookup(word, pos, lex)
    if entry is not None:
        return entry.scalar
    entries = lex.by_word(stem(word))
    if not entries:
        return 0.0
    return math.fsum(e.scalar for e in entries) / len(entries)


def orientation(word: str, ol: OpinionLexicon) -> Orientation:
    word_stem = stem(word)
    if word_stem in ol.positive_words:
        return Orientation.POSITIVE
    if word_stem in ol.negative_words:
        return Orientation.NEGATIVE
    return Orientation.UNKNOWN


def _swn_file(tmp_path, rows: list[str]) -> Path:
    path = Path(tmp_path, "swn.tsv")
    header = "# POS\tID\tPosScore\tNegScore\tSynsetTerms\tGloss\n"
    path.write_text(header + "\n".join(rows) + "\n", encoding="utf-8")
    return path


def test_load_sentiwordnet_scores(tmp_path):
    path = _swn_file(
        tmp_path,
        [
            "r\t1\t0\t0.625\tnot#1 non#1\tnegation",
            "a\t2\t0.5\t0.125\tvery#1\tprecise",
            "v\t3\t0\t0\tnoise#1\tmake noise",
        ],
    )
    lex = load_sentiwordnet(path)
    assert lookup("not", WordClass.ADVERB, lex) == LexiconEntry(
        stem("not"), WordClass.ADVERB, 0.0, 0.375, 0.625
    )
    very = lookup("very", PosTag.ADJECTIVE, lex)
    assert (very.pos_score, very.obj_score, very.neg_score) == (0.5, 0.375, 0.125)
    noise = lookup("noise", PosTag.VERB, lex)
    assert (noise.pos_score, noise.obj_score, noise.neg_score) == (0.0, 1.0, 0.0)


def test_sentiwordnet_averages_synsets(tmp_path):
    rows = ["a\t1\t0.5\t0\tbig#1", "a\t2\t1\t0\tbig#2"]
    lex = load_sentiwordnet(_swn_file(tmp_path, rows))
    assert opinion_value("big", PosTag.ADJECTIVE, lex) == 0.75
    lex_reversed = load_sentiwordnet(_swn_file(tmp_path, rows[::-1]))
    assert lex_reversed.entries == lex.entries


def test_sentiwordnet_score_sum_violation(tmp_path):
    try:
        load_sentiwordnet(_swn_file(tmp_path, ["a\t1\t0.7\t0.6\tbad#1"]))
    except ScoreSumViolation as e:
        assert e.line == 2
    else:
        raise AssertionError("ScoreSumViolation not raised")


def test_opinion_value(tmp_path):
    rows = [
        "r\t1\t0.5\t0\tclean#1",
        "a\t2\t0\t0.5\tkilled#1",
        "a\t3\t0\t1\thorrible#1",
    ]
    lex = load_sentiwordnet(_swn_file(tmp_path, rows))
    assert opinion_value("clean", PosTag.ADVERB, lex) == 0.5
    assert opinion_value("killed", PosTag.ADJECTIVE, lex) == 0.125
    assert opinion_value("horrible", PosTag.ADJECTIVE, lex) == 0.0
    # Falls back to the other POS entries
    assert opinion_value("clean", PosTag.ADJECTIVE, lex) == 0.5
    assert opinion_value("zebra", PosTag.NOUN, lex) == 0.0


def test_orientation():
    ol = OpinionLexicon(frozenset([stem("good")]), frozenset([stem("crowded")]))
    assert orientation("crowded", ol) == Orientation.NEGATIVE
    assert orientation("good", ol) == Orientation.POSITIVE
    assert orientation("table", ol) == Orientation.UNKNOWN


def test_bundled_lexicon_values():
    lex = load_sentiwordnet(Path(PATH_DATA, "sentiwordnet.tsv"))
    assert opinion_value("clean", PosTag.ADVERB, lex) == 0.5
    assert opinion_value("clean", PosTag.ADJECTIVE, lex) == 0.625
    assert opinion_value("big", PosTag.ADJECTIVE, lex) == 0.75
