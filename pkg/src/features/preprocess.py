"""Cleaning, sentence and clause splitting.

Order per document: protect multi-word opinion phrases -> clean -> split sentences -> tokenize ->
remove stopwords -> tag (and stem) -> split clauses. Tokens keep both surface and stem.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from nltk.tokenize import MWETokenizer, RegexpTokenizer

from src.config.logger import log
from src.data.corpus import Document
from src.enums.enums import SUBJECT_TAGS, VERB_TAGS, DocumentSource, PosTag
from src.features.pos_tagger import PosTagger, Token, pos_tag
from src.features.stemmer import stem
from src.utils.utils_functions import read_data_lines

ARTICLES = frozenset(["a", "an", "the"])
PREPOSITIONS = frozenset(
    [
        "about",
        "above",
        "across",
        "after",
        "at",
        "before",
        "behind",
        "below",
        "between",
        "by",
        "during",
        "for",
        "from",
        "in",
        "into",
        "near",
        "of",
        "on",
        "onto",
        "over",
        "through",
        "to",
        "toward",
        "towards",
        "under",
        "with",
        "within",
        "without",
    ]
)
CLAUSE_CONJUNCTIONS = frozenset(["and", "but"])

_MONTHS = (
    "january|february|march|april|may|june|july|august|september|october|november|december"
    "|jan|feb|mar|apr|jun|jul|aug|sep|sept|oct|nov|dec"
)
_DATE_PATTERNS = [
    re.compile(r"(?<![\w/])\d{1,2}/\d{1,2}/\d{4}(?![\w/])"),
    re.compile(r"(?<![\w-])\d{4}-\d{2}-\d{2}(?![\w-])"),
    re.compile(rf"\b(?:{_MONTHS})\.?\s+\d{{1,2}}(?:st|nd|rd|th)?\b", re.IGNORECASE),
]
_ARTICLE_PATTERN = re.compile(r"(?<![\w-])(?:a|an|the)(?![\w-])", re.IGNORECASE)
_SENTENCE_BOUNDARY = re.compile(r"[.!?]+")

_word_tokenizer = RegexpTokenizer(r"\w+(?:[-']\w+)*")
_raw_tokenizer = RegexpTokenizer(r"\w+(?:[-'/]\w+)*|[^\w\s]")


def _clean_once(text: str) -> str:
    for pattern in _DATE_PATTERNS:
        text = pattern.sub(" ", text)
    text = text.replace("#", "").replace("@", "")
    text = _ARTICLE_PATTERN.sub(" ", text)
    return " ".join(text.split())


def clean(text: str) -> str:
    """Strips `#`/`@` (keeping the word), dates, articles and extra whitespace.

    Example:
        text = "#traffic jam @cityhall 2016-03-01"
        returns "traffic jam cityhall"
    """
    while True:
        cleaned = _clean_once(text)
        if cleaned == text:
            return cleaned
        text = cleaned


def split_sentences(text: str) -> list[str]:
    return [s.strip() for s in _SENTENCE_BOUNDARY.split(text) if s.strip()]


def tokenize(sentence: str) -> list[str]:
    return [t.lower() for t in _word_tokenizer.tokenize(sentence)]


def load_stopwords(path: Path) -> frozenset[str]:
    """Stopword file, one word per line. Articles and prepositions are always included."""
    words = {line.lower() for _, line in read_data_lines(path)}
    return frozenset(words) | ARTICLES | PREPOSITIONS


def remove_stopwords(tokens: Sequence[str], stopwords: frozenset[str]) -> list[str]:
    return [t for t in tokens if t not in stopwords]


def is_complete(tokens: Sequence[Token]) -> bool:
    """A complete clause has a noun (or pronoun) and a verb."""
    has_subject = any(t.pos in SUBJECT_TAGS for t in tokens)
    has_verb = any(t.pos in VERB_TAGS for t in tokens)
    return has_subject and has_verb


@dataclass(frozen=True)
class Clause:
    tokens: tuple[Token, ...]
    source_doc: str
    index: int

    def __post_init__(self):
        if not is_complete(self.tokens):
            raise ValueError(
                f"Clause {self.source_doc}#{self.index} needs a noun and a verb: "
                f"{[t.surface for t in self.tokens]}"
            )

    @property
    def stems(self) -> tuple[str, ...]:
        return tuple(t.stem for t in self.tokens)

    @property
    def surfaces(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.tokens)


def _is_clause_conjunction(token: Token) -> bool:
    return token.surface in CLAUSE_CONJUNCTIONS


def split_clauses(
    sentence: Sequence[Token], source_doc: str = "", start_index: int = 0
) -> list[Clause]:
    """Splits a tagged sentence at `and`/`but` into complete clauses.

    A fragment which isn't complete is attached (with its conjunction) to the clause before it,
    or dropped when no clause precedes it. A sentence without any complete part yields no
    clauses.

    Example:
        "park is very clean and location is good"
        returns [park is very clean], [location is good]

    Example:
        "new-york has a_lot facilities but crowded"
        returns [new-york has a_lot facilities but crowded]

    Example:
        "heavy rain and road is closed"
        returns [road is closed]
    """
    segments: list[tuple[Token | None, list[Token]]] = [(None, [])]
    for token in sentence:
        if token.pos == PosTag.CONJUNCTION and _is_clause_conjunction(token):
            segments.append((token, []))
        else:
            segments[-1][1].append(token)

    groups: list[list[Token]] = []
    for conjunction, segment in segments:
        if is_complete(segment):
            groups.append(list(segment))
        elif groups:
            groups[-1].extend([conjunction, *segment])
        elif segment:
            log.debug(f"{source_doc}: dropped leading fragment {[t.surface for t in segment]}")

    return [
        Clause(tuple(tokens), source_doc, start_index + i)
        for i, tokens in enumerate(groups)
    ]


@dataclass(frozen=True)
class ProcessedDocument:
    document: Document
    sentences: tuple[tuple[Token, ...], ...]
    clauses: tuple[Clause, ...]
    incomplete_sentences: int
    mentions_city: bool

    @property
    def stems(self) -> frozenset[str]:
        return frozenset(t.stem for sentence in self.sentences for t in sentence)


class Preprocessor:
    def __init__(
        self,
        tagger: PosTagger,
        stopwords: frozenset[str],
        phrases: Iterable[tuple[str, ...]] = (),
    ):
        self.tagger = tagger
        self.stopwords = frozenset(stopwords) | ARTICLES | PREPOSITIONS

        # Phrases with function words would lose them to cleaning, join them up front
        protected = [
            tuple(p)
            for p in phrases
            if len(p) > 1 and any(w in self.stopwords for w in p)
        ]
        self._mwe = MWETokenizer(sorted(protected), separator="_")

    def protect_phrases(self, text: str) -> str:
        tokens = _raw_tokenizer.tokenize(text.lower())
        return " ".join(self._mwe.tokenize(tokens))

    def process(self, document: Document) -> ProcessedDocument:
        cleaned = clean(self.protect_phrases(document.text))

        sentences: list[tuple[Token, ...]] = []
        clauses: list[Clause] = []
        incomplete = 0
        for sentence in split_sentences(cleaned):
            words = remove_stopwords(tokenize(sentence), self.stopwords)
            if not words:
                continue
            tokens = pos_tag(words, self.tagger)
            sentences.append(tuple(tokens))
            sentence_clauses = split_clauses(tokens, document.id, len(clauses))
            if not sentence_clauses:
                incomplete += 1
            clauses.extend(sentence_clauses)

        stems = {t.stem for sentence in sentences for t in sentence}
        city_stems = [stem(w) for w in tokenize(clean(document.city))]
        mentions_city = bool(city_stems) and all(s in stems for s in city_stems)

        return ProcessedDocument(
            document=document,
            sentences=tuple(sentences),
            clauses=tuple(clauses),
            incomplete_sentences=incomplete,
            mentions_city=mentions_city,
        )


_TEST_TAGS = {
    "park": PosTag.NOUN,
    "location": PosTag.NOUN,
    "facilities": PosTag.NOUN,
    "road": PosTag.NOUN,
    "new-york": PosTag.PROPER_NOUN,
    "is": PosTag.VERB,
    "has": PosTag.VERB,
    "very": PosTag.ADVERB,
    "clean": PosTag.ADJECTIVE,
    "good": PosTag.ADJECTIVE,
    "crowded": PosTag.ADJECTIVE,
    "closed": PosTag.ADJECTIVE,
    "and": PosTag.CONJUNCTION,
    "but": PosTag.CONJUNCTION,
    "a_lot": PosTag.ADVERB,
    "heavy": PosTag.ADJECTIVE,
    "rain": PosTag.NOUN,
    "slow": PosTag.ADJECTIVE,
    "quiet": PosTag.ADJECTIVE,
}


def _test_preprocessor() -> Preprocessor:
    return Preprocessor(PosTagger(_TEST_TAGS), frozenset(), phrases=[("a", "lot")])


def test_clean_examples():
    assert clean("the road is closed") == "road is closed"
    assert clean("#traffic jam @cityhall 2016-03-01") == "traffic jam cityhall"
    assert clean("") == ""
    assert clean("Accident on 12/03/2016 and on March 5th") == "Accident on and on"


def test_split_clauses_at_conjunction():
    doc = Document("d", "Park is very clean and the location is good", DocumentSource.REVIEW, "NY")
    processed = _test_preprocessor().process(doc)
    assert [c.surfaces for c in processed.clauses] == [
        ("park", "is", "very", "clean"),
        ("location", "is", "good"),
    ]
    assert [c.index for c in processed.clauses] == [0, 1]


def test_split_clauses_attaches_incomplete_fragment():
    doc = Document("d", "New-York has a lot of facilities but crowded", DocumentSource.REVIEW, "NY")
    processed = _test_preprocessor().process(doc)
    assert len(processed.clauses) == 1
    assert processed.clauses[0].surfaces == (
        "new-york",
        "has",
        "a_lot",
        "facilities",
        "but",
        "crowded",
    )


def test_incomplete_sentence_is_flagged():
    doc = Document("d", "Road closed.", DocumentSource.TWEET, "Quezon")
    processed = _test_preprocessor().process(doc)
    assert processed.clauses == ()
    assert processed.incomplete_sentences == 1


def _clauses(words: str) -> list[tuple[str, ...]]:
    tokens = _test_preprocessor().tagger.tag(words.split())
    return [c.surfaces for c in split_clauses(tokens, "d")]


def test_split_clauses_drops_leading_fragment():
    assert _clauses("heavy rain and road is closed") == [("road", "is", "closed")]
    assert _clauses("and road is closed") == [("road", "is", "closed")]


def test_split_clauses_attaches_trailing_fragment():
    assert _clauses("road is closed and very slow") == [
        ("road", "is", "closed", "and", "very", "slow")
    ]
    assert _clauses("park is clean and very quiet but road is closed") == [
        ("park", "is", "clean", "and", "very", "quiet"),
        ("road", "is", "closed"),
    ]


def test_split_clauses_without_complete_part():
    assert _clauses("heavy rain and very slow") == []
