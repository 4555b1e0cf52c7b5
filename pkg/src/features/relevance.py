"""Linear relevance filter and n-gram features.

f(doc) = bias + sum(weight * indicator(stem present in doc)). The special key `__city__` is the
indicator that the document mentions its own city name. A document is relevant iff f(doc) > 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence, TypeVar

from src.data.corpus import Document
from src.enums.enums import DocumentSource, PosTag
from src.features.pos_tagger import Token
from src.features.preprocess import ProcessedDocument
from src.features.stemmer import stem
from src.utils.utils_exceptions import InvalidNgramSize, WeightsParseError
from src.utils.utils_functions import read_data_lines

T = TypeVar("T")

BIAS_KEY = "__bias__"
CITY_KEY = "__city__"


@dataclass(frozen=True)
class WeightVector:
    entries: Mapping[str, float]
    bias: float = 0.0

    def __post_init__(self):
        if not self.entries:
            raise ValueError("WeightVector needs at least one entry.")
        for key, weight in [*self.entries.items(), (BIAS_KEY, self.bias)]:
            if not math.isfinite(weight):
                raise ValueError(f"Weight of {key!r} is not finite: {weight}")

    def scaled(self, alpha: float) -> WeightVector:
        return WeightVector({k: alpha * w for k, w in self.entries.items()}, alpha * self.bias)


def load_weights(path: Path) -> WeightVector:
    """Reads `stem<TAB>weight` lines. Keys are stemmed so that surfaces can be written too."""
    entries: dict[str, float] = {}
    bias = 0.0
    for line_number, line in read_data_lines(path):
        parts = line.split("\t")
        if len(parts) != 2:
            raise WeightsParseError("expected `stem<TAB>weight`", line_number)
        key, raw_weight = parts[0].strip(), parts[1].strip()
        try:
            weight = float(raw_weight)
        except ValueError:
            raise WeightsParseError(f"weight {raw_weight!r} is not a number", line_number)
        if not math.isfinite(weight):
            raise WeightsParseError(f"weight of {key!r} is not finite", line_number)
        if key == BIAS_KEY:
            bias = weight
        elif key == CITY_KEY:
            entries[CITY_KEY] = weight
        else:
            entries[stem(key)] = weight
    try:
        return WeightVector(entries, bias)
    except ValueError as e:
        raise WeightsParseError(str(e))


def indicators(doc: ProcessedDocument, w: WeightVector) -> dict[str, int]:
    stems = doc.stems
    return {
        key: int(doc.mentions_city if key == CITY_KEY else key in stems)
        for key in w.entries
    }


def score(doc: ProcessedDocument, w: WeightVector) -> float:
    """
    Example:
        doc has road, accident, close and its city name
        w = {road: 0.5, accident: 0.6, close: 0.1, __city__: -0.3}
        returns 0.9
    """
    present = indicators(doc, w)
    return math.fsum([w.bias, *(w.entries[k] for k, v in present.items() if v)])


def is_relevant(doc: ProcessedDocument, w: WeightVector) -> bool:
    return score(doc, w) > 0


def ngrams(tokens: Sequence[T], n: int) -> list[tuple[T, ...]]:
    """All contiguous windows of length n, in order."""
    if n < 1:
        raise InvalidNgramSize(f"n has to be >= 1, got {n}")
    return [tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]


def _processed(stems: list[str], mentions_city: bool):
    document = Document("d", " ".join(stems) or "-", DocumentSource.TWEET, "Quezon")
    tokens = tuple(Token(s, s, PosTag.NOUN) for s in stems)
    return ProcessedDocument(document, (tokens,), (), 0, mentions_city)


def test_score_worked_example():
    w = WeightVector(
        {stem("road"): 0.5, stem("accident"): 0.6, stem("close"): 0.1, CITY_KEY: -0.3}
    )
    doc = _processed([stem("road"), stem("accident"), stem("close")], mentions_city=True)
    assert score(doc, w) == 0.9
    assert is_relevant(doc, w)

    assert score(_processed([], mentions_city=False), w) == 0.0
    assert not is_relevant(_processed([], mentions_city=False), w)

    city_only = _processed(["quezon"], mentions_city=True)
    assert score(city_only, w) == -0.3
    assert not is_relevant(city_only, w)


def test_ngrams():
    tokens = ["road", "is", "closed"]
    assert ngrams(tokens, 2) == [("road", "is"), ("is", "closed")]
    assert ngrams(tokens, 3) == [("road", "is", "closed")]
    assert ngrams(["road"], 2) == []
    try:
        ngrams(tokens, 0)
    except InvalidNgramSize:
        pass
    else:
        raise AssertionError("InvalidNgramSize not raised")
