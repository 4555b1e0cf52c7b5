from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from src.enums.enums import PosTag
from src.features.stemmer import stem
from src.utils.utils_exceptions import LexiconParseError
from src.utils.utils_functions import read_data_lines


@dataclass(frozen=True)
class Token:
    surface: str
    stem: str
    pos: PosTag

    def __post_init__(self):
        if not self.surface:
            raise ValueError("Token surface can't be empty.")
        if not self.stem or self.stem != self.stem.lower():
            raise ValueError(f"Token stem has to be non-empty lowercase, got {self.stem!r}")


def load_tag_lexicon(path: Path) -> dict[str, PosTag]:
    """Reads `word<TAB>tag` lines. Tags are PosTag values, e.g. `killed<TAB>VerbPast`."""
    lexicon: dict[str, PosTag] = {}
    for line_number, line in read_data_lines(path):
        parts = line.split("\t")
        if len(parts) != 2:
            raise LexiconParseError("expected `word<TAB>tag`", line_number)
        word, tag = parts[0].strip().lower(), parts[1].strip()
        try:
            lexicon[word] = PosTag(tag)
        except ValueError:
            raise LexiconParseError(
                f"unknown tag {tag!r}, expected one of {[t.value for t in PosTag]}",
                line_number,
            )
    return lexicon


class PosTagger:
    """Lexicon-based tagger with suffix heuristics for unknown words.

    Unknown words: digits are Other, -ed is VerbPast, -est is AdjSuperlative, -ly is Adverb and
    everything else is a Noun.
    """

    def __init__(self, lexicon: Mapping[str, PosTag]):
        self.lexicon = dict(lexicon)

    @classmethod
    def from_file(cls, path: Path) -> PosTagger:
        return cls(load_tag_lexicon(path))

    def tag_word(self, word: str) -> PosTag:
        word = word.lower()
        if word in self.lexicon:
            return self.lexicon[word]
        if any(c.isdigit() for c in word):
            return PosTag.OTHER
        if word.endswith("ed") and len(word) > 3:
            return PosTag.VERB_PAST
        if word.endswith("est") and len(word) > 4:
            return PosTag.ADJ_SUPERLATIVE
        if word.endswith("ly") and len(word) > 3:
            return PosTag.ADVERB
        return PosTag.NOUN

    def tag(self, tokens: Sequence[str]) -> list[Token]:
        return [Token(surface=t, stem=stem(t), pos=self.tag_word(t)) for t in tokens]


def pos_tag(tokens: Sequence[str], tagger: PosTagger) -> list[Token]:
    """Exactly one tag per token, deterministic for a fixed tag lexicon."""
    return tagger.tag(tokens)


def test_pos_tag_lexicon_and_fallback():
    tagger = PosTagger(
        {
            "park": PosTag.NOUN,
            "is": PosTag.VERB,
            "clean": PosTag.ADJECTIVE,
            "quickest": PosTag.ADV_SUPERLATIVE,
        }
    )
    tags = [t.pos for t in pos_tag(["park", "is", "clean"], tagger)]
    assert tags == [PosTag.NOUN, PosTag.VERB, PosTag.ADJECTIVE]
    assert pos_tag(["killed"], tagger)[0].pos == PosTag.VERB_PAST
    assert pos_tag(["quickest"], tagger)[0].pos == PosTag.ADV_SUPERLATIVE
    assert pos_tag(["longest"], tagger)[0].pos == PosTag.ADJ_SUPERLATIVE
    assert pos_tag(["slowly"], tagger)[0].pos == PosTag.ADVERB
    assert pos_tag(["zebra"], tagger)[0].pos == PosTag.NOUN
    assert pos_tag(["3"], tagger)[0].pos == PosTag.OTHER


def test_pos_tag_preserves_token_count():
    tagger = PosTagger({})
    words = ["road", "is", "closed", "road"]
    tokens = pos_tag(words, tagger)
    assert len(tokens) == len(words)
    assert [t.surface for t in tokens] == words
