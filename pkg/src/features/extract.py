"""Feature / opinion word pairing within a clause."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Sequence

from src.config.logger import log
from src.enums.enums import (
    NOUN_TAGS,
    OPINION_TAGS,
    ConceptKind,
    Orientation,
    PosTag,
    SubjectivityCueKind,
    WordClass,
)
from src.features.pos_tagger import PosTagger, Token
from src.features.preprocess import Clause
from src.features.relevance import ngrams
from src.features.stemmer import stem
from src.knowledge.lexicon import (
    PHRASE_DEFAULT_VALUE,
    Lexicon,
    LexiconEntry,
    OpinionLexicon,
    PhraseLexicon,
    SentimentLexicon,
    opinion_value,
)
from src.knowledge.lexicon import orientation as list_orientation
from src.knowledge.ontology import Concept, FuzzyOntology, find_concepts

NEGATION = "not"
PHRASE_SEPARATOR = "_"

AUXILIARIES = frozenset(
    [
        "am",
        "is",
        "are",
        "was",
        "were",
        "be",
        "been",
        "being",
        "has",
        "have",
        "had",
        "do",
        "does",
        "did",
        "will",
        "would",
        "can",
        "could",
        "shall",
        "should",
        "may",
        "might",
        "must",
    ]
)

PERSONAL_PRONOUNS = frozenset(
    ["i", "me", "my", "mine", "we", "us", "our", "ours", "you", "your", "yours"]
)


@dataclass(frozen=True)
class OpinionWord:
    surface: str
    stem: str
    pos: PosTag
    value: float
    orientation: Orientation

    # Odd number of `not` directly before the word
    negated: bool

    # Position in the clause
    index: int


@dataclass(frozen=True)
class SubjectivityCue:
    kind: SubjectivityCueKind
    token: Token


@dataclass(frozen=True)
class FeatureOpinion:
    feature: Concept
    clause: Clause
    opinion_words: tuple[OpinionWord, ...]
    cues: tuple[SubjectivityCue, ...] = ()


def _flip(o: Orientation) -> Orientation:
    if o == Orientation.POSITIVE:
        return Orientation.NEGATIVE
    if o == Orientation.NEGATIVE:
        return Orientation.POSITIVE
    return o


def _is_negated(tokens: Sequence[Token], index: int) -> bool:
    count = 0
    i = index - 1
    while i >= 0 and tokens[i].surface == NEGATION:
        count += 1
        i -= 1
    return count % 2 == 1


def _is_phrase(token: Token, phrases: PhraseLexicon) -> bool:
    return (
        PHRASE_SEPARATOR in token.surface
        and phrases.orientation_of(token.surface) is not None
    )


def _scores_orientation(word: str, pos: PosTag, scores: Lexicon) -> Orientation:
    if stem(word) not in scores:
        return Orientation.UNKNOWN
    value = opinion_value(word, pos, scores)
    if value > 0.5:
        return Orientation.POSITIVE
    if value < 0.5:
        return Orientation.NEGATIVE
    return Orientation.NEUTRAL


def word_orientation(token: Token, lexicon: SentimentLexicon) -> Orientation:
    """Phrase list first, then the opinion word lists, then the sign of the SentiWordNet value."""
    phrase_orientation = lexicon.phrases.orientation_of(token.surface)
    if PHRASE_SEPARATOR in token.surface and phrase_orientation is not None:
        return phrase_orientation
    listed = list_orientation(token.surface, lexicon.opinion)
    if listed != Orientation.UNKNOWN:
        return listed
    return _scores_orientation(token.surface, token.pos, lexicon.scores)


def _opinion_word(
    tokens: Sequence[Token], index: int, lexicon: SentimentLexicon
) -> OpinionWord:
    token = tokens[index]
    orientation = word_orientation(token, lexicon)
    if _is_phrase(token, lexicon.phrases) and token.stem not in lexicon.scores:
        value = PHRASE_DEFAULT_VALUE.get(orientation, 0.5)
    else:
        value = opinion_value(token.surface, token.pos, lexicon.scores)
    negated = _is_negated(tokens, index)
    return OpinionWord(
        surface=token.surface,
        stem=token.stem,
        pos=token.pos,
        value=value,
        orientation=_flip(orientation) if negated else orientation,
        negated=negated,
        index=index,
    )


def opinion_words(clause: Clause, lexicon: SentimentLexicon) -> list[OpinionWord]:
    """Sentiment bearing adjectives, adverbs, verbs and opinion phrases of the clause."""
    tokens = clause.tokens
    words = []
    for i, token in enumerate(tokens):
        if token.surface == NEGATION or token.surface in AUXILIARIES:
            continue
        if _is_phrase(token, lexicon.phrases) or (
            token.pos in OPINION_TAGS
            and lexicon.is_sentiment_bearing(token.stem, token.surface)
        ):
            words.append(_opinion_word(tokens, i, lexicon))
    return words


def noun_phrases(clause: Clause, phrases: PhraseLexicon | None = None) -> list[list[Token]]:
    """Maximal runs of nouns and proper nouns."""
    runs: list[list[Token]] = []
    current: list[Token] = []
    for token in clause.tokens:
        is_noun = token.pos in NOUN_TAGS and not (
            phrases is not None and _is_phrase(token, phrases)
        )
        if is_noun:
            current.append(token)
        elif current:
            runs.append(current)
            current = []
    if current:
        runs.append(current)
    return runs


def detect_cues(
    clause: Clause | Sequence[Token], opinion: OpinionLexicon
) -> list[SubjectivityCue]:
    """One cue per triggering token.

    Superlative adverbs read positive, past tense verbs from the negative list read negative,
    comparative adjectives and personal pronouns mark subjective text.
    """
    tokens = clause.tokens if isinstance(clause, Clause) else clause
    cues = []
    for token in tokens:
        kind = None
        if token.pos == PosTag.ADV_SUPERLATIVE:
            kind = SubjectivityCueKind.SUPERLATIVE_ADVERB_POSITIVE
        elif token.pos == PosTag.VERB_PAST and token.stem in opinion.negative_words:
            kind = SubjectivityCueKind.PAST_TENSE_NEGATIVE
        elif token.pos == PosTag.ADJ_COMPARATIVE:
            kind = SubjectivityCueKind.COMPARATIVE_ADJECTIVE
        elif token.pos == PosTag.PRONOUN and token.surface in PERSONAL_PRONOUNS:
            kind = SubjectivityCueKind.PRONOUN_SUBJECTIVE
        if kind is not None:
            cues.append(SubjectivityCue(kind, token))
    return cues


def extract_pairs(
    clause: Clause, ontology: FuzzyOntology, lexicon: SentimentLexicon
) -> list[FeatureOpinion]:
    """One FeatureOpinion per distinct concept found in the clause's noun phrases.

    Every record shares the clause's opinion words. A clause without a concept yields [].

    Example:
        clause = "park is very clean"
        returns [FeatureOpinion(Parks, [very, clean])]
    """
    concepts: dict[str, Concept] = {}
    for run in noun_phrases(clause, lexicon.phrases):
        for _, _, concept in find_concepts([t.stem for t in run], ontology):
            concepts.setdefault(concept.name, concept)
    if not concepts:
        return []

    words = tuple(opinion_words(clause, lexicon))
    cues = tuple(detect_cues(clause, lexicon.opinion))
    log.debug(
        f"{clause.source_doc}#{clause.index}: {list(concepts)} <- {[w.surface for w in words]}"
    )
    return [FeatureOpinion(c, clause, words, cues) for c in concepts.values()]


def attach_phrases(
    pairs: Sequence[FeatureOpinion],
    ngrams: Mapping[int, Sequence[tuple[Token, ...]]],
    phrases: PhraseLexicon,
) -> list[FeatureOpinion]:
    """Merges opinion phrases found among the clause n-grams into single opinion words.

    Longer n-grams win over overlapping shorter ones, then the leftmost wins. The words of a
    merged span are replaced by one entry `w1_w2[_w3]` carrying the phrase's orientation.

    Example:
        tokens = bridge really well maintained
        phrases = {"well maintained", "really well maintained"}
        returns pairs whose opinion words are [really_well_maintained]
    """
    hits = []
    for n, grams in ngrams.items():
        for start, gram in enumerate(grams):
            orientation = phrases.phrases.get(tuple(t.surface for t in gram))
            if orientation is not None:
                hits.append((start, n, gram, orientation))
    if not hits:
        return list(pairs)

    accepted: list[tuple[int, int, tuple[Token, ...], Orientation]] = []
    taken: set[int] = set()
    for start, n, gram, orientation in sorted(hits, key=lambda h: (-h[1], h[0])):
        span = set(range(start, start + n))
        if span & taken:
            continue
        taken |= span
        accepted.append((start, n, gram, orientation))
    accepted.sort(key=lambda h: h[0])

    merged_pairs = []
    for pair in pairs:
        merged = []
        for start, n, gram, orientation in accepted:
            negated = _is_negated(pair.clause.tokens, start)
            merged.append(
                OpinionWord(
                    surface=PHRASE_SEPARATOR.join(t.surface for t in gram),
                    stem=PHRASE_SEPARATOR.join(t.stem for t in gram),
                    pos=PosTag.OTHER,
                    value=PHRASE_DEFAULT_VALUE.get(orientation, 0.5),
                    orientation=_flip(orientation) if negated else orientation,
                    negated=negated,
                    index=start,
                )
            )
        kept = [w for w in pair.opinion_words if w.index not in taken]
        words = sorted(kept + merged, key=lambda w: w.index)
        merged_pairs.append(replace(pair, opinion_words=tuple(words)))
    return merged_pairs


_TEST_TAGS = {
    "park": PosTag.NOUN,
    "road": PosTag.NOUN,
    "bridge": PosTag.NOUN,
    "accident": PosTag.NOUN,
    "traffic": PosTag.NOUN,
    "route": PosTag.NOUN,
    "new-york": PosTag.PROPER_NOUN,
    "facilities": PosTag.NOUN,
    "it": PosTag.PRONOUN,
    "is": PosTag.VERB,
    "was": PosTag.VERB,
    "has": PosTag.VERB,
    "very": PosTag.ADVERB,
    "really": PosTag.ADVERB,
    "well": PosTag.ADVERB,
    "not": PosTag.ADVERB,
    "clean": PosTag.ADJECTIVE,
    "busy": PosTag.ADJECTIVE,
    "crowded": PosTag.ADJECTIVE,
    "wonderful": PosTag.ADJECTIVE,
    "open": PosTag.ADJECTIVE,
    "maintained": PosTag.VERB_PAST,
    "jammed": PosTag.VERB_PAST,
    "fastest": PosTag.ADV_SUPERLATIVE,
    "ever": PosTag.ADVERB,
    "again": PosTag.ADVERB,
    "a_lot": PosTag.ADVERB,
    "but": PosTag.CONJUNCTION,
}


def _test_fixture():
    def entry(word, wc, p, n):
        return (stem(word), wc), LexiconEntry(stem(word), wc, p, 1 - p - n, n)

    scores = Lexicon(
        dict(
            [
                entry("very", WordClass.ADVERB, 0.5, 0.125),
                entry("clean", WordClass.ADJECTIVE, 0.5, 0.0),
                entry("busy", WordClass.ADJECTIVE, 0.375, 0.0),
                entry("wonderful", WordClass.ADJECTIVE, 0.75, 0.0),
                entry("well", WordClass.ADVERB, 0.5, 0.0),
            ]
        )
    )
    lexicon = SentimentLexicon(
        scores=scores,
        opinion=OpinionLexicon(
            frozenset(stem(w) for w in ["clean", "wonderful", "fastest"]),
            frozenset(stem(w) for w in ["crowded", "jammed"]),
        ),
        phrases=PhraseLexicon(
            {
                ("a", "lot"): Orientation.POSITIVE,
                ("well", "maintained"): Orientation.POSITIVE,
                ("really", "well", "maintained"): Orientation.POSITIVE,
            }
        ),
    )

    def concept(name, *synonyms):
        return Concept(name, None, tuple((stem(s),) for s in synonyms), ConceptKind.CITY_FEATURE)

    concepts = [
        concept("Parks", "park"),
        concept("Road"),
        concept("Accident"),
        concept("Traffic"),
        concept("New_York", "new-york"),
    ]
    index = {}
    for c in concepts:
        index[c.name_stems] = c.name
        for s in c.synonyms:
            index[s] = c.name
    ontology = FuzzyOntology(concepts={c.name: c for c in concepts}, index=index)
    return PosTagger(_TEST_TAGS), ontology, lexicon


def _clause(tagger, words: str) -> Clause:
    return Clause(tuple(tagger.tag(words.split())), "d", 0)


def test_extract_pairs_park():
    tagger, ontology, lexicon = _test_fixture()
    pairs = extract_pairs(_clause(tagger, "park is very clean"), ontology, lexicon)
    assert [p.feature.name for p in pairs] == ["Parks"]
    assert [w.surface for w in pairs[0].opinion_words] == ["very", "clean"]
    assert pairs[0].opinion_words[1].orientation == Orientation.POSITIVE


def test_extract_pairs_city_phrase():
    tagger, ontology, lexicon = _test_fixture()
    clause = _clause(tagger, "new-york has a_lot facilities but crowded")
    (pair,) = extract_pairs(clause, ontology, lexicon)
    assert pair.feature.name == "New_York"
    words = {w.surface: w.orientation for w in pair.opinion_words}
    assert words == {"a_lot": Orientation.POSITIVE, "crowded": Orientation.NEGATIVE}


def test_extract_pairs_no_concept():
    tagger, ontology, lexicon = _test_fixture()
    assert extract_pairs(_clause(tagger, "it was wonderful"), ontology, lexicon) == []


def test_clause_with_two_concepts_shares_words():
    tagger, ontology, lexicon = _test_fixture()
    pairs = extract_pairs(_clause(tagger, "road accident is busy"), ontology, lexicon)
    assert [p.feature.name for p in pairs] == ["Road", "Accident"]
    assert pairs[0].opinion_words == pairs[1].opinion_words


def test_negation_flips_orientation():
    tagger, ontology, lexicon = _test_fixture()
    (single,) = extract_pairs(_clause(tagger, "park is not clean"), ontology, lexicon)
    assert single.opinion_words[0].negated
    assert single.opinion_words[0].orientation == Orientation.NEGATIVE

    (double,) = extract_pairs(_clause(tagger, "park is not not clean"), ontology, lexicon)
    assert not double.opinion_words[0].negated
    assert double.opinion_words[0].orientation == Orientation.POSITIVE


def test_detect_cues():
    tagger, _, lexicon = _test_fixture()

    def kinds(words):
        return [c.kind for c in detect_cues(tagger.tag(words.split()), lexicon.opinion)]

    assert kinds("fastest route ever") == [SubjectivityCueKind.SUPERLATIVE_ADVERB_POSITIVE]
    assert kinds("traffic jammed again") == [SubjectivityCueKind.PAST_TENSE_NEGATIVE]
    assert kinds("road is open") == []


def test_attach_phrases_longest_match():
    tagger, ontology, lexicon = _test_fixture()
    ontology_bridge = FuzzyOntology(
        concepts={**ontology.concepts, "Bridge": replace(ontology.concepts["Road"], name="Bridge")},
        index={**ontology.index, (stem("bridge"),): "Bridge"},
    )
    clause = _clause(tagger, "bridge is really well maintained")
    pairs = extract_pairs(clause, ontology_bridge, lexicon)
    grams = {n: ngrams(clause.tokens, n) for n in (2, 3)}

    merged = attach_phrases(pairs, grams, lexicon.phrases)
    (pair,) = merged
    assert [w.surface for w in pair.opinion_words] == ["really_well_maintained"]
    assert pair.opinion_words[0].orientation == Orientation.POSITIVE

    # Bigrams only, the shorter phrase is merged
    (pair,) = attach_phrases(pairs, {2: grams[2]}, lexicon.phrases)
    assert [w.surface for w in pair.opinion_words] == ["well_maintained"]

    assert attach_phrases(pairs, {2: []}, lexicon.phrases) == pairs
