from enum import Enum


class PolarityTerm(Enum):
    """Linguistic polarity terms over [0, 1]."""

    SN = "SN"
    NEG = "Neg"
    NEU = "Neu"
    P = "P"
    SP = "SP"

    # No rule fired, value is undefined
    UNDETERMINED = "undetermined"


POLARITY_TERMS = [
    PolarityTerm.SN,
    PolarityTerm.NEG,
    PolarityTerm.NEU,
    PolarityTerm.P,
    PolarityTerm.SP,
]

NEGATIVE_TERMS = [PolarityTerm.SN, PolarityTerm.NEG]


class SpeedTerm(Enum):
    VERY_SLOW = "VerySlow"
    SLOW = "Slow"
    NORMAL = "Normal"
    FAST = "Fast"


class DocumentSource(Enum):
    TWEET = "tweet"
    REVIEW = "review"
    NEWS = "news"


class PosTag(Enum):
    NOUN = "Noun"
    PROPER_NOUN = "ProperNoun"
    PRONOUN = "Pronoun"
    VERB = "Verb"
    VERB_PAST = "VerbPast"
    ADJECTIVE = "Adjective"
    ADJ_COMPARATIVE = "AdjComparative"
    ADJ_SUPERLATIVE = "AdjSuperlative"
    ADVERB = "Adverb"
    ADV_SUPERLATIVE = "AdvSuperlative"
    CONJUNCTION = "Conjunction"
    OTHER = "Other"


NOUN_TAGS = frozenset([PosTag.NOUN, PosTag.PROPER_NOUN])
SUBJECT_TAGS = frozenset([PosTag.NOUN, PosTag.PROPER_NOUN, PosTag.PRONOUN])
VERB_TAGS = frozenset([PosTag.VERB, PosTag.VERB_PAST])
ADJECTIVE_TAGS = frozenset(
    [PosTag.ADJECTIVE, PosTag.ADJ_COMPARATIVE, PosTag.ADJ_SUPERLATIVE]
)
ADVERB_TAGS = frozenset([PosTag.ADVERB, PosTag.ADV_SUPERLATIVE])
OPINION_TAGS = VERB_TAGS | ADJECTIVE_TAGS | ADVERB_TAGS


class WordClass(Enum):
    """SentiWordNet part-of-speech classes."""

    NOUN = "n"
    VERB = "v"
    ADJECTIVE = "a"
    ADVERB = "r"


class ConceptKind(Enum):
    CITY_FEATURE = "CityFeature"
    TRANSPORTATION_ACTIVITY = "TransportationActivity"
    SUB_FEATURE = "SubFeature"

    # Named cities, e.g. New_York
    CITY = "City"


class Orientation(Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    NEUTRAL = "Neutral"
    UNKNOWN = "Unknown"


class SubjectivityCueKind(Enum):
    SUPERLATIVE_ADVERB_POSITIVE = "SuperlativeAdverbPositive"
    PAST_TENSE_NEGATIVE = "PastTenseNegative"
    COMPARATIVE_ADJECTIVE = "ComparativeAdjective"
    PRONOUN_SUBJECTIVE = "PronounSubjective"


class FactPredicate(Enum):
    OPINION_OF = "OpinionOf"
    POLARITY_IS = "PolarityIs"
    SPEED = "Speed"
    TRAFFIC_IS_JAMMED_BY = "TrafficIsJammedBy"


# One object per subject
FUNCTIONAL_PREDICATES = frozenset(
    [FactPredicate.OPINION_OF, FactPredicate.POLARITY_IS, FactPredicate.SPEED]
)


class Subcommand(Enum):
    ANALYZE = "analyze"
    EVAL = "eval"
    REPLICATE = "replicate"

