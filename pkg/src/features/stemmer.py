"""Suffix-stripping stemmer.

Porter rules (nltk) plus removal of the comparative/superlative endings of gradable adjectives,
which Porter keeps ("cleaner" stays "cleaner"). The result is iterated to a fixed point so
stem(stem(w)) == stem(w).
"""
from functools import lru_cache

from nltk.stem.porter import PorterStemmer

# Adjectives whose -er/-est forms are reduced to the base form
GRADABLE_ADJECTIVES = frozenset(
    [
        "bad",
        "big",
        "busy",
        "calm",
        "cheap",
        "clean",
        "close",
        "dirty",
        "easy",
        "fast",
        "great",
        "heavy",
        "high",
        "late",
        "long",
        "loud",
        "low",
        "near",
        "new",
        "nice",
        "noisy",
        "old",
        "quick",
        "quiet",
        "safe",
        "short",
        "slow",
        "small",
        "smooth",
        "strong",
        "wide",
    ]
)

_MAX_PASSES = 10
_porter = PorterStemmer()


def _degree_base(word: str) -> str:
    """
    Example:
        word = "bigger"
        returns "big"

    Example:
        word = "busiest"
        returns "busy"
    """
    for suffix in ("est", "er"):
        if not word.endswith(suffix) or len(word) <= len(suffix) + 1:
            continue
        base = word[: -len(suffix)]
        candidates = [base, base + "e"]
        if base.endswith("i"):
            candidates.append(base[:-1] + "y")
        if len(base) > 2 and base[-1] == base[-2]:
            candidates.append(base[:-1])
        for candidate in candidates:
            if candidate in GRADABLE_ADJECTIVES:
                return candidate
    return word


@lru_cache(maxsize=65536)
def stem(word: str) -> str:
    """Lowercase root of a word.

    Example:
        "cleaned", "cleaner" and "clean" all return "clean"
    """
    current = word.lower()
    for _ in range(_MAX_PASSES):
        following = _porter.stem(_degree_base(current))
        if following == current or not following:
            break
        current = following
    return current


def test_stem_examples():
    assert stem("cleaned") == "clean"
    assert stem("cleaner") == "clean"
    assert stem("cleanest") == "clean"
    assert stem("clean") == "clean"


def test_stem_degrees():
    assert stem("bigger") == stem("big")
    assert stem("busier") == stem("busy")
    assert stem("safer") == stem("safe")
    assert stem("quickest") == stem("quick")
    # Not gradable, Porter decides
    assert stem("driver") == _porter.stem("driver")


def test_stem_is_lowercase_and_idempotent():
    for word in ["Roads", "ACCIDENTS", "killed", "jammed", "agreed", "slowly", "a_lot"]:
        s = stem(word)
        assert s == s.lower()
        assert stem(s) == s
