"""Triangular membership functions and the membership function bank."""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from src.enums.enums import POLARITY_TERMS, PolarityTerm
from src.utils.utils_exceptions import (
    InvalidMembershipFunction,
    RuleParseError,
    ValueOutOfRange,
)
from src.utils.utils_functions import read_data_lines

SHOULDER_LEFT = "shoulder-left"
SHOULDER_RIGHT = "shoulder-right"


@dataclass(frozen=True)
class TriangularMF:
    a: float
    b: float
    c: float
    shoulder_left: bool = False
    shoulder_right: bool = False

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.a, self.b, self.c)):
            raise InvalidMembershipFunction(f"non finite parameters {self}")
        if not self.a <= self.b <= self.c:
            raise InvalidMembershipFunction(f"expected a <= b <= c, got {self}")
        if self.a == self.b == self.c:
            raise InvalidMembershipFunction(f"degenerate triangle at {self.a}")


def triangular_mu(x: float, mf: TriangularMF) -> float:
    """Piecewise linear membership.

    0 at and outside the feet, 1 at the peak. A left (right) shoulder keeps the value 1 for every x
    left (right) of the peak.
    """
    if not math.isfinite(x):
        raise ValueOutOfRange(f"x has to be finite, got {x}")
    if x == mf.b:
        return 1.0
    if x < mf.b:
        if mf.shoulder_left:
            return 1.0
        xp, fp = [mf.a, mf.b], [0.0, 1.0]
    else:
        if mf.shoulder_right:
            return 1.0
        xp, fp = [mf.b, mf.c], [1.0, 0.0]
    # np.interp holds the end values outside of xp, which covers x <= a and x >= c
    return float(np.clip(np.interp(x, xp, fp, left=0.0, right=0.0), 0.0, 1.0))


MFBank = Mapping[PolarityTerm, TriangularMF]

DEFAULT_MF_BANK: MFBank = {
    PolarityTerm.SN: TriangularMF(0.0, 0.125, 0.375, shoulder_left=True),
    PolarityTerm.NEG: TriangularMF(0.125, 0.375, 0.5),
    PolarityTerm.NEU: TriangularMF(0.375, 0.5, 0.625),
    PolarityTerm.P: TriangularMF(0.5, 0.625, 0.875),
    PolarityTerm.SP: TriangularMF(0.625, 0.875, 1.0, shoulder_right=True),
}


def fuzzify(scalar: float, terms: MFBank = DEFAULT_MF_BANK) -> dict[PolarityTerm, float]:
    """
    Example:
        scalar = 0.25
        returns {SN: 0.5, Neg: 0.5, Neu: 0.0, P: 0.0, SP: 0.0}
    """
    if not 0.0 <= scalar <= 1.0:
        raise ValueOutOfRange(f"scalar has to be in [0, 1], got {scalar}")
    return {term: triangular_mu(scalar, mf) for term, mf in terms.items()}


def parse_term(raw: str) -> PolarityTerm:
    """Case insensitive term name, `N` is accepted for Neg."""
    lowered = raw.strip().lower()
    if lowered == "n":
        return PolarityTerm.NEG
    for term in POLARITY_TERMS:
        if term.value.lower() == lowered:
            return term
    raise ValueError(f"unknown polarity term {raw!r}")


def load_mf_bank(path: Path) -> dict[PolarityTerm, TriangularMF]:
    """Reads `term <name> <a> <b> <c> [shoulder-left|shoulder-right]` lines."""
    bank: dict[PolarityTerm, TriangularMF] = {}
    for line_number, line in read_data_lines(path):
        parts = line.split()
        if parts[0] != "term" or len(parts) not in (5, 6):
            raise RuleParseError(
                "expected `term <name> <a> <b> <c> [shoulder-left|shoulder-right]`",
                line_number,
            )
        try:
            term = parse_term(parts[1])
            a, b, c = (float(v) for v in parts[2:5])
        except ValueError as e:
            raise RuleParseError(str(e), line_number)
        shoulder = parts[5] if len(parts) == 6 else None
        if shoulder not in (None, SHOULDER_LEFT, SHOULDER_RIGHT):
            raise RuleParseError(f"unknown shoulder {shoulder!r}", line_number)
        if term in bank:
            raise RuleParseError(f"term {term.value} defined twice", line_number)
        try:
            bank[term] = TriangularMF(
                a,
                b,
                c,
                shoulder_left=shoulder == SHOULDER_LEFT,
                shoulder_right=shoulder == SHOULDER_RIGHT,
            )
        except InvalidMembershipFunction as e:
            raise InvalidMembershipFunction(f"line {line_number}: {e}")
    if not bank:
        raise RuleParseError(f"no terms in membership function bank {path}")
    return bank


def test_triangular_mu_points():
    mf = TriangularMF(0.0, 0.5, 1.0)
    assert triangular_mu(0.5, mf) == 1.0
    assert triangular_mu(0.0, mf) == 0.0
    assert triangular_mu(1.0, mf) == 0.0
    assert triangular_mu(0.25, mf) == 0.5
    assert triangular_mu(-3.0, mf) == 0.0


def test_shoulders():
    assert triangular_mu(0.0, DEFAULT_MF_BANK[PolarityTerm.SN]) == 1.0
    assert triangular_mu(1.0, DEFAULT_MF_BANK[PolarityTerm.SP]) == 1.0
    assert triangular_mu(0.0, DEFAULT_MF_BANK[PolarityTerm.SP]) == 0.0


def test_degenerate_mf():
    for args in [(0.3, 0.3, 0.3), (0.5, 0.2, 0.9)]:
        try:
            TriangularMF(*args)
        except InvalidMembershipFunction:
            pass
        else:
            raise AssertionError(f"InvalidMembershipFunction not raised for {args}")


def test_fuzzify_default_bank():
    assert fuzzify(0.375)[PolarityTerm.NEG] == 1.0
    assert fuzzify(0.0) == {
        PolarityTerm.SN: 1.0,
        PolarityTerm.NEG: 0.0,
        PolarityTerm.NEU: 0.0,
        PolarityTerm.P: 0.0,
        PolarityTerm.SP: 0.0,
    }
    assert fuzzify(1.0)[PolarityTerm.SP] == 1.0
    degrees = fuzzify(0.25)
    assert degrees[PolarityTerm.SN] == 0.5
    assert degrees[PolarityTerm.NEG] == 0.5


def test_load_mf_bank(tmp_path):
    path = Path(tmp_path, "mf.txt")
    path.write_text(
        "# polarity terms\n"
        "term SN 0 0.125 0.375 shoulder-left\n"
        "term Neg 0.125 0.375 0.5\n",
        encoding="utf-8",
    )
    bank = load_mf_bank(path)
    assert bank[PolarityTerm.SN] == DEFAULT_MF_BANK[PolarityTerm.SN]
    assert bank[PolarityTerm.NEG] == DEFAULT_MF_BANK[PolarityTerm.NEG]
