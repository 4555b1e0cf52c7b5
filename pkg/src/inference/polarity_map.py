"""Polarity map of a city: feature polarities, their causes and the aggregated city polarity."""
from __future__ import annotations

from pathlib import Path
from typing import Optional

from pydantic import BaseModel, root_validator
from tabulate import tabulate

from src.enums.enums import PolarityTerm
from src.model.fuzzy_inference import PolarityResult, classify_interval
from src.utils.utils_functions import format_value


def _check_term(cls, values: dict) -> dict:
    value, term = values.get("value"), values.get("term")
    if term is not None and classify_interval(value).value != term:
        raise ValueError(f"term {term} doesn't match value {value}")
    return values


class Cause(BaseModel):
    name: str

    # Polarity term of a negative subfeature, or cause-of-jam
    reason: str


class FeatureEntry(BaseModel):
    name: str
    value: Optional[float]
    display_value: str
    term: str
    sentence_count: int
    causes: list[Cause] = []

    _term_matches_value = root_validator(allow_reuse=True, skip_on_failure=True)(_check_term)


class CityPolarity(BaseModel):
    value: Optional[float]
    display_value: str
    term: str

    _term_matches_value = root_validator(allow_reuse=True, skip_on_failure=True)(_check_term)


class PolarityMap(BaseModel):
    city: str
    features: list[FeatureEntry]
    city_polarity: CityPolarity
    generated_at: str
    derived_facts: list[str] = []
    incomplete_sentences: int = 0

    class Config:
        schema_extra = {
            "example": {
                "city": "Quezon",
                "features": [
                    {
                        "name": "Road",
                        "value": 0.1459,
                        "display_value": "0.14",
                        "term": "SN",
                        "sentence_count": 2,
                        "causes": [{"name": "Accident", "reason": "cause-of-jam"}],
                    }
                ],
                "city_polarity": {"value": 0.1459, "display_value": "0.14", "term": "SN"},
                "generated_at": "2020-01-01T00:00:00Z",
                "derived_facts": ["TrafficIsJammedBy(Road, Accident)"],
                "incomplete_sentences": 0,
            }
        }

    def feature(self, name: str) -> FeatureEntry:
        for entry in self.features:
            if entry.name == name:
                return entry
        raise KeyError(name)


def feature_entry(
    name: str,
    result: PolarityResult,
    causes: list[tuple[str, str]],
    decimals: int,
) -> FeatureEntry:
    return FeatureEntry(
        name=name,
        value=result.value,
        display_value=format_value(result.value, decimals),
        term=result.term.value,
        sentence_count=result.sentence_count,
        causes=[Cause(name=n, reason=r) for n, r in causes],
    )


def city_entry(result: PolarityResult, decimals: int) -> CityPolarity:
    return CityPolarity(
        value=result.value,
        display_value=format_value(result.value, decimals),
        term=result.term.value,
    )


def empty_map(city: str, generated_at: str, incomplete_sentences: int = 0) -> PolarityMap:
    return PolarityMap(
        city=city,
        features=[],
        city_polarity=CityPolarity(
            value=None, display_value="-", term=PolarityTerm.UNDETERMINED.value
        ),
        generated_at=generated_at,
        incomplete_sentences=incomplete_sentences,
    )


def write_polarity_map(polarity_map: PolarityMap, path: Path) -> Path:
    """Keys keep the declaration order, so equal maps give equal bytes."""
    path.write_text(polarity_map.json(indent=2) + "\n", encoding="utf-8")
    return path


def read_polarity_map(path: Path) -> PolarityMap:
    return PolarityMap.parse_file(path)


def map_file_name(city: str) -> str:
    """
    Example:
        city = "New York"
        returns "polarity_map_new-york.json"
    """
    slug = "-".join(city.lower().replace("_", " ").split()) or "all"
    return f"polarity_map_{slug}.json"


def format_polarity_map(polarity_map: PolarityMap) -> str:
    headers = ["Feature", "Polarity", "Term", "Sentences", "Causes"]
    table = [
        [
            f.name,
            f.display_value,
            f.term,
            f.sentence_count,
            ", ".join(f"{c.name} ({c.reason})" for c in f.causes),
        ]
        for f in polarity_map.features
    ]
    city = polarity_map.city_polarity
    table.append([polarity_map.city, city.display_value, city.term, "", ""])
    return tabulate(table, headers=headers)


def test_polarity_map_round_trip(tmp_path):
    polarity_map = PolarityMap.parse_obj(PolarityMap.Config.schema_extra["example"])
    path = write_polarity_map(polarity_map, Path(tmp_path, "map.json"))
    assert read_polarity_map(path) == polarity_map
    assert path.read_text(encoding="utf-8").startswith('{\n  "city": "Quezon"')


def test_feature_term_has_to_match_value():
    try:
        FeatureEntry(name="Road", value=0.9, display_value="0.90", term="SN", sentence_count=1)
    except ValueError:
        pass
    else:
        raise AssertionError("ValidationError not raised")
    entry = FeatureEntry(
        name="Road", value=None, display_value="-", term="undetermined", sentence_count=0
    )
    assert entry.causes == []
