"""Fuzzy ontology: concepts C, properties P, relations R, values V and range constraints Vc.

File format, one directive per line, `#` comments:

    concept <Name> [parent <Name>] kind <CityFeature|TransportationActivity|SubFeature|City>
    synonym <Name> <word...>
    datatype <Name> term <T> <lo> <hi>
    property <name> range <Datatype>
    instance <name> of <Concept>
    relation <subject> <property> <term> degree <d>

Names may be referenced before they are declared. Concept names (split on `_`) and synonyms are
stemmed on load, so lookups take stems.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Mapping, Sequence

from src.config.logger import log
from src.enums.enums import ConceptKind, PolarityTerm
from src.features.stemmer import stem
from src.utils.utils_exceptions import (
    CycleDetected,
    DegreeOutOfRange,
    MissingPolarityTerm,
    OntologyParseError,
    UnknownConcept,
    UnknownParent,
    UnknownReference,
    UnknownTerm,
    ValueOutOfRange,
)
from src.utils.utils_functions import read_data_lines


@dataclass(frozen=True)
class Concept:
    name: str
    parent: str | None
    synonyms: tuple[tuple[str, ...], ...]
    kind: ConceptKind

    @property
    def name_stems(self) -> tuple[str, ...]:
        return tuple(stem(part) for part in self.name.split("_") if part)


@dataclass(frozen=True)
class FuzzyRelation:
    subject: str
    predicate: str
    object: str
    degree: float

    def __post_init__(self):
        if not 0.0 <= self.degree <= 1.0:
            raise DegreeOutOfRange(f"degree {self.degree} is outside [0, 1]")


@dataclass(frozen=True)
class FuzzyDatatype:
    name: str
    term_intervals: Mapping[str, tuple[float, float]]


@dataclass(frozen=True)
class PropertyDefinition:
    name: str
    range: str


@dataclass(frozen=True)
class FuzzyOntology:
    concepts: Mapping[str, Concept] = field(default_factory=dict)
    properties: Mapping[str, PropertyDefinition] = field(default_factory=dict)
    relations: tuple[FuzzyRelation, ...] = ()
    datatypes: Mapping[str, FuzzyDatatype] = field(default_factory=dict)
    instances: Mapping[str, str] = field(default_factory=dict)

    # stem window -> concept name, filled on load
    index: Mapping[tuple[str, ...], str] = field(default_factory=dict)

    @property
    def values(self) -> frozenset[str]:
        """Literal values used by relations (V)."""
        return frozenset(r.object for r in self.relations)

    @property
    def constraints(self) -> dict[str, str]:
        """Property -> range datatype (Vc)."""
        return {p.name: p.range for p in self.properties.values()}

    def concept(self, name: str) -> Concept:
        try:
            return self.concepts[name]
        except KeyError:
            raise UnknownConcept(f"Unknown concept {name!r}")

    def parent(self, c: Concept) -> Concept | None:
        return self.concepts[c.parent] if c.parent is not None else None

    @cached_property
    def max_window(self) -> int:
        return max((len(k) for k in self.index), default=0)


POLARITY_DATATYPE = "Polarity"

_DIRECTIVE_ARITY = {
    "concept": 3,
    "synonym": 3,
    "datatype": 6,
    "property": 4,
    "instance": 4,
    "relation": 6,
}


def _parse_float(value: str, line_number: int) -> float:
    try:
        return float(value)
    except ValueError:
        raise OntologyParseError(f"{value!r} is not a number", line_number)


def _parse_concept(parts: list[str], line_number: int) -> tuple[str, str | None, ConceptKind]:
    name = parts[1]
    rest = parts[2:]
    parent = None
    if rest[:1] == ["parent"]:
        if len(rest) < 2:
            raise OntologyParseError("`parent` needs a concept name", line_number)
        parent = rest[1]
        rest = rest[2:]
    if len(rest) != 2 or rest[0] != "kind":
        raise OntologyParseError(
            "expected `concept <Name> [parent <Name>] kind <kind>`", line_number
        )
    try:
        kind = ConceptKind(rest[1])
    except ValueError:
        raise OntologyParseError(
            f"unknown kind {rest[1]!r}, expected one of {[k.value for k in ConceptKind]}",
            line_number,
        )
    return name, parent, kind


def load_ontology(path: Path) -> FuzzyOntology:
    """Loads and validates an ontology file. An empty file is a valid, empty ontology."""
    declared: dict[str, tuple[str | None, ConceptKind, int]] = {}
    synonyms: dict[str, list[tuple[tuple[str, ...], int]]] = {}
    datatypes: dict[str, dict[str, tuple[float, float]]] = {}
    datatype_lines: dict[str, int] = {}
    properties: dict[str, tuple[str, int]] = {}
    instances: dict[str, tuple[str, int]] = {}
    relations: list[tuple[FuzzyRelation, int]] = []

    for line_number, line in read_data_lines(path):
        parts = line.split()
        directive = parts[0]
        if directive not in _DIRECTIVE_ARITY:
            raise OntologyParseError(f"unknown directive {directive!r}", line_number)
        if len(parts) < _DIRECTIVE_ARITY[directive]:
            raise OntologyParseError(f"too few fields for {directive!r}", line_number)

        if directive == "concept":
            name, parent, kind = _parse_concept(parts, line_number)
            if name in declared:
                raise OntologyParseError(f"concept {name!r} declared twice", line_number)
            declared[name] = (parent, kind, line_number)

        elif directive == "synonym":
            words = tuple(stem(w) for w in parts[2:])
            synonyms.setdefault(parts[1], []).append((words, line_number))

        elif directive == "datatype":
            if len(parts) != 6 or parts[2] != "term":
                raise OntologyParseError(
                    "expected `datatype <Name> term <T> <lo> <hi>`", line_number
                )
            lo, hi = _parse_float(parts[4], line_number), _parse_float(parts[5], line_number)
            if not 0.0 <= lo <= hi <= 1.0:
                raise DegreeOutOfRange(
                    f"interval [{lo}, {hi}] has to lie within [0, 1]", line_number
                )
            datatypes.setdefault(parts[1], {})[parts[3]] = (lo, hi)
            datatype_lines.setdefault(parts[1], line_number)

        elif directive == "property":
            if len(parts) != 4 or parts[2] != "range":
                raise OntologyParseError(
                    "expected `property <name> range <Datatype>`", line_number
                )
            properties[parts[1]] = (parts[3], line_number)

        elif directive == "instance":
            if len(parts) != 4 or parts[2] != "of":
                raise OntologyParseError(
                    "expected `instance <name> of <Concept>`", line_number
                )
            instances[parts[1]] = (parts[3], line_number)

        elif directive == "relation":
            if len(parts) != 6 or parts[4] != "degree":
                raise OntologyParseError(
                    "expected `relation <subj> <pred> <term> degree <d>`", line_number
                )
            degree = _parse_float(parts[5], line_number)
            if not 0.0 <= degree <= 1.0:
                raise DegreeOutOfRange(f"degree {degree} is outside [0, 1]", line_number)
            relations.append((FuzzyRelation(parts[1], parts[2], parts[3], degree), line_number))

    # Forward references are resolved once the whole file is read
    for name, (parent, _, line_number) in declared.items():
        if parent is not None and parent not in declared:
            raise UnknownParent(f"{name!r} has undeclared parent {parent!r}", line_number)
    _check_acyclic({name: parent for name, (parent, _, _) in declared.items()})

    for name, entries in synonyms.items():
        if name not in declared:
            raise UnknownReference(f"synonym of undeclared concept {name!r}", entries[0][1])
    for name, (concept_name, line_number) in instances.items():
        if concept_name not in declared:
            raise UnknownReference(
                f"instance {name!r} of undeclared concept {concept_name!r}", line_number
            )
    if POLARITY_DATATYPE in datatypes:
        missing = [
            t.value
            for t in PolarityTerm
            if t != PolarityTerm.UNDETERMINED and t.value not in datatypes[POLARITY_DATATYPE]
        ]
        if missing:
            raise MissingPolarityTerm(
                f"datatype {POLARITY_DATATYPE!r} lacks terms {missing}",
                datatype_lines[POLARITY_DATATYPE],
            )
    for name, (range_name, line_number) in properties.items():
        if range_name not in datatypes:
            raise UnknownReference(
                f"property {name!r} has undeclared range {range_name!r}", line_number
            )
    for relation, line_number in relations:
        if relation.subject not in instances and relation.subject not in declared:
            raise UnknownReference(
                f"relation subject {relation.subject!r} is not declared", line_number
            )
        if relation.predicate not in properties:
            raise UnknownReference(
                f"relation property {relation.predicate!r} is not declared", line_number
            )
        range_name = properties[relation.predicate][0]
        if relation.object not in datatypes[range_name]:
            raise UnknownReference(
                f"{relation.object!r} is not a term of datatype {range_name!r}", line_number
            )

    concepts = {
        name: Concept(
            name=name,
            parent=parent,
            synonyms=tuple(words for words, _ in synonyms.get(name, [])),
            kind=kind,
        )
        for name, (parent, kind, _) in declared.items()
    }

    index: dict[tuple[str, ...], str] = {}
    for concept in concepts.values():
        for key in [concept.name_stems, *concept.synonyms]:
            owner = index.get(key)
            if owner is not None and owner != concept.name:
                raise OntologyParseError(
                    f"{' '.join(key)!r} names both {owner!r} and {concept.name!r}",
                    declared[concept.name][2],
                )
            index[key] = concept.name

    ontology = FuzzyOntology(
        concepts=concepts,
        properties={n: PropertyDefinition(n, r) for n, (r, _) in properties.items()},
        relations=tuple(r for r, _ in relations),
        datatypes={n: FuzzyDatatype(n, intervals) for n, intervals in datatypes.items()},
        instances={n: c for n, (c, _) in instances.items()},
        index=index,
    )
    log.info(
        f"Loaded ontology {path}: {len(concepts)} concepts, {len(relations)} relations"
    )
    return ontology


def _check_acyclic(parents: Mapping[str, str | None]):
    done: set[str] = set()
    for start in parents:
        path: list[str] = []
        on_path: set[str] = set()
        node: str | None = start
        while node is not None and node not in done:
            if node in on_path:
                cycle = path[path.index(node) :] + [node]
                raise CycleDetected(cycle)
            path.append(node)
            on_path.add(node)
            node = parents.get(node)
        done.update(path)


def _longest_at(stems: Sequence[str], start: int, o: FuzzyOntology) -> tuple[int, str] | None:
    for length in range(min(o.max_window, len(stems) - start), 0, -1):
        name = o.index.get(tuple(stems[start : start + length]))
        if name is not None:
            return length, name
    return None


def find_concept(noun_phrase: Sequence[str], o: FuzzyOntology) -> Concept | None:
    """Leftmost, then longest, stem window matching a concept name or synonym.

    Example:
        noun_phrase = ["bu", "station"]  (stems of "bus station")
        returns Bus_station rather than the one-token match for "bus"
    """
    for start in range(len(noun_phrase)):
        match = _longest_at(noun_phrase, start, o)
        if match is not None:
            return o.concepts[match[1]]
    return None


def find_concepts(noun_phrase: Sequence[str], o: FuzzyOntology) -> list[tuple[int, int, Concept]]:
    """All non-overlapping leftmost-longest matches as (start, end, concept)."""
    matches = []
    start = 0
    while start < len(noun_phrase):
        match = _longest_at(noun_phrase, start, o)
        if match is None:
            start += 1
            continue
        length, name = match
        matches.append((start, start + length, o.concepts[name]))
        start += length
    return matches


def subfeatures(c: Concept | str, o: FuzzyOntology) -> list[Concept]:
    """Direct children in declaration order."""
    name = c if isinstance(c, str) else c.name
    o.concept(name)
    return [child for child in o.concepts.values() if child.parent == name]


def membership(dt: FuzzyDatatype, term: str, x: float) -> float:
    """Crisp interval membership: 1.0 if x is inside the term's interval, else 0.0."""
    if term not in dt.term_intervals:
        raise UnknownTerm(f"{term!r} is not a term of datatype {dt.name!r}")
    if not 0.0 <= x <= 1.0:
        raise ValueOutOfRange(f"x has to be in [0, 1], got {x}")
    lo, hi = dt.term_intervals[term]
    return 1.0 if lo <= x <= hi else 0.0


def _write(tmp_path, text: str) -> Path:
    path = Path(tmp_path, "ontology.txt")
    path.write_text(text, encoding="utf-8")
    return path


def test_load_ontology_traffic_children(tmp_path):
    path = _write(
        tmp_path,
        "concept Traffic kind TransportationActivity\n"
        "concept Jammed parent Traffic kind SubFeature\n"
        "concept Slow parent Traffic kind SubFeature\n"
        "concept Traffic_collision parent Traffic kind SubFeature\n"
        "concept Heavy parent Traffic kind SubFeature\n",
    )
    o = load_ontology(path)
    assert len(o.concepts) == 5
    children = subfeatures(o.concept("Traffic"), o)
    assert [c.name for c in children] == ["Jammed", "Slow", "Traffic_collision", "Heavy"]
    assert all(o.parent(c).name == "Traffic" for c in children)
    assert subfeatures("Heavy", o) == []


def test_load_ontology_empty_and_errors(tmp_path):
    assert load_ontology(_write(tmp_path, "# nothing\n")).concepts == {}

    cases = [
        ("concept A kind SubFeature\nproperty rate range R\n"
         "datatype R term high 0.5 1\nrelation A rate high degree 1.3\n", DegreeOutOfRange),
        ("concept A parent B kind SubFeature\n", UnknownParent),
        ("concept A parent B kind SubFeature\nconcept B parent A kind SubFeature\n", CycleDetected),
        ("concept A kind Nope\n", OntologyParseError),
        ("datatype Polarity term SN 0 0.25\ndatatype Polarity term Neg 0.25 0.5\n"
         "datatype Polarity term Neu 0.5 0.5\ndatatype Polarity term P 0.5 0.75\n",
         MissingPolarityTerm),
    ]
    for text, error in cases:
        try:
            load_ontology(_write(tmp_path, text))
        except error:
            pass
        else:
            raise AssertionError(f"{error.__name__} not raised for {text!r}")


def test_find_concept_longest_match(tmp_path):
    path = _write(
        tmp_path,
        "concept Parks kind CityFeature\n"
        "concept Bus_station kind CityFeature\n"
        "concept Vehicle kind TransportationActivity\n"
        "synonym Vehicle bus\n",
    )
    o = load_ontology(path)
    assert find_concept([stem("park")], o).name == "Parks"
    assert find_concept([stem("bus"), stem("station")], o).name == "Bus_station"
    assert find_concept([stem("bus")], o).name == "Vehicle"
    assert find_concept([stem("zebra")], o) is None


def test_membership_crisp_intervals(tmp_path):
    path = _write(
        tmp_path,
        "datatype Polarity term SN 0 0.25\n"
        "datatype Polarity term Neg 0.25 0.5\n"
        "datatype Polarity term Neu 0.5 0.5\n"
        "datatype Polarity term P 0.5 0.75\n"
        "datatype Polarity term SP 0.75 1\n",
    )
    polarity = load_ontology(path).datatypes["Polarity"]
    assert membership(polarity, "SP", 0.9) == 1.0
    assert membership(polarity, "SN", 0.9) == 0.0
    assert membership(polarity, "Neu", 0.5) == 1.0


def test_polarity_datatype_without_sp(tmp_path):
    path = _write(
        tmp_path,
        "datatype Speed term Fast 0.75 1\n"
        "datatype Polarity term SN 0 0.25\n"
        "datatype Polarity term Neg 0.25 0.5\n"
        "datatype Polarity term Neu 0.5 0.5\n"
        "datatype Polarity term P 0.5 0.75\n",
    )
    try:
        load_ontology(path)
    except MissingPolarityTerm as e:
        assert e.line == 2
        assert "SP" in str(e)
    else:
        raise AssertionError("MissingPolarityTerm not raised")
