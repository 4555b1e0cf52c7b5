from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Mapping, Sequence

from src.config.logger import log
from src.data.query import QueryAst, match_query, parse_query
from src.enums.enums import POLARITY_TERMS, DocumentSource, PolarityTerm
from src.utils.utils_exceptions import (
    CorpusParseError,
    DuplicateDocumentId,
    QuerySyntaxError,
)
from src.utils.utils_functions import read_data_lines

REQUIRED_KEYS = ("id", "text", "source", "city")
GOLD_TERMS = {t.value: t for t in POLARITY_TERMS}


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    source: DocumentSource
    city: str
    gold_labels: Mapping[str, PolarityTerm] | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("Document id can't be empty.")
        if not self.text:
            raise ValueError(f"Document {self.id} has empty text.")


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...] = ()

    def __len__(self):
        return len(self.documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)

    def gold_labelled(self) -> list[Document]:
        return [d for d in self.documents if d.gold_labels is not None]


def _document_from_json(obj: dict, line_number: int) -> Document:
    if not isinstance(obj, dict):
        raise CorpusParseError("expected a JSON object", line_number)
    for key in REQUIRED_KEYS:
        if key not in obj:
            raise CorpusParseError(f"missing required key {key!r}", line_number)
        if not isinstance(obj[key], str) or not obj[key].strip():
            raise CorpusParseError(f"{key!r} has to be a non-empty string", line_number)

    try:
        source = DocumentSource(obj["source"])
    except ValueError:
        raise CorpusParseError(
            f"source has to be one of {[s.value for s in DocumentSource]}, got {obj['source']!r}",
            line_number,
        )

    gold_labels = None
    if obj.get("gold_labels") is not None:
        raw_labels = obj["gold_labels"]
        if not isinstance(raw_labels, dict):
            raise CorpusParseError("gold_labels has to be an object", line_number)
        unknown = [v for v in raw_labels.values() if v not in GOLD_TERMS]
        if unknown:
            raise CorpusParseError(
                f"gold label has to be one of {list(GOLD_TERMS)}, got {unknown[0]!r}",
                line_number,
            )
        gold_labels = {feature: GOLD_TERMS[v] for feature, v in raw_labels.items()}

    return Document(
        id=obj["id"],
        text=obj["text"],
        source=source,
        city=obj["city"],
        gold_labels=gold_labels,
    )


def load_corpus(path: Path) -> Corpus:
    """Loads a JSON-lines corpus. Documents keep file order."""
    documents: list[Document] = []
    seen: dict[str, int] = {}
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise CorpusParseError(f"invalid JSON ({e.msg})", line_number)
            document = _document_from_json(obj, line_number)
            if document.id in seen:
                raise DuplicateDocumentId(
                    f"document id {document.id!r} already used on line {seen[document.id]}",
                    line_number,
                )
            seen[document.id] = line_number
            documents.append(document)
    log.info(f"Loaded {len(documents)} documents from {path}")
    return Corpus(tuple(documents))


def load_queries(path: Path) -> list[QueryAst]:
    queries = []
    for line_number, line in read_data_lines(path):
        try:
            queries.append(parse_query(line))
        except QuerySyntaxError as e:
            raise QuerySyntaxError(str(e), e.position, line=line_number)
    return queries


def retrieve(
    corpus: Corpus | Sequence[Document],
    queries: Sequence[QueryAst],
    city: str | None = None,
) -> list[Document]:
    """Documents which match at least one query, in corpus order.

    An empty query list retrieves nothing.
    """
    city_key = city.lower() if city is not None else None
    retrieved = []
    for document in corpus:
        if city_key is not None and document.city.lower() != city_key:
            continue
        if any(match_query(q, document) for q in queries):
            retrieved.append(document)
    return retrieved


def _write_lines(path: Path, lines: list[str]):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def test_load_corpus_keeps_order(tmp_path):
    path = Path(tmp_path, "corpus.jsonl")
    _write_lines(
        path,
        [
            '{"id": "d2", "text": "Road is closed", "source": "tweet", "city": "Quezon"}',
            '{"id": "d1", "text": "Park is clean", "source": "review", "city": "Quezon", "gold_labels": {"Parks": "P"}}',
        ],
    )
    corpus = load_corpus(path)
    assert [d.id for d in corpus] == ["d2", "d1"]
    assert corpus.documents[1].gold_labels == {"Parks": PolarityTerm.P}
    assert corpus.gold_labelled() == [corpus.documents[1]]


def test_load_corpus_empty_file(tmp_path):
    path = Path(tmp_path, "corpus.jsonl")
    path.write_text("", encoding="utf-8")
    assert len(load_corpus(path)) == 0


def test_load_corpus_reports_line(tmp_path):
    path = Path(tmp_path, "corpus.jsonl")
    _write_lines(
        path,
        [
            '{"id": "d1", "text": "a", "source": "tweet", "city": "Q"}',
            '{"id": "d2", "text": "b", "source": "tweet", "city": "Q"}',
            '{"id": "d3", "source": "tweet", "city": "Q"}',
        ],
    )
    try:
        load_corpus(path)
    except CorpusParseError as e:
        assert e.line == 3
        assert "text" in str(e)
    else:
        raise AssertionError("CorpusParseError not raised")


def test_load_corpus_rejects_duplicate_ids(tmp_path):
    path = Path(tmp_path, "corpus.jsonl")
    _write_lines(
        path,
        [
            '{"id": "d1", "text": "a", "source": "tweet", "city": "Q"}',
            '{"id": "d1", "text": "b", "source": "news", "city": "Q"}',
        ],
    )
    try:
        load_corpus(path)
    except DuplicateDocumentId as e:
        assert e.line == 2
    else:
        raise AssertionError("DuplicateDocumentId not raised")


def test_retrieve_subset_and_city_filter():
    docs = [
        Document("1", "Car accident on highway", DocumentSource.TWEET, "Quezon"),
        Document("2", "Sunny day in the park", DocumentSource.TWEET, "Quezon"),
        Document("3", "Bus accident downtown", DocumentSource.NEWS, "Manila"),
    ]
    queries = [parse_query("accident AND (car OR bus)")]
    assert [d.id for d in retrieve(docs, queries)] == ["1", "3"]
    assert [d.id for d in retrieve(docs, queries, city="quezon")] == ["1"]
    assert retrieve(docs, []) == []
