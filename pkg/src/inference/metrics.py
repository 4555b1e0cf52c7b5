"""Per feature precision, recall, accuracy and F-measure against gold polarity labels."""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import pandas as pd
from tabulate import tabulate

from src.config.logger import log
from src.data.corpus import Document
from src.enums.enums import DocumentSource, PolarityTerm
from src.utils.utils_exceptions import MissingGoldLabels, UndefinedMetric
from src.utils.utils_functions import format_value

AVERAGE_ROW = "Average"
COLUMNS = ["feature", "P", "R", "Ac", "FM"]


@dataclass(frozen=True)
class Confusion:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ValueError(f"Confusion counts have to be non-negative: {self}")

    def __add__(self, other: Confusion) -> Confusion:
        return Confusion(
            self.tp + other.tp,
            self.fp + other.fp,
            self.fn + other.fn,
            self.tn + other.tn,
        )

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


def precision(c: Confusion) -> float:
    """Percentage, 100 * TP / (TP + FP)."""
    if c.tp + c.fp == 0:
        raise UndefinedMetric("precision is undefined when TP + FP = 0")
    return 100.0 * c.tp / (c.tp + c.fp)


def recall(c: Confusion) -> float:
    """Percentage, 100 * TP / (TP + FN)."""
    if c.tp + c.fn == 0:
        raise UndefinedMetric("recall is undefined when TP + FN = 0")
    return 100.0 * c.tp / (c.tp + c.fn)


def accuracy(c: Confusion) -> float:
    """Ratio, (TP + TN) / (TP + FP + FN + TN)."""
    if c.total == 0:
        raise UndefinedMetric("accuracy is undefined for an empty confusion")
    return (c.tp + c.tn) / c.total


def fmeasure(p: float, r: float) -> float:
    """
    Example:
        p = 98.08, r = 77.52
        returns 86.59...
    """
    if p + r == 0:
        raise UndefinedMetric("F-measure is undefined when P + R = 0")
    if p == r:
        return p
    return 2 * p * r / (p + r)


def _defined(metric, *args) -> float | None:
    try:
        return metric(*args)
    except UndefinedMetric:
        return None


@dataclass(frozen=True)
class FeatureMetrics:
    feature: str
    confusion: Confusion
    precision: float | None
    recall: float | None
    accuracy: float | None
    fmeasure: float | None

    @classmethod
    def from_confusion(cls, feature: str, c: Confusion) -> FeatureMetrics:
        p, r = _defined(precision, c), _defined(recall, c)
        fm = _defined(fmeasure, p, r) if p is not None and r is not None else None
        return cls(feature, c, p, r, _defined(accuracy, c), fm)


@dataclass(frozen=True)
class MetricsTable:
    rows: tuple[FeatureMetrics, ...]

    def average(self) -> dict[str, float | None]:
        """Unweighted mean over features, undefined values are skipped."""
        averages = {}
        for column in ["precision", "recall", "accuracy", "fmeasure"]:
            values = [getattr(r, column) for r in self.rows if getattr(r, column) is not None]
            averages[column] = math.fsum(values) / len(values) if values else None
        return averages


def judge(gold: PolarityTerm | None, predicted: PolarityTerm | None) -> Confusion:
    """Confusion contribution of one (document, feature).

    Same term is TP, a different term is FP + FN, an unlabelled prediction is FP, a missed label is
    FN and neither is TN.
    """
    if predicted == PolarityTerm.UNDETERMINED:
        predicted = None
    if gold is not None and predicted is not None:
        return Confusion(tp=1) if gold == predicted else Confusion(fp=1, fn=1)
    if gold is not None:
        return Confusion(fn=1)
    if predicted is not None:
        return Confusion(fp=1)
    return Confusion(tn=1)


def evaluate(
    documents: Sequence[Document],
    predictions: Mapping[str, Mapping[str, PolarityTerm]],
    features: Sequence[str] | None = None,
) -> MetricsTable:
    """Per feature confusion over the gold labelled documents.

    Features default to every feature that is labelled or predicted, in sorted order.
    """
    labelled = [d for d in documents if d.gold_labels is not None]
    if not labelled:
        raise MissingGoldLabels("no document carries gold labels")
    if features is None:
        names = set()
        for d in labelled:
            names |= set(d.gold_labels)
            names |= {
                f
                for f, t in predictions.get(d.id, {}).items()
                if t != PolarityTerm.UNDETERMINED
            }
        features = sorted(names)

    rows = []
    for feature in features:
        confusion = Confusion()
        for d in labelled:
            confusion += judge(d.gold_labels.get(feature), predictions.get(d.id, {}).get(feature))
        rows.append(FeatureMetrics.from_confusion(feature, confusion))
    log.info(f"Evaluated {len(labelled)} labelled documents over {len(rows)} features")
    return MetricsTable(tuple(rows))


def to_dataframe(table: MetricsTable) -> pd.DataFrame:
    """One row per feature plus the Average row. Undefined metrics are NaN."""
    records = [
        [r.feature, r.precision, r.recall, r.accuracy, r.fmeasure] for r in table.rows
    ]
    average = table.average()
    records.append(
        [
            AVERAGE_ROW,
            average["precision"],
            average["recall"],
            average["accuracy"],
            average["fmeasure"],
        ]
    )
    return pd.DataFrame(records, columns=COLUMNS)


def save_metrics_csv(table: MetricsTable, path: Path) -> Path:
    to_dataframe(table).to_csv(path, index=False, float_format="%.6f", na_rep="")
    return path


def format_metrics_table(table: MetricsTable, decimals: int = 2) -> str:
    """Aligned text table. Ac is shown as a percentage like the other columns."""
    df = to_dataframe(table)

    def cell(value) -> str:
        return format_value(None if pd.isna(value) else float(value), decimals)

    rows = [
        [
            row.feature,
            cell(row.P),
            cell(row.R),
            cell(None if pd.isna(row.Ac) else 100.0 * row.Ac),
            cell(row.FM),
        ]
        for row in df.itertuples(index=False)
    ]
    return tabulate(rows, headers=["Feature", "P (%)", "R (%)", "Ac (%)", "FM"], stralign="right")


def test_precision_recall_accuracy():
    assert precision(Confusion(tp=1)) == 100.0
    assert precision(Confusion(tp=50, fp=50)) == 50.0
    assert accuracy(Confusion(1, 1, 1, 1)) == 0.5
    try:
        precision(Confusion())
    except UndefinedMetric:
        pass
    else:
        raise AssertionError("UndefinedMetric not raised")


def test_fmeasure():
    assert round(fmeasure(98.08, 77.52), 2) == 86.6
    assert abs(fmeasure(98.08, 77.52) - 86.597) < 0.001
    assert fmeasure(42.5, 42.5) == 42.5


def test_evaluate_judges_each_document():
    def doc(doc_id, labels):
        return Document(doc_id, "text", DocumentSource.TWEET, "Quezon", labels)

    documents = [
        doc("1", {"Road": PolarityTerm.SN}),
        doc("2", {"Road": PolarityTerm.NEG}),
        doc("3", {}),
        doc("4", {"Road": PolarityTerm.P}),
    ]
    predictions = {
        "1": {"Road": PolarityTerm.SN},
        "2": {"Road": PolarityTerm.SN},
        "3": {"Road": PolarityTerm.P},
    }
    (road,) = evaluate(documents, predictions).rows
    assert road.confusion == Confusion(tp=1, fp=2, fn=2, tn=0)
    assert road.precision == 100.0 / 3


def test_perfect_predictions():
    documents = [
        Document("1", "text", DocumentSource.TWEET, "Quezon", {"Road": PolarityTerm.SN}),
        Document("2", "text", DocumentSource.TWEET, "Quezon", {}),
    ]
    table = evaluate(documents, {"1": {"Road": PolarityTerm.SN}})
    (road,) = table.rows
    assert (road.precision, road.recall, road.accuracy, road.fmeasure) == (100.0, 100.0, 1.0, 100.0)
    df = to_dataframe(table)
    assert list(df["feature"]) == ["Road", AVERAGE_ROW]
