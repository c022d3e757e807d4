"""Confusion matrices, accuracy/precision/recall/F-measure, and the two evaluation protocols.

Metrics are exact :class:`~fractions.Fraction` values; a metric whose
denominator is zero is ``None`` ("undefined") rather than 0. The positive
class is presence (``cardio = 1``).
"""
from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal, localcontext
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import learners
from .data import Dataset, SplitSpec, percentage_split, stratified_folds
from .ontology import OntologyClassifier

ONTOLOGY = "ontology"
DISPLAY_NAMES = {
    "knn": "KNN",
    "naive_bayes": "NB",
    "mlp": "ANN",
    "linear_svm": "SVM",
    "random_forest": "RF",
    "logistic_regression": "LR",
    "decision_tree": "DT",
    ONTOLOGY: "Ontology",
}
METRICS = ("accuracy", "precision", "recall", "f_measure")
UNDEFINED = "undefined"


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ValueError("confusion matrix cells must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(self.tp + other.tp, self.fp + other.fp,
                               self.fn + other.fn, self.tn + other.tn)

    def to_dict(self) -> dict:
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn}


def confusion(predictions, actuals) -> ConfusionMatrix:
    pred = np.asarray(predictions, dtype=np.int64)
    act = np.asarray(actuals, dtype=np.int64)
    if pred.shape != act.shape:
        raise ValueError(f"{pred.size} predictions for {act.size} actual labels")
    if pred.size == 0:
        raise ValueError("cannot build a confusion matrix from no predictions")
    return ConfusionMatrix(
        tp=int(np.sum((pred == 1) & (act == 1))),
        fp=int(np.sum((pred == 1) & (act == 0))),
        fn=int(np.sum((pred == 0) & (act == 1))),
        tn=int(np.sum((pred == 0) & (act == 0))),
    )


def _ratio(num, den):
    return Fraction(num, den) if den else None


def accuracy(cm: ConfusionMatrix):
    return _ratio(cm.tp + cm.tn, cm.total)


def precision(cm: ConfusionMatrix):
    return _ratio(cm.tp, cm.tp + cm.fp)


def recall(cm: ConfusionMatrix):
    return _ratio(cm.tp, cm.tp + cm.fn)


def f_measure(cm: ConfusionMatrix):
    p, r = precision(cm), recall(cm)
    if p is None or r is None or p + r == 0:
        return None
    return 2 * p * r / (p + r)


@dataclass(frozen=True)
class MetricSet:
    accuracy: Fraction | None
    precision: Fraction | None
    recall: Fraction | None
    f_measure: Fraction | None

    @classmethod
    def from_confusion(cls, cm: ConfusionMatrix) -> "MetricSet":
        return cls(accuracy(cm), precision(cm), recall(cm), f_measure(cm))

    def rounded(self, places: int = 3) -> dict:
        return {m: round_half_up(getattr(self, m), places) for m in METRICS}


def round_half_up(value, places: int = 3) -> str:
    """Fixed-point text of an exact ratio, rounding halves away from zero."""
    if value is None:
        return UNDEFINED
    value = Fraction(value)
    with localcontext() as ctx:
        ctx.prec = 60
        dec = Decimal(value.numerator) / Decimal(value.denominator)
        return str(dec.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP))


def protocol_name(spec: SplitSpec) -> str:
    if spec.mode == "k_fold":
        return f"folds{spec.k}"
    return f"split{round(spec.train_fraction * 100)}"


@dataclass
class EvaluationReport:
    algorithm: str
    protocol: str
    confusion: ConfusionMatrix
    hyperparameters: dict
    seed: int
    wall_time: float = 0.0
    details: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    @property
    def metrics(self) -> MetricSet:
        return MetricSet.from_confusion(self.confusion)

    def to_dict(self) -> dict:
        m = self.metrics
        return {
            "format": "cardio-onto-report",
            "version": 1,
            "algorithm": self.algorithm,
            "protocol": self.protocol,
            "seed": self.seed,
            "confusion": self.confusion.to_dict(),
            "metrics": {k: (None if getattr(m, k) is None else float(getattr(m, k))) for k in METRICS},
            "metrics_3dp": m.rounded(3),
            "hyperparameters": self.hyperparameters,
            "wall_time_s": round(self.wall_time, 3),
            "details": self.details,
            "config": self.config,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvaluationReport":
        return cls(d["algorithm"], d["protocol"], ConfusionMatrix(**d["confusion"]),
                   d["hyperparameters"], d["seed"], d.get("wall_time_s", 0.0),
                   d.get("details", {}), d.get("config", {}))

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def load(cls, path) -> "EvaluationReport":
        return cls.from_dict(json.loads(Path(path).read_text()))


def fold_seed(seed: int, fold: int) -> int:
    return int(np.random.SeedSequence([seed, fold]).generate_state(1)[0])


def _fit_predict(algorithm, train, test, params, seed):
    """Predictions for ``test``; for the ontology path also the tree's own
    predictions and the inference report."""
    if algorithm == ONTOLOGY:
        tree_params = {k: v for k, v in (params or {}).items() if k != "seed"}
        clf = OntologyClassifier(**tree_params).fit(train.X, train.y)
        pred, _, report = clf.classify(test)
        tree_pred = clf.tree_.predict(test.X) if len(test) else np.empty(0, dtype=np.int64)
        extra = {"rules": len(clf.rules_), "leaves": clf.tree_.tree_.n_leaves,
                 "inference": report.to_dict()}
        return pred, tree_pred, extra
    p = dict(params or {})
    p["seed"] = seed
    model = learners.train(algorithm, train, p)
    return model.predict_array(test.X), None, {}


def resolved_params(algorithm: str, params: dict | None, seed: int) -> dict:
    if algorithm == ONTOLOGY:
        full = OntologyClassifier(**{k: v for k, v in (params or {}).items() if k != "seed"}).get_params()
        full["seed"] = seed
        return full
    est, full = learners.make_estimator(algorithm, {**(params or {}), "seed": seed})
    return full


def _ontology_details(extras, tree_cms, cms):
    tree_cm = sum(tree_cms[1:], tree_cms[0])
    inference = {k: sum(e["inference"][k] for e in extras) for k in extras[0]["inference"]}
    return {
        "tree_confusion": tree_cm.to_dict(),
        "matches_tree": all(a == b for a, b in zip(cms, tree_cms)),
        "rules": [e["rules"] for e in extras],
        "leaves": [e["leaves"] for e in extras],
        "inference": inference,
    }


def evaluate_split(algorithm: str, d: Dataset, spec: SplitSpec | None = None,
                   params: dict | None = None) -> EvaluationReport:
    """Train on the first ``train_fraction`` of a seeded shuffle, score the rest."""
    spec = spec or SplitSpec()
    start = time.perf_counter()
    train, test = percentage_split(d, spec)
    pred, tree_pred, extra = _fit_predict(algorithm, train, test, params, spec.seed)
    cm = confusion(pred, test.y)
    details = {"train_size": len(train), "test_size": len(test)}
    if algorithm == ONTOLOGY:
        details.update(_ontology_details([extra], [confusion(tree_pred, test.y)], [cm]))
    return EvaluationReport(algorithm, protocol_name(spec), cm,
                            resolved_params(algorithm, params, spec.seed), spec.seed,
                            time.perf_counter() - start, details)


def evaluate_cv(algorithm: str, d: Dataset, k: int = 10, seed: int = 1,
                params: dict | None = None, stratified: bool = True) -> EvaluationReport:
    """k-fold cross-validation; the report holds the confusion matrix pooled over folds.

    Fold ``i`` trains with seed ``fold_seed(seed, i)``, so runs are reproducible
    whatever order folds are evaluated in.
    """
    start = time.perf_counter()
    folds = stratified_folds(d, k, seed, stratified)
    n = len(d)
    cms, tree_cms, extras, seeds = [], [], [], []
    for i, held_out in enumerate(folds):
        mask = np.ones(n, dtype=bool)
        mask[held_out] = False
        train, test = d.subset(np.flatnonzero(mask)), d.subset(held_out)
        s = fold_seed(seed, i)
        seeds.append(s)
        pred, tree_pred, extra = _fit_predict(algorithm, train, test, params, s)
        cms.append(confusion(pred, test.y))
        if algorithm == ONTOLOGY:
            tree_cms.append(confusion(tree_pred, test.y))
            extras.append(extra)
    pooled = sum(cms[1:], cms[0])
    details = {"folds": k, "stratified": stratified, "fold_seeds": seeds,
               "fold_confusion": [c.to_dict() for c in cms]}
    if algorithm == ONTOLOGY:
        details.update(_ontology_details(extras, tree_cms, cms))
    return EvaluationReport(algorithm, f"folds{k}", pooled,
                            resolved_params(algorithm, params, seed), seed,
                            time.perf_counter() - start, details)


@dataclass(frozen=True)
class ComparisonTable:
    """One row per classifier, one column per (metric, protocol)."""

    protocols: tuple
    rows: tuple  # (algorithm, {protocol: MetricSet})

    def header(self) -> list[str]:
        return ["classifier"] + [f"{m}_{p}" for m in METRICS for p in self.protocols]

    def cells(self) -> list[list[str]]:
        out = []
        for algorithm, by_protocol in self.rows:
            row = [DISPLAY_NAMES.get(algorithm, algorithm)]
            for m in METRICS:
                for p in self.protocols:
                    ms = by_protocol.get(p)
                    row.append(round_half_up(getattr(ms, m)) if ms else "")
            out.append(row)
        return out

    def to_csv(self, comments=()) -> str:
        buf = io.StringIO()
        for c in comments:
            buf.write(f"# {c}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header())
        writer.writerows(self.cells())
        return buf.getvalue()

    def to_markdown(self, comments=()) -> str:
        lines = [f"<!-- {c} -->" for c in comments]
        titles = {"accuracy": "Accuracy", "precision": "Precision", "recall": "Recall",
                  "f_measure": "F-Measure"}
        head = ["Classifier"] + [f"{titles[m]} {pretty_protocol(p)}" for m in METRICS for p in self.protocols]
        lines.append("| " + " | ".join(head) + " |")
        lines.append("|" + "---|" * len(head))
        lines.extend("| " + " | ".join(r) + " |" for r in self.cells())
        return "\n".join(lines) + "\n"


def pretty_protocol(protocol: str) -> str:
    if protocol.startswith("folds"):
        return f"Folds-{protocol[5:]}"
    if protocol.startswith("split"):
        return f"Split-{protocol[5:]}%"
    return protocol


def _protocol_order(p):
    return (0 if p.startswith("folds") else 1, p)


def compare(reports) -> ComparisonTable:
    """Rows sorted by ascending cross-validation accuracy (split accuracy when
    no cross-validation run exists), then by algorithm name."""
    reports = list(reports)
    if not reports:
        raise ValueError("compare needs at least one report")
    protocols = tuple(sorted({r.protocol for r in reports}, key=_protocol_order))
    table = {}
    for r in reports:
        table.setdefault(r.algorithm, {})[r.protocol] = r.metrics

    def key(item):
        algorithm, by_protocol = item
        for p in protocols:
            if p in by_protocol and by_protocol[p].accuracy is not None:
                return (by_protocol[p].accuracy, algorithm)
        return (Fraction(-1), algorithm)

    return ComparisonTable(protocols, tuple(sorted(table.items(), key=key)))


def read_comparison_csv(text: str):
    """Parse ``comparison.csv`` back into (comments, header, rows)."""
    comments = [l[2:] for l in text.splitlines() if l.startswith("# ")]
    body = [l for l in text.splitlines() if not l.startswith("#")]
    rows = list(csv.reader(body))
    if not rows:
        raise ValueError("empty comparison table")
    return comments, rows[0], rows[1:]
