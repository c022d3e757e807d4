"""The seven classifiers behind one train/predict contract.

Each learner is a scikit-learn compatible estimator working on the 11-column
feature matrix (``Dataset.X``). :func:`train`, :func:`predict` and
:func:`predict_batch` wrap them for :class:`~cardio_onto.data.Dataset` input.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..data import Dataset, PatientRecord
from .base import SingleClassError
from .bayes import NaiveBayes
from .forest import RandomForestClassifier
from .linear import LinearSVM, LogisticRegression
from .mlp import MLPClassifier
from .neighbors import KNeighbors
from .tree import DecisionTreeClassifier, Tree

ESTIMATORS = {
    "decision_tree": DecisionTreeClassifier,
    "random_forest": RandomForestClassifier,
    "logistic_regression": LogisticRegression,
    "naive_bayes": NaiveBayes,
    "knn": KNeighbors,
    "linear_svm": LinearSVM,
    "mlp": MLPClassifier,
}
ALGORITHMS = tuple(ESTIMATORS)
STOCHASTIC = {"random_forest", "mlp"}

MODEL_FORMAT = "cardio-onto-model"
MODEL_VERSION = 1


class UnknownAlgorithm(ValueError):
    pass


def default_params(algorithm: str, seed: int = 1) -> dict:
    """Hyperparameters used when none are given; ``seed`` is recorded for every learner."""
    if algorithm not in ESTIMATORS:
        raise UnknownAlgorithm(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
    params = ESTIMATORS[algorithm]().get_params()
    if "random_state" in params:
        params["random_state"] = seed
    params["seed"] = seed
    return params


def make_estimator(algorithm: str, params: dict | None = None):
    params = dict(params or {})
    full = default_params(algorithm, params.get("seed", 1))
    unknown = set(params) - set(full)
    if unknown:
        raise ValueError(f"unknown hyperparameters for {algorithm}: {sorted(unknown)}")
    full.update(params)
    if "random_state" in full and "random_state" not in params:
        full["random_state"] = full["seed"]
    est_params = {k: v for k, v in full.items() if k != "seed"}
    return ESTIMATORS[algorithm](**est_params), full


@dataclass(frozen=True)
class TrainedModel:
    algorithm: str
    estimator: object = field(repr=False)
    hyperparameters: dict

    def predict_array(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if len(X) == 0:
            return np.empty(0, dtype=np.int64)
        return np.asarray(self.estimator.predict(X), dtype=np.int64)


def train(algorithm: str, train_set: Dataset, params: dict | None = None) -> TrainedModel:
    if len(train_set) == 0:
        raise ValueError(f"cannot train {algorithm} on an empty training set")
    est, full = make_estimator(algorithm, params)
    est.fit(train_set.X, train_set.y)
    return TrainedModel(algorithm, est, full)


def predict(model: TrainedModel, record: PatientRecord) -> int:
    return int(model.predict_array([record[:11]])[0])


def predict_batch(model: TrainedModel, records: Dataset) -> list[int]:
    return model.predict_array(records.X).tolist()


def model_to_dict(model: TrainedModel) -> dict:
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "algorithm": model.algorithm,
        "hyperparameters": model.hyperparameters,
        "state": model.estimator._get_state(),
    }


def model_from_dict(d: dict) -> TrainedModel:
    if d.get("format") != MODEL_FORMAT or d.get("version") != MODEL_VERSION:
        raise ValueError(f"not a {MODEL_FORMAT} v{MODEL_VERSION} document")
    est, full = make_estimator(d["algorithm"], d["hyperparameters"])
    est._set_state(d["state"])
    return TrainedModel(d["algorithm"], est, full)


def save_model(model: TrainedModel, path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), indent=1, sort_keys=True) + "\n")


def load_model(path) -> TrainedModel:
    return model_from_dict(json.loads(Path(path).read_text()))


__all__ = [
    "ALGORITHMS", "ESTIMATORS", "DecisionTreeClassifier", "KNeighbors", "LinearSVM",
    "LogisticRegression", "MLPClassifier", "NaiveBayes", "RandomForestClassifier",
    "SingleClassError", "Tree", "TrainedModel", "UnknownAlgorithm", "default_params",
    "load_model", "model_from_dict", "model_to_dict", "predict", "predict_batch",
    "save_model", "train",
]
