"""Evaluation, cross-validation and the feature x algorithm leaderboard."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import ConfigError, DataError, SizeError
from ..features import FeatureKind
from .dataset import Dataset
from .linear import LinearModel, train_logistic, train_ridge, train_svm_linear
from .metrics import EvalReport, report_from_predictions
from .tree import TreeModel, train_tree

SPLITS = {"paper": 0.2, "conventional": 0.8}

TRAINERS: dict[str, Callable] = {
    "ridge": train_ridge,
    "svm_linear": train_svm_linear,
    "logistic": train_logistic,
    "tree": train_tree,
}

# Ensemble learners named for Hjorth and SED features are registered but not
# implemented. The decision tree (the ensembles' base learner) is listed for
# SED so that feature kind has a runnable baseline.
DEFAULT_REGISTRY = {
    FeatureKind.MFCC: ("ridge", "svm_linear", "logistic"),
    FeatureKind.HJORTH: ("tree", "adaboost", "random_forest"),
    FeatureKind.SED: ("lgbm", "gradient_boosting", "adaboost", "tree"),
}

DISPLAY_NAMES = {
    "ridge": "Ridge Classifier",
    "svm_linear": "SVM-linear",
    "logistic": "Logistic Regression",
    "tree": "Decision Tree Classifier",
    "adaboost": "AdaBoost Classifier",
    "random_forest": "RandomForest Classifier",
    "lgbm": "LGBM Classifier",
    "gradient_boosting": "Gradient Boosting Classifier",
}


def predict(model, features) -> np.ndarray:
    """Labels (+1 rumble / -1 background) for a 1-D row or a 2-D matrix."""
    return model.predict(features)


def evaluate(model, test: Dataset) -> EvalReport:
    if len(test) == 0:
        raise DataError("cannot evaluate on an empty test set")
    return report_from_predictions(test.y, model.predict(test.X))


def stratified_split(data: Dataset, train_fraction: float, seed: int = 0):
    """Per-class seeded shuffle; each class keeps >= 1 sample on each side."""
    if not 0 < train_fraction < 1:
        raise ConfigError("train_fraction must be in (0, 1)")
    rng = np.random.default_rng(seed)
    y = data.y
    train_idx, test_idx = [], []
    for cls in (1, -1):
        members = np.flatnonzero(y == cls)
        if members.size < 2:
            raise DataError("each class needs at least 2 samples to split")
        members = members[rng.permutation(members.size)]
        # round up: 2 of 7 at a 0.2 fraction (tolerance absorbs 0.2 * 15 = 3.0000000000000004)
        n_train = int(np.ceil(train_fraction * members.size - 1e-9))
        n_train = min(max(1, n_train), members.size - 1)
        train_idx.extend(members[:n_train].tolist())
        test_idx.extend(members[n_train:].tolist())
    return data.subset(sorted(train_idx)), data.subset(sorted(test_idx))


def split_dataset(data: Dataset, split: str = "paper", seed: int = 0):
    if split not in SPLITS:
        raise ConfigError(f"unknown split {split!r}; choose from {sorted(SPLITS)}")
    return stratified_split(data, SPLITS[split], seed)


def stratified_folds(y: np.ndarray, k: int, seed: int = 0, shuffle: bool = True) -> list:
    """Deal samples round-robin into k folds, class by class.

    Each class is (optionally) shuffled, the classes are concatenated and
    position i goes to fold i mod k, so per-fold class counts differ by at
    most one.
    """
    n = y.shape[0]
    if k < 2 or k > n:
        raise ConfigError(f"k must be in [2, {n}], got {k}")
    rng = np.random.default_rng(seed)
    order = []
    for cls in (1, -1):
        members = np.flatnonzero(y == cls)
        if shuffle:
            members = members[rng.permutation(members.size)]
        order.extend(members.tolist())
    folds = [[] for _ in range(k)]
    for pos, i in enumerate(order):
        folds[pos % k].append(i)
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


@dataclass(frozen=True)
class CVResult:
    fold_accuracies: tuple

    @property
    def mean(self) -> float:
        return float(np.mean(self.fold_accuracies))

    @property
    def std(self) -> float:
        return float(np.std(self.fold_accuracies))

    def __str__(self) -> str:
        # std in percentage points
        return f"{100 * self.mean:.2f} ± {100 * self.std:.3f} %"


def kfold_cv(data: Dataset, k: int, trainer: Callable, seed: int = 0,
             shuffle: bool = True) -> CVResult:
    folds = stratified_folds(data.y, k, seed, shuffle)
    accs = []
    everything = np.arange(len(data))
    for fold in folds:
        train = data.subset(np.setdiff1d(everything, fold))
        if min(train.class_counts.values()) == 0:
            raise ConfigError(f"k={k} leaves a training fold without one class")
        model = trainer(train)
        accs.append(evaluate(model, data.subset(fold)).accuracy)
    return CVResult(tuple(accs))


@dataclass(frozen=True)
class LeaderboardRow:
    feature: FeatureKind
    algorithm: str
    report: EvalReport
    cv: CVResult | None


@dataclass(frozen=True)
class Leaderboard:
    rows: tuple
    not_implemented: tuple
    split: str
    seed: int
    data_label: str = "synthetic"

    COLUMNS = ("Accuracy", "BA", "F1")

    def as_records(self) -> list[dict]:
        recs = []
        for rank, row in enumerate(self.rows, 1):
            r = row.report
            recs.append({
                "rank": rank,
                "feature": row.feature.value,
                "algorithm": row.algorithm,
                "Accuracy": r.accuracy,
                "BA": r.balanced_accuracy,
                "F1": r.f1,
                "cv_accuracy": str(row.cv) if row.cv else "",
                "data": self.data_label,
            })
        return recs

    def to_csv(self) -> str:
        buf = io.StringIO()
        fields = ["rank", "feature", "algorithm", *self.COLUMNS, "cv_accuracy", "data"]
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for rec in self.as_records():
            w.writerow({k: _fmt(v) for k, v in rec.items()})
        for feature, algo in self.not_implemented:
            w.writerow({"rank": "", "feature": feature.value, "algorithm": algo,
                        "Accuracy": "not implemented", "BA": "", "F1": "",
                        "cv_accuracy": "", "data": self.data_label})
        return buf.getvalue()

    def to_text(self) -> str:
        header = ["#", "Feature", "ML Algorithm", "Accuracy", "BA", "F1 score", "CV accuracy"]
        lines = []
        for rec in self.as_records():
            lines.append([str(rec["rank"]), rec["feature"], DISPLAY_NAMES.get(rec["algorithm"],
                          rec["algorithm"]), _pct(rec["Accuracy"]), _pct(rec["BA"]),
                          _pct(rec["F1"]), rec["cv_accuracy"]])
        for feature, algo in self.not_implemented:
            lines.append(["-", feature.value, DISPLAY_NAMES.get(algo, algo),
                          "not implemented", "", "", ""])
        widths = [max(len(h), *(len(l[i]) for l in lines)) if lines else len(h)
                  for i, h in enumerate(header)]
        fmt = "  ".join(f"{{:<{w}}}" for w in widths)
        out = [f"Leaderboard ({self.data_label} data, split={self.split}, seed={self.seed})",
               fmt.format(*header), fmt.format(*("-" * w for w in widths))]
        out.extend(fmt.format(*l) for l in lines)
        return "\n".join(out) + "\n"


def _fmt(v) -> str:
    if v is None:
        return "undefined"
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def _pct(v) -> str:
    return "undefined" if v is None else f"{100 * v:.2f}%"


def make_trainer(algorithm: str, hyperparams: dict | None = None) -> Callable:
    if algorithm not in TRAINERS:
        raise ConfigError(f"algorithm {algorithm!r} is not implemented")
    fn = TRAINERS[algorithm]
    hp = dict(hyperparams or {})
    return lambda ds: fn(ds, **hp)


def leaderboard(data_by_kind: dict, registry: dict | None = None, split: str = "paper",
                seed: int = 0, cv_k: int = 5, hyperparams: dict | None = None) -> Leaderboard:
    """Train and score every registered (feature kind, algorithm) pair.

    Each pair is trained on the stratified split's training part and scored
    on its test part; ``cv_k``-fold cross-validation over the full dataset
    adds the mean +- std accuracy column. Rows are sorted by accuracy, then
    BA, then F1 (all descending), then by name.
    """
    registry = DEFAULT_REGISTRY if registry is None else registry
    hyperparams = hyperparams or {}
    rows, stubs = [], []
    for kind, algorithms in registry.items():
        kind = FeatureKind(kind)
        data = data_by_kind.get(kind)
        if data is None:
            continue
        train, test = split_dataset(data, split, seed)
        min_class = min(data.class_counts.values())
        for algo in algorithms:
            if algo not in TRAINERS:
                stubs.append((kind, algo))
                continue
            trainer = make_trainer(algo, hyperparams.get(algo))
            report = evaluate(trainer(train), test)
            cv = None
            if cv_k >= 2 and min_class >= 2:
                cv = kfold_cv(data, min(cv_k, min_class), trainer, seed)
            rows.append(LeaderboardRow(kind, algo, report, cv))
    rows.sort(key=lambda r: (-r.report.accuracy, -(r.report.balanced_accuracy or 0.0),
                             -(r.report.f1 or 0.0), r.feature.value, r.algorithm))
    return Leaderboard(tuple(rows), tuple(stubs), split, seed)


def model_from_dict(d: dict):
    if d.get("kind") == "tree":
        return TreeModel.from_dict(d)
    return LinearModel.from_dict(d)
