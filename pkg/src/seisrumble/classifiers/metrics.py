from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError


def _ratio(num: float, den: float) -> float | None:
    return None if den == 0 else num / den


@dataclass(frozen=True)
class EvalReport:
    """Confusion counts (rumble = positive) and derived metrics.

    A metric whose denominator is zero is ``None`` and listed in
    ``undefined``; it is never silently reported as 0.
    """

    tp: int
    fp: int
    tn: int
    fn: int
    accuracy: float
    balanced_accuracy: float | None
    f1: float | None
    sensitivity: float | None
    specificity: float | None
    precision: float | None
    recall: float | None
    undefined: tuple = field(default=())

    @classmethod
    def from_counts(cls, tp: int, fp: int, tn: int, fn: int) -> "EvalReport":
        total = tp + fp + tn + fn
        if total == 0:
            raise DataError("cannot evaluate on an empty test set")
        sens = _ratio(tp, tp + fn)
        spec = _ratio(tn, tn + fp)
        prec = _ratio(tp, tp + fp)
        rec = sens
        ba = None if sens is None or spec is None else (sens + spec) / 2.0
        f1 = None
        if prec is not None and rec is not None:
            f1 = _ratio(2.0 * prec * rec, prec + rec)
        metrics = {"balanced_accuracy": ba, "f1": f1, "sensitivity": sens,
                   "specificity": spec, "precision": prec, "recall": rec}
        undefined = tuple(k for k, v in metrics.items() if v is None)
        return cls(tp, fp, tn, fn, (tp + tn) / total, ba, f1, sens, spec, prec, rec, undefined)

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def to_dict(self) -> dict:
        return {
            "tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn,
            "accuracy": self.accuracy, "balanced_accuracy": self.balanced_accuracy,
            "f1": self.f1, "sensitivity": self.sensitivity, "specificity": self.specificity,
            "precision": self.precision, "recall": self.recall,
            "undefined": list(self.undefined),
        }


def confusion(y_true, y_pred) -> tuple[int, int, int, int]:
    t = np.asarray(y_true) > 0
    p = np.asarray(y_pred) > 0
    return (int(np.sum(t & p)), int(np.sum(~t & p)), int(np.sum(~t & ~p)), int(np.sum(t & ~p)))


def report_from_predictions(y_true, y_pred) -> EvalReport:
    return EvalReport.from_counts(*confusion(y_true, y_pred))
