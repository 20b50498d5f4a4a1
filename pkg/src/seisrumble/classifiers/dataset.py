from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError
from ..features import FeatureKind, FeatureVector, Label

POSITIVE = Label.RUMBLE


@dataclass(frozen=True)
class Dataset:
    """Feature rows of one kind. Labels map to +1 (rumble) / -1 (background)."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(self.rows)
        if rows:
            kinds = {r.kind for r in rows}
            lengths = {r.values.shape[0] for r in rows}
            if len(kinds) > 1 or len(lengths) > 1:
                raise DataError("dataset rows must share one feature kind and length")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_arrays(cls, X, y, kind: FeatureKind = FeatureKind.MFCC, ids=None) -> "Dataset":
        """Build from a matrix and labels given as +1/-1, 1/0, or Label values."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[0] != len(y):
            raise DataError("X and y lengths differ")
        labels = [_to_label(v) for v in y]
        ids = ids or [f"row{i:04d}" for i in range(X.shape[0])]
        return cls(tuple(FeatureVector(kind, x, lab, sid) for x, lab, sid in zip(X, labels, ids)))

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def kind(self) -> FeatureKind | None:
        return self.rows[0].kind if self.rows else None

    @property
    def X(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, 0))
        return np.vstack([r.values for r in self.rows])

    @property
    def y(self) -> np.ndarray:
        return np.array([1 if r.label == POSITIVE else -1 for r in self.rows], dtype=np.int64)

    @property
    def source_ids(self) -> list[str]:
        return [r.source_id for r in self.rows]

    @property
    def class_counts(self) -> dict:
        y = self.y
        return {Label.RUMBLE: int(np.sum(y == 1)), Label.BACKGROUND: int(np.sum(y == -1))}

    @property
    def n_features(self) -> int:
        return self.rows[0].values.shape[0] if self.rows else 0

    def subset(self, idx) -> "Dataset":
        return Dataset(tuple(self.rows[i] for i in idx))

    def require_both_classes(self) -> None:
        if not self.rows:
            raise DataError("empty dataset")
        counts = self.class_counts
        if min(counts.values()) == 0:
            missing = [k.value for k, v in counts.items() if v == 0]
            raise DataError(f"training data has no samples of class {missing[0]}")


def _to_label(v) -> Label:
    if isinstance(v, Label):
        return v
    if isinstance(v, str):
        return Label(v)
    return Label.RUMBLE if v > 0 else Label.BACKGROUND
