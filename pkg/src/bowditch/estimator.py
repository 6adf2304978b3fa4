"""scikit-learn wrappers around the classifier."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .character import ImaginaryCharacter
from .classifier import Budget, Variant, classify
from .errors import DomainError
from .surface import SheetSelector, z_sheet_array


class SheetLift(TransformerMixin, BaseEstimator):
    """Lift points ``(x, y)`` to ``(x, y, z)`` on one sheet of the level set ``k``.

    Parameters
    ----------
    k : float
        Level of the invariant.
    sheet : {"plus", "minus"}
    on_void : {"raise", "nan"}
        What to do with points that have no preimage.
    """

    def __init__(self, k=8.0, sheet="plus", on_void="raise"):
        self.k = k
        self.sheet = sheet
        self.on_void = on_void

    def fit(self, X, y=None):
        X = check_array(X)
        if X.shape[1] != 2:
            raise ValueError(f"SheetLift expects 2 features (x, y), got {X.shape[1]}")
        if self.on_void not in ("raise", "nan"):
            raise ValueError("on_void must be 'raise' or 'nan'")
        SheetSelector.parse(self.sheet)
        self.n_features_in_ = 2
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_array(X)
        if X.shape[1] != 2:
            raise ValueError(f"SheetLift expects 2 features (x, y), got {X.shape[1]}")
        z = z_sheet_array(float(self.k), X[:, 0], X[:, 1], SheetSelector.parse(self.sheet))
        if self.on_void == "raise" and np.isnan(z).any():
            raise DomainError("some points have no preimage on the level set")
        return np.column_stack([X, z])


class BowditchClassifier(ClassifierMixin, BaseEstimator):
    """Label characters by the outcome of the descending-path algorithm.

    ``X`` holds characters ``(x, y, z)`` as rows, or points ``(x, y)``
    that are lifted to the sheet ``sheet`` of level ``k`` first.  There is
    nothing to learn: ``fit`` only validates and records the label set.
    """

    def __init__(self, k=None, sheet="plus", max_depth=10_000, max_abs=1e300, geodesic_walk_limit=100_000):
        self.k = k
        self.sheet = sheet
        self.max_depth = max_depth
        self.max_abs = max_abs
        self.geodesic_walk_limit = geodesic_walk_limit

    def _characters(self, X):
        X = check_array(X)
        if X.shape[1] == 2:
            if self.k is None:
                raise ValueError("two-column input needs the level k")
            X = SheetLift(self.k, self.sheet).fit_transform(X)
        elif X.shape[1] != 3:
            raise ValueError(f"expected 2 or 3 features, got {X.shape[1]}")
        return X

    def fit(self, X, y=None):
        X = check_array(X)
        if X.shape[1] not in (2, 3):
            raise ValueError(f"expected 2 or 3 features, got {X.shape[1]}")
        if X.shape[1] == 2 and self.k is None:
            raise ValueError("two-column input needs the level k")
        self.budget_ = Budget(self.max_depth, self.max_abs, self.geodesic_walk_limit)
        self.classes_ = np.array([v.value for v in Variant])
        self.n_features_in_ = X.shape[1]
        return self

    def classify(self, X) -> list:
        """Full classification records, one per row."""
        check_is_fitted(self, "classes_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, but the classifier was fitted with {self.n_features_in_}")
        X = self._characters(X)
        return [classify(ImaginaryCharacter(*map(float, row)), self.budget_) for row in X]

    def predict(self, X):
        return np.array([r.variant.value for r in self.classify(X)], dtype=self.classes_.dtype)

    def predict_depth(self, X):
        return np.array([r.depth for r in self.classify(X)])
