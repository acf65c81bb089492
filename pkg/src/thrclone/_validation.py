"""Input checks shared by the estimator and the CLI."""

from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array, check_X_y

from .exceptions import DomainError


def _require_binary(arr: np.ndarray, what: str) -> np.ndarray:
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise DomainError(f"{what} must contain only 0 and 1")
    return arr.astype(np.uint8)


def check_binary_points(X, y=None):
    """Validate a 2-D 0/1 point matrix (and 0/1 labels when given)."""
    if y is None:
        X = check_array(X, dtype=None, ensure_2d=True)
        return _require_binary(X, "points")
    X, y = check_X_y(X, y, dtype=None, ensure_2d=True)
    return _require_binary(X, "points"), _require_binary(y, "labels")
