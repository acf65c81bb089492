"""Exact thresholdness decisions and the clone classification verdicts.

:class:`ThresholdClassifier` is a scikit-learn compatible estimator that fits
an exact rational separating hyperplane to labelled Boolean points; the
function-level helpers run it on complete truth tables.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError

from ._validation import check_binary_points
from .boolfn import BoolFn, all_points, identification_minor
from .clones import CloneId, as_clone, is_member
from .exceptions import DimensionError, DomainError, ResourceError
from .simplex import find_feasible

MAX_LP_ARITY = 20


@dataclass(frozen=True)
class ThresholdCertificate:
    """``f(x) = 1`` iff ``sum(w_i x_i) >= t``."""

    weights: tuple[Fraction, ...]
    threshold: Fraction

    @classmethod
    def of(cls, weights: Sequence, threshold) -> "ThresholdCertificate":
        return cls(tuple(Fraction(w) for w in weights), Fraction(threshold))

    @property
    def denominator(self) -> int:
        return math.lcm(*(q.denominator for q in self.weights + (self.threshold,)))

    def integer_form(self) -> tuple[list[int], int]:
        """Weights and threshold scaled by :attr:`denominator`."""
        den = self.denominator
        return [int(w * den) for w in self.weights], int(self.threshold * den)

    def to_json(self) -> dict:
        return {
            "threshold": True,
            "weights": [_rational(w) for w in self.weights],
            "t": _rational(self.threshold),
        }


def _rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _dots(X: np.ndarray, weights: Sequence[int]) -> np.ndarray:
    big = max((abs(w) for w in weights), default=0) * max(1, X.shape[1])
    if big < 2**62:
        return X.astype(np.int64) @ np.array(weights, dtype=np.int64)
    return X.astype(object) @ np.array(weights, dtype=object)


def separate(X: np.ndarray, y: np.ndarray, max_rounds: int = 10_000) -> ThresholdCertificate | None:
    """Exact strict separation of the rows of ``X`` labelled 1 from those labelled 0.

    Solves ``w.b - s >= 1`` on positives and ``w.a - s <= 0`` on negatives
    by constraint generation: an exact LP on a working subset of points, then
    an exact check of all points, adding the worst violators.  Infeasibility
    of a subset is infeasibility of the whole system.
    """
    X = np.asarray(X, dtype=np.uint8)
    y = np.asarray(y, dtype=np.uint8)
    k, n = X.shape
    signs = np.where(y == 1, 1, -1)
    working: list[int] = []
    in_working = np.zeros(k, dtype=bool)
    w_int, s_int, den = [0] * n, 0, 1
    for _ in range(max_rounds):
        # slack of each constraint at the current integer-scaled solution
        lhs = signs * (_dots(X, w_int) - s_int)
        need = np.where(y == 1, den, 0)
        slack = lhs - need
        violated = np.flatnonzero(slack < 0)
        if violated.size == 0:
            weights = [Fraction(v, den) for v in w_int]
            # margins: true points reach s + 1, false points stay at or below s
            return ThresholdCertificate(tuple(weights), Fraction(s_int, den) + 1)
        order = violated[np.argsort(slack[violated], kind="stable")]
        added = 0
        for i in order:
            if not in_working[i]:
                in_working[i] = True
                working.append(int(i))
                added += 1
                if added > n:
                    break
        if added == 0:
            raise AssertionError("constraint generation stalled")
        A = []
        b = []
        for i in working:
            sign = int(signs[i])
            A.append([sign * int(v) for v in X[i]] + [-sign])
            b.append(1 if y[i] == 1 else 0)
        sol = find_feasible(A, b)
        if sol is None:
            return None
        den = math.lcm(*(q.denominator for q in sol))
        w_int = [int(q * den) for q in sol[:n]]
        s_int = int(sol[n] * den)
    raise ResourceError(f"constraint generation exceeded {max_rounds} rounds")


class ThresholdClassifier(ClassifierMixin, BaseEstimator):
    """Linear threshold unit fitted by exact rational linear programming.

    ``fit`` either finds weights ``coef_`` and a threshold ``threshold_``
    with ``predict(x) = [x . coef_ >= threshold_]`` reproducing every label,
    or records ``separable_ = False``.
    """

    def __init__(self, max_rounds: int = 10_000):
        self.max_rounds = max_rounds

    def fit(self, X, y):
        X, y = check_binary_points(X, y)
        self.n_features_in_ = X.shape[1]
        self.classes_ = np.array([0, 1])
        # conflicting duplicate points cannot be separated
        self.certificate_ = separate(X, y, self.max_rounds)
        self.separable_ = self.certificate_ is not None
        if self.separable_:
            self.coef_ = self.certificate_.weights
            self.threshold_ = self.certificate_.threshold
        else:
            self.coef_ = None
            self.threshold_ = None
        return self

    def decision_function(self, X) -> np.ndarray:
        self._check_fitted()
        X = check_binary_points(X)
        if X.shape[1] != self.n_features_in_:
            raise DimensionError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        cert = self.certificate_
        w, t = cert.integer_form()
        den = cert.denominator
        return np.array([Fraction(int(s), den) for s in _dots(X, w) - t], dtype=object)

    def predict(self, X) -> np.ndarray:
        scores = self.decision_function(X)
        return np.array([1 if s >= 0 else 0 for s in scores], dtype=np.uint8)

    def _check_fitted(self):
        if not hasattr(self, "separable_"):
            raise NotFittedError("ThresholdClassifier is not fitted yet")
        if not self.separable_:
            raise DomainError("the training points are not linearly separable")


def is_unate(f: BoolFn) -> bool:
    """Monotone or antitone in each argument separately."""
    idx = np.arange(1 << f.arity, dtype=np.int64)
    for i in range(f.arity):
        lo = idx[(idx >> i) & 1 == 0]
        a, b = f.table[lo], f.table[lo | (1 << i)]
        if np.any(a < b) and np.any(a > b):
            return False
    return True


def is_threshold(f: BoolFn, prefilter: bool = True) -> ThresholdCertificate | None:
    """Certificate for ``f`` or ``None``.

    Threshold functions are unate, so with ``prefilter`` a non-unate ``f`` is
    rejected without solving the LP.
    """
    if f.arity > MAX_LP_ARITY:
        raise ResourceError(f"arity {f.arity} exceeds the LP limit {MAX_LP_ARITY}")
    if prefilter and not is_unate(f):
        return None
    return ThresholdClassifier().fit(all_points(f.arity), f.table).certificate_


def verify_certificate(f: BoolFn, cert: ThresholdCertificate) -> bool:
    if len(cert.weights) != f.arity:
        raise DimensionError(f"{len(cert.weights)} weights for arity {f.arity}")
    w, t = cert.integer_form()
    predicted = _dots(all_points(f.arity), w) >= t
    return bool(np.array_equal(predicted.astype(np.uint8), f.table))


def is_minimally_non_threshold(f: BoolFn) -> bool:
    if is_threshold(f) is not None:
        return False
    return all(
        is_threshold(identification_minor(f, pair)) is not None
        for pair in itertools.combinations(range(1, f.arity + 1), 2)
    )


def intersection_membership(f: BoolFn, c: CloneId | str) -> bool:
    return is_member(f, c) and is_threshold(f) is not None


# classification of C ∩ thr


FINITE = "subclone-of-L-V-Lambda"
CONTAINS_SM = "contains-SM"
CONTAINS_MCUINF = "contains-McUinf"
CONTAINS_MCWINF = "contains-McWinf"

_BELOW_L = {"L", "L0", "L1", "LS", "Lc", "Omega1", "Istar", "I", "I0", "I1", "Ic"}
_BELOW_LAM = {"Lam", "Lam0", "Lam1", "Lamc", "I", "I0", "I1", "Ic"}
_BELOW_V = {"V", "V0", "V1", "Vc", "I", "I0", "I1", "Ic"}
_ABOVE_SM = {"Omega", "T0", "T1", "Tc", "M", "M0", "M1", "Mc", "S", "Sc", "SM"}
_ABOVE_MCU = {"U", "TcU", "MU", "McU"}
_ABOVE_MCW = {"W", "TcW", "MW", "McW"}


@dataclass(frozen=True)
class ClassificationVerdict:
    clone: CloneId
    finitely_characterizable: bool
    reason: str
    contained_in: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "clone": str(self.clone),
            "finitely_characterizable": self.finitely_characterizable,
            "reason": self.reason,
            "contained_in": list(self.contained_in),
        }


def classify_intersection(c: CloneId | str) -> ClassificationVerdict:
    """Is ``C ∩ thr`` finitely characterizable?  Read off a static table of Post's lattice."""
    c = as_clone(c)
    fam = c.family
    below = tuple(
        name for name, group in (("L", _BELOW_L), ("V", _BELOW_V), ("Lam", _BELOW_LAM)) if fam in group
    )
    if below:
        return ClassificationVerdict(c, True, FINITE, below)
    if fam in _ABOVE_SM:
        return ClassificationVerdict(c, False, CONTAINS_SM)
    if fam in _ABOVE_MCU:
        return ClassificationVerdict(c, False, CONTAINS_MCUINF)
    if fam in _ABOVE_MCW:
        return ClassificationVerdict(c, False, CONTAINS_MCWINF)
    raise DomainError(f"clone {c} missing from the classification table")


def witness_clone(reason: str) -> CloneId:
    """The clone ``E`` named by a non-finite verdict."""
    return {
        CONTAINS_SM: CloneId("SM"),
        CONTAINS_MCUINF: CloneId("McU", math.inf),
        CONTAINS_MCWINF: CloneId("McW", math.inf),
    }[reason]
