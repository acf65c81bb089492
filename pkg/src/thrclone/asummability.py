"""Equal-sum multisets of false and true points.

``f`` preserves ``B_l`` exactly when no ``l`` false points have the same
coordinate-wise sum as ``l`` true points, so preservation of ``B_l`` can be
decided by a hashed multiset search instead of enumerating ``R(B_l)^n``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .boolfn import BoolFn, Point, all_points, decode_point
from .constraints import ViolationMatrix, make_B
from .exceptions import DomainError, ResourceError, ValidationError

DEFAULT_MAX_MULTISETS = 10**8


@dataclass(frozen=True)
class AsummabilityWitness:
    ell: int
    false_points: tuple[Point, ...]
    true_points: tuple[Point, ...]

    def sums(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return _sum(self.false_points), _sum(self.true_points)

    def validate(self, f: BoolFn) -> None:
        if self.ell < 2:
            raise ValidationError("witness size must be at least 2")
        if len(self.false_points) != self.ell or len(self.true_points) != self.ell:
            raise ValidationError(f"both multisets must have size {self.ell}")
        for p in self.false_points + self.true_points:
            if len(p) != f.arity:
                raise ValidationError(f"point {p} does not have arity {f.arity}")
        if any(f(p) != 0 for p in self.false_points):
            raise ValidationError("a point of the false multiset is a true point")
        if any(f(p) != 1 for p in self.true_points):
            raise ValidationError("a point of the true multiset is a false point")
        a, b = self.sums()
        if a != b:
            raise ValidationError(f"sums differ: {a} vs {b}")

    def is_valid(self, f: BoolFn) -> bool:
        try:
            self.validate(f)
        except ValidationError:
            return False
        return True

    def to_violation(self) -> ViolationMatrix:
        """The ``2l x n`` matrix with the false points on top; its image is ``0^l 1^l``."""
        return ViolationMatrix(
            tuple(self.false_points) + tuple(self.true_points),
            (0,) * self.ell + (1,) * self.ell,
        )

    @classmethod
    def from_violation(cls, v: ViolationMatrix) -> "AsummabilityWitness":
        ell, rem = divmod(v.n_rows, 2)
        if rem or ell < 2:
            raise ValidationError("not a B_l violation matrix")
        top, bottom = v.rows[:ell], v.rows[ell:]
        z = tuple(v.z)
        if z == (0,) * ell + (1,) * ell:
            return cls(ell, tuple(top), tuple(bottom))
        if z == (1,) * ell + (0,) * ell:
            return cls(ell, tuple(bottom), tuple(top))
        raise ValidationError(f"image {z} is not half-constant")

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "false_points": [list(p) for p in self.false_points],
            "true_points": [list(p) for p in self.true_points],
        }

    @classmethod
    def from_json(cls, data: dict) -> "AsummabilityWitness":
        return cls(
            int(data["ell"]),
            tuple(tuple(int(b) for b in p) for p in data["false_points"]),
            tuple(tuple(int(b) for b in p) for p in data["true_points"]),
        )


def _sum(points: Sequence[Point]) -> tuple[int, ...]:
    return tuple(int(s) for s in np.sum(np.array(points, dtype=np.int64), axis=0))


def multiset_count(size: int, ell: int) -> int:
    return math.comb(size + ell - 1, ell) if size else 0


def _dot_all(n: int, weights: Sequence[int]) -> np.ndarray:
    """Exact ``x . w`` for every point ``x`` (object dtype for big integers)."""
    pts = all_points(n)
    out = np.zeros(1 << n, dtype=object)
    for j, w in enumerate(weights):
        out = out + pts[:, j].astype(object) * int(w)
    return out


def hyperplane_points(f: BoolFn, weights: Sequence[int], threshold: int) -> tuple[np.ndarray, np.ndarray]:
    """Restrict the search to the hyperplane ``x . w = t`` of a weak separator.

    ``(w, t)`` must satisfy ``x . w <= t`` on every false point and
    ``x . w >= t`` on every true point.  Summing over an equal-sum pair of
    multisets then forces every point onto the hyperplane.  Returns the false
    and true point indices lying on it.
    """
    if len(weights) != f.arity:
        raise DomainError(f"{len(weights)} weights for arity {f.arity}")
    dots = _dot_all(f.arity, weights)
    on_false = dots[f.table == 0]
    on_true = dots[f.table == 1]
    if any(d > threshold for d in on_false) or any(d < threshold for d in on_true):
        raise ValidationError("the given hyperplane does not weakly separate the function")
    plane = np.array([d == threshold for d in dots], dtype=bool)
    return np.flatnonzero(plane & (f.table == 0)), np.flatnonzero(plane & (f.table == 1))


def equal_sums_witness(
    f: BoolFn,
    ell: int,
    max_multisets: int = DEFAULT_MAX_MULTISETS,
    separator: tuple[Sequence[int], int] | None = None,
) -> AsummabilityWitness | None:
    """Find ``l`` false and ``l`` true points with equal sums, or return ``None``.

    Multisets of the smaller side are enumerated in non-decreasing index order
    and their packed sum vectors hashed; multisets of the other side are then
    scanned in the same order and the first collision is returned.

    ``separator`` is an optional weak separator ``(weights, t)``; it is
    checked against every point and used to prune the search to its
    hyperplane.
    """
    if not isinstance(ell, int) or ell < 2:
        raise DomainError(f"multiset size must be an integer >= 2, got {ell!r}")
    n = f.arity
    if separator is not None:
        false_idx, true_idx = hyperplane_points(f, *separator)
    else:
        false_idx, true_idx = f.false_indices(), f.true_indices()
    if false_idx.size == 0 or true_idx.size == 0:
        return None
    cost = multiset_count(false_idx.size, ell) + multiset_count(true_idx.size, ell)
    if cost > max_multisets:
        raise ResourceError(
            f"{cost} multisets of size {ell} exceed the budget {max_multisets}"
        )

    width = ell.bit_length()
    # coordinate j of a point lands in its own field of `width` bits, so sums never carry
    packed_false = [_pack(int(i), n, width) for i in false_idx]
    packed_true = [_pack(int(i), n, width) for i in true_idx]

    hashed_is_false = len(packed_false) <= len(packed_true)
    small, large = (packed_false, packed_true) if hashed_is_false else (packed_true, packed_false)
    index: dict[int, tuple[int, ...]] = {}
    for combo in itertools.combinations_with_replacement(range(len(small)), ell):
        index.setdefault(sum(small[c] for c in combo), combo)
    for combo in itertools.combinations_with_replacement(range(len(large)), ell):
        hit = index.get(sum(large[c] for c in combo))
        if hit is not None:
            s_idx, l_idx = (false_idx, true_idx) if hashed_is_false else (true_idx, false_idx)
            small_pts = tuple(decode_point(int(s_idx[c]), n) for c in hit)
            large_pts = tuple(decode_point(int(l_idx[c]), n) for c in combo)
            if hashed_is_false:
                return AsummabilityWitness(ell, small_pts, large_pts)
            return AsummabilityWitness(ell, large_pts, small_pts)
    return None


def _pack(idx: int, n: int, width: int) -> int:
    out = 0
    for j in range(n):
        if (idx >> (n - 1 - j)) & 1:
            out |= 1 << (width * (n - 1 - j))
    return out


def preserves_B_fast(
    f: BoolFn,
    ell: int,
    max_multisets: int = DEFAULT_MAX_MULTISETS,
    separator: tuple[Sequence[int], int] | None = None,
) -> bool:
    return equal_sums_witness(f, ell, max_multisets, separator) is None


def is_k_asummable(
    f: BoolFn,
    k: int,
    max_multisets: int = DEFAULT_MAX_MULTISETS,
    separator: tuple[Sequence[int], int] | None = None,
) -> bool:
    if k < 2:
        raise DomainError(f"k must be at least 2, got {k}")
    return all(
        equal_sums_witness(f, m, max_multisets, separator) is None for m in range(2, k + 1)
    )


def witness_as_B_violation(w: AsummabilityWitness, f: BoolFn) -> ViolationMatrix:
    """Re-validated ``B_l`` violation matrix built from a witness."""
    w.validate(f)
    v = w.to_violation()
    v.validate(f, make_B(w.ell))
    return v

