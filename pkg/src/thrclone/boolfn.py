"""Truth-table Boolean functions and the minor relation.

A function of arity ``n`` is stored as a read-only ``uint8`` array of length
``2**n``.  The entry at ``idx(a) = sum(a_i * 2**(n - i))`` is ``f(a)``, so the
first argument is the most significant bit of the index.  The text format is
``<arity>:<HEX>`` where the hex number has bit ``idx`` set iff ``f`` is true at
the point with that index.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .exceptions import DimensionError, DomainError, ParseError, ResourceError

MAX_ARITY = 24

Point = tuple[int, ...]

_HEX = "0123456789ABCDEF"


def encode_point(a: Sequence[int]) -> int:
    idx = 0
    for bit in a:
        if bit not in (0, 1):
            raise DomainError(f"point entries must be bits, got {bit!r}")
        idx = (idx << 1) | int(bit)
    return idx


def decode_point(idx: int, n: int) -> Point:
    if not 0 <= idx < (1 << n):
        raise DomainError(f"index {idx} out of range for arity {n}")
    return tuple((idx >> (n - 1 - i)) & 1 for i in range(n))


def coordinate_bits(n: int, i: int) -> np.ndarray:
    """Value of coordinate ``i`` (1-based) at every point of ``B^n``, in index order."""
    return ((np.arange(1 << n, dtype=np.int64) >> (n - i)) & 1).astype(np.uint8)


def hamming_weights(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    w = np.zeros(1 << n, dtype=np.int64)
    for s in range(n):
        w += (idx >> s) & 1
    return w


def all_points(n: int) -> np.ndarray:
    """``(2**n, n)`` matrix whose row ``idx`` is the point with that index."""
    idx = np.arange(1 << n, dtype=np.int64)[:, None]
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)[None, :]
    return ((idx >> shifts) & 1).astype(np.uint8)


def _check_arity(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise DomainError(f"arity must be an integer, got {n!r}")
    n = int(n)
    if n < 1:
        raise DomainError(f"arity must be at least 1, got {n}")
    if n > MAX_ARITY:
        raise ResourceError(f"arity {n} exceeds the supported maximum {MAX_ARITY}")
    return n


class BoolFn:
    """An ``n``-ary Boolean function given by its truth table."""

    __slots__ = ("arity", "_table", "_hash")

    def __init__(self, arity: int, table: Iterable[int] | np.ndarray):
        arity = _check_arity(arity)
        arr = np.array(table, dtype=np.uint8).ravel()
        if arr.shape[0] != 1 << arity:
            raise DimensionError(
                f"table of arity {arity} must have {1 << arity} entries, got {arr.shape[0]}"
            )
        if arr.size and arr.max() > 1:
            raise DomainError("truth table entries must be 0 or 1")
        arr.flags.writeable = False
        self.arity = arity
        self._table = arr
        self._hash = None

    # construction helpers

    @classmethod
    def from_callable(cls, arity: int, func: Callable[..., int]) -> "BoolFn":
        arity = _check_arity(arity)
        return cls(arity, [int(bool(func(*decode_point(i, arity)))) for i in range(1 << arity)])

    @classmethod
    def from_int(cls, arity: int, value: int) -> "BoolFn":
        arity = _check_arity(arity)
        size = 1 << arity
        if value < 0 or value >> size:
            raise DomainError(f"value {value:#x} does not fit a table of arity {arity}")
        nbytes = max(1, size // 8)
        raw = np.frombuffer(value.to_bytes(nbytes, "little"), dtype=np.uint8)
        bits = np.unpackbits(raw, bitorder="little")[:size]
        return cls(arity, bits)

    @classmethod
    def parse(cls, text: str) -> "BoolFn":
        """Read the ``<arity>:<HEX>`` format (hex digits are case-insensitive)."""
        if not isinstance(text, str):
            raise ParseError(f"expected a string, got {type(text).__name__}")
        colon = text.find(":")
        if colon <= 0:
            raise ParseError("expected '<arity>:<hex>'", text, max(colon, 0))
        head = text[:colon]
        for pos, ch in enumerate(head):
            if not ch.isdigit():
                raise ParseError("arity must be a decimal number", text, pos)
        arity = int(head)
        if not 1 <= arity <= MAX_ARITY:
            raise ParseError(f"arity must be between 1 and {MAX_ARITY}", text, 0)
        digits = text[colon + 1:]
        if not digits:
            raise ParseError("missing hex digits", text, colon + 1)
        for pos, ch in enumerate(digits):
            if ch.upper() not in _HEX:
                raise ParseError(f"invalid hex digit {ch!r}", text, colon + 1 + pos)
        width = hex_width(arity)
        if len(digits) > width:
            raise ParseError(f"arity {arity} takes at most {width} hex digits", text, colon + 1 + width)
        value = int(digits, 16)
        if value >> (1 << arity):
            raise ParseError(f"value too large for arity {arity}", text, colon + 1)
        return cls.from_int(arity, value)

    # accessors

    @property
    def table(self) -> np.ndarray:
        return self._table

    def to_int(self) -> int:
        size = 1 << self.arity
        if size < 8:
            return sum(int(b) << i for i, b in enumerate(self._table))
        return int.from_bytes(np.packbits(self._table, bitorder="little").tobytes(), "little")

    def to_hex(self) -> str:
        return format(self.to_int(), "X").rjust(hex_width(self.arity), "0")

    def __str__(self) -> str:
        return f"{self.arity}:{self.to_hex()}"

    def __repr__(self) -> str:
        if self.arity <= 6:
            return f"BoolFn.parse({str(self)!r})"
        return f"<BoolFn arity={self.arity} true_points={self.n_true}>"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BoolFn):
            return NotImplemented
        return self.arity == other.arity and np.array_equal(self._table, other._table)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.arity, self._table.tobytes()))
        return self._hash

    def __call__(self, *a: int) -> int:
        if len(a) == 1 and isinstance(a[0], (tuple, list, np.ndarray)):
            a = tuple(a[0])
        return evaluate(self, a)

    @property
    def n_true(self) -> int:
        return int(self._table.sum())

    def true_indices(self) -> np.ndarray:
        return np.flatnonzero(self._table)

    def false_indices(self) -> np.ndarray:
        return np.flatnonzero(self._table == 0)

    def true_points(self) -> list[Point]:
        return [decode_point(int(i), self.arity) for i in self.true_indices()]

    def false_points(self) -> list[Point]:
        return [decode_point(int(i), self.arity) for i in self.false_indices()]


def hex_width(arity: int) -> int:
    return max(1, -(-(1 << arity) // 4))


def parse_fn(text: str) -> BoolFn:
    return BoolFn.parse(text)


def format_fn(f: BoolFn) -> str:
    return str(f)


def evaluate(f: BoolFn, a: Sequence[int]) -> int:
    if len(a) != f.arity:
        raise DimensionError(f"point of length {len(a)} given to a function of arity {f.arity}")
    return int(f.table[encode_point(a)])


# common functions


def constant(n: int, value: int) -> BoolFn:
    return BoolFn(n, np.full(1 << _check_arity(n), int(bool(value)), dtype=np.uint8))


def projection(n: int, i: int) -> BoolFn:
    if not 1 <= i <= n:
        raise DomainError(f"projection index {i} out of range 1..{n}")
    return BoolFn(n, coordinate_bits(n, i))


def conjunction(n: int, indices: Iterable[int] | None = None) -> BoolFn:
    idx = range(1, n + 1) if indices is None else indices
    table = np.ones(1 << n, dtype=np.uint8)
    for i in idx:
        table &= coordinate_bits(n, i)
    return BoolFn(n, table)


def disjunction(n: int, indices: Iterable[int] | None = None) -> BoolFn:
    idx = range(1, n + 1) if indices is None else indices
    table = np.zeros(1 << n, dtype=np.uint8)
    for i in idx:
        table |= coordinate_bits(n, i)
    return BoolFn(n, table)


def parity(n: int) -> BoolFn:
    return BoolFn(n, (hamming_weights(n) & 1).astype(np.uint8))


def majority(n: int) -> BoolFn:
    return BoolFn(n, (2 * hamming_weights(n) > n).astype(np.uint8))


AND2 = conjunction(2)
OR2 = disjunction(2)
XOR2 = parity(2)
XNOR2 = BoolFn(2, 1 - XOR2.table)
NOT = BoolFn(1, [1, 0])
IDENTITY = projection(1, 1)
MAJ3 = majority(3)


# minors


@dataclass(frozen=True)
class MinorMap:
    """A map ``sigma: {1..source_arity} -> {1..target_arity}`` stored 1-based."""

    source_arity: int
    target_arity: int
    mapping: tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != self.source_arity:
            raise DimensionError(
                f"mapping has {len(self.mapping)} entries, expected {self.source_arity}"
            )
        if self.target_arity < 1:
            raise DomainError("target arity must be at least 1")
        for v in self.mapping:
            if not 1 <= v <= self.target_arity:
                raise DomainError(f"image {v} outside 1..{self.target_arity}")

    @classmethod
    def of(cls, mapping: Sequence[int], target_arity: int) -> "MinorMap":
        return cls(len(mapping), target_arity, tuple(int(v) for v in mapping))

    def __call__(self, i: int) -> int:
        return self.mapping[i - 1]

    def then(self, tau: "MinorMap") -> "MinorMap":
        """The composite ``tau o self``."""
        if tau.source_arity != self.target_arity:
            raise DimensionError("maps do not compose")
        return MinorMap(self.source_arity, tau.target_arity, tuple(tau(v) for v in self.mapping))


def minor(g: BoolFn, sigma: MinorMap | Sequence[int], target_arity: int | None = None) -> BoolFn:
    """``f(a) = g(a o sigma)``; ``f`` has arity ``sigma.target_arity``."""
    if not isinstance(sigma, MinorMap):
        if target_arity is None:
            target_arity = max(sigma)
        sigma = MinorMap.of(sigma, target_arity)
    if sigma.source_arity != g.arity:
        raise DimensionError(
            f"minor map has source arity {sigma.source_arity}, function has arity {g.arity}"
        )
    m, n = sigma.target_arity, g.arity
    _check_arity(m)
    src = np.zeros(1 << m, dtype=np.int64)
    for j, k in enumerate(sigma.mapping, start=1):
        src |= coordinate_bits(m, k).astype(np.int64) << (n - j)
    return BoolFn(m, g.table[src])


def delta(n: int, pair: Iterable[int]) -> MinorMap:
    """The map ``delta_I`` identifying the two coordinates of ``pair``."""
    pair = sorted(set(pair))
    if n < 2 or len(pair) != 2 or pair[0] < 1 or pair[1] > n:
        raise DomainError(f"{pair} is not a two-element subset of 1..{n}")
    lo, hi = pair
    mapping = tuple(i if i < hi else (lo if i == hi else i - 1) for i in range(1, n + 1))
    return MinorMap(n, n - 1, mapping)


def identification_minor(f: BoolFn, pair: Iterable[int]) -> BoolFn:
    return minor(f, delta(f.arity, pair))


def identification_minors(f: BoolFn) -> dict[tuple[int, int], BoolFn]:
    return {
        (i, j): identification_minor(f, (i, j))
        for i, j in itertools.combinations(range(1, f.arity + 1), 2)
    }


def is_minor_of(f: BoolFn, g: BoolFn, budget: int = 10**6) -> bool:
    """Exhaustive search for ``sigma`` with ``f = minor(g, sigma)``."""
    n, m = g.arity, f.arity
    if m**n > budget:
        raise ResourceError(f"{m}^{n} minor maps exceed the budget {budget}")
    for mapping in itertools.product(range(1, m + 1), repeat=n):
        if minor(g, MinorMap(n, m, mapping)) == f:
            return True
    return False


# dual, negation, shifts


def negate(f: BoolFn) -> BoolFn:
    return BoolFn(f.arity, 1 - f.table)


def dual(f: BoolFn) -> BoolFn:
    return BoolFn(f.arity, 1 - f.table[::-1])


def shift(f: BoolFn, u: Sequence[int]) -> BoolFn:
    if len(u) != f.arity:
        raise DimensionError(f"shift vector of length {len(u)} for arity {f.arity}")
    idx = np.arange(1 << f.arity, dtype=np.int64) ^ encode_point(u)
    return BoolFn(f.arity, f.table[idx])


def is_self_dual(f: BoolFn) -> bool:
    return bool(np.all(f.table != f.table[::-1]))


def compose(f: BoolFn, gs: Sequence[BoolFn]) -> BoolFn:
    """``f(g_1, ..., g_n)`` for inner functions of a common arity."""
    if len(gs) != f.arity:
        raise DimensionError(f"{len(gs)} inner functions for an outer function of arity {f.arity}")
    m = gs[0].arity
    if any(g.arity != m for g in gs):
        raise DimensionError("inner functions must share one arity")
    idx = np.zeros(1 << m, dtype=np.int64)
    for j, g in enumerate(gs, start=1):
        idx |= g.table.astype(np.int64) << (f.arity - j)
    return BoolFn(m, f.table[idx])


def essential_variables(f: BoolFn) -> frozenset[int]:
    idx = np.arange(1 << f.arity, dtype=np.int64)
    out = set()
    for i in range(1, f.arity + 1):
        if np.any(f.table != f.table[idx ^ (1 << (f.arity - i))]):
            out.add(i)
    return frozenset(out)


# equivalence up to inessential arguments


def canonical_form(f: BoolFn, budget: int = 10**6) -> BoolFn:
    """Representative of the ``==``-class of ``f`` under the equivalence of minors.

    Inessential arguments are deleted, then the lexicographically smallest
    table (as an integer) over all argument permutations is chosen.  Functions
    with no essential argument are returned as unary constants.
    """
    ess = sorted(essential_variables(f))
    if not ess:
        return constant(1, int(f.table[0]))
    k = len(ess)
    if math.factorial(k) > budget:
        raise ResourceError(f"{k}! permutations exceed the budget {budget}")
    pos = {v: i + 1 for i, v in enumerate(ess)}
    # any fixed value for deleted arguments works since they are inessential
    reduced = minor(f, MinorMap(f.arity, k, tuple(pos.get(i, 1) for i in range(1, f.arity + 1))))
    best = None
    for perm in itertools.permutations(range(1, k + 1)):
        cand = minor(reduced, MinorMap(k, k, perm)).to_int()
        if best is None or cand < best:
            best = cand
    return BoolFn.from_int(k, best)


def equivalent(f: BoolFn, g: BoolFn, budget: int = 10**6) -> bool:
    return canonical_form(f, budget) == canonical_form(g, budget)


def all_functions(n: int) -> Iterable[BoolFn]:
    """Every ``n``-ary function, in increasing order of table value."""
    if n > 4:
        raise ResourceError(f"enumerating all functions of arity {n} is out of budget")
    for v in range(1 << (1 << n)):
        yield BoolFn.from_int(n, v)


def is_monotone(f: BoolFn) -> bool:
    idx = np.arange(1 << f.arity, dtype=np.int64)
    for i in range(f.arity):
        lo = idx[(idx >> i) & 1 == 0]
        if np.any(f.table[lo] > f.table[lo | (1 << i)]):
            return False
    return True
