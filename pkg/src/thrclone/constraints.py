"""Relational constraints ``(R, S)`` and the preservation relation.

Relations are finite sets of ``m``-bit words using the same index convention
as truth tables: the tuple ``(x_1, ..., x_m)`` is the word
``sum(x_i * 2**(m - i))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .boolfn import (
    BoolFn,
    MinorMap,
    Point,
    canonical_form,
    coordinate_bits,
    decode_point,
    delta,
    encode_point,
)
from .exceptions import (
    ConsistencyError,
    DimensionError,
    DomainError,
    ParseError,
    ResourceError,
    ValidationError,
)

MAX_RELATION_ARITY = 16
DEFAULT_COLUMN_BUDGET = 10**7
_CHUNK = 1 << 15


def _popcount(words: np.ndarray) -> np.ndarray:
    w = words.astype(np.int64)
    out = np.zeros_like(w)
    while np.any(w):
        out += w & 1
        w >>= 1
    return out


@dataclass(frozen=True)
class Relation:
    arity: int
    words: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.arity <= MAX_RELATION_ARITY:
            raise DomainError(f"relation arity must be in 1..{MAX_RELATION_ARITY}, got {self.arity}")
        words = tuple(sorted(set(int(w) for w in self.words)))
        for w in words:
            if not 0 <= w < (1 << self.arity):
                raise DomainError(f"word {w} does not fit arity {self.arity}")
        object.__setattr__(self, "words", words)

    @classmethod
    def from_tuples(cls, arity: int, tuples: Iterable[Sequence[int]]) -> "Relation":
        words = []
        for t in tuples:
            if len(t) != arity:
                raise DimensionError(f"tuple {tuple(t)} does not have length {arity}")
            words.append(encode_point(t))
        return cls(arity, tuple(words))

    @classmethod
    def full(cls, arity: int) -> "Relation":
        return cls(arity, tuple(range(1 << arity)))

    @classmethod
    def empty(cls, arity: int) -> "Relation":
        return cls(arity, ())

    @classmethod
    def from_predicate(cls, arity: int, pred: Callable[..., bool]) -> "Relation":
        return cls(arity, tuple(w for w in range(1 << arity) if pred(*decode_point(w, arity))))

    @classmethod
    def parse(cls, text: str) -> "Relation":
        head, sep, body = text.partition(";")
        if not sep:
            raise ParseError("expected '<arity>;<word>,...'", text, len(text))
        if not head.isdigit():
            raise ParseError("arity must be a decimal number", text, 0)
        words = []
        pos = len(head) + 1
        if body:
            for part in body.split(","):
                if not part.isdigit():
                    raise ParseError(f"invalid word {part!r}", text, pos)
                words.append(int(part))
                pos += len(part) + 1
        try:
            return cls(int(head), tuple(words))
        except DomainError as exc:
            raise ParseError(str(exc), text, 0) from exc

    def __str__(self) -> str:
        return f"{self.arity};" + ",".join(str(w) for w in self.words)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, item) -> bool:
        if not isinstance(item, (int, np.integer)):
            if len(item) != self.arity:
                return False
            item = encode_point(item)
        return int(item) in self._set

    @property
    def _set(self) -> frozenset[int]:
        return frozenset(self.words)

    def tuples(self) -> list[Point]:
        return [decode_point(w, self.arity) for w in self.words]

    def mask(self) -> np.ndarray:
        out = np.zeros(1 << self.arity, dtype=bool)
        out[list(self.words)] = True
        return out

    def issubset(self, other: "Relation") -> bool:
        return self.arity == other.arity and self._set <= other._set


@dataclass(frozen=True)
class RelationalConstraint:
    antecedent: Relation
    consequent: Relation
    name: str = ""

    def __post_init__(self):
        if self.antecedent.arity != self.consequent.arity:
            raise DimensionError("antecedent and consequent must have the same arity")

    @property
    def arity(self) -> int:
        return self.antecedent.arity

    @classmethod
    def of_relation(cls, rel: Relation, name: str = "") -> "RelationalConstraint":
        return cls(rel, rel, name)

    @classmethod
    def parse(cls, text: str) -> "RelationalConstraint":
        left, sep, right = text.partition("|")
        if not sep:
            raise ParseError("expected 'R|S'", text, len(text))
        try:
            return cls(Relation.parse(left), Relation.parse(right))
        except ParseError as exc:
            offset = 0 if exc.text == left else len(left) + 1
            raise ParseError("malformed constraint", text, offset + max(exc.position, 0)) from exc

    def __str__(self) -> str:
        return f"{self.antecedent}|{self.consequent}"

    # name is a label only
    def __eq__(self, other):
        if not isinstance(other, RelationalConstraint):
            return NotImplemented
        return self.antecedent == other.antecedent and self.consequent == other.consequent

    def __hash__(self):
        return hash((self.antecedent, self.consequent))


@dataclass(frozen=True)
class ViolationMatrix:
    """An ``m x n`` matrix whose columns lie in ``R`` and whose image ``z`` misses ``S``."""

    rows: tuple[Point, ...]
    z: tuple[int, ...]

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_columns(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def columns(self) -> tuple[int, ...]:
        """Columns as words of the relation's arity."""
        return tuple(
            encode_point([row[j] for row in self.rows]) for j in range(self.n_columns)
        )

    def validate(self, f: BoolFn, q: RelationalConstraint) -> None:
        if self.n_rows != q.arity:
            raise ValidationError(f"{self.n_rows} rows for a constraint of arity {q.arity}")
        if self.n_columns != f.arity:
            raise ValidationError(f"{self.n_columns} columns for a function of arity {f.arity}")
        for j, col in enumerate(self.columns, start=1):
            if col not in q.antecedent:
                raise ValidationError(f"column {j} is not in the antecedent")
        image = tuple(f(row) for row in self.rows)
        if image != tuple(self.z):
            raise ValidationError(f"recorded image {self.z} differs from f(rows) = {image}")
        if image in q.consequent:
            raise ValidationError("image lies in the consequent")

    def is_valid(self, f: BoolFn, q: RelationalConstraint) -> bool:
        try:
            self.validate(f, q)
        except ValidationError:
            return False
        return True

    def to_json(self) -> dict:
        return {"rows": [list(r) for r in self.rows], "z": list(self.z)}


def _rows_for_columns(cols: np.ndarray, n: int, m: int) -> np.ndarray:
    """Row indices (shape ``(k, m)``) for ``k`` choices of ``n`` column words each."""
    rows = np.zeros((cols.shape[0], m), dtype=np.int64)
    for i in range(m):
        bits = (cols >> (m - 1 - i)) & 1
        for j in range(n):
            rows[:, i] |= bits[:, j] << (n - 1 - j)
    return rows


def _digits(start: int, stop: int, base: int, n: int) -> np.ndarray:
    lin = np.arange(start, stop, dtype=np.int64)
    out = np.empty((stop - start, n), dtype=np.int64)
    for j in range(n - 1, -1, -1):
        out[:, j] = lin % base
        lin //= base
    return out


def violation_witness(
    f: BoolFn, q: RelationalConstraint, budget: int = DEFAULT_COLUMN_BUDGET
) -> ViolationMatrix | None:
    """Lexicographically first violating choice of columns, or ``None``.

    Column tuples are ordered lexicographically with the first column most
    significant and each column ranging over the sorted antecedent words.
    """
    n, m = f.arity, q.arity
    r_words = np.array(q.antecedent.words, dtype=np.int64)
    if r_words.size == 0:
        return None
    total = r_words.size**n
    if total > budget:
        raise ResourceError(f"{r_words.size}^{n} column choices exceed the budget {budget}")
    s_mask = q.consequent.mask()
    table = f.table.astype(np.int64)
    weights = np.int64(1) << np.arange(m - 1, -1, -1, dtype=np.int64)
    chunk = max(1, _CHUNK // max(1, m))
    for start in range(0, total, chunk):
        stop = min(total, start + chunk)
        cols = r_words[_digits(start, stop, r_words.size, n)]
        rows = _rows_for_columns(cols, n, m)
        out = table[rows] @ weights
        bad = ~s_mask[out]
        if bad.any():
            k = int(np.argmax(bad))
            pts = tuple(decode_point(int(r), n) for r in rows[k])
            return ViolationMatrix(pts, tuple(int(b) for b in table[rows[k]]))
    return None


def preserves(f: BoolFn, q: RelationalConstraint, budget: int = DEFAULT_COLUMN_BUDGET) -> bool:
    return violation_witness(f, q, budget) is None


def preserves_all(f: BoolFn, qs: Iterable[RelationalConstraint], budget: int = DEFAULT_COLUMN_BUDGET) -> bool:
    return all(preserves(f, q, budget) for q in qs)


# the B_l family


def make_B(ell: int) -> RelationalConstraint:
    """``R`` equates the weights of the two halves, ``S`` drops the two half-constant tuples."""
    if not isinstance(ell, int) or ell < 2 or 2 * ell > MAX_RELATION_ARITY:
        raise DomainError(f"B_l needs 2 <= l <= {MAX_RELATION_ARITY // 2}, got {ell!r}")
    m = 2 * ell
    words = np.arange(1 << m, dtype=np.int64)
    low = (1 << ell) - 1
    same = _popcount(words >> ell) == _popcount(words & low)
    r = Relation(m, tuple(int(w) for w in words[same]))
    excluded = {low, low << ell}
    s = Relation(m, tuple(w for w in range(1 << m) if w not in excluded))
    return RelationalConstraint(r, s, f"B{ell}")


def make_A(k: int) -> list[RelationalConstraint]:
    if k < 2:
        raise DomainError(f"A_k needs k >= 2, got {k}")
    return [make_B(ell) for ell in range(2, k + 1)]


# constraint combinators


def constraint_simple_minor(
    q: RelationalConstraint, h: Sequence[int], p: int = 0, m: int | None = None
) -> RelationalConstraint:
    """Simple minor of ``q`` under ``h``, existentially quantifying the last ``p`` coordinates.

    ``h`` has one entry per coordinate of ``q`` with values in ``1..m+p``;
    the result has arity ``m`` (by default ``max(h) - p``).
    """
    h = [int(v) for v in h]
    if len(h) != q.arity:
        raise DomainError(f"h must have {q.arity} entries, got {len(h)}")
    if p < 0:
        raise DomainError("p must be non-negative")
    if m is None:
        m = max(h) - p
    total = m + p
    if m < 1 or any(not 1 <= v <= total for v in h):
        raise DomainError(f"h={h} does not map into 1..{total} with m={m}")
    if total > MAX_RELATION_ARITY:
        raise ResourceError("simple minor arity exceeds the relation ceiling")
    z = np.arange(1 << total, dtype=np.int64)
    t = np.zeros_like(z)
    for i, v in enumerate(h):
        t |= ((z >> (total - v)) & 1) << (q.arity - 1 - i)

    def project(rel: Relation) -> Relation:
        hit = rel.mask()[t]
        return Relation(m, tuple(int(w) for w in np.unique(z[hit] >> p)))

    return RelationalConstraint(project(q.antecedent), project(q.consequent))


def restrict_antecedent(q: RelationalConstraint, r_new: Relation) -> RelationalConstraint:
    if not r_new.issubset(q.antecedent):
        raise DomainError("new antecedent is not a subset of the old one")
    return RelationalConstraint(r_new, q.consequent)


def extend_consequent(q: RelationalConstraint, s_new: Relation) -> RelationalConstraint:
    if not q.consequent.issubset(s_new):
        raise DomainError("new consequent is not a superset of the old one")
    return RelationalConstraint(q.antecedent, s_new)


def intersect_consequents(q1: RelationalConstraint, q2: RelationalConstraint) -> RelationalConstraint:
    if q1.antecedent != q2.antecedent:
        raise DomainError("constraints must share their antecedent")
    s = Relation(q1.arity, tuple(sorted(q1.consequent._set & q2.consequent._set)))
    return RelationalConstraint(q1.antecedent, s)


EQUALITY = RelationalConstraint.of_relation(Relation(2, (0, 3)), "eq")
LEQ = RelationalConstraint.of_relation(Relation(2, (0, 1, 3)), "leq")


# Pol at desk scale

MAX_POL_ARITY = 4


def _all_tables(n: int) -> np.ndarray:
    """Matrix whose row ``v`` is the truth table with integer value ``v``."""
    v = np.arange(1 << (1 << n), dtype=np.int64)[:, None]
    return ((v >> np.arange(1 << n, dtype=np.int64)[None, :]) & 1).astype(np.uint8)


def _preserving_mask(tables: np.ndarray, n: int, q: RelationalConstraint, budget: int) -> np.ndarray:
    alive = np.ones(tables.shape[0], dtype=bool)
    r_words = np.array(q.antecedent.words, dtype=np.int64)
    if r_words.size == 0:
        return alive
    total = r_words.size**n
    if total > budget:
        raise ResourceError(f"{r_words.size}^{n} column choices exceed the budget {budget}")
    m = q.arity
    s_mask = q.consequent.mask()
    cols = r_words[_digits(0, total, r_words.size, n)]
    # only the distinct row patterns matter
    rows = np.unique(_rows_for_columns(cols, n, m), axis=0)
    for row in rows:
        out = np.zeros(tables.shape[0], dtype=np.int64)
        for i in range(m):
            out |= tables[:, row[i]].astype(np.int64) << (m - 1 - i)
        alive &= s_mask[out]
    return alive


def pol_enumerate(
    qs: Iterable[RelationalConstraint], max_arity: int, budget: int = DEFAULT_COLUMN_BUDGET
) -> dict[int, list[BoolFn]]:
    """All functions of arity ``1..max_arity`` preserving every constraint in ``qs``."""
    if max_arity > MAX_POL_ARITY:
        raise ResourceError(f"Pol enumeration is limited to arity {MAX_POL_ARITY}")
    qs = list(qs)
    out = {}
    for n in range(1, max_arity + 1):
        tables = _all_tables(n)
        alive = np.ones(tables.shape[0], dtype=bool)
        for q in qs:
            alive &= _preserving_mask(tables, n, q, budget)
        out[n] = [BoolFn.from_int(n, int(v)) for v in np.flatnonzero(alive)]
    return out


# forbidden minors


def _transposition(n: int, i: int) -> MinorMap:
    mapping = list(range(1, n + 1))
    mapping[i - 1], mapping[i] = mapping[i], mapping[i - 1]
    return MinorMap(n, n, tuple(mapping))


def _minor_source(sigma: MinorMap) -> np.ndarray:
    m, n = sigma.target_arity, sigma.source_arity
    src = np.zeros(1 << m, dtype=np.int64)
    for j, k in enumerate(sigma.mapping, start=1):
        src |= coordinate_bits(m, k).astype(np.int64) << (n - j)
    return src


def _table_values(tables: np.ndarray) -> np.ndarray:
    return tables.astype(np.int64) @ (np.int64(1) << np.arange(tables.shape[1], dtype=np.int64))


def minimal_forbidden_minors(
    member: Callable[[BoolFn], bool], max_arity: int
) -> list[BoolFn]:
    """Minimal non-members of arity ``<= max_arity``, one canonical form per class.

    The predicate must be closed under minors on the searched range; this is
    checked (identification minors, transpositions and dummy arguments) and a
    ``ConsistencyError`` is raised otherwise.
    """
    if max_arity > MAX_POL_ARITY:
        raise ResourceError(f"forbidden-minor search is limited to arity {MAX_POL_ARITY}")
    members = {n: np.array([bool(member(f)) for f in _iter_all(n)]) for n in range(1, max_arity + 1)}
    found = []
    for n in range(1, max_arity + 1):
        tables = _all_tables(n)
        mem = members[n]
        maps = [_transposition(n, i) for i in range(1, n)]
        if n >= 2:
            maps += [delta(n, (i, j)) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        minors_ok = np.ones(tables.shape[0], dtype=bool)
        for sigma in maps:
            vals = _table_values(tables[:, _minor_source(sigma)])
            target = members[sigma.target_arity][vals]
            bad = mem & ~target
            if bad.any():
                f = BoolFn.from_int(n, int(np.argmax(bad)))
                raise ConsistencyError(f"predicate not closed under minors: {f} is a member, its minor is not")
            if sigma.target_arity < n:
                minors_ok &= target
        if n < max_arity:
            # adding a dummy last argument
            sigma = MinorMap(n, n + 1, tuple(range(1, n + 1)))
            vals = _table_values(tables[:, _minor_source(sigma)])
            if np.any(mem & ~members[n + 1][vals]):
                raise ConsistencyError("predicate not closed under adding inessential arguments")
        for v in np.flatnonzero(~mem & minors_ok):
            found.append(canonical_form(BoolFn.from_int(n, int(v))))
    unique = {str(f): f for f in found}
    return sorted(unique.values(), key=lambda f: (f.arity, f.to_int()))


def _iter_all(n: int):
    for v in range(1 << (1 << n)):
        yield BoolFn.from_int(n, v)

