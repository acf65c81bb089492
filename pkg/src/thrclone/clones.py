"""Post's clones: direct membership tests and characterizing relations."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .boolfn import BoolFn, dual, essential_variables, is_monotone, is_self_dual
from .constraints import (
    DEFAULT_COLUMN_BUDGET,
    Relation,
    RelationalConstraint,
    preserves,
)
from .exceptions import ConsistencyError, DomainError, ParseError, ResourceError

INF = math.inf

_FAMILIES = ("TcU", "TcW", "McU", "McW", "MU", "MW", "U", "W")
_FIXED = (
    "Omega", "T0", "T1", "Tc", "M", "M0", "M1", "Mc", "S", "Sc", "SM",
    "L", "L0", "L1", "LS", "Lc",
    "Lam", "Lam0", "Lam1", "Lamc", "V", "V0", "V1", "Vc",
    "Omega1", "Istar", "I", "I0", "I1", "Ic",
)
_FAMILY_RE = re.compile(r"^(TcU|TcW|McU|McW|MU|MW|U|W)(\d+|inf)$")

# each clone as an intersection of base clones, in the order they are introduced
_COMPONENTS = {
    "Omega": (),
    "T0": ("T0",), "T1": ("T1",), "Tc": ("T0", "T1"),
    "M": ("M",), "M0": ("M", "T0"), "M1": ("M", "T1"), "Mc": ("M", "T0", "T1"),
    "S": ("S",), "Sc": ("S", "T0", "T1"), "SM": ("S", "M"),
    "L": ("L",), "L0": ("L", "T0"), "L1": ("L", "T1"), "LS": ("L", "S"), "Lc": ("L", "T0", "T1"),
    "U": ("U",), "W": ("W",),
    "TcU": ("T0", "T1", "U"), "TcW": ("T0", "T1", "W"),
    "MU": ("M", "U"), "MW": ("M", "W"),
    "McU": ("M", "T0", "T1", "U"), "McW": ("M", "T0", "T1", "W"),
    "Lam": ("Lam",), "Lam0": ("Lam", "T0"), "Lam1": ("Lam", "T1"), "Lamc": ("Lam", "T0", "T1"),
    "V": ("V",), "V0": ("V", "T0"), "V1": ("V", "T1"), "Vc": ("V", "T0", "T1"),
    "Omega1": ("Omega1",),
    "Istar": ("Omega1", "S"), "I": ("Omega1", "M"),
    "I0": ("Omega1", "M", "T0"), "I1": ("Omega1", "M", "T1"), "Ic": ("Omega1", "M", "T0", "T1"),
}

_DISPLAY = {"Omega": "Ω", "Lam": "Λ", "Omega1": "Ω(1)", "Istar": "I*"}


@dataclass(frozen=True)
class CloneId:
    """A clone of the catalogue; ``rank`` is set for the separation families only."""

    family: str
    rank: float | int | None = None

    def __post_init__(self):
        if self.family in _FAMILIES:
            if self.rank is None or not (self.rank == INF or (isinstance(self.rank, int) and self.rank >= 2)):
                raise DomainError(f"{self.family} needs a rank m >= 2 or infinity")
        elif self.family in _FIXED:
            if self.rank is not None:
                raise DomainError(f"{self.family} takes no rank")
        else:
            raise DomainError(f"unknown clone {self.family!r}")

    @classmethod
    def parse(cls, text: str) -> "CloneId":
        if text in _FIXED:
            return cls(text)
        match = _FAMILY_RE.match(text)
        if not match:
            raise ParseError(f"unknown clone identifier {text!r}", text, 0)
        family, rank = match.groups()
        rank = INF if rank == "inf" else int(rank)
        if rank != INF and rank < 2:
            raise ParseError("separation rank must be at least 2", text, len(family))
        return cls(family, rank)

    def __str__(self) -> str:
        if self.rank is None:
            return self.family
        return self.family + ("inf" if self.rank == INF else str(self.rank))

    @property
    def display(self) -> str:
        if self.rank is None:
            return _DISPLAY.get(self.family, self.family)
        return self.family + ("∞" if self.rank == INF else str(self.rank))

    @property
    def components(self) -> tuple[str, ...]:
        return _COMPONENTS[self.family]


def catalogue(ranks: Iterable[float | int] = (2, 3, INF)) -> list[CloneId]:
    """Every fixed clone plus each separation family at the given ranks."""
    ranks = list(ranks)
    out = [CloneId(name) for name in _FIXED]
    for fam in _FAMILIES:
        out.extend(CloneId(fam, r) for r in ranks)
    return out


def as_clone(c: CloneId | str) -> CloneId:
    return c if isinstance(c, CloneId) else CloneId.parse(c)


# direct definitions


def anf_coefficients(f: BoolFn) -> np.ndarray:
    """Algebraic normal form: entry ``idx`` is the coefficient of the monomial of
    the variables set in ``idx`` (Möbius transform over GF(2))."""
    a = f.table.astype(np.uint8).copy()
    idx = np.arange(a.size, dtype=np.int64)
    for s in range(f.arity):
        hi = idx[(idx >> s) & 1 == 1]
        a[hi] ^= a[hi ^ (1 << s)]
    return a


def _popcounts(size: int) -> np.ndarray:
    idx = np.arange(size, dtype=np.int64)
    out = np.zeros(size, dtype=np.int64)
    while np.any(idx):
        out += idx & 1
        idx >>= 1
    return out


def is_linear(f: BoolFn) -> bool:
    coeffs = anf_coefficients(f)
    return bool(np.all(_popcounts(coeffs.size)[coeffs == 1] <= 1))


def is_conjunction_or_constant(f: BoolFn) -> bool:
    # a conjunction (or the constant 1) is one monomial; the constant 0 has none
    return int(anf_coefficients(f).sum()) <= 1


def is_disjunction_or_constant(f: BoolFn) -> bool:
    return is_conjunction_or_constant(dual(f))


def is_essentially_unary(f: BoolFn) -> bool:
    return len(essential_variables(f)) <= 1


def separation_defect(f: BoolFn, a: int, max_rank: float = INF, budget: int = 10**8) -> int | None:
    """Smallest number of points of ``f^{-1}(a)`` sharing no coordinate equal to ``a``.

    Only sizes up to ``max_rank`` are explored; ``None`` means no such subset
    of size ``<= max_rank`` exists.
    """
    n = f.arity
    idx = np.flatnonzero(f.table == a).astype(np.int64)
    full = (1 << n) - 1
    masks = idx if a == 1 else full ^ idx
    if masks.size == 0:
        return None
    every = int(np.bitwise_and.reduce(masks))
    if every != 0:
        return None
    if np.any(masks == 0):
        return 1
    limit = min(max_rank, n, masks.size)
    # the set f^{-1}(a) itself is non-separating; its smallest such subset has size <= n
    if masks.size * (1 << n) > budget:
        raise ResourceError(f"rank search over arity {n} exceeds the budget {budget}")
    reach = np.zeros(1 << n, dtype=bool)
    reach[masks] = True
    current = np.flatnonzero(reach)
    size = 1
    while size < limit:
        size += 1
        nxt = np.zeros(1 << n, dtype=bool)
        for p in masks:
            nxt[current & p] = True
        if nxt[0]:
            return size
        reach |= nxt
        current = np.flatnonzero(nxt)
    return None


def is_separating(f: BoolFn, a: int, rank: float = INF) -> bool:
    """``a``-separating of the given rank (``INF`` for plain ``a``-separating)."""
    if rank == INF:
        # all of f^{-1}(a) must share a coordinate equal to a
        idx = np.flatnonzero(f.table == a).astype(np.int64)
        if idx.size == 0:
            return True
        masks = idx if a == 1 else ((1 << f.arity) - 1) ^ idx
        return int(np.bitwise_and.reduce(masks)) != 0
    return separation_defect(f, a, rank) is None


def _base_member(f: BoolFn, base: str, rank) -> bool:
    if base == "T0":
        return f.table[0] == 0
    if base == "T1":
        return f.table[-1] == 1
    if base == "M":
        return is_monotone(f)
    if base == "S":
        return is_self_dual(f)
    if base == "L":
        return is_linear(f)
    if base == "U":
        return is_separating(f, 1, rank)
    if base == "W":
        return is_separating(f, 0, rank)
    if base == "Lam":
        return is_conjunction_or_constant(f)
    if base == "V":
        return is_disjunction_or_constant(f)
    if base == "Omega1":
        return is_essentially_unary(f)
    raise DomainError(base)


def is_member(f: BoolFn, c: CloneId | str) -> bool:
    c = as_clone(c)
    return all(bool(_base_member(f, base, c.rank)) for base in c.components)


# characterizing relations


def _rel(arity: int, pred) -> RelationalConstraint:
    return RelationalConstraint.of_relation(Relation.from_predicate(arity, pred))


def _separation_relation(m: int, a: int) -> RelationalConstraint:
    # rank-m a-separation forbids the all-(1-a) output on m points of f^{-1}(a)
    banned = (1 << m) - 1 if a == 1 else 0
    rel = Relation(m, tuple(w for w in range(1 << m) if w != banned))
    return RelationalConstraint.of_relation(rel, f"{'U' if a else 'W'}{m}")


_BASE_RELATIONS = {
    "T0": [RelationalConstraint.of_relation(Relation(1, (0,)), "{0}")],
    "T1": [RelationalConstraint.of_relation(Relation(1, (1,)), "{1}")],
    "M": [RelationalConstraint.of_relation(Relation(2, (0, 1, 3)), "leq")],
    "S": [RelationalConstraint.of_relation(Relation(2, (1, 2)), "neq")],
    "L": [RelationalConstraint(*(2 * [Relation.from_predicate(4, lambda a, b, c, d: a ^ b ^ c == d)]), "lin")],
    "Lam": [RelationalConstraint(*(2 * [Relation.from_predicate(3, lambda a, b, c: (a & b) == c)]), "and")],
    "V": [RelationalConstraint(*(2 * [Relation.from_predicate(3, lambda a, b, c: (a | b) == c)]), "or")],
    "Omega1": [RelationalConstraint(*(2 * [Relation.from_predicate(3, lambda a, b, c: a == b or b == c)]), "unary")],
}


@dataclass(frozen=True)
class Characterization:
    constraints: tuple[RelationalConstraint, ...]
    truncated: bool = False


def characterizing_constraints(c: CloneId | str, rank_bound: int = 4) -> Characterization:
    """Relations ``(R, R)`` whose common polymorphisms form ``c``.

    Intersections take the union of their components' sets.  Rank-infinity
    separation families are cut off at ``rank_bound`` and flagged truncated.
    """
    c = as_clone(c)
    out: list[RelationalConstraint] = []
    truncated = False
    for base in c.components:
        if base in ("U", "W"):
            a = 1 if base == "U" else 0
            if c.rank == INF:
                out.extend(_separation_relation(m, a) for m in range(2, rank_bound + 1))
                truncated = True
            else:
                out.append(_separation_relation(int(c.rank), a))
        else:
            out.extend(_BASE_RELATIONS[base])
    return Characterization(tuple(out), truncated)


def membership_crosscheck(
    f: BoolFn, c: CloneId | str, rank_bound: int = 4, budget: int = DEFAULT_COLUMN_BUDGET
) -> bool:
    """Direct membership and preservation of the characterizing relations must agree."""
    c = as_clone(c)
    char = characterizing_constraints(c, rank_bound)
    if char.truncated and rank_bound < f.arity:
        raise DomainError(f"rank bound {rank_bound} cannot decide rank-infinity separation at arity {f.arity}")
    direct = is_member(f, c)
    by_relations = all(preserves(f, q, budget) for q in char.constraints)
    if direct != by_relations:
        raise ConsistencyError(
            f"{f} in {c}: direct definition says {direct}, preservation says {by_relations}"
        )
    return direct
