"""Constructions that move a function into SM, McU∞ or McW∞ while keeping
its B_l behaviour, plus transport of B_l violations along them."""

from __future__ import annotations

from enum import Enum

import numpy as np

from .asummability import AsummabilityWitness
from .boolfn import MAX_ARITY, BoolFn, Point, dual, hamming_weights
from .clones import INF, CloneId, is_member
from .constraints import ViolationMatrix, make_B
from .exceptions import DomainError, ResourceError, ValidationError


class ConstructionTag(str, Enum):
    GS = "gs"
    GMC = "gmc"
    GSM = "gsm"
    GUINF = "guinf"
    GMCUINF = "gmcuinf"
    GMCWINF = "gmcwinf"

    @property
    def target(self) -> CloneId:
        return _TARGETS[self]

    def arity(self, n: int) -> int:
        if self in (ConstructionTag.GS, ConstructionTag.GUINF):
            return n + 1
        if self is ConstructionTag.GMC:
            return 2 * n
        if self is ConstructionTag.GSM:
            return 2 * (n + 1)
        return 2 * n + 1


_TARGETS = {
    ConstructionTag.GS: CloneId("S"),
    ConstructionTag.GMC: CloneId("Mc"),
    ConstructionTag.GSM: CloneId("SM"),
    ConstructionTag.GUINF: CloneId("U", INF),
    ConstructionTag.GMCUINF: CloneId("McU", INF),
    ConstructionTag.GMCWINF: CloneId("McW", INF),
}

# single steps applied in order; "dual" complements points and swaps sides
_STEPS = {
    ConstructionTag.GS: ("gs",),
    ConstructionTag.GMC: ("gmc",),
    ConstructionTag.GSM: ("gs", "gmc"),
    ConstructionTag.GUINF: ("guinf",),
    ConstructionTag.GMCUINF: ("gmc", "guinf"),
    ConstructionTag.GMCWINF: ("gmc", "guinf", "dual"),
}


def _check_size(arity: int) -> None:
    if arity > MAX_ARITY:
        raise ResourceError(f"constructed arity {arity} exceeds the table ceiling {MAX_ARITY}")


def g_s(f: BoolFn) -> BoolFn:
    """``(x_{n+1} and f(x)) or (not x_{n+1} and f^d(x))``; always self-dual."""
    _check_size(f.arity + 1)
    table = np.empty(1 << (f.arity + 1), dtype=np.uint8)
    table[1::2] = f.table
    table[0::2] = dual(f).table
    return BoolFn(f.arity + 1, table)


def g_mc(f: BoolFn) -> BoolFn:
    """Arity ``2n``: weight below ``n`` gives 0, above gives 1, ``(a, not a)`` gives
    ``f(a)``, otherwise the value at the first ``i`` with ``x_i = x_{n+i}``."""
    n = f.arity
    _check_size(2 * n)
    size = 1 << (2 * n)
    idx = np.arange(size, dtype=np.int64)
    mask = (1 << n) - 1
    first, second = idx >> n, idx & mask
    weight = hamming_weights(2 * n)
    table = np.zeros(size, dtype=np.uint8)
    table[weight > n] = 1
    balanced = weight == n
    complementary = (first ^ second) == mask
    sel = balanced & complementary
    table[sel] = f.table[first[sel]]
    pending = balanced & ~complementary
    for i in range(1, n + 1):
        bit = n - i
        equal_here = pending & ((((first ^ second) >> bit) & 1) == 0)
        table[equal_here] = ((first[equal_here] >> bit) & 1).astype(np.uint8)
        pending &= ~equal_here
    return BoolFn(2 * n, table)


def g_uinf(f: BoolFn) -> BoolFn:
    """``x_{n+1} and f(x)``."""
    _check_size(f.arity + 1)
    table = np.zeros(1 << (f.arity + 1), dtype=np.uint8)
    table[1::2] = f.table
    return BoolFn(f.arity + 1, table)


def g_sm(f: BoolFn) -> BoolFn:
    _check_size(2 * (f.arity + 1))
    return g_mc(g_s(f))


def g_mc_uinf(f: BoolFn) -> BoolFn:
    _check_size(2 * f.arity + 1)
    return g_uinf(g_mc(f))


def g_mc_winf(f: BoolFn) -> BoolFn:
    return dual(g_mc_uinf(f))


_BUILDERS = {
    ConstructionTag.GS: g_s,
    ConstructionTag.GMC: g_mc,
    ConstructionTag.GSM: g_sm,
    ConstructionTag.GUINF: g_uinf,
    ConstructionTag.GMCUINF: g_mc_uinf,
    ConstructionTag.GMCWINF: g_mc_winf,
}


def construct(f: BoolFn, tag: ConstructionTag | str) -> BoolFn:
    tag = ConstructionTag(tag)
    _check_size(tag.arity(f.arity))
    return _BUILDERS[tag](f)


def membership_report(g: BoolFn, tag: ConstructionTag | str) -> dict:
    tag = ConstructionTag(tag)
    target = tag.target
    return {"clone": str(target), "member": bool(is_member(g, target))}


# witness transport


def _step_up(w: AsummabilityWitness, step: str) -> AsummabilityWitness:
    if step in ("gs", "guinf"):
        # the extra coordinate is 1 everywhere, and the all-ones column lies in R(B_l)
        return AsummabilityWitness(
            w.ell,
            tuple(p + (1,) for p in w.false_points),
            tuple(p + (1,) for p in w.true_points),
        )
    if step == "gmc":
        return AsummabilityWitness(
            w.ell,
            tuple(p + tuple(1 - b for b in p) for p in w.false_points),
            tuple(p + tuple(1 - b for b in p) for p in w.true_points),
        )
    if step == "dual":
        # f^d(not x) = not f(x): complemented true points are false points of the dual
        return AsummabilityWitness(
            w.ell,
            tuple(tuple(1 - b for b in p) for p in w.true_points),
            tuple(tuple(1 - b for b in p) for p in w.false_points),
        )
    raise DomainError(step)


def transport_witness_up(
    w: AsummabilityWitness,
    f: BoolFn,
    tag: ConstructionTag | str,
    constructed: BoolFn | None = None,
) -> AsummabilityWitness:
    """Carry an equal-sums witness for ``f`` to one for the constructed function."""
    tag = ConstructionTag(tag)
    w.validate(f)
    out = w
    for step in _STEPS[tag]:
        out = _step_up(out, step)
    g = constructed if constructed is not None else construct(f, tag)
    out.validate(g)
    return out


def _normalize_gs_violation(m: ViolationMatrix, ell: int) -> tuple[list[Point], int]:
    """Rows reordered so that ``z = 0^l 1^l`` and the last column reads
    ``0^a 1^b 0^a 1^b``; returns the rows and ``a``."""
    rows = list(m.rows)
    z = tuple(m.z)
    if z == (1,) * ell + (0,) * ell:
        rows = rows[ell:] + rows[:ell]
    elif z != (0,) * ell + (1,) * ell:
        raise ValidationError(f"image {z} is not half-constant")
    top = sorted(rows[:ell], key=lambda r: r[-1])
    bottom = sorted(rows[ell:], key=lambda r: r[-1])
    alpha = sum(1 for r in top if r[-1] == 0)
    if alpha != sum(1 for r in bottom if r[-1] == 0):
        raise ValidationError("last column is not in R(B_l)")
    return top + bottom, alpha


def transport_witness_down_gs(m: ViolationMatrix, f: BoolFn, ell: int) -> ViolationMatrix:
    """Turn a ``B_l`` violation of ``g_s(f)`` into one of ``f``.

    After normalization the last column is dropped, rows ``1..a`` and
    ``l+1..l+a`` are complemented, and those two blocks are swapped.
    """
    q = make_B(ell)
    g = g_s(f)
    m.validate(g, q)
    rows, alpha = _normalize_gs_violation(m, ell)
    k_rows: list[Point] = []
    for i in range(2 * ell):
        if i < alpha:
            src, neg = rows[i + ell], True
        elif ell <= i < ell + alpha:
            src, neg = rows[i - ell], True
        else:
            src, neg = rows[i], False
        body = src[:-1]
        k_rows.append(tuple(1 - b for b in body) if neg else tuple(body))
    out = ViolationMatrix(tuple(k_rows), tuple(f(r) for r in k_rows))
    out.validate(f, q)
    return out
