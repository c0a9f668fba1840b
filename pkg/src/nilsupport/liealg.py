"""The restricted Lie algebra gl_n over F_q and its commuting nilpotent variety.

A point of the variety of r-tuples is a NilTuple: r pairwise-commuting
n x n matrices B_s with B_s^p = 0.  Exhaustive enumeration is lexicographic
on concatenated entry lists; sampling is seeded and deterministic.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .ffmat import (DimensionMismatchError, FieldSpec, Matrix, field_from_obj,
                    field_to_obj, kernel_basis)

DEFAULT_BUDGET = 1 << 24


class BudgetExceededError(RuntimeError):
    """Requested enumeration is larger than the candidate budget."""


def bracket(x: Matrix, y: Matrix) -> Matrix:
    """Commutator [x, y] = xy - yx."""
    if x.rows != x.cols or y.rows != y.cols or x.rows != y.rows:
        raise DimensionMismatchError("bracket needs square matrices of equal size")
    return x.mul(y).sub(y.mul(x))


def p_power(x: Matrix) -> Matrix:
    """The p-operation of gl_n: the literal matrix p-th power."""
    if x.rows != x.cols:
        raise DimensionMismatchError("p_power needs a square matrix")
    return x.pow(x.field.p)


def is_commuting_nilpotent(mats) -> tuple:
    """Check the defining equations of the commuting nilpotent variety.

    Returns (True, None), or (False, description) naming the first violated
    equation: p-powers B_s^p = 0 in order, then commutators [B_i, B_j] = 0
    in lexicographic (i, j) order.
    """
    mats = tuple(mats)
    for s, b in enumerate(mats):
        if b.rows != b.cols:
            raise DimensionMismatchError("tuple entries must be square")
        if mats and (b.rows != mats[0].rows or b.field != mats[0].field):
            raise DimensionMismatchError("tuple entries must share size and field")
    for s, b in enumerate(mats):
        if not p_power(b).is_zero():
            return False, f"B[{s}]^p != 0"
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if not bracket(mats[i], mats[j]).is_zero():
                return False, f"[B[{i}], B[{j}]] != 0"
    return True, None


@dataclass(frozen=True)
class NilTuple:
    """An r-tuple of pairwise-commuting p-nilpotent n x n matrices."""

    n: int
    r: int
    mats: tuple
    field: FieldSpec

    def __post_init__(self):
        object.__setattr__(self, "mats", tuple(self.mats))
        if len(self.mats) != self.r:
            raise ValueError("tuple length does not match r")
        for b in self.mats:
            if (b.rows, b.cols) != (self.n, self.n):
                raise DimensionMismatchError("matrix size does not match n")
            if b.field != self.field:
                raise DimensionMismatchError("matrix field does not match")
        ok, why = is_commuting_nilpotent(self.mats)
        if not ok:
            raise ValueError(f"not a commuting nilpotent tuple: {why}")

    @classmethod
    def zero(cls, n, r, field):
        return cls(n, r, tuple(Matrix.zero(n, n, field) for _ in range(r)), field)

    def to_obj(self):
        return {"n": self.n, "r": self.r, "field": field_to_obj(self.field),
                "mats": [list(b.entries) for b in self.mats]}

    @classmethod
    def from_obj(cls, obj):
        f = field_from_obj(obj["field"])
        n, r = int(obj["n"]), int(obj["r"])
        mats = tuple(Matrix(n, n, tuple(int(e) for e in ent), f) for ent in obj["mats"])
        return cls(n, r, mats, f)

    def __str__(self):
        return "(" + ", ".join(str(b) for b in self.mats) + ")"


def nilpotent_matrices(n, field):
    """All p-nilpotent n x n matrices over F_q, in lexicographic entry order."""
    out = []
    for entries in itertools.product(field.elements(), repeat=n * n):
        b = Matrix(n, n, entries, field)
        if p_power(b).is_zero():
            out.append(b)
    return out


def enumerate_cr(n, r, field, budget=DEFAULT_BUDGET):
    """Every NilTuple of length r over F_q, lexicographic on concatenated entries.

    The raw candidate count q^(n^2 r) must fit the budget; callers wanting
    larger spaces should fall back to sample_cr.
    """
    if r < 1:
        raise ValueError("enumeration needs r >= 1")
    candidates = field.q ** (n * n * r)
    if candidates > budget:
        raise BudgetExceededError(
            f"{candidates} candidate tuples exceed budget {budget}; use sample_cr")
    nil = nilpotent_matrices(n, field)

    def gen():
        for mats in itertools.product(nil, repeat=r):
            ok = True
            for i in range(r):
                for j in range(i + 1, r):
                    if not bracket(mats[i], mats[j]).is_zero():
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                yield NilTuple(n, r, mats, field)

    return gen()


def _strict_upper_positions(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _random_strict_upper(n, field, rng):
    entries = [0] * (n * n)
    for i, j in _strict_upper_positions(n):
        entries[i * n + j] = rng.randrange(field.q)
    return Matrix(n, n, tuple(entries), field)


def _centralizer_sample(n, field, chosen, rng, tries=8):
    """A random strictly-upper matrix commuting with everything in `chosen`.

    Solves the commutator equations restricted to strictly-upper unknowns and
    draws from the kernel; falls back to scalar multiples of powers of the
    first chosen matrix, then to zero.
    """
    pos = _strict_upper_positions(n)
    if not chosen:
        for _ in range(tries):
            cand = _random_strict_upper(n, field, rng)
            if p_power(cand).is_zero():
                return cand
        return Matrix.zero(n, n, field)
    rows = []
    for b in chosen:
        for i in range(n):
            for j in range(n):
                row = []
                for (a, c) in pos:
                    # coefficient of X[a,c] in (XB - BX)[i,j]
                    v = b.entry(c, j) if a == i else 0
                    w = b.entry(i, a) if c == j else 0
                    row.append(field.sub(v, w))
                rows.append(row)
    system = Matrix.from_rows(rows, field) if rows else Matrix.zero(0, len(pos), field)
    kern = kernel_basis(system)
    for _ in range(tries):
        coeffs = [rng.randrange(field.q) for _ in kern]
        sol = [0] * len(pos)
        for c, kv in zip(coeffs, kern):
            if c:
                sol = [field.add(s, field.mul(c, e)) for s, e in zip(sol, kv)]
        entries = [0] * (n * n)
        for (a, cc), e in zip(pos, sol):
            entries[a * n + cc] = e
        cand = Matrix(n, n, tuple(entries), field)
        if p_power(cand).is_zero():
            return cand
    base = chosen[0]
    for _ in range(tries):
        c = rng.randrange(field.q)
        e = rng.randrange(1, n + 1)
        cand = base.pow(e).scale(c)
        if p_power(cand).is_zero():
            return cand
    return Matrix.zero(n, n, field)


def sample_cr(n, r, field, seed, rejection_limit=200):
    """A seeded, deterministic NilTuple: rejection sampling with a structured
    fallback through a common-centralizer search (the zero tuple always works).
    """
    rng = random.Random(seed)
    q = field.q
    for _ in range(rejection_limit):
        mats = tuple(Matrix(n, n, tuple(rng.randrange(q) for _ in range(n * n)), field)
                     for _ in range(r))
        ok, _why = is_commuting_nilpotent(mats)
        if ok:
            return NilTuple(n, r, mats, field)
    chosen = []
    for _ in range(r):
        chosen.append(_centralizer_sample(n, field, chosen, rng))
        ok, _why = is_commuting_nilpotent(chosen)
        if not ok:
            chosen[-1] = Matrix.zero(n, n, field)
    return NilTuple(n, r, tuple(chosen), field)
