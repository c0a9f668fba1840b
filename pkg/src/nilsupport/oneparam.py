"""Truncated exponentials of p-nilpotent matrices and 1-parameter subgroups.

A OneParamSubgroup wraps a NilTuple (B_0, ..., B_{r-1}) and stands for the
map t -> prod_s exp(B_s, t^(p^s)); each factor is the degree <= p-1 truncated
exponential, well defined because all factorials below p are invertible.
The exponential degree bound tells how many terms of a formal sequence a
given module can see.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice

from .ffmat import Matrix, PolyMatrix
from .liealg import NilTuple, p_power
from .repcore import ModuleExpr, evaluate


@dataclass(frozen=True)
class OneParamSubgroup:
    """t -> prod_{s<r} exp_{B_s}(t^(p^s)), for a commuting p-nilpotent tuple."""

    tuple: NilTuple

    @property
    def field(self):
        return self.tuple.field

    @property
    def n(self):
        return self.tuple.n

    @property
    def r(self):
        return self.tuple.r


def exp_nil(b: Matrix, negate: bool = False, degree_cap=None,
            truncating: bool = False) -> PolyMatrix:
    """The truncated exponential sum_{i<p} (+-t)^i B^i / i!, degree <= p-1."""
    if not p_power(b).is_zero():
        raise ValueError("matrix is not p-nilpotent")
    f = b.field
    p = f.p
    n = b.rows
    if degree_cap is None:
        degree_cap = p - 1
    terms = []
    power = Matrix.identity(n, f)
    factorial_inv = 1
    for i in range(p):
        if i:
            power = power.mul(b)
            factorial_inv = f.mul(factorial_inv, f.inv(i % p))
        c = factorial_inv
        if negate and i % 2:
            c = f.neg(c)
        terms.append(power.scale(c))
        if power.is_zero():
            break
    entries = []
    for row in range(n):
        for col in range(n):
            entries.append(tuple(t.entry(row, col) for t in terms))
    return PolyMatrix(n, n, tuple(entries), f, degree_cap, truncating)


def _psg_matrices(psg: OneParamSubgroup, degree_cap):
    """(g, g_inv) for the product of stretched exponential factors."""
    f = psg.field
    p = f.p
    n = psg.n
    g = PolyMatrix.identity(n, f, degree_cap)
    gi = PolyMatrix.identity(n, f, degree_cap)
    for s, b in enumerate(psg.tuple.mats):
        stretch = p**s
        g = g.mul(exp_nil(b, degree_cap=degree_cap).substitute_t_power(stretch))
        gi = gi.mul(exp_nil(b, negate=True, degree_cap=degree_cap).substitute_t_power(stretch))
    return g, gi


def psg_eval(psg: OneParamSubgroup, expr: ModuleExpr) -> PolyMatrix:
    """The action rho(psg(t)) on expr as a polynomial matrix.

    The inverse needed for Dual/Ad comes for free as the same product with
    negated exponentials, since exp_B(t) exp_B(-t) = 1 when B^p = 0.
    """
    f = psg.field
    p = f.p
    r = psg.r
    cap = max(expr.polynomial_degree(p), 1) * max(p**r - 1, 1)
    g, gi = _psg_matrices(psg, cap)
    return evaluate(expr, g, gi)


def exp_degree_bound(expr: ModuleExpr, p: int) -> int:
    """Smallest r with p^r > polydeg(expr) * (p - 1).

    Coefficient extraction of the action along exp_B(t) at degree p^s is then
    zero for every s >= r and every p-nilpotent B: the action matrix has
    t-degree at most polydeg * (p - 1).
    """
    target = expr.polynomial_degree(p) * (p - 1)
    r = 0
    while p**r <= target:
        r += 1
    return r


def truncate_formal(seq, expr: ModuleExpr, field) -> NilTuple:
    """Keep exactly the first exp_degree_bound terms of a formal sequence.

    Every discarded operator acts as zero on expr by the degree bound, so the
    retained prefix carries the whole local action.  Commutation and
    p-nilpotency are checked on the prefix only (by the NilTuple constructor).
    """
    r = exp_degree_bound(expr, field.p)
    mats = tuple(islice(seq, r))
    if len(mats) < r:
        raise ValueError(f"sequence ended before {r} terms")
    if mats:
        n = mats[0].rows
    else:
        n = expr.leaf_rank() or 0
    return NilTuple(n, r, mats, field)
