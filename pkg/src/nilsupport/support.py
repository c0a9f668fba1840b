"""Local p-nilpotent operators, Jordan types, and support membership.

The local operator of a module at a tuple (B_0, ..., B_{r-1}) is the sum over
s of the t^(p^s) coefficient of the action along exp_{B_s}(t); a point lies
in the support when that operator is not free over k[u]/u^p, i.e. when some
Jordan block has size < p.  The comparison operator mu extracts the
t^(p^{r-1}) coefficient of the full product subgroup instead; the two signal
the same membership after reversing the tuple.

verify_properties mechanises the structural laws (sum, tensor, short exact
sequences, twist shift, injectivity direction, conjugation stability, and the
mu/alpha comparison) pointwise over a supplied grid of modules and tuples.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from .ffmat import (FieldSpec, Matrix, PolyMatrix, SingularMatrixError,
                    field_to_obj, frob_power, inverse, rank)
from .liealg import (DEFAULT_BUDGET, NilTuple, enumerate_cr, sample_cr)
from .oneparam import OneParamSubgroup, exp_degree_bound, exp_nil, psg_eval
from .repcore import (EAModule, ModuleExpr, Sum, Tensor, Twist, Def, Sym,
                      ea_free, evaluate, quotient_and_restrict)


class InvariantViolation(RuntimeError):
    """An internal invariant failed; this signals an implementation bug."""


# ---------------------------------------------------------------------------
# Jordan types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JordanType:
    """Block-size partition of a nilpotent operator, largest first."""

    partition: tuple

    @property
    def total(self):
        return sum(self.partition)

    def is_free(self, p) -> bool:
        return all(part == p for part in self.partition)

    def __str__(self):
        return "[" + ",".join(str(x) for x in self.partition) + "]"


@dataclass(frozen=True)
class LocalOperator:
    """A p-nilpotent operator on a module, remembering where it came from."""

    matrix: Matrix
    module: object = None
    point: object = None

    def __post_init__(self):
        p = self.matrix.field.p
        if not self.matrix.pow(p).is_zero():
            raise InvariantViolation(
                "local operator is not p-nilpotent; this is a bug")


def _as_matrix(op):
    return op.matrix if isinstance(op, LocalOperator) else op


def jordan_type(op) -> JordanType:
    """Jordan block sizes from the rank-difference formula.

    blocks of size j = rank(N^(j-1)) - 2 rank(N^j) + rank(N^(j+1)).
    """
    nmat = _as_matrix(op)
    dim = nmat.rows
    ranks = [dim]
    power = nmat
    while not power.is_zero():
        ranks.append(rank(power))
        if len(ranks) > dim + 1:
            raise ValueError("operator is not nilpotent")
        power = power.mul(nmat)
    ranks.append(0)
    index = len(ranks) - 1  # smallest e with N^e = 0
    parts = []
    for j in range(index, 0, -1):
        r_prev = ranks[j - 1]
        r_j = ranks[j] if j < len(ranks) else 0
        r_next = ranks[j + 1] if j + 1 < len(ranks) else 0
        parts.extend([j] * (r_prev - 2 * r_j + r_next))
    jt = JordanType(tuple(parts))
    if jt.total != dim:
        raise InvariantViolation("Jordan blocks do not sum to the dimension")
    return jt


# ---------------------------------------------------------------------------
# local operators at 1-parameter subgroups
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _exp_action(expr: ModuleExpr, bmat: Matrix):
    p = bmat.field.p
    cap = max(expr.polynomial_degree(p), 1) * (p - 1)
    return evaluate(expr, exp_nil(bmat, degree_cap=cap),
                    exp_nil(bmat, negate=True, degree_cap=cap))


def alpha_matrix(expr: ModuleExpr, point: NilTuple) -> Matrix:
    """sum_s [t^(p^s)-coefficient of the action along exp_{B_s}(t)]."""
    f = point.field
    p = f.p
    dim = expr.dim
    acc = Matrix.zero(dim, dim, f)
    for s, b in enumerate(point.mats):
        acc = acc.add(_exp_action(expr, b).coeff(p**s))
    return acc


def alpha_operator(expr: ModuleExpr, point: NilTuple) -> LocalOperator:
    return LocalOperator(alpha_matrix(expr, point), module=expr, point=point)


def mu_matrix(expr: ModuleExpr, point: NilTuple) -> Matrix:
    """t^(p^{r-1})-coefficient of the action along the full product subgroup."""
    f = point.field
    if point.r == 0:
        return Matrix.zero(expr.dim, expr.dim, f)
    acted = psg_eval(OneParamSubgroup(point), expr)
    return acted.coeff(f.p ** (point.r - 1))


def mu_operator(expr: ModuleExpr, point: NilTuple) -> LocalOperator:
    return LocalOperator(mu_matrix(expr, point), module=expr, point=point)


def lambda_reverse(point: NilTuple) -> NilTuple:
    """Reverse the tuple; an involution on commuting nilpotent tuples."""
    return NilTuple(point.n, point.r, tuple(reversed(point.mats)), point.field)


def conjugate_tuple(point: NilTuple, g: Matrix) -> NilTuple:
    """(g B_0 g^-1, ..., g B_{r-1} g^-1); g must be invertible."""
    gi = inverse(g)
    mats = tuple(g.mul(b).mul(gi) for b in point.mats)
    return NilTuple(point.n, point.r, mats, point.field)


def scale_tuple(point: NilTuple, a) -> NilTuple:
    """The tuple of E_B(a t): component s gets multiplied by a^(p^s)."""
    f = point.field
    mats = tuple(b.scale(f.pow(a, f.p**s)) for s, b in enumerate(point.mats))
    return NilTuple(point.n, point.r, mats, f)


def _matrix_not_free(mat: Matrix, dim: int, p: int) -> bool:
    # not free over k[u]/u^p  <=>  p * rank(N^(p-1)) < dim
    return p * rank(mat.pow(p - 1)) < dim


def in_support(expr: ModuleExpr, point: NilTuple) -> bool:
    """True iff the local operator at the point is not free over k[u]/u^p."""
    return _matrix_not_free(alpha_matrix(expr, point), expr.dim, point.field.p)


def in_support_mu(expr: ModuleExpr, point: NilTuple) -> bool:
    return _matrix_not_free(mu_matrix(expr, point), expr.dim, point.field.p)


# ---------------------------------------------------------------------------
# additive-group modules (elementary abelian form)
# ---------------------------------------------------------------------------

def ga_alpha(mod: EAModule, scalars) -> LocalOperator:
    """Local operator of a G_a-module at the additive 1-parameter subgroup
    with coefficient sequence `scalars`: sum_s b_s^(p^s) * ops_s.

    The closed form is checked against ga_alpha_generic by the test suite;
    this is the fast path.
    """
    f = mod.field
    b = list(scalars)
    if len(b) > mod.r:
        raise ValueError("more scalars than operators")
    b += [0] * (mod.r - len(b))
    acc = Matrix.zero(mod.m, mod.m, f)
    for s, (bs, u) in enumerate(zip(b, mod.ops)):
        if bs:
            acc = acc.add(u.scale(f.pow(bs, f.p**s)))
    return LocalOperator(acc, module=mod, point=tuple(b))


def ga_alpha_generic(mod: EAModule, scalars) -> Matrix:
    """Independent route: build the generic polynomial action
    prod_j exp(ops_j t^(p^j)), substitute t -> b_s t factor-wise per the local
    action definition, and extract the t^(p^s) coefficients.
    """
    f = mod.field
    p = f.p
    b = list(scalars)
    b += [0] * (mod.r - len(b))
    cap = max(p**mod.r - 1, 1)
    action = PolyMatrix.identity(mod.m, f, cap)
    for j, u in enumerate(mod.ops):
        action = action.mul(exp_nil(u, degree_cap=cap).substitute_t_power(p**j))
    acc = Matrix.zero(mod.m, mod.m, f)
    for s, bs in enumerate(b):
        acc = acc.add(action.scale_t(bs).coeff(p**s))
    return acc


def ea_restriction(expr: ModuleExpr, point: NilTuple) -> EAModule:
    """The module restricted along the 1-parameter subgroup of the point, as
    an elementary-abelian module: operator s is the t^(p^s) coefficient of the
    product-subgroup action."""
    f = point.field
    acted = psg_eval(OneParamSubgroup(point), expr)
    ops = tuple(acted.coeff(f.p**s) for s in range(point.r))
    return EAModule(expr.dim, point.r, ops, f)


# ---------------------------------------------------------------------------
# support reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SupportReport:
    """Per-point Jordan types and membership for one module over one field."""

    module: str
    field: FieldSpec
    scope: dict
    rows: tuple  # of (NilTuple, JordanType, bool)

    @property
    def total(self):
        return len(self.rows)

    @property
    def in_support_count(self):
        return sum(1 for _, _, flag in self.rows if flag)

    def to_obj(self):
        return {
            "module": self.module,
            "field": field_to_obj(self.field),
            "scope": self.scope,
            "rows": [{"tuple": pt.to_obj(), "jordan_type": list(jt.partition),
                      "in_support": flag}
                     for pt, jt, flag in self.rows],
            "summary": {"total": self.total,
                        "in_support_count": self.in_support_count},
        }

    def csv_rows(self):
        header = ["index", "n", "r", "p", "m", "mats", "jordan_type", "in_support"]
        out = [header]
        for i, (pt, jt, flag) in enumerate(self.rows):
            mats = "|".join(" ".join(str(e) for e in b.entries) for b in pt.mats)
            out.append([str(i), str(pt.n), str(pt.r), str(pt.field.p),
                        str(pt.field.m), mats,
                        " ".join(str(x) for x in jt.partition),
                        "1" if flag else "0"])
        return out


def _report_rows(expr, points, p):
    rows = []
    for pt in points:
        jt = jordan_type(alpha_operator(expr, pt))
        rows.append((pt, jt, not jt.is_free(p)))
    return tuple(rows)


def enumerate_support(expr: ModuleExpr, n, r, field, budget=DEFAULT_BUDGET) -> SupportReport:
    """Jordan type and membership at every enumerated tuple, in canonical order."""
    points = list(enumerate_cr(n, r, field, budget=budget))
    return SupportReport(expr.dsl(), field,
                         {"kind": "enumerate", "params": {"n": n, "r": r, "budget": budget}},
                         _report_rows(expr, points, field.p))


def sample_support(expr: ModuleExpr, n, r, field, seed, count) -> SupportReport:
    points = [sample_cr(n, r, field, seed + i) for i in range(count)]
    return SupportReport(expr.dsl(), field,
                         {"kind": "sample", "params": {"n": n, "r": r, "seed": seed,
                                                       "count": count}},
                         _report_rows(expr, points, field.p))


# ---------------------------------------------------------------------------
# the property suite
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ItemResult:
    item: int
    passed: bool
    checked: int
    counterexample: str = None

    def to_obj(self):
        return {"item": self.item, "passed": self.passed, "checked": self.checked,
                "counterexample": self.counterexample}


@dataclass(frozen=True)
class VerifyReport:
    items: tuple  # of ItemResult, ascending by item

    @property
    def all_passed(self):
        return all(it.passed for it in self.items)

    def to_obj(self):
        return {"items": [it.to_obj() for it in self.items],
                "all_passed": self.all_passed}


def _random_invertible(n, field, rng):
    while True:
        cand = Matrix(n, n, tuple(rng.randrange(field.q) for _ in range(n * n)), field)
        try:
            inverse(cand)
        except SingularMatrixError:
            continue
        return cand


def _fp_entries(point: NilTuple) -> bool:
    p = point.field.p
    return all(e < p for b in point.mats for e in b.entries)


def verify_properties(modules, tuples, items, *, seed=0, conjugations=8,
                      membership=None) -> VerifyReport:
    """Check the requested structural properties pointwise on a grid.

    modules: ModuleExpr list; tuples: NilTuple list over one field with one
    (n, r); items: subset of {1, 3, 4, 5, 6, 7, 8}.  Failures are report
    content (first counterexample per item), never exceptions.  `membership`
    lets a harness substitute the pointwise membership predicate.
    """
    modules = list(modules)
    tuples = list(tuples)
    items = sorted(set(items))
    bad = [i for i in items if i not in {1, 3, 4, 5, 6, 7, 8}]
    if bad:
        raise ValueError(f"unknown verify items {bad}")
    memb = membership if membership is not None else in_support
    results = []
    for item in items:
        results.append(_VERIFY_DISPATCH[item](modules, tuples, memb, seed, conjugations))
    return VerifyReport(tuple(results))


def _pairs(seq):
    return [(a, b) for i, a in enumerate(seq) for b in seq[i:]]


def _verify_1(modules, tuples, memb, seed, conjugations):
    checked = 0
    for pt in tuples:
        p = pt.field.p
        for mod in modules:
            if exp_degree_bound(mod, p) > pt.r:
                continue
            via_mu = in_support_mu(mod, pt)
            via_alpha = memb(mod, lambda_reverse(pt))
            checked += 1
            if via_mu != via_alpha:
                return ItemResult(1, False, checked,
                                  f"module={mod.dsl()} tuple={pt} mu={via_mu} "
                                  f"alpha_reversed={via_alpha}")
    return ItemResult(1, True, checked)


def _verify_3(modules, tuples, memb, seed, conjugations):
    checked = 0
    for m1, m2 in _pairs(modules):
        both = Sum(m1, m2)
        for pt in tuples:
            lhs = memb(both, pt)
            rhs = memb(m1, pt) or memb(m2, pt)
            checked += 1
            if lhs != rhs:
                return ItemResult(3, False, checked,
                                  f"sum({m1.dsl()},{m2.dsl()}) tuple={pt} "
                                  f"sum_membership={lhs} or={rhs}")
    return ItemResult(3, True, checked)


def _verify_4(modules, tuples, memb, seed, conjugations):
    checked = 0
    for m1, m2 in _pairs(modules):
        both = Tensor(m1, m2)
        for pt in tuples:
            lhs = memb(both, pt)
            rhs = memb(m1, pt) and memb(m2, pt)
            checked += 1
            if lhs != rhs:
                return ItemResult(4, False, checked,
                                  f"ten({m1.dsl()},{m2.dsl()}) tuple={pt} "
                                  f"tensor_membership={lhs} and={rhs}")
    return ItemResult(4, True, checked)


def _two_of_three(flags):
    a, b, c = flags
    return (not a or (b or c)) and (not b or (a or c)) and (not c or (a or b))


def _verify_5(modules, tuples, memb, seed, conjugations):
    checked = 0
    # split sequences 0 -> M1 -> M1 (+) M3 -> M3 -> 0
    for m1, m3 in _pairs(modules):
        m2 = Sum(m1, m3)
        for pt in tuples:
            flags = (in_support(m1, pt), in_support(m2, pt), in_support(m3, pt))
            checked += 1
            if not _two_of_three(flags):
                return ItemResult(5, False, checked,
                                  f"split {m1.dsl()} {m3.dsl()} tuple={pt} flags={flags}")
    # the invariant-subspace family W = span{x_i^p} inside Sym(p, Def(n))
    if tuples:
        field = tuples[0].field
        p = field.p
        n = tuples[0].n
        big = Sym(p, Def(n))
        mono_index = {mon: i for i, mon in enumerate(big.monomials)}
        w_basis = []
        for i in range(n):
            v = [0] * big.dim
            v[mono_index[(i,) * p]] = 1
            w_basis.append(tuple(v))
        for pt in tuples:
            amat = alpha_matrix(big, pt)
            restr, quot = quotient_and_restrict(amat, w_basis)
            flags = (_matrix_not_free(restr, len(w_basis), p),
                     _matrix_not_free(amat, big.dim, p),
                     _matrix_not_free(quot, big.dim - len(w_basis), p))
            checked += 1
            if not _two_of_three(flags):
                return ItemResult(5, False, checked,
                                  f"W<Sym({p},def({n})) tuple={pt} flags={flags}")
    return ItemResult(5, True, checked)


def _verify_6(modules, tuples, memb, seed, conjugations):
    checked = 0
    for mod in modules:
        twisted = Twist(mod, 1)
        for pt in tuples:
            if not _fp_entries(pt):
                continue
            shifted = NilTuple(pt.n, pt.r - 1,
                               tuple(frob_power(b, 1) for b in pt.mats[1:]),
                               pt.field)
            lhs = memb(twisted, pt)
            rhs = memb(mod, shifted)
            checked += 1
            if lhs != rhs:
                return ItemResult(6, False, checked,
                                  f"tw({mod.dsl()},1) tuple={pt} twist={lhs} shifted={rhs}")
    return ItemResult(6, True, checked)


def _verify_7(modules, tuples, memb, seed, conjugations):
    checked = 0
    for mod in modules:
        for pt in tuples:
            ea = ea_restriction(mod, pt)
            if not ea_free(ea):
                continue
            f = pt.field
            for scalars in itertools.product(f.elements(), repeat=pt.r):
                if not any(scalars):
                    continue
                op = ga_alpha(ea, scalars)
                checked += 1
                if _matrix_not_free(op.matrix, ea.m, f.p):
                    return ItemResult(7, False, checked,
                                      f"module={mod.dsl()} tuple={pt} "
                                      f"scalars={scalars}: free restriction but "
                                      f"sampled point in support")
    return ItemResult(7, True, checked)


def _verify_8(modules, tuples, memb, seed, conjugations):
    checked = 0
    rng = random.Random(seed)
    for mod in modules:
        for pt in tuples:
            base = memb(mod, pt)
            for _ in range(conjugations):
                g = _random_invertible(pt.n, pt.field, rng)
                moved = conjugate_tuple(pt, g)
                checked += 1
                if memb(mod, moved) != base:
                    return ItemResult(8, False, checked,
                                      f"module={mod.dsl()} tuple={pt} g={g} "
                                      f"membership changed under conjugation")
    return ItemResult(8, True, checked)


_VERIFY_DISPATCH = {1: _verify_1, 3: _verify_3, 4: _verify_4, 5: _verify_5,
                    6: _verify_6, 7: _verify_7, 8: _verify_8}
