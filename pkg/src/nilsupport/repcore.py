"""Finite-dimensional polynomial GL_n-modules as construction trees.

A ModuleExpr is a tree over Def/Triv/Dual/Sum/Tensor/Sym/Ext/Twist/Ad with a
canonical ordered basis; `evaluate` produces the action matrix of a group
element (scalar or polynomial matrix) on that basis.  Basis orders are fixed
once and for all:

  * Sym(d) uses degree-lex monomials with x1 > ... > xn,
  * Ext(d) uses ascending index sets in lex order,
  * Tensor is left-factor major,
  * Ad(n) uses the elementary-matrix basis E[i,j] in row-major order.

Also here: the elementary-abelian module form EAModule (r commuting
p-nilpotent operators) with its freeness test, submodule closure, an
exhaustive irreducibility test, and restriction/quotient of a nilpotent
operator along an invariant subspace.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .ffmat import (DimensionMismatchError, EchelonBasis, FieldSpec, Matrix,
                    PolyMatrix, frob_power, inverse, rank, rref)
from .liealg import DEFAULT_BUDGET, BudgetExceededError, is_commuting_nilpotent


class MissingInverseError(ValueError):
    """Dual or Ad evaluation without the required inverse."""


def _binom(n, k):
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


# ---------------------------------------------------------------------------
# expression trees
# ---------------------------------------------------------------------------

class ModuleExpr:
    """Base class of module construction trees (immutable)."""

    def leaf_rank(self):
        """The common n of all Def/Ad leaves, or None if there are none."""
        ranks = set()
        self._collect_ranks(ranks)
        if len(ranks) > 1:
            raise ValueError(f"mixed leaf sizes {sorted(ranks)}")
        return next(iter(ranks)) if ranks else None

    def _collect_ranks(self, acc):
        for child in self._children():
            child._collect_ranks(acc)

    def _children(self):
        return ()

    def polynomial_degree(self, p) -> int:
        raise NotImplementedError

    def basis_weights(self, p, n=None):
        """Integer weight vector (length n) of each canonical basis vector."""
        if n is None:
            n = self.leaf_rank() or 0
        return self._weights(n, p)

    def basis_labels(self):
        raise NotImplementedError

    def dsl(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.dsl()

    def to_obj(self):
        raise NotImplementedError

    def has_twist(self):
        return any(c.has_twist() for c in self._children())

    def evaluate(self, g, g_inv=None):
        return evaluate(self, g, g_inv)


@dataclass(frozen=True)
class Triv(ModuleExpr):
    @cached_property
    def dim(self):
        return 1

    def polynomial_degree(self, p):
        return 0

    def _weights(self, n, p):
        return ((0,) * n,)

    def basis_labels(self):
        return ("1",)

    def dsl(self):
        return "triv"

    def to_obj(self):
        return {"kind": "triv"}


@dataclass(frozen=True)
class Def(ModuleExpr):
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("def needs n >= 1")

    @cached_property
    def dim(self):
        return self.n

    def _collect_ranks(self, acc):
        acc.add(self.n)

    def polynomial_degree(self, p):
        return 1

    def _weights(self, n, p):
        return tuple(tuple(1 if j == i else 0 for j in range(n)) for i in range(self.n))

    def basis_labels(self):
        return tuple(f"x{i+1}" for i in range(self.n))

    def dsl(self):
        return f"def({self.n})"

    def to_obj(self):
        return {"kind": "def", "n": self.n}


@dataclass(frozen=True)
class Ad(ModuleExpr):
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("ad needs n >= 1")

    @cached_property
    def dim(self):
        return self.n * self.n

    def _collect_ranks(self, acc):
        acc.add(self.n)

    def polynomial_degree(self, p):
        # g X g^-1 with the closed-form inverse: degree 1 + 1
        return 2

    def _weights(self, n, p):
        out = []
        for i in range(self.n):
            for j in range(self.n):
                w = [0] * n
                w[i] += 1
                w[j] -= 1
                out.append(tuple(w))
        return tuple(out)

    def basis_labels(self):
        return tuple(f"E[{i+1},{j+1}]" for i in range(self.n) for j in range(self.n))

    def dsl(self):
        return f"ad({self.n})"

    def to_obj(self):
        return {"kind": "ad", "n": self.n}


@dataclass(frozen=True)
class Dual(ModuleExpr):
    inner: ModuleExpr

    def _children(self):
        return (self.inner,)

    @cached_property
    def dim(self):
        return self.inner.dim

    def polynomial_degree(self, p):
        return self.inner.polynomial_degree(p)

    def _weights(self, n, p):
        return tuple(tuple(-c for c in w) for w in self.inner._weights(n, p))

    def basis_labels(self):
        return tuple(f"{l}*" for l in self.inner.basis_labels())

    def dsl(self):
        return f"dual({self.inner.dsl()})"

    def to_obj(self):
        return {"kind": "dual", "inner": self.inner.to_obj()}


@dataclass(frozen=True)
class Sum(ModuleExpr):
    left: ModuleExpr
    right: ModuleExpr

    def __post_init__(self):
        self.leaf_rank()

    def _children(self):
        return (self.left, self.right)

    @cached_property
    def dim(self):
        return self.left.dim + self.right.dim

    def polynomial_degree(self, p):
        return max(self.left.polynomial_degree(p), self.right.polynomial_degree(p))

    def _weights(self, n, p):
        return self.left._weights(n, p) + self.right._weights(n, p)

    def basis_labels(self):
        return (tuple(f"L:{l}" for l in self.left.basis_labels())
                + tuple(f"R:{l}" for l in self.right.basis_labels()))

    def dsl(self):
        return f"sum({self.left.dsl()},{self.right.dsl()})"

    def to_obj(self):
        return {"kind": "sum", "left": self.left.to_obj(), "right": self.right.to_obj()}


@dataclass(frozen=True)
class Tensor(ModuleExpr):
    left: ModuleExpr
    right: ModuleExpr

    def __post_init__(self):
        self.leaf_rank()

    def _children(self):
        return (self.left, self.right)

    @cached_property
    def dim(self):
        return self.left.dim * self.right.dim

    def polynomial_degree(self, p):
        return self.left.polynomial_degree(p) + self.right.polynomial_degree(p)

    def _weights(self, n, p):
        wl = self.left._weights(n, p)
        wr = self.right._weights(n, p)
        return tuple(tuple(a + b for a, b in zip(u, v)) for u in wl for v in wr)

    def basis_labels(self):
        ll = self.left.basis_labels()
        rl = self.right.basis_labels()
        return tuple(f"({a})x({b})" for a in ll for b in rl)

    def dsl(self):
        return f"ten({self.left.dsl()},{self.right.dsl()})"

    def to_obj(self):
        return {"kind": "ten", "left": self.left.to_obj(), "right": self.right.to_obj()}


@dataclass(frozen=True)
class Sym(ModuleExpr):
    d: int
    inner: ModuleExpr

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("sym needs d >= 0")

    def _children(self):
        return (self.inner,)

    @cached_property
    def dim(self):
        return _binom(self.inner.dim + self.d - 1, self.d)

    @cached_property
    def monomials(self):
        # multisets of inner basis indices; cwr order = degree-lex, x1 > ... > xn
        return tuple(itertools.combinations_with_replacement(range(self.inner.dim), self.d))

    def polynomial_degree(self, p):
        return self.d * self.inner.polynomial_degree(p)

    def _weights(self, n, p):
        wi = self.inner._weights(n, p)
        out = []
        for mon in self.monomials:
            w = [0] * n
            for i in mon:
                w = [a + b for a, b in zip(w, wi[i])]
            out.append(tuple(w))
        return tuple(out)

    def basis_labels(self):
        lbl = self.inner.basis_labels()
        out = []
        for mon in self.monomials:
            parts = []
            for i, grp in itertools.groupby(mon):
                e = len(list(grp))
                parts.append(lbl[i] if e == 1 else f"{lbl[i]}^{e}")
            out.append("*".join(parts) if parts else "1")
        return tuple(out)

    def dsl(self):
        return f"sym({self.d},{self.inner.dsl()})"

    def to_obj(self):
        return {"kind": "sym", "d": self.d, "inner": self.inner.to_obj()}


@dataclass(frozen=True)
class Ext(ModuleExpr):
    d: int
    inner: ModuleExpr

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("ext needs d >= 0")
        if self.d > self.inner.dim:
            raise ValueError(f"ext degree {self.d} exceeds dim {self.inner.dim}")

    def _children(self):
        return (self.inner,)

    @cached_property
    def dim(self):
        return _binom(self.inner.dim, self.d)

    @cached_property
    def subsets(self):
        return tuple(itertools.combinations(range(self.inner.dim), self.d))

    def polynomial_degree(self, p):
        return self.d * self.inner.polynomial_degree(p)

    def _weights(self, n, p):
        wi = self.inner._weights(n, p)
        out = []
        for sub in self.subsets:
            w = [0] * n
            for i in sub:
                w = [a + b for a, b in zip(w, wi[i])]
            out.append(tuple(w))
        return tuple(out)

    def basis_labels(self):
        lbl = self.inner.basis_labels()
        return tuple("^".join(lbl[i] for i in sub) if sub else "1" for sub in self.subsets)

    def dsl(self):
        return f"ext({self.d},{self.inner.dsl()})"

    def to_obj(self):
        return {"kind": "ext", "d": self.d, "inner": self.inner.to_obj()}


@dataclass(frozen=True)
class Twist(ModuleExpr):
    inner: ModuleExpr
    r: int

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("twist needs r >= 0")

    def _children(self):
        return (self.inner,)

    @cached_property
    def dim(self):
        return self.inner.dim

    def polynomial_degree(self, p):
        return p**self.r * self.inner.polynomial_degree(p)

    def _weights(self, n, p):
        scale = p**self.r
        return tuple(tuple(scale * c for c in w) for w in self.inner._weights(n, p))

    def basis_labels(self):
        return tuple(f"{l}^[{self.r}]" for l in self.inner.basis_labels())

    def dsl(self):
        return f"tw({self.inner.dsl()},{self.r})"

    def to_obj(self):
        return {"kind": "tw", "inner": self.inner.to_obj(), "r": self.r}

    def has_twist(self):
        return True


def expr_from_obj(obj) -> ModuleExpr:
    kind = obj["kind"]
    if kind == "triv":
        return Triv()
    if kind == "def":
        return Def(int(obj["n"]))
    if kind == "ad":
        return Ad(int(obj["n"]))
    if kind == "dual":
        return Dual(expr_from_obj(obj["inner"]))
    if kind == "sum":
        return Sum(expr_from_obj(obj["left"]), expr_from_obj(obj["right"]))
    if kind == "ten":
        return Tensor(expr_from_obj(obj["left"]), expr_from_obj(obj["right"]))
    if kind == "sym":
        return Sym(int(obj["d"]), expr_from_obj(obj["inner"]))
    if kind == "ext":
        return Ext(int(obj["d"]), expr_from_obj(obj["inner"]))
    if kind == "tw":
        return Twist(expr_from_obj(obj["inner"]), int(obj["r"]))
    raise ValueError(f"unknown expression kind {kind!r}")


# ---------------------------------------------------------------------------
# weight tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightTable:
    """Weights with multiplicities, sorted descending-lex; sums to dim."""

    entries: tuple

    @property
    def total(self):
        return sum(m for _, m in self.entries)

    def as_dict(self):
        return {w: m for w, m in self.entries}


def weights(expr: ModuleExpr, p=None) -> WeightTable:
    """Tally the canonical basis weights of expr (p needed only under Twist)."""
    if expr.has_twist() and p is None:
        raise ValueError("weights of a twisted expression need p")
    counts = {}
    for w in expr.basis_weights(p if p is not None else 2):
        counts[w] = counts.get(w, 0) + 1
    ordered = tuple(sorted(counts.items(), key=lambda kv: kv[0], reverse=True))
    return WeightTable(ordered)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

class _MatOps:
    """Entry-ring adapter so evaluation code is generic over Matrix/PolyMatrix."""

    def __init__(self, template: Matrix):
        self.field = template.field
        self.zero = 0
        self.one = 1

    def add(self, a, b):
        return self.field.add(a, b)

    def mul(self, a, b):
        return self.field.mul(a, b)

    def neg(self, a):
        return self.field.neg(a)

    def build(self, rows, cols, entries):
        return Matrix(rows, cols, tuple(entries), self.field)


class _PolyOps:
    def __init__(self, template: PolyMatrix):
        self.field = template.field
        self.cap = template.degree_cap
        self.truncating = template.truncating
        self.zero = ()
        self.one = (1,)

    def add(self, a, b):
        from .ffmat import _poly_add
        return _poly_add(a, b, self.field)

    def mul(self, a, b):
        from .ffmat import _poly_mul
        return _poly_mul(a, b, self.field)

    def neg(self, a):
        return tuple(self.field.neg(c) for c in a)

    def build(self, rows, cols, entries):
        return PolyMatrix(rows, cols, tuple(entries), self.field,
                          self.cap, self.truncating)


def _ring_det(ops, rows):
    """Determinant by Leibniz expansion (entries from any commutative ring)."""
    d = len(rows)
    if d == 0:
        return ops.one
    acc = ops.zero
    for perm in itertools.permutations(range(d)):
        term = ops.one
        for i, j in enumerate(perm):
            term = ops.mul(term, rows[i][j])
        inv = sum(1 for a in range(d) for b in range(a + 1, d) if perm[a] > perm[b])
        acc = ops.add(acc, ops.neg(term) if inv % 2 else term)
    return acc


def evaluate(expr: ModuleExpr, g, g_inv=None):
    """Action matrix of g on the canonical basis of expr (same kind as g).

    g_inv must be supplied (with g * g_inv = identity) whenever expr contains
    Dual or Ad.
    """
    return _evaluate_cached(expr, g, g_inv)


@lru_cache(maxsize=None)
def _evaluate_cached(expr, g, g_inv):
    ops = _PolyOps(g) if isinstance(g, PolyMatrix) else _MatOps(g)
    n = expr.leaf_rank()
    if n is not None and (g.rows != n or g.cols != n):
        raise DimensionMismatchError(
            f"group element is {g.rows}x{g.cols}, expression leaves need {n}x{n}")
    return _eval(expr, g, g_inv, ops)


def _eval(e, g, g_inv, ops):
    if isinstance(e, Triv):
        return ops.build(1, 1, (ops.one,))
    if isinstance(e, Def):
        return g
    if isinstance(e, Ad):
        if g_inv is None:
            raise MissingInverseError("Ad evaluation needs the inverse")
        n = e.n
        out = []
        for k in range(n):
            for l in range(n):
                for i in range(n):
                    for j in range(n):
                        out.append(ops.mul(g.entry(k, i), g_inv.entry(j, l)))
        return ops.build(n * n, n * n, out)
    if isinstance(e, Dual):
        if g_inv is None:
            raise MissingInverseError("Dual evaluation needs the inverse")
        inner = _eval(e.inner, g_inv, g, ops)
        d = e.dim
        return ops.build(d, d, [inner.entry(j, i) for i in range(d) for j in range(d)])
    if isinstance(e, Sum):
        a = _eval(e.left, g, g_inv, ops)
        b = _eval(e.right, g, g_inv, ops)
        da, db = e.left.dim, e.right.dim
        d = da + db
        out = [ops.zero] * (d * d)
        for i in range(da):
            for j in range(da):
                out[i * d + j] = a.entry(i, j)
        for i in range(db):
            for j in range(db):
                out[(da + i) * d + (da + j)] = b.entry(i, j)
        return ops.build(d, d, out)
    if isinstance(e, Tensor):
        a = _eval(e.left, g, g_inv, ops)
        b = _eval(e.right, g, g_inv, ops)
        da, db = e.left.dim, e.right.dim
        d = da * db
        out = []
        for i1 in range(da):
            for i2 in range(db):
                for j1 in range(da):
                    for j2 in range(db):
                        out.append(ops.mul(a.entry(i1, j1), b.entry(i2, j2)))
        return ops.build(d, d, out)
    if isinstance(e, Sym):
        a = _eval(e.inner, g, g_inv, ops)
        mons = e.monomials
        index = {mon: k for k, mon in enumerate(mons)}
        d = e.dim
        di = e.inner.dim
        out = [ops.zero] * (d * d)
        for col, mon in enumerate(mons):
            acc = {(): ops.one}
            for j in mon:
                nxt = {}
                for key, c in acc.items():
                    for i in range(di):
                        aij = a.entry(i, j)
                        if aij == ops.zero:
                            continue
                        k2 = tuple(sorted(key + (i,)))
                        prev = nxt.get(k2, ops.zero)
                        nxt[k2] = ops.add(prev, ops.mul(c, aij))
                acc = nxt
            for key, c in acc.items():
                out[index[key] * d + col] = c
        return ops.build(d, d, out)
    if isinstance(e, Ext):
        a = _eval(e.inner, g, g_inv, ops)
        subs = e.subsets
        d = e.dim
        out = []
        for rows_idx in subs:
            for cols_idx in subs:
                minor = [[a.entry(i, j) for j in cols_idx] for i in rows_idx]
                out.append(_ring_det(ops, minor))
        return ops.build(d, d, out)
    if isinstance(e, Twist):
        if e.inner.polynomial_degree(ops.field.p) == 0:
            # action of a torus-trivial expression is the identity; skip the
            # Frobenius stretch, which could outrun the caller's degree cap
            return _eval(e.inner, g, g_inv, ops)
        gt = frob_power(g, e.r)
        gti = frob_power(g_inv, e.r) if g_inv is not None else None
        return _eval(e.inner, gt, gti, ops)
    raise TypeError(f"unknown expression node {e!r}")


# ---------------------------------------------------------------------------
# submodule machinery
# ---------------------------------------------------------------------------

def submodule_closure(expr: ModuleExpr, vectors, generators, field=None):
    """Echelonised basis of the smallest subspace containing `vectors` and
    stable under every generator matrix.  Idempotent.
    """
    vectors = [tuple(v) for v in vectors]
    generators = list(generators)
    if field is None:
        if generators:
            field = generators[0].field
        elif not vectors:
            return ()
        else:
            raise ValueError("field cannot be inferred; pass field=")
    dim = expr.dim
    for v in vectors:
        if len(v) != dim:
            raise DimensionMismatchError("vector length does not match dim")
    eb = EchelonBasis(field, dim)
    queue = []
    for v in vectors:
        if eb.insert(v):
            queue.append(v)
    while queue:
        v = queue.pop(0)
        for gmat in generators:
            w = gmat.mat_vec(v)
            if eb.insert(w):
                queue.append(w)
    return eb.basis()


def _primitive_element(field: FieldSpec):
    for a in field.nonzero_elements():
        x, order = a, 1
        while x != 1:
            x = field.mul(x, a)
            order += 1
        if order == field.q - 1:
            return a
    raise RuntimeError("no primitive element found")  # pragma: no cover


def _unit_matrix(n, i, j, c, field):
    entries = [0] * (n * n)
    entries[i * n + j] = c
    return Matrix(n, n, tuple(entries), field)


def group_generators(n, field):
    """Elementary transvections and a primitive diagonal generator of GL_n(F_q)."""
    gens = []
    ident = Matrix.identity(n, field)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for c in field.nonzero_elements():
                gens.append(ident.add(_unit_matrix(n, i, j, c, field)))
    if field.q > 2:
        zeta = _primitive_element(field)
        entries = [0] * (n * n)
        entries[0] = zeta
        for k in range(1, n):
            entries[k * n + k] = 1
        gens.append(Matrix(n, n, tuple(entries), field))
    return tuple(gens)


def action_operators(expr: ModuleExpr, field: FieldSpec):
    """Operators whose stable subspaces are the rational submodules of expr.

    Group generators of GL_n(F_q) (with inverses) together with the
    t-coefficient operators of the action along each transvection
    one-parameter subgroup t -> 1 + c*t*E_ij; the latter detect rational
    submodules that the finite group of F_q-points is too small to see.
    """
    n = expr.leaf_rank()
    if n is None:
        return ()
    out = []
    for gmat in group_generators(n, field):
        ginv = inverse(gmat)
        out.append(evaluate(expr, gmat, ginv))
        out.append(evaluate(expr, ginv, gmat))
    cap = max(expr.polynomial_degree(field.p), 1)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for c in field.nonzero_elements():
                gp = PolyMatrix(n, n,
                                tuple((1,) if a == b else ((0, c) if (a, b) == (i, j) else ())
                                      for a in range(n) for b in range(n)),
                                field, cap)
                gpi = PolyMatrix(n, n,
                                 tuple((1,) if a == b else ((0, field.neg(c)) if (a, b) == (i, j) else ())
                                       for a in range(n) for b in range(n)),
                                 field, cap)
                acted = evaluate(expr, gp, gpi)
                for d in range(1, acted.degree() + 1):
                    cf = acted.coeff(d)
                    if not cf.is_zero():
                        out.append(cf)
    return tuple(out)


def _projective_representatives(dim, field):
    q = field.q
    for k in range(dim):
        for tail in itertools.product(range(q), repeat=dim - k - 1):
            yield (0,) * k + (1,) + tail


def is_irreducible_exhaustive(expr: ModuleExpr, field: FieldSpec,
                              budget=DEFAULT_BUDGET) -> bool:
    """True iff the closure of every nonzero vector (one per projective point)
    under the rational action operators is the whole space.
    """
    dim = expr.dim
    if field.q**dim > budget:
        raise BudgetExceededError(
            f"{field.q ** dim} vectors exceed budget {budget}")
    if dim == 1:
        return True
    operators = action_operators(expr, field)
    for v in _projective_representatives(dim, field):
        basis = submodule_closure(expr, [v], operators, field=field)
        if len(basis) != dim:
            return False
    return True


# ---------------------------------------------------------------------------
# elementary-abelian module form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EAModule:
    """An m-dimensional module over k(Z/p)^r: r commuting p-nilpotent operators."""

    m: int
    r: int
    ops: tuple
    field: FieldSpec

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        if len(self.ops) != self.r:
            raise ValueError("operator count does not match r")
        for u in self.ops:
            if (u.rows, u.cols) != (self.m, self.m):
                raise DimensionMismatchError("operator size does not match m")
            if u.field != self.field:
                raise DimensionMismatchError("operator field mismatch")
        ok, why = is_commuting_nilpotent(self.ops)
        if not ok:
            raise ValueError(f"not a valid elementary-abelian module: {why}")


def ea_free(mod: EAModule) -> bool:
    """Freeness over the local algebra k(Z/p)^r.

    rad M is the sum of the operator images; by Nakayama a lift of a basis of
    M/rad M gives a surjection from a free module, so freeness is exactly
    dim M = p^r * dim(M / rad M).
    """
    if mod.m == 0:
        return True
    if mod.r == 0:
        return True
    stacked = Matrix(mod.m, mod.m * mod.r,
                     tuple(e for i in range(mod.m)
                           for u in mod.ops for e in u.row(i)),
                     mod.field)
    rad_dim = rank(stacked)
    top = mod.m - rad_dim
    return mod.m == mod.field.p**mod.r * top


def regular_module(field: FieldSpec, r: int) -> EAModule:
    """The regular module of k(Z/p)^r = k[u_0..u_{r-1}]/(u_i^p), dimension p^r."""
    p = field.p
    m = p**r
    ops = []
    for i in range(r):
        entries = [0] * (m * m)
        for idx in range(m):
            digit = (idx // p**i) % p
            if digit < p - 1:
                entries[(idx + p**i) * m + idx] = 1
        ops.append(Matrix(m, m, tuple(entries), field))
    return EAModule(m, r, tuple(ops), field)


# ---------------------------------------------------------------------------
# restriction / quotient along an invariant subspace
# ---------------------------------------------------------------------------

def _solve_coords(basis_rows, v, field):
    # coordinates of v in terms of the given (independent) basis rows
    k = len(basis_rows)
    m = len(v)
    aug = Matrix.from_rows([[basis_rows[j][i] for j in range(k)] + [v[i]]
                            for i in range(m)], field)
    red, pivots = rref(aug)
    if k in pivots:
        raise ValueError("vector not in the span of the basis")
    coords = [0] * k
    for row_idx, pc in enumerate(pivots):
        coords[pc] = red.entry(row_idx, k)
    return tuple(coords)


def quotient_and_restrict(nmat: Matrix, subspace):
    """Restrict a nilpotent operator to an invariant subspace and induce the
    quotient map on a complement-coset basis.

    Returns (restriction in the given basis, induced quotient matrix); raises
    if the subspace basis is dependent or not invariant.
    """
    field = nmat.field
    m = nmat.rows
    basis_rows = [tuple(v) for v in subspace]
    for v in basis_rows:
        if len(v) != m:
            raise DimensionMismatchError("subspace vector length mismatch")
    eb = EchelonBasis(field, m)
    for v in basis_rows:
        if not eb.insert(v):
            raise ValueError("subspace basis is linearly dependent")
    k = len(basis_rows)
    images = [nmat.mat_vec(v) for v in basis_rows]
    for img in images:
        if not eb.contains(img):
            raise ValueError("subspace is not invariant under the operator")
    restr_cols = [_solve_coords(basis_rows, img, field) for img in images]
    restr = Matrix(k, k, tuple(restr_cols[j][i] for i in range(k) for j in range(k)),
                   field)
    piv = set(eb.pivots)
    compl = [c for c in range(m) if c not in piv]
    quot_cols = []
    for c in compl:
        e_c = tuple(1 if t == c else 0 for t in range(m))
        res = eb.reduce(nmat.mat_vec(e_c))
        quot_cols.append(tuple(res[cc] for cc in compl))
    qd = len(compl)
    quot = Matrix(qd, qd, tuple(quot_cols[j][i] for i in range(qd) for j in range(qd)),
                  field)
    return restr, quot
