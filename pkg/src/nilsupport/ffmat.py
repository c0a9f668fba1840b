"""Exact arithmetic over F_q (q = p^m, m <= 4) and dense matrix kernels.

Field elements are integers in range(q) encoding polynomials over F_p in
base p (least significant digit = constant coefficient).  Matrices are
immutable, dense, row-major.  PolyMatrix entries are truncated univariate
polynomials in t, stored as trimmed coefficient tuples.

Everything here is a pure function of immutable values; no interior
mutation after construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property


class DimensionMismatchError(ValueError):
    """Operands have incompatible shapes or fields."""


class DegreeCapError(ValueError):
    """A nonzero polynomial coefficient landed above a non-truncating cap."""


class SingularMatrixError(ValueError):
    """Matrix inverse requested for a singular matrix."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# polynomials over F_p (coefficient tuples, low degree first) -- used only
# for modulus validation and extension-field arithmetic
# ---------------------------------------------------------------------------

def _fp_trim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def _fp_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _fp_trim(out)


def _fp_mod(a, mod, p):
    # remainder of a by monic mod
    a = list(a)
    d = len(mod) - 1
    while len(a) > d:
        lead = a[-1]
        if lead:
            k = len(a) - 1 - d
            for i in range(d):
                a[k + i] = (a[k + i] - lead * mod[i]) % p
        a.pop()
    return _fp_trim(a)


def _fp_divides(div, a, p):
    # div monic; True iff div | a
    inv_lead = pow(div[-1], p - 2, p)
    a = list(a)
    d = len(div) - 1
    while len(a) >= len(div):
        c = (a[-1] * inv_lead) % p
        if c:
            k = len(a) - len(div)
            for i in range(len(div)):
                a[k + i] = (a[k + i] - c * div[i]) % p
        a.pop()
    return not _fp_trim(a)


def _fp_is_irreducible(mod, p):
    d = len(mod) - 1
    if d < 1 or mod[-1] != 1:
        return False
    for e in range(1, d // 2 + 1):
        for tail in itertools.product(range(p), repeat=e):
            if _fp_divides(tail + (1,), mod, p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The field F_q, q = p^m, with an explicit monic irreducible modulus.

    The modulus (degree m over F_p, low coefficients first) is part of the
    value; it is normalised to (0, 1) when m == 1, where it plays no role.
    """

    p: int
    m: int = 1
    modulus: tuple = None

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if not 1 <= self.m <= 4:
            raise ValueError(f"extension degree m = {self.m} out of range 1..4")
        if self.m == 1:
            object.__setattr__(self, "modulus", (0, 1))
            return
        if self.modulus is None:
            raise ValueError("extension field needs an explicit modulus")
        mod = tuple(c % self.p for c in self.modulus)
        if len(mod) != self.m + 1 or mod[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {self.m}")
        if not _fp_is_irreducible(mod, self.p):
            raise ValueError(f"modulus {mod} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", mod)

    @property
    def q(self) -> int:
        return self.p ** self.m

    def elements(self):
        return range(self.q)

    def nonzero_elements(self):
        return range(1, self.q)

    # -- digit encoding for extension elements --

    def _digits(self, a):
        p = self.p
        return tuple((a // p**i) % p for i in range(self.m))

    def _encode(self, cs):
        a = 0
        for i, c in enumerate(cs):
            a += (c % self.p) * self.p**i
        return a

    @cached_property
    def _tables(self):
        # (mul, inv) lookup tables for small extension fields
        q, p = self.q, self.p
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            da = _fp_trim(self._digits(a))
            for b in range(a, q):
                db = _fp_trim(self._digits(b))
                c = self._encode(_fp_mod(_fp_mul(da, db, p), self.modulus, p))
                mul[a][b] = c
                mul[b][a] = c
        inv = [0] * q
        for a in range(1, q):
            row = mul[a]
            inv[a] = row.index(1)
        return mul, inv

    # -- field operations on int-encoded elements --

    def add(self, a, b):
        if self.m == 1:
            return (a + b) % self.p
        p = self.p
        out = 0
        for i in range(self.m):
            pi = p**i
            out += (((a // pi) + (b // pi)) % p) * pi
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        if self.m == 1:
            return (-a) % self.p
        p = self.p
        out = 0
        for i in range(self.m):
            pi = p**i
            out += (-(a // pi) % p) * pi
        return out

    def mul(self, a, b):
        if self.m == 1:
            return (a * b) % self.p
        return self._tables[0][a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("no inverse of 0")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        return self._tables[1][a]

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        out = 1
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def frob(self, a):
        """The Frobenius a -> a^p (identity on the prime field)."""
        if self.m == 1:
            return a
        return self.pow(a, self.p)

    def frob_power(self, a, r):
        for _ in range(r % self.m if self.m > 1 else 0):
            a = self.frob(a)
        return a

    def check_element(self, a):
        if not isinstance(a, int) or not 0 <= a < self.q:
            raise ValueError(f"{a!r} is not a reduced element of F_{self.q}")
        return a


# ---------------------------------------------------------------------------
# dense matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix over a FieldSpec, entries row-major."""

    rows: int
    cols: int
    entries: tuple
    field: FieldSpec

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")
        q = self.field.q
        for e in self.entries:
            if not 0 <= e < q:
                raise ValueError(f"entry {e!r} not reduced mod q = {q}")
        object.__setattr__(self, "entries", tuple(self.entries))

    @classmethod
    def zero(cls, rows, cols, field):
        return cls(rows, cols, (0,) * (rows * cols), field)

    @classmethod
    def identity(cls, n, field):
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)), field)

    @classmethod
    def from_rows(cls, rows_list, field):
        rows = len(rows_list)
        cols = len(rows_list[0]) if rows else 0
        return cls(rows, cols, tuple(e for row in rows_list for e in row), field)

    def entry(self, i, j):
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def is_zero(self):
        return not any(self.entries)

    def _check_same_shape(self, other):
        if self.field != other.field:
            raise DimensionMismatchError("field mismatch")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError("shape mismatch")

    def add(self, other):
        self._check_same_shape(other)
        f = self.field
        return Matrix(self.rows, self.cols,
                      tuple(f.add(a, b) for a, b in zip(self.entries, other.entries)), f)

    def sub(self, other):
        self._check_same_shape(other)
        f = self.field
        return Matrix(self.rows, self.cols,
                      tuple(f.sub(a, b) for a, b in zip(self.entries, other.entries)), f)

    def neg(self):
        f = self.field
        return Matrix(self.rows, self.cols, tuple(f.neg(a) for a in self.entries), f)

    def scale(self, c):
        f = self.field
        return Matrix(self.rows, self.cols, tuple(f.mul(c, a) for a in self.entries), f)

    def mul(self, other):
        if self.field != other.field:
            raise DimensionMismatchError("field mismatch")
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"inner dimensions {self.cols} and {other.rows} disagree")
        f = self.field
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = []
        if f.m == 1:
            p = f.p
            for i in range(n):
                arow = a[i * k : (i + 1) * k]
                for j in range(m):
                    out.append(sum(arow[t] * b[t * m + j] for t in range(k)) % p)
        else:
            fmul, fadd = f.mul, f.add
            for i in range(n):
                arow = a[i * k : (i + 1) * k]
                for j in range(m):
                    acc = 0
                    for t in range(k):
                        acc = fadd(acc, fmul(arow[t], b[t * m + j]))
                    out.append(acc)
        return Matrix(n, m, tuple(out), f)

    __matmul__ = mul

    def mat_vec(self, v):
        if len(v) != self.cols:
            raise DimensionMismatchError("vector length mismatch")
        f = self.field
        out = []
        for i in range(self.rows):
            row = self.row(i)
            acc = 0
            for t in range(self.cols):
                acc = f.add(acc, f.mul(row[t], v[t]))
            out.append(acc)
        return tuple(out)

    def transpose(self):
        return Matrix(self.cols, self.rows,
                      tuple(self.entry(j, i) for i in range(self.cols) for j in range(self.rows)),
                      self.field)

    def pow(self, e):
        if self.rows != self.cols:
            raise DimensionMismatchError("matrix power needs a square matrix")
        out = Matrix.identity(self.rows, self.field)
        for _ in range(e):
            out = out.mul(self)
        return out

    def __str__(self):
        return "[" + "; ".join(" ".join(str(e) for e in self.row(i)) for i in range(self.rows)) + "]"


# ---------------------------------------------------------------------------
# row reduction
# ---------------------------------------------------------------------------

def rref(mat: Matrix):
    """Reduced row-echelon form with leftmost-nonzero pivoting.

    Returns (R, pivots); deterministic, pivots scaled to 1.
    """
    f = mat.field
    rows = mat.to_rows()
    n, m = mat.rows, mat.cols
    pivots = []
    r = 0
    for c in range(m):
        pr = next((i for i in range(r, n) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = f.inv(rows[r][c])
        if inv != 1:
            rows[r] = [f.mul(inv, e) for e in rows[r]]
        for i in range(n):
            if i != r and rows[i][c]:
                coef = rows[i][c]
                rows[i] = [f.sub(a, f.mul(coef, b)) for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return Matrix.from_rows(rows, f) if n else mat, tuple(pivots)


def rank(mat: Matrix) -> int:
    """Rank by forward row elimination, leftmost-nonzero pivoting."""
    f = mat.field
    rows = [list(mat.row(i)) for i in range(mat.rows)]
    m = mat.cols
    r = 0
    if f.m == 1:
        p = f.p
        for c in range(m):
            pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
            if pr is None:
                continue
            rows[r], rows[pr] = rows[pr], rows[r]
            prow = rows[r]
            inv = pow(prow[c], p - 2, p)
            for i in range(r + 1, len(rows)):
                ri = rows[i]
                if ri[c]:
                    coef = (ri[c] * inv) % p
                    for k in range(c, m):
                        ri[k] = (ri[k] - coef * prow[k]) % p
            r += 1
            if r == len(rows):
                break
        return r
    for c in range(m):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        prow = rows[r]
        inv = f.inv(prow[c])
        for i in range(r + 1, len(rows)):
            ri = rows[i]
            if ri[c]:
                coef = f.mul(ri[c], inv)
                for k in range(c, m):
                    ri[k] = f.sub(ri[k], f.mul(coef, prow[k]))
        r += 1
        if r == len(rows):
            break
    return r


def kernel_basis(mat: Matrix):
    """Echelonised basis of {v : mat . v = 0}, as a tuple of tuples."""
    f = mat.field
    red, pivots = rref(mat)
    piv_set = set(pivots)
    free = [c for c in range(mat.cols) if c not in piv_set]
    basis = []
    for fc in free:
        v = [0] * mat.cols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = f.neg(red.entry(r, fc))
        basis.append(tuple(v))
    return tuple(basis)


def inverse(mat: Matrix) -> Matrix:
    if mat.rows != mat.cols:
        raise DimensionMismatchError("inverse needs a square matrix")
    f = mat.field
    n = mat.rows
    aug = Matrix(n, 2 * n,
                 tuple(e for i in range(n)
                       for e in mat.row(i) + tuple(1 if i == j else 0 for j in range(n))),
                 f)
    red, pivots = rref(aug)
    if tuple(pivots[:n]) != tuple(range(n)) or len(pivots) < n:
        raise SingularMatrixError("matrix is singular")
    return Matrix(n, n,
                  tuple(red.entry(i, n + j) for i in range(n) for j in range(n)), f)


class EchelonBasis:
    """Incrementally maintained reduced row-echelon basis of a subspace."""

    def __init__(self, field: FieldSpec, width: int):
        self.field = field
        self.width = width
        self.rows = []      # kept sorted by pivot column
        self.pivots = []

    @property
    def dim(self):
        return len(self.rows)

    def reduce(self, v):
        """Residue of v after elimination against the current basis."""
        f = self.field
        v = list(v)
        for row, pc in zip(self.rows, self.pivots):
            c = v[pc]
            if c:
                v = [f.sub(a, f.mul(c, b)) for a, b in zip(v, row)]
        return tuple(v)

    def contains(self, v):
        return not any(self.reduce(v))

    def insert(self, v):
        """Add v to the span; returns True if the dimension grew."""
        f = self.field
        res = self.reduce(v)
        pc = next((i for i, e in enumerate(res) if e), None)
        if pc is None:
            return False
        inv = f.inv(res[pc])
        res = tuple(f.mul(inv, e) for e in res)
        # eliminate the new pivot from existing rows, keep full rref
        for i, row in enumerate(self.rows):
            c = row[pc]
            if c:
                self.rows[i] = tuple(f.sub(a, f.mul(c, b)) for a, b in zip(row, res))
        at = next((i for i, p in enumerate(self.pivots) if p > pc), len(self.pivots))
        self.rows.insert(at, res)
        self.pivots.insert(at, pc)
        return True

    def basis(self):
        return tuple(self.rows)


# ---------------------------------------------------------------------------
# truncated polynomial matrices
# ---------------------------------------------------------------------------

def _poly_trim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def _poly_add(a, b, f):
    n = max(len(a), len(b))
    a = a + (0,) * (n - len(a))
    b = b + (0,) * (n - len(b))
    return _poly_trim(f.add(x, y) for x, y in zip(a, b))


def _poly_mul(a, b, f):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = f.add(out[i + j], f.mul(ai, bj))
    return _poly_trim(out)


@dataclass(frozen=True)
class PolyMatrix:
    """Matrix of univariate polynomials in t over F_q with a degree cap.

    Arithmetic silently drops coefficients above the cap only when
    `truncating` is set; otherwise a nonzero coefficient above the cap is a
    DegreeCapError.
    """

    rows: int
    cols: int
    entries: tuple
    field: FieldSpec
    degree_cap: int
    truncating: bool = False

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")
        if self.degree_cap < 0:
            raise ValueError("degree_cap must be >= 0")
        norm = []
        for cs in self.entries:
            cs = _poly_trim(cs)
            if len(cs) - 1 > self.degree_cap:
                if self.truncating:
                    cs = _poly_trim(cs[: self.degree_cap + 1])
                else:
                    raise DegreeCapError(
                        f"degree {len(cs) - 1} exceeds cap {self.degree_cap}")
            q = self.field.q
            for c in cs:
                if not 0 <= c < q:
                    raise ValueError(f"coefficient {c!r} not reduced mod q = {q}")
            norm.append(cs)
        object.__setattr__(self, "entries", tuple(norm))

    @classmethod
    def identity(cls, n, field, degree_cap, truncating=False):
        return cls(n, n, tuple((1,) if i == j else () for i in range(n) for j in range(n)),
                   field, degree_cap, truncating)

    @classmethod
    def from_matrix(cls, mat: Matrix, degree_cap, truncating=False):
        return cls(mat.rows, mat.cols,
                   tuple((e,) if e else () for e in mat.entries),
                   mat.field, degree_cap, truncating)

    def entry(self, i, j):
        return self.entries[i * self.cols + j]

    def degree(self):
        return max((len(cs) - 1 for cs in self.entries if cs), default=0)

    def _check_compat(self, other):
        if self.field != other.field:
            raise DimensionMismatchError("field mismatch")
        if self.degree_cap != other.degree_cap or self.truncating != other.truncating:
            raise DimensionMismatchError("degree-cap policy mismatch")

    def add(self, other):
        self._check_compat(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError("shape mismatch")
        f = self.field
        return PolyMatrix(self.rows, self.cols,
                          tuple(_poly_add(a, b, f) for a, b in zip(self.entries, other.entries)),
                          f, self.degree_cap, self.truncating)

    def mul(self, other):
        self._check_compat(other)
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"inner dimensions {self.cols} and {other.rows} disagree")
        f = self.field
        n, k, m = self.rows, self.cols, other.cols
        out = []
        for i in range(n):
            for j in range(m):
                acc = ()
                for t in range(k):
                    acc = _poly_add(acc, _poly_mul(self.entry(i, t), other.entry(t, j), f), f)
                out.append(acc)
        return PolyMatrix(n, m, tuple(out), f, self.degree_cap, self.truncating)

    __matmul__ = mul

    def coeff(self, d) -> Matrix:
        """The matrix of t^d coefficients (zero matrix past all degrees)."""
        return Matrix(self.rows, self.cols,
                      tuple(cs[d] if d < len(cs) else 0 for cs in self.entries),
                      self.field)

    def eval_at(self, a) -> Matrix:
        f = self.field
        out = []
        for cs in self.entries:
            acc = 0
            for c in reversed(cs):
                acc = f.add(f.mul(acc, a), c)
            out.append(acc)
        return Matrix(self.rows, self.cols, tuple(out), f)

    def scale_t(self, a):
        """Substitute t -> a*t."""
        f = self.field
        out = []
        for cs in self.entries:
            pw = 1
            scaled = []
            for c in cs:
                scaled.append(f.mul(c, pw))
                pw = f.mul(pw, a)
            out.append(_poly_trim(scaled))
        return PolyMatrix(self.rows, self.cols, tuple(out), f,
                          self.degree_cap, self.truncating)

    def substitute_t_power(self, k):
        """Substitute t -> t^k (k >= 1)."""
        if k < 1:
            raise ValueError("power must be >= 1")
        out = []
        for cs in self.entries:
            stretched = [0] * (k * (len(cs) - 1) + 1) if cs else []
            for i, c in enumerate(cs):
                stretched[k * i] = c
            out.append(tuple(stretched))
        return PolyMatrix(self.rows, self.cols, tuple(out), self.field,
                          self.degree_cap, self.truncating)

    def is_identity(self):
        return all(self.entry(i, j) == ((1,) if i == j else ())
                   for i in range(self.rows) for j in range(self.cols))


def poly_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    """Exact product of polynomial matrices, honouring the cap policy."""
    return a.mul(b)


def coeff(a, d):
    """Coefficient extraction at t-degree d (PolyMatrix -> Matrix)."""
    return a.coeff(d)


def frob_power(mat, r):
    """Entrywise p^r-th power; polynomial entries also get t -> t^(p^r)."""
    if r < 0:
        raise ValueError("r must be >= 0")
    if r == 0:
        return mat
    f = mat.field
    if isinstance(mat, Matrix):
        return Matrix(mat.rows, mat.cols,
                      tuple(f.frob_power(e, r) for e in mat.entries), f)
    stride = f.p ** r
    out = []
    for cs in mat.entries:
        stretched = [0] * (stride * (len(cs) - 1) + 1) if cs else []
        for i, c in enumerate(cs):
            stretched[stride * i] = f.frob_power(c, r)
        out.append(tuple(stretched))
    return PolyMatrix(mat.rows, mat.cols, tuple(out), f,
                      mat.degree_cap, mat.truncating)


# ---------------------------------------------------------------------------
# serialization (shared with the CLI JSON schema)
# ---------------------------------------------------------------------------

def field_to_obj(f: FieldSpec):
    return {"p": f.p, "m": f.m, "modulus": list(f.modulus)}

def field_from_obj(obj) -> FieldSpec:
    m = int(obj.get("m", 1))
    modulus = obj.get("modulus")
    return FieldSpec(int(obj["p"]), m, tuple(modulus) if modulus is not None else None)

def matrix_to_obj(mat: Matrix):
    return list(mat.entries)

def matrix_from_obj(entries, rows, cols, f: FieldSpec) -> Matrix:
    return Matrix(rows, cols, tuple(int(e) for e in entries), f)
