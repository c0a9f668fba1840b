"""Independent oracles used by the test suite.

These deliberately avoid the library's elimination / rank / Jordan code
paths: elimination is column-major, kernels come from a local textbook
routine, and Jordan types come from explicit chain-basis construction with a
built-in certificate check.
"""

from __future__ import annotations


def rank_column_elimination(mat):
    """Rank via column operations, bottom-most pivots (independent order)."""
    f = mat.field
    cols = [[mat.entry(i, j) for i in range(mat.rows)] for j in range(mat.cols)]
    rank = 0
    used_rows = set()
    for _ in range(mat.cols):
        pivot = None
        for j, col in enumerate(cols):
            for i in range(mat.rows - 1, -1, -1):
                if i in used_rows:
                    continue
                if col[i]:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        pi, pj = pivot
        pcol = cols[pj]
        inv = f.inv(pcol[pi])
        for j, col in enumerate(cols):
            if j == pj or not col[pi]:
                continue
            c = f.mul(col[pi], inv)
            cols[j] = [f.sub(a, f.mul(c, b)) for a, b in zip(col, pcol)]
        used_rows.add(pi)
        cols.pop(pj)
        rank += 1
    return rank


# --- local row echelon machinery (not the library's) ---

class _Elim:
    """Plain forward-elimination span tracker with incremental inserts."""

    def __init__(self, field, seed_rows=()):
        self.p = field.p
        self.prime = field.m == 1
        self.field = field
        self.rows = []
        self.pivots = []
        for row in seed_rows:
            self.insert(row)

    def _reduce(self, v):
        f = self.field
        v = list(v)
        if self.prime:
            p = self.p
            for row, pc in zip(self.rows, self.pivots):
                c = v[pc]
                if c:
                    for k in range(pc, len(v)):
                        v[k] = (v[k] - c * row[k]) % p
        else:
            for row, pc in zip(self.rows, self.pivots):
                c = v[pc]
                if c:
                    for k in range(pc, len(v)):
                        v[k] = f.sub(v[k], f.mul(c, row[k]))
        return v

    def insert(self, v):
        """Add v to the span; True if independent of the current rows."""
        f = self.field
        v = self._reduce(v)
        pc = next((i for i, e in enumerate(v) if e), None)
        if pc is None:
            return False
        inv = f.inv(v[pc])
        if inv != 1:
            v = [f.mul(inv, e) for e in v]
        at = next((i for i, q in enumerate(self.pivots) if q > pc), len(self.pivots))
        self.rows.insert(at, v)
        self.pivots.insert(at, pc)
        return True

    def contains(self, v):
        return not any(self._reduce(v))


def _local_kernel(mat):
    """Kernel basis by textbook back-substitution on a local echelon form."""
    f = mat.field
    elim = _Elim(f, [[mat.entry(i, j) for j in range(mat.cols)]
                     for i in range(mat.rows)])
    # back-eliminate to reduced form so free columns read off directly
    rows = [list(r) for r in elim.rows]
    pivots = list(elim.pivots)
    for k in range(len(rows) - 1, -1, -1):
        pc = pivots[k]
        for i in range(k):
            c = rows[i][pc]
            if c:
                rows[i] = [f.sub(a, f.mul(c, b)) for a, b in zip(rows[i], rows[k])]
    piv_set = set(pivots)
    basis = []
    for free in range(mat.cols):
        if free in piv_set:
            continue
        v = [0] * mat.cols
        v[free] = 1
        for row, pc in zip(rows, pivots):
            v[pc] = f.neg(row[free])
        basis.append(tuple(v))
    return basis


def _mat_vec(mat, v):
    f = mat.field
    if f.m == 1:
        p = f.p
        n = mat.cols
        ent = mat.entries
        return tuple(sum(ent[i * n + j] * v[j] for j in range(n)) % p
                     for i in range(mat.rows))
    out = []
    for i in range(mat.rows):
        acc = 0
        for j in range(mat.cols):
            acc = f.add(acc, f.mul(mat.entry(i, j), v[j]))
        out.append(acc)
    return tuple(out)


def jordan_type_chain_basis(mat):
    """Jordan block sizes by explicit chain construction, with certificate.

    Builds actual chain tops level by level, pushes them down with the
    operator, and verifies that the resulting chain vectors are a basis on
    which the operator acts exactly as the claimed Jordan blocks.
    """
    f = mat.field
    dim = mat.rows
    powers = [None]  # powers[j] = mat^j as local row lists, built on demand
    cur = mat
    nil_index = None
    for j in range(1, dim + 1):
        powers.append(cur)
        if not any(cur.entries):
            nil_index = j
            break
        cur = cur.mul(mat)
    if nil_index is None:
        if dim == 0:
            return ()
        raise ValueError("matrix is not nilpotent")

    kernels = {0: []}
    for j in range(1, nil_index + 1):
        kernels[j] = _local_kernel(powers[j])

    chains = []   # (top vector, height)
    carried = []
    for j in range(nil_index, 0, -1):
        elim = _Elim(f, kernels[j - 1] + carried)
        new_tops = []
        for v in kernels[j]:
            if elim.insert(v):
                new_tops.append(v)
        chains.extend((v, j) for v in new_tops)
        carried = [_mat_vec(mat, w) for w in carried] + \
                  [_mat_vec(mat, v) for v in new_tops]

    # certificate: chain vectors form a basis and the operator shifts them
    cert = _Elim(f)
    count = 0
    for top, h in chains:
        v = tuple(top)
        for _ in range(h):
            assert cert.insert(v), "chain vectors are linearly dependent"
            count += 1
            v = _mat_vec(mat, v)
        assert not any(v), "chain does not terminate at zero"
    assert count == dim, "chain vectors do not fill the space"

    return tuple(sorted((h for _, h in chains), reverse=True))


def count_p_nilpotent_bruteforce(n, field):
    """Unstructured scan of all n x n matrices testing X^p = 0."""
    import itertools
    from nilsupport import Matrix

    count = 0
    p = field.p
    for entries in itertools.product(range(field.q), repeat=n * n):
        x = Matrix(n, n, entries, field)
        if x.pow(p).is_zero():
            count += 1
    return count


def random_nilpotent(n, field, rng, index_cap=None):
    """g U g^-1 for random strictly-upper U and random invertible g."""
    from nilsupport import Matrix, inverse
    from nilsupport.ffmat import SingularMatrixError

    while True:
        entries = [0] * (n * n)
        for i in range(n):
            for j in range(i + 1, n):
                entries[i * n + j] = rng.randrange(field.q)
        u = Matrix(n, n, tuple(entries), field)
        if index_cap is not None and not u.pow(index_cap).is_zero():
            continue
        while True:
            g = Matrix(n, n, tuple(rng.randrange(field.q) for _ in range(n * n)), field)
            try:
                gi = inverse(g)
                break
            except SingularMatrixError:
                continue
        return g.mul(u).mul(gi)
