"""Deterministic exact sparse linear algebra over Q and F_p.

Matrices are sparse (dict keyed by (row, col), no stored zeros) and represent
maps K^cols -> K^rows acting on dense tuple vectors.  All eliminations pivot
on the first nonzero row in ascending column order, so every result is
reproducible across runs.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import NotASubspace
from .fields import Field


class Mat:
    """Sparse exact matrix: a map K^cols -> K^rows."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, rows: int, cols: int, data=None):
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = {} if data is None else data

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, rows, cols)

    @classmethod
    def identity(cls, field, n):
        one = field.one()
        return cls(field, n, n, {(i, i): one for i in range(n)})

    @classmethod
    def from_triples(cls, field, rows, cols, triples):
        m = cls(field, rows, cols)
        for r, c, v in triples:
            m.add_entry(r, c, field.of(v))
        return m

    @classmethod
    def from_dense(cls, field, dense):
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        m = cls(field, rows, cols)
        for r, row in enumerate(dense):
            for c, v in enumerate(row):
                v = field.of(v)
                if v:
                    m.data[(r, c)] = v
        return m

    @classmethod
    def from_columns(cls, field, rows, columns):
        """Assemble a matrix whose j-th column is the dense vector columns[j]."""
        m = cls(field, rows, len(columns))
        for c, vec in enumerate(columns):
            for r, v in enumerate(vec):
                if v:
                    m.data[(r, c)] = v
        return m

    def add_entry(self, r, c, v):
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError((r, c, self.rows, self.cols))
        cur = self.data.get((r, c))
        new = self.field.add(cur, v) if cur is not None else v
        if new:
            self.data[(r, c)] = new
        elif cur is not None:
            del self.data[(r, c)]

    def triples(self):
        return sorted((r, c, v) for (r, c), v in self.data.items())

    def transpose(self) -> "Mat":
        return Mat(self.field, self.cols, self.rows,
                   {(c, r): v for (r, c), v in self.data.items()})

    def row_dicts(self) -> list[dict]:
        rows = [dict() for _ in range(self.rows)]
        for (r, c), v in self.data.items():
            rows[r][c] = v
        return rows

    def col_dicts(self) -> list[dict]:
        cols = [dict() for _ in range(self.cols)]
        for (r, c), v in self.data.items():
            cols[c][r] = v
        return cols

    def column(self, j) -> tuple:
        z = self.field.zero()
        out = [z] * self.rows
        for (r, c), v in self.data.items():
            if c == j:
                out[r] = v
        return tuple(out)

    def apply(self, vec) -> tuple:
        """Matrix times dense vector."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        F = self.field
        acc = [F.zero()] * self.rows
        for (r, c), v in self.data.items():
            x = vec[c]
            if x:
                acc[r] = F.add(acc[r], F.mul(v, x))
        return tuple(acc)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        F = self.field
        out = Mat(F, self.rows, other.cols)
        rows_b = other.row_dicts()
        acc_rows = [dict() for _ in range(self.rows)]
        for (r, k), v in self.data.items():
            brow = rows_b[k]
            if not brow:
                continue
            arow = acc_rows[r]
            for c, w in brow.items():
                cur = arow.get(c)
                nv = F.add(cur, F.mul(v, w)) if cur is not None else F.mul(v, w)
                if nv:
                    arow[c] = nv
                elif cur is not None:
                    del arow[c]
        for r, arow in enumerate(acc_rows):
            for c, v in arow.items():
                out.data[(r, c)] = v
        return out

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def _combine(self, other, sign):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        F = self.field
        out = Mat(F, self.rows, self.cols, dict(self.data))
        for (r, c), v in other.data.items():
            out.add_entry(r, c, F.neg(v) if sign < 0 else v)
        return out

    def scale(self, s):
        F = self.field
        if not s:
            return Mat(F, self.rows, self.cols)
        return Mat(F, self.rows, self.cols,
                   {rc: F.mul(v, s) for rc, v in self.data.items()})

    def __neg__(self):
        return self.scale(self.field.neg(self.field.one()))

    def is_zero(self):
        return not self.data

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.shape == other.shape
                and self.data == other.data)

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def nnz(self):
        return len(self.data)

    def __repr__(self):
        return f"Mat({self.field}, {self.rows}x{self.cols}, nnz={self.nnz})"


def hstack(mats: list[Mat]) -> Mat:
    field = mats[0].field
    rows = mats[0].rows
    out = Mat(field, rows, sum(m.cols for m in mats))
    off = 0
    for m in mats:
        if m.rows != rows:
            raise ValueError("row mismatch in hstack")
        for (r, c), v in m.data.items():
            out.data[(r, c + off)] = v
        off += m.cols
    return out


def vstack(mats: list[Mat]) -> Mat:
    field = mats[0].field
    cols = mats[0].cols
    out = Mat(field, sum(m.rows for m in mats), cols)
    off = 0
    for m in mats:
        if m.cols != cols:
            raise ValueError("col mismatch in vstack")
        for (r, c), v in m.data.items():
            out.data[(r + off, c)] = v
        off += m.rows
    return out


def block_diag(field: Field, mats: list[Mat]) -> Mat:
    out = Mat(field, sum(m.rows for m in mats), sum(m.cols for m in mats))
    ro = co = 0
    for m in mats:
        for (r, c), v in m.data.items():
            out.data[(r + ro, c + co)] = v
        ro += m.rows
        co += m.cols
    return out


# ---------------------------------------------------------------------------
# elimination core

def rref(rows: list[dict], cols: int, field: Field):
    """Reduced row echelon form of sparse rows, in place on copies.

    Returns (pivots, out_rows): pivots[k] is the pivot column of out_rows[k];
    non-pivot trailing rows are dropped.  Pivot choice: ascending column,
    first nonzero row - fully deterministic.
    """
    work = [dict(r) for r in rows]
    pivots: list[int] = []
    top = 0
    for col in range(cols):
        sel = -1
        for r in range(top, len(work)):
            if work[r].get(col):
                sel = r
                break
        if sel < 0:
            continue
        work[top], work[sel] = work[sel], work[top]
        prow = work[top]
        inv = field.inv(prow[col])
        if inv != field.one():
            for c in list(prow):
                prow[c] = field.mul(prow[c], inv)
        for r in range(len(work)):
            if r == top:
                continue
            f = work[r].get(col)
            if not f:
                continue
            row = work[r]
            for c, v in prow.items():
                cur = row.get(c)
                nv = field.sub(cur, field.mul(f, v)) if cur is not None \
                    else field.neg(field.mul(f, v))
                if nv:
                    row[c] = nv
                elif cur is not None:
                    del row[c]
        pivots.append(col)
        top += 1
        if top == len(work):
            break
    return pivots, work[:top]


def _dense_from_dict(d: dict, n: int, field: Field) -> tuple:
    z = field.zero()
    out = [z] * n
    for c, v in d.items():
        out[c] = v
    return tuple(out)


@dataclass
class Subspace:
    """A subspace of K^ambient_dim held as a reduced-echelon row basis."""

    field: Field
    ambient_dim: int
    basis: list[dict] = dc_field(default_factory=list)
    pivots: list[int] = dc_field(default_factory=list)

    @classmethod
    def from_vectors(cls, field, ambient_dim, vectors):
        rows = []
        for v in vectors:
            if isinstance(v, dict):
                rows.append({c: x for c, x in v.items() if x})
            else:
                rows.append({c: x for c, x in enumerate(v) if x})
        pivots, out = rref(rows, ambient_dim, field)
        return cls(field, ambient_dim, out, pivots)

    @property
    def dim(self):
        return len(self.basis)

    def basis_vectors(self) -> list[tuple]:
        return [_dense_from_dict(r, self.ambient_dim, self.field) for r in self.basis]

    def reduce(self, vec) -> dict:
        """Residue of vec after elimination against the echelon basis."""
        F = self.field
        if not isinstance(vec, dict):
            vec = {c: x for c, x in enumerate(vec) if x}
        else:
            vec = {c: x for c, x in vec.items() if x}
        for p, row in zip(self.pivots, self.basis):
            f = vec.get(p)
            if not f:
                continue
            for c, v in row.items():
                cur = vec.get(c)
                nv = F.sub(cur, F.mul(f, v)) if cur is not None \
                    else F.neg(F.mul(f, v))
                if nv:
                    vec[c] = nv
                elif cur is not None:
                    del vec[c]
        return vec

    def contains(self, vec) -> bool:
        return not self.reduce(vec)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(dict(r)) for r in other.basis)

    def quotient_dim(self, small: "Subspace") -> int:
        """dim(self) - dim(small); raises NotASubspace unless small <= self."""
        if small.ambient_dim != self.ambient_dim:
            raise NotASubspace("ambient dimensions differ")
        if not self.contains_subspace(small):
            raise NotASubspace("claimed subspace is not contained")
        return self.dim - small.dim

    def __eq__(self, other):
        return (isinstance(other, Subspace)
                and self.ambient_dim == other.ambient_dim
                and self.pivots == other.pivots
                and self.basis == other.basis)


def rank(m: Mat) -> int:
    pivots, _ = rref(m.row_dicts(), m.cols, m.field)
    return len(pivots)


def kernel_basis(m: Mat) -> Subspace:
    """Null space of m, canonical reduced-echelon basis."""
    F = m.field
    pivots, rows = rref(m.row_dicts(), m.cols, m.field)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    vectors = []
    one = F.one()
    for f in free:
        vec = {f: one}
        for p, row in zip(pivots, rows):
            v = row.get(f)
            if v:
                vec[p] = F.neg(v)
        vectors.append(vec)
    return Subspace.from_vectors(F, m.cols, vectors)


def row_space(m: Mat) -> Subspace:
    pivots, rows = rref(m.row_dicts(), m.cols, m.field)
    return Subspace(m.field, m.cols, rows, pivots)


def column_space(m: Mat) -> Subspace:
    return row_space(m.transpose())


def solve(m: Mat, rhs) -> tuple | None:
    """One echelon-canonical solution of m x = rhs, or None.

    Free variables are set to zero; rhs is a dense vector of length m.rows.
    """
    sols = solve_multi(m, [rhs])
    return sols[0]


def solve_multi(m: Mat, rhs_list) -> list[tuple | None]:
    """Solve m x = rhs for several right-hand sides with one elimination."""
    F = m.field
    k = len(rhs_list)
    if k == 0:
        return []
    rows = m.row_dicts()
    for b in rhs_list:
        if len(b) != m.rows:
            raise ValueError("rhs length mismatch")
    aug = []
    for r, row in enumerate(rows):
        row = dict(row)
        for j, b in enumerate(rhs_list):
            if b[r]:
                row[m.cols + j] = b[r]
        aug.append(row)
    pivots, out = rref(aug, m.cols + k, F)
    if any(p >= m.cols for p in pivots):
        # Some system is inconsistent; an rhs pivot would corrupt the other
        # columns' read-off, so fall back to one elimination per rhs.
        if k == 1:
            return [None]
        return [solve_multi(m, [b])[0] for b in rhs_list]
    # All pivots sit in the coefficient block, hence every system is solvable.
    sols: list[tuple | None] = []
    zero = F.zero()
    for j in range(k):
        col = m.cols + j
        x = [zero] * m.cols
        for p, row in zip(pivots, out):
            v = row.get(col)
            if v:
                x[p] = v
        sols.append(tuple(x))
    return sols


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    if u.ambient_dim != v.ambient_dim:
        raise ValueError("ambient mismatch")
    return Subspace.from_vectors(u.field, u.ambient_dim,
                                 [dict(r) for r in u.basis] + [dict(r) for r in v.basis])


def subspace_intersection(u: Subspace, v: Subspace) -> Subspace:
    """Intersection of two subspaces given by row bases."""
    if u.ambient_dim != v.ambient_dim:
        raise ValueError("ambient mismatch")
    F = u.field
    if u.dim == 0 or v.dim == 0:
        return Subspace.from_vectors(F, u.ambient_dim, [])
    # solve sum a_i u_i = sum b_j v_j: kernel of [U^T | -V^T]
    cols = []
    for r in u.basis:
        cols.append(dict(r))
    for r in v.basis:
        cols.append({c: F.neg(x) for c, x in r.items()})
    m = Mat(F, u.ambient_dim, len(cols))
    for j, col in enumerate(cols):
        for r, x in col.items():
            m.data[(r, j)] = x
    ker = kernel_basis(m)
    vecs = []
    for row in ker.basis:
        acc: dict = {}
        for j, coef in row.items():
            if j >= u.dim:
                continue
            for c, x in u.basis[j].items():
                cur = acc.get(c)
                nv = F.add(cur, F.mul(coef, x)) if cur is not None else F.mul(coef, x)
                if nv:
                    acc[c] = nv
                elif cur is not None:
                    del acc[c]
        if acc:
            vecs.append(acc)
    return Subspace.from_vectors(F, u.ambient_dim, vecs)


# dense vector helpers ------------------------------------------------------

def vec_zero(field: Field, n: int) -> tuple:
    return tuple([field.zero()] * n)

def vec_add(field: Field, u, v) -> tuple:
    return tuple(field.add(a, b) for a, b in zip(u, v))

def vec_sub(field: Field, u, v) -> tuple:
    return tuple(field.sub(a, b) for a, b in zip(u, v))

def vec_scale(field: Field, s, u) -> tuple:
    return tuple(field.mul(s, a) for a in u)

def vec_is_zero(u) -> bool:
    return not any(u)
