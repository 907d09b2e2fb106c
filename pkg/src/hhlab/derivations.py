"""Derivations, inner derivations and the Lie algebra structure of HH^1.

Der(T) is solved from the Leibniz system D(e_i e_j) = D(e_i) e_j + e_i D(e_j);
Int(T) is the span of the commutator maps [e_k, -].  For a triangular algebra
T = [A M; 0 B] every derivation has the block shape

    D [a m; 0 b] = [alpha(a)  mu(m) - a m0 + m0 b;  0  beta(b)]

and the maps {m0 part only} form an abelian ideal W, so HH^1 representatives
are always chosen in the m0 = 0 gauge: Der'(T) = Der(T)/W realized as the
subalgebra of derivations with vanishing m0.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .algebras import (
    BasisAlgebra, Bimodule, TriangularBlocks, direct_sum_bimodule, hom_basis,
    mat_to_vec, triangular_algebra, vec_to_mat, center,
)
from .complexes import SequenceReport, linear_sequence_report
from .errors import BlockStructureViolated, IncompatibleBimodule, NotADerivation
from .linalg import (
    Mat, Subspace, kernel_basis, solve_multi, subspace_intersection,
    subspace_sum, vstack,
)


def _dense(field, d, n):
    z = field.zero()
    out = [z] * n
    for c, v in d.items():
        out[c] = v
    return out


def leibniz_kernel(t: BasisAlgebra) -> Subspace:
    """All K-linear D: T -> T with D(xy) = D(x)y + xD(y), vectorized row-major."""
    F = t.field
    d = t.dim
    rows = []
    lefts = [t.left_mult_mat(i) for i in range(d)]
    rights = [t.right_mult_mat(i) for i in range(d)]
    con = Mat(F, d * d * d, d * d)
    r0 = 0
    for i in range(d):
        for j in range(d):
            # D(e_i e_j): sum_l mult[i,j,l] D[k, l]
            for l, c in t.product_basis(i, j).items():
                for k in range(d):
                    con.add_entry(r0 + k, k * d + l, c)
            # - D(e_i) e_j = - R_j D(-, i): (R_j)[k, k2] D[k2, i]
            for (k, k2), v in rights[j].data.items():
                con.add_entry(r0 + k, k2 * d + i, F.neg(v))
            # - e_i D(e_j): (L_i)[k, k2] D[k2, j]
            for (k, k2), v in lefts[i].data.items():
                con.add_entry(r0 + k, k2 * d + j, F.neg(v))
            r0 += d
    return kernel_basis(con)


def inner_derivations(t: BasisAlgebra) -> list[Mat]:
    """ad(e_k) = [e_k, -] for each basis vector."""
    return [t.left_mult_mat(k) - t.right_mult_mat(k) for k in range(t.dim)]


def is_derivation(t: BasisAlgebra, d: Mat) -> bool:
    """Leibniz rule on all basis pairs, checked directly."""
    for i in range(t.dim):
        ei = t.basis_vector(i)
        dei = d.apply(ei)
        for j in range(t.dim):
            ej = t.basis_vector(j)
            dej = d.apply(ej)
            prod = t.product(ei, ej)
            lhs = d.apply(prod)
            rhs = tuple(t.field.add(x, y) for x, y in
                        zip(t.product(dei, ej), t.product(ei, dej)))
            if lhs != rhs:
                return False
    return True


@dataclass
class DerivationSpace:
    algebra: BasisAlgebra
    der_basis: list[Mat]
    int_basis: list[Mat]
    hh1_basis: list[Mat]
    bracket_constants: dict  # (i, j) -> tuple of coords in hh1_basis
    int_subspace: Subspace = None
    _coord_span: Mat = None

    @property
    def der_dim(self):
        return len(self.der_basis)

    @property
    def int_dim(self):
        return len(self.int_basis)

    @property
    def hh1_dim(self):
        return len(self.hh1_basis)

    def class_coords(self, d: Mat) -> tuple | None:
        """Coordinates of the class of a derivation in the hh1 basis."""
        F = self.algebra.field
        n = self.algebra.dim
        sol = solve_multi(self._coord_span,
                          [tuple(_dense(F, mat_to_vec(d), n * n))])[0]
        if sol is None:
            return None
        return tuple(sol[: self.hh1_dim])

    def jacobi_holds(self) -> bool:
        """Jacobi identity on the quotient bracket constants."""
        F = self.algebra.field
        h = self.hh1_dim
        for i in range(h):
            for j in range(h):
                for k in range(h):
                    acc = [F.zero()] * h
                    for (x, y, z) in ((i, j, k), (j, k, i), (k, i, j)):
                        inner = self.bracket_constants[(x, y)]
                        for l in range(h):
                            if inner[l]:
                                outer = self.bracket_constants[(l, z)]
                                for w in range(h):
                                    acc[w] = F.add(acc[w],
                                                   F.mul(inner[l], outer[w]))
                    if any(acc):
                        return False
        return True

    def int_is_ideal(self) -> bool:
        """[Der, Int] <= Int, by echelon membership."""
        n = self.algebra.dim
        for d in self.der_basis:
            for w in self.int_basis:
                br = (d @ w) - (w @ d)
                if not self.int_subspace.contains(dict(mat_to_vec(br))):
                    return False
        return True


def _gauge_fix(t: BasisAlgebra, d: Mat) -> Mat:
    """Remove the m0 component of a derivation of a triangular algebra."""
    blocks = t.triangular
    F = t.field
    da, dm = blocks.a.dim, blocks.m.dim
    unit_a = [F.zero()] * t.dim
    for i, c in enumerate(blocks.a.unit):
        unit_a[i] = c
    v = d.apply(tuple(unit_a))
    m0 = tuple(F.neg(v[da + w]) for w in range(dm))
    if not any(m0):
        return d
    return d - _w_derivation(t, m0)


def _w_derivation(t: BasisAlgebra, m0) -> Mat:
    """The derivation [a m; 0 b] -> [0  -a m0 + m0 b; 0 0]."""
    blocks = t.triangular
    F = t.field
    da, dm, db = blocks.a.dim, blocks.m.dim, blocks.b.dim
    m = blocks.m
    out = Mat(F, t.dim, t.dim)
    for i in range(da):
        img = m.left_apply(blocks.a.basis_vector(i), m0)
        for w, c in enumerate(img):
            if c:
                out.add_entry(da + w, i, F.neg(c))
    for j in range(db):
        img = m.right_apply(m0, blocks.b.basis_vector(j))
        for w, c in enumerate(img):
            if c:
                out.add_entry(da + w, da + dm + j, c)
    return out


def derivation_space(t: BasisAlgebra) -> DerivationSpace:
    """Der(T), Int(T), HH^1 = Der/Int with its bracket constants.

    For triangular algebras both Der and Int representatives are gauge-fixed
    to m0 = 0 (the quotient by the abelian ideal W = {[0 M; 0 0]}), which
    leaves HH^1 unchanged and makes restriction maps literal block moves.
    """
    F = t.field
    n = t.dim
    ker = leibniz_kernel(t)
    der = [vec_to_mat(F, dict(row), n, n) for row in ker.basis]
    inner = inner_derivations(t)
    int_sub = Subspace.from_vectors(F, n * n, [mat_to_vec(w) for w in inner])
    int_basis = [vec_to_mat(F, dict(row), n, n) for row in int_sub.basis]
    # representatives: reduce the derivation basis against Int, then move each
    # chosen class into the m0 = 0 gauge (allowed: the gauge part is inner)
    resid = Subspace(F, n * n, [dict(r) for r in int_sub.basis],
                     list(int_sub.pivots))
    hh1 = []
    for d in der:
        r = resid.reduce(mat_to_vec(d))
        if r:
            rep = vec_to_mat(F, r, n, n)
            if t.triangular is not None:
                rep = _gauge_fix(t, rep)
            hh1.append(rep)
            resid = Subspace.from_vectors(
                F, n * n, [dict(b) for b in resid.basis] + [dict(r)])
    span = Mat.from_columns(
        F, n * n,
        [tuple(_dense(F, mat_to_vec(h), n * n)) for h in hh1]
        + [tuple(_dense(F, dict(r), n * n)) for r in int_sub.basis])
    ds = DerivationSpace(t, der, int_basis, hh1, {}, int_sub, span)
    consts = {}
    rhs = []
    keys = []
    for i, x in enumerate(hh1):
        for j, y in enumerate(hh1):
            keys.append((i, j))
            rhs.append(tuple(_dense(F, mat_to_vec((x @ y) - (y @ x)), n * n)))
    sols = solve_multi(span, rhs) if rhs else []
    for key, s in zip(keys, sols):
        if s is None:
            raise NotADerivation("bracket left the derivation space")
        consts[key] = tuple(s[: len(hh1)])
    ds.bracket_constants = consts
    return ds


# --- the block shape of triangular derivations ------------------------------

@dataclass
class TriangularDerivation:
    """D = [alpha (mu, m0); 0 beta] on T = [A M; 0 B]."""

    blocks: TriangularBlocks
    alpha: Mat
    beta: Mat
    mu: Mat
    m0: tuple

    def compose(self) -> Mat:
        b = self.blocks
        F = b.a.field
        da, dm, db = b.a.dim, b.m.dim, b.b.dim
        t_dim = da + dm + db
        out = Mat(F, t_dim, t_dim)
        for (r, c), v in self.alpha.data.items():
            out.data[(r, c)] = v
        for (r, c), v in self.mu.data.items():
            out.data[(da + r, da + c)] = v
        for (r, c), v in self.beta.data.items():
            out.data[(da + dm + r, da + dm + c)] = v
        w = _w_derivation_from(self.blocks, self.m0)
        return out + w

    def compat_holds(self) -> bool:
        """mu(am) = alpha(a) m + a mu(m) and mu(mb) = mu(m) b + m beta(b)."""
        b = self.blocks
        m = b.m
        for i in range(b.a.dim):
            lhs = self.mu @ m.left_mat(i)
            rhs = m.left_mat(i) @ self.mu
            for k in range(b.a.dim):
                c = self.alpha.data.get((k, i))
                if c:
                    rhs = rhs + m.left_mat(k).scale(c)
            if lhs != rhs:
                return False
        for j in range(b.b.dim):
            lhs = self.mu @ m.right_mat(j)
            rhs = m.right_mat(j) @ self.mu
            for k in range(b.b.dim):
                c = self.beta.data.get((k, j))
                if c:
                    rhs = rhs + m.right_mat(k).scale(c)
            if lhs != rhs:
                return False
        return True


def _w_derivation_from(blocks: TriangularBlocks, m0) -> Mat:
    F = blocks.a.field
    da, dm, db = blocks.a.dim, blocks.m.dim, blocks.b.dim
    out = Mat(F, da + dm + db, da + dm + db)
    m = blocks.m
    for i in range(da):
        img = m.left_apply(blocks.a.basis_vector(i), m0)
        for w, c in enumerate(img):
            if c:
                out.add_entry(da + w, i, F.neg(c))
    for j in range(db):
        img = m.right_apply(m0, blocks.b.basis_vector(j))
        for w, c in enumerate(img):
            if c:
                out.add_entry(da + w, da + dm + j, c)
    return out


def decompose_derivation(t: BasisAlgebra, d: Mat) -> TriangularDerivation:
    """Extract (alpha, beta, mu, m0) from a derivation of a triangular algebra;
    the recomposition reproduces d exactly."""
    blocks = t.triangular
    if blocks is None:
        raise IncompatibleBimodule("algebra carries no triangular block data")
    if not is_derivation(t, d):
        raise NotADerivation("matrix violates the Leibniz rule")
    F = t.field
    da, dm, db = blocks.a.dim, blocks.m.dim, blocks.b.dim
    ar = range(0, da)
    mr = range(da, da + dm)
    br = range(da + dm, da + dm + db)
    alpha = Mat(F, da, da)
    beta = Mat(F, db, db)
    mu = Mat(F, dm, dm)
    for (r, c), v in d.data.items():
        if r in ar and c in ar:
            alpha.data[(r, c)] = v
        elif r in mr and c in mr:
            mu.data[(r - da, c - da)] = v
        elif r in br and c in br:
            beta.data[(r - da - dm, c - da - dm)] = v
        elif r in mr and (c in ar or c in br):
            pass  # the m0 couplings, recovered below
        else:
            raise BlockStructureViolated(f"entry at {(r, c)} outside the pattern")
    unit_a = [F.zero()] * t.dim
    for i, c in enumerate(blocks.a.unit):
        unit_a[i] = c
    v = d.apply(tuple(unit_a))
    m0 = tuple(F.neg(v[da + w]) for w in range(dm))
    td = TriangularDerivation(blocks, alpha, beta, mu, m0)
    if td.compose() != d:
        raise BlockStructureViolated("m0 couplings are not of inner shape")
    return td


def bracket_check(t: BasisAlgebra, d0: TriangularDerivation,
                  d1: TriangularDerivation) -> bool:
    """[D0, D1] = [[alpha0,alpha1] ([mu0,mu1], mu0(m1)-mu1(m0)); 0 [beta0,beta1]]."""
    F = t.field
    commutator = (d0.compose() @ d1.compose()) - (d1.compose() @ d0.compose())
    alpha = (d0.alpha @ d1.alpha) - (d1.alpha @ d0.alpha)
    beta = (d0.beta @ d1.beta) - (d1.beta @ d0.beta)
    mu = (d0.mu @ d1.mu) - (d1.mu @ d0.mu)
    m0 = tuple(F.sub(x, y) for x, y in
               zip(d0.mu.apply(d1.m0), d1.mu.apply(d0.m0)))
    formula = TriangularDerivation(d0.blocks, alpha, beta, mu, m0)
    return formula.compose() == commutator


def inner_decomposition_dims(t: BasisAlgebra) -> tuple[int, int]:
    """(dim Int T, predicted dim): Int T = (A x B)/P (+) M with
    P = {(a, b) in Z(A) x Z(B) : a m = m b for all m}."""
    blocks = t.triangular
    F = t.field
    a, b, m = blocks.a, blocks.b, blocks.m
    rows = []
    for i in range(a.dim):
        za = a.left_mult_mat(i) - a.right_mult_mat(i)
        rows.append(hsplit_embed(F, za, 0, a.dim + b.dim))
    for j in range(b.dim):
        zb = b.left_mult_mat(j) - b.right_mult_mat(j)
        rows.append(hsplit_embed(F, zb, a.dim, a.dim + b.dim))
    if m.dim:
        act = Mat(F, m.dim * m.dim, a.dim + b.dim)
        for i in range(a.dim):
            for (w2, w), v in m.left_mat(i).data.items():
                act.add_entry(w * m.dim + w2, i, v)
        for j in range(b.dim):
            for (w2, w), v in m.right_mat(j).data.items():
                act.add_entry(w * m.dim + w2, a.dim + j, F.neg(v))
        rows.append(act)
    p_dim = kernel_basis(vstack(rows)).dim
    int_full = Subspace.from_vectors(
        F, t.dim * t.dim,
        [mat_to_vec(w) for w in inner_derivations(t)]).dim
    return int_full, (a.dim + b.dim - p_dim) + m.dim


def hsplit_embed(field, m: Mat, col_off: int, total_cols: int) -> Mat:
    out = Mat(field, m.rows, total_cols)
    for (r, c), v in m.data.items():
        out.data[(r, c + col_off)] = v
    return out


# --- restriction maps and the two-piece decomposition -----------------------

def _embed_gamma_derivation(t: BasisAlgebra, gamma: Mat) -> Mat:
    """[0 gamma; 0 0] as an endomorphism of T, gamma: M -> M block."""
    blocks = t.triangular
    da = blocks.a.dim
    out = Mat(t.field, t.dim, t.dim)
    for (r, c), v in gamma.data.items():
        out.data[(da + r, da + c)] = v
    return out


def restrict_derivation(t_big: BasisAlgebra, t_small: BasisAlgebra, d: Mat,
                        rows: range, cols: range) -> Mat:
    """Drop a gauge-fixed derivation of T_{M+N} to T_M: keep alpha, beta and
    the chosen diagonal block of gamma."""
    big = t_big.triangular
    small = t_small.triangular
    F = t_big.field
    da, db = big.a.dim, big.b.dim
    dm_small = small.m.dim
    out = Mat(F, t_small.dim, t_small.dim)
    for (r, c), v in d.data.items():
        if r < da and c < da:
            out.data[(r, c)] = v
        elif r >= da + big.m.dim and c >= da + big.m.dim:
            out.data[(r - big.m.dim + dm_small, c - big.m.dim + dm_small)] = v
        elif da <= r < da + big.m.dim and da <= c < da + big.m.dim:
            rr, cc = r - da, c - da
            if rr in rows and cc in cols:
                out.data[(da + rr - rows.start, da + cc - cols.start)] = v
    return out


@dataclass
class Theorem3Report:
    hh1_dim: int
    diag_dim: int            # classes of D'{M,N} in HH^1 = the shared part
    hom_mn_dim: int
    hom_nm_dim: int
    sum_is_all: bool
    intersection_is_diag: bool
    off_diagonal_brackets_vanish: bool
    restrictions_are_lie_morphisms: bool
    restrictions_same_image: bool


def theorem3_decomposition(m: Bimodule, n: Bimodule,
                           name: str = "") -> Theorem3Report:
    """The two Lie subalgebras generated by the diagonal part and one
    off-diagonal Hom block, their sum and intersection inside HH^1 of
    [A M(+)N; 0 B], and the bracket-compatibility of the restrictions."""
    if m.a is not n.a or m.b is not n.b:
        raise IncompatibleBimodule("bimodules over different pairs")
    a, b = m.a, m.b
    F = a.field
    mn = direct_sum_bimodule([m, n], name=name or "M+N")
    t = triangular_algebra(a, b, mn)
    t_m = triangular_algebra(a, b, m)
    ds = derivation_space(t)
    ds_m = derivation_space(t_m)
    da, dm, dn = a.dim, m.dim, n.dim
    nn = t.dim

    # split Der' into diagonal and the two off-diagonal Hom blocks
    def gamma_block(d: Mat, rows: range, cols: range) -> Mat:
        out = Mat(F, len(rows), len(cols))
        for (r, c), v in d.data.items():
            if da <= r < da + dm + dn and da <= c < da + dm + dn:
                rr, cc = r - da, c - da
                if rr in rows and cc in cols:
                    out.data[(rr - rows.start, cc - cols.start)] = v
        return out

    m_rows, n_rows = range(0, dm), range(dm, dm + dn)
    # D'{M,N} as a subspace: solve for combinations with zero off-diagonals
    coeffs = Mat(F, 2 * dm * dn, len(ds.der_basis))
    for j, d in enumerate(ds.der_basis):
        g1 = gamma_block(d, n_rows, m_rows)
        g2 = gamma_block(d, m_rows, n_rows)
        for (r, c), v in g1.data.items():
            coeffs.add_entry(r * dm + c, j, v)
        for (r, c), v in g2.data.items():
            coeffs.add_entry(dn * dm + r * dn + c, j, v)
    combos = kernel_basis(coeffs)
    diag_basis = []
    for row in combos.basis:
        acc = Mat(F, nn, nn)
        for j, coef in row.items():
            acc = acc + ds.der_basis[j].scale(coef)
        diag_basis.append(acc)

    hom_mn = hom_basis(m, n, "both")
    hom_nm = hom_basis(n, m, "both")
    d_mn = []
    for phi in hom_mn:
        gamma = Mat(F, dm + dn, dm + dn)
        for (r, c), v in phi.data.items():
            gamma.data[(dm + r, c)] = v
        d_mn.append(_embed_gamma_derivation(t, gamma))
    d_nm = []
    for phi in hom_nm:
        gamma = Mat(F, dm + dn, dm + dn)
        for (r, c), v in phi.data.items():
            gamma.data[(r, dm + c)] = v
        d_nm.append(_embed_gamma_derivation(t, gamma))
    for d in d_mn + d_nm:
        if not is_derivation(t, d):
            raise NotADerivation("off-diagonal hom block is not a derivation")

    # classes inside HH^1 of the big algebra
    def class_span(mats):
        vecs = []
        for d in mats:
            co = ds.class_coords(d)
            if co is None:
                raise NotADerivation("not a derivation class")
            vecs.append({i: v for i, v in enumerate(co) if v})
        return Subspace.from_vectors(F, ds.hh1_dim, vecs)

    s_diag = class_span(diag_basis)
    s_mn = class_span(d_mn)
    s_nm = class_span(d_nm)
    upper = subspace_sum(s_diag, s_mn)     # classes of D'(M,N)
    lower = subspace_sum(s_diag, s_nm)
    total = subspace_sum(upper, lower)
    inter = subspace_intersection(upper, lower)
    sum_is_all = total.dim == ds.hh1_dim
    intersection_is_diag = (inter.dim == s_diag.dim
                            and s_diag.contains_subspace(inter))

    # off-diagonal blocks bracket to zero among themselves
    off_ok = True
    for xs in (d_mn, d_nm):
        for x in xs:
            for y in xs:
                if not ((x @ y) - (y @ x)).is_zero():
                    off_ok = False

    # the three restriction maps respect brackets modulo inner derivations
    def restricts_as_lie_morphism(mats) -> bool:
        for x in mats:
            for y in mats:
                bracket = (x @ y) - (y @ x)
                rb = restrict_derivation(t, t_m, bracket, m_rows, m_rows)
                rx = restrict_derivation(t, t_m, x, m_rows, m_rows)
                ry = restrict_derivation(t, t_m, y, m_rows, m_rows)
                defect = rb - ((rx @ ry) - (ry @ rx))
                if not ds_m.int_subspace.contains(dict(mat_to_vec(defect))):
                    return False
        return True

    lie_ok = (restricts_as_lie_morphism(diag_basis)
              and restricts_as_lie_morphism(diag_basis + d_mn)
              and restricts_as_lie_morphism(diag_basis + d_nm))

    # all three restrictions have the same image in HH^1 of [A M; 0 B]
    def image_span(mats):
        vecs = []
        for d in mats:
            rd = restrict_derivation(t, t_m, d, m_rows, m_rows)
            co = ds_m.class_coords(rd)
            vecs.append({i: v for i, v in enumerate(co) if v})
        return Subspace.from_vectors(F, ds_m.hh1_dim, vecs)

    img_diag = image_span(diag_basis)
    img_up = image_span(diag_basis + d_mn)
    img_low = image_span(diag_basis + d_nm)
    img_full = image_span(ds.der_basis)
    same_image = (img_diag == img_up == img_low == img_full)

    return Theorem3Report(
        ds.hh1_dim, s_diag.dim, len(hom_mn), len(hom_nm),
        sum_is_all, intersection_is_diag, off_ok, lie_ok, same_image)


# --- the delta[M] membership test -------------------------------------------

def compatible_triple_space(m: Bimodule) -> Subspace:
    """All (alpha, beta, mu) with alpha in Der(A), beta in Der(B) and the two
    module compatibilities mu(am) = alpha(a)m + a mu(m), mu(mb) = mu(m)b + m beta(b).
    Coordinates: alpha (da^2) | beta (db^2) | mu (dm^2), each row-major."""
    a, b = m.a, m.b
    F = a.field
    da, db, dm = a.dim, b.dim, m.dim
    na, nb, nm = da * da, db * db, dm * dm
    total = na + nb + nm
    rows = []

    def embed(mat: Mat, off: int) -> Mat:
        out = Mat(F, mat.rows, total)
        for (r, c), v in mat.data.items():
            out.data[(r, c + off)] = v
        return out

    lk_a = _leibniz_constraints(a)
    lk_b = _leibniz_constraints(b)
    rows.append(embed(lk_a, 0))
    rows.append(embed(lk_b, na))
    # mu(a m) - a mu(m) - alpha(a) m = 0 for all (a, m) basis pairs
    for i in range(da):
        con = Mat(F, dm * dm, total)
        lhs = None
        # mu L_i - L_i mu as a function of mu
        for (w2, w), v in m.left_mat(i).data.items():
            # (mu @ L_i)[r, w] = mu[r, w2] L_i[w2, w]
            for r in range(dm):
                con.add_entry(r * dm + w, na + nb + r * dm + w2, v)
            # -(L_i @ mu)[w2, c] = - L_i[w2, w] mu[w, c]
            for c in range(dm):
                con.add_entry(w2 * dm + c, na + nb + w * dm + c, F.neg(v))
        # -(alpha(e_i)) m: alpha column i: -(sum_k alpha[k,i] L_k)
        for k in range(da):
            for (w2, w), v in m.left_mat(k).data.items():
                con.add_entry(w2 * dm + w, k * da + i, F.neg(v))
        rows.append(con)
    # mu(m b) - mu(m) b - m beta(b) = 0
    for j in range(db):
        con = Mat(F, dm * dm, total)
        for (w2, w), v in m.right_mat(j).data.items():
            for r in range(dm):
                con.add_entry(r * dm + w, na + nb + r * dm + w2, v)
            for c in range(dm):
                con.add_entry(w2 * dm + c, na + nb + w * dm + c, F.neg(v))
        for k in range(db):
            for (w2, w), v in m.right_mat(k).data.items():
                con.add_entry(w2 * dm + w, na + k * db + j, F.neg(v))
        rows.append(con)
    return kernel_basis(vstack(rows))


def _leibniz_constraints(t: BasisAlgebra) -> Mat:
    F = t.field
    d = t.dim
    lefts = [t.left_mult_mat(i) for i in range(d)]
    rights = [t.right_mult_mat(i) for i in range(d)]
    con = Mat(F, d * d * d, d * d)
    r0 = 0
    for i in range(d):
        for j in range(d):
            for l, c in t.product_basis(i, j).items():
                for k in range(d):
                    con.add_entry(r0 + k, k * d + l, c)
            for (k, k2), v in rights[j].data.items():
                con.add_entry(r0 + k, k2 * d + i, F.neg(v))
            for (k, k2), v in lefts[i].data.items():
                con.add_entry(r0 + k, k2 * d + j, F.neg(v))
            r0 += d
    return con


def _pair_projection(sub: Subspace, na: int, nb: int) -> Subspace:
    """Project the (alpha, beta, mu) solution space onto (alpha, beta)."""
    vecs = []
    for row in sub.basis:
        vecs.append({c: v for c, v in row.items() if c < na + nb})
    return Subspace.from_vectors(sub.field, na + nb, vecs)


@dataclass
class DeltaReport:
    member: bool
    obstruction_witness: tuple | None   # (alpha, beta, mu) mats, no nu exists
    sequence: SequenceReport | None
    dims: dict

    def to_dict(self):
        return {
            "member": self.member,
            "has_obstruction": self.obstruction_witness is not None,
            "dims": self.dims,
            "sequence": self.sequence.to_dict() if self.sequence else None,
        }


def delta_report(m: Bimodule, n: Bimodule) -> DeltaReport:
    """N lies in delta[M] iff every (alpha, beta) that extends over M also
    extends over N; when it does, the five-term sequence

    0 -> Z(T_{M+N}) -> Z(T_M) -> End(N) -> H1{M,N} -> HH1(T_M) -> 0

    is built on explicit bases and checked exact by rank arithmetic."""
    a, b = m.a, m.b
    F = a.field
    da, db = a.dim, b.dim
    na, nb = da * da, db * db
    s_m = compatible_triple_space(m)
    s_n = compatible_triple_space(n)
    p_m = _pair_projection(s_m, na, nb)
    p_n = _pair_projection(s_n, na, nb)
    member = all(p_n.contains(dict(r)) for r in p_m.basis)
    witness = None
    if not member:
        for row in s_m.basis:
            pair = {c: v for c, v in row.items() if c < na + nb}
            if not p_n.contains(dict(pair)):
                alpha = vec_to_mat(F, {c: v for c, v in row.items() if c < na}, da, da)
                beta = vec_to_mat(F, {c - na: v for c, v in row.items()
                                      if na <= c < na + nb}, db, db)
                mu = vec_to_mat(F, {c - na - nb: v for c, v in row.items()
                                    if c >= na + nb}, m.dim, m.dim)
                witness = (alpha, beta, mu)
                break
        return DeltaReport(False, witness, None,
                           {"pairs_over_M": p_m.dim, "pairs_over_N": p_n.dim})
    seq = _delta_sequence(m, n)
    return DeltaReport(True, None, seq,
                       {"pairs_over_M": p_m.dim, "pairs_over_N": p_n.dim})


def _delta_sequence(m: Bimodule, n: Bimodule) -> SequenceReport:
    a, b = m.a, m.b
    F = a.field
    da, db, dm, dn = a.dim, b.dim, m.dim, n.dim
    mn = direct_sum_bimodule([m, n])
    t_big = triangular_algebra(a, b, mn)
    t_m = triangular_algebra(a, b, m)
    z_big = center(t_big)
    z_m = center(t_m)
    end_n = hom_basis(n, n, "both")
    ds_big = derivation_space(t_big)
    ds_m = derivation_space(t_m)
    m_rows = range(0, dm)

    # H1{M,N}: classes of the diagonal subalgebra D'{M,N}
    coeffs = Mat(F, 2 * dm * dn, len(ds_big.der_basis))
    for j, d in enumerate(ds_big.der_basis):
        for (r, c), v in d.data.items():
            if da <= r < da + dm + dn and da <= c < da + dm + dn:
                rr, cc = r - da, c - da
                if rr >= dm and cc < dm:
                    coeffs.add_entry((rr - dm) * dm + cc, j, v)
                elif rr < dm and cc >= dm:
                    coeffs.add_entry(dn * dm + rr * dn + (cc - dm), j, v)
    combos = kernel_basis(coeffs)
    diag_basis = []
    for row in combos.basis:
        acc = Mat(F, t_big.dim, t_big.dim)
        for j, coef in row.items():
            acc = acc + ds_big.der_basis[j].scale(coef)
        diag_basis.append(acc)
    # representatives of H1{M,N} = D'{M,N} / Int'
    int_sub = ds_big.int_subspace
    resid = Subspace(F, int_sub.ambient_dim,
                     [dict(r) for r in int_sub.basis], list(int_sub.pivots))
    h1mn_reps = []
    for d in diag_basis:
        r = resid.reduce(mat_to_vec(d))
        if r:
            h1mn_reps.append(vec_to_mat(F, r, t_big.dim, t_big.dim))
            resid = Subspace.from_vectors(
                F, int_sub.ambient_dim,
                [dict(x) for x in resid.basis] + [dict(r)])
    span_h1mn = Mat.from_columns(
        F, t_big.dim * t_big.dim,
        [tuple(_dense(F, mat_to_vec(h), t_big.dim * t_big.dim)) for h in h1mn_reps]
        + [tuple(_dense(F, dict(r), t_big.dim * t_big.dim)) for r in int_sub.basis])

    # map 1: Z(T_{M+N}) -> Z(T_M), identity on the (a, b) coordinates
    z_big_vecs = z_big.basis_vectors()
    rhs = []
    for z in z_big_vecs:
        v = list(z[:da]) + [F.zero()] * dm + list(z[da + dm + dn:])
        rhs.append(tuple(v))
    span_zm = Mat.from_columns(F, t_m.dim, z_m.basis_vectors())
    sols = solve_multi(span_zm, rhs)
    map1 = Mat.from_columns(F, z_m.dim, [tuple(s) for s in sols])

    # map 2: Z(T_M) -> End(N), z = (a0, b0) -> (x -> a0 x - x b0)
    span_end = Mat.from_columns(
        F, dn * dn, [tuple(_dense(F, mat_to_vec(e), dn * dn)) for e in end_n])
    rhs = []
    for z in z_m.basis_vectors():
        nu = Mat(F, dn, dn)
        for i in range(da):
            if z[i]:
                nu = nu + n.left_mat(i).scale(z[i])
        for j in range(db):
            if z[da + dm + j]:
                nu = nu - n.right_mat(j).scale(z[da + dm + j])
        rhs.append(tuple(_dense(F, mat_to_vec(nu), dn * dn)))
    sols = solve_multi(span_end, rhs)
    map2 = Mat.from_columns(F, len(end_n), [tuple(s) for s in sols])

    # map 3: End(N) -> H1{M,N}, nu -> class of [0 diag(0, nu); 0 0]
    rhs = []
    for e in end_n:
        gamma = Mat(F, dm + dn, dm + dn)
        for (r, c), v in e.data.items():
            gamma.data[(dm + r, dm + c)] = v
        dmat = _embed_gamma_derivation(t_big, gamma)
        rhs.append(tuple(_dense(F, mat_to_vec(dmat), t_big.dim * t_big.dim)))
    sols = solve_multi(span_h1mn, rhs)
    map3 = Mat.from_columns(F, len(h1mn_reps),
                            [tuple(s[: len(h1mn_reps)]) for s in sols])

    # map 4: H1{M,N} -> HH1(T_M), restriction of representatives
    rhs = []
    for h in h1mn_reps:
        rd = restrict_derivation(t_big, t_m, h, m_rows, m_rows)
        co = ds_m.class_coords(rd)
        rhs.append(co)
    map4 = Mat.from_columns(F, ds_m.hh1_dim, [tuple(r) for r in rhs])

    labels = ["Z(T_{M+N})", "Z(T_M)", "End(N)", "H1{M,N}", "HH1(T_M)"]
    dims = [z_big.dim, z_m.dim, len(end_n), len(h1mn_reps), ds_m.hh1_dim]
    return linear_sequence_report("delta", labels, dims,
                                  [map1, map2, map3, map4], F)


@dataclass
class ClosureCheckReport:
    checks: list[tuple[str, bool]]

    @property
    def all_hold(self):
        return all(ok for _, ok in self.checks)


def delta_closure_checks(m: Bimodule, witnesses: list[Bimodule]) -> ClosureCheckReport:
    """Direct sums of members stay in delta[M]; direct factors of members
    inherit membership."""
    checks = []
    mem = {i: delta_report(m, n).member for i, n in enumerate(witnesses)}
    for i, ni in enumerate(witnesses):
        for j, nj in enumerate(witnesses):
            if i > j:
                continue
            s = direct_sum_bimodule([ni, nj])
            s_mem = delta_report(m, s).member
            if mem[i] and mem[j]:
                checks.append((f"sum of members {i},{j} stays a member",
                               s_mem))
            if s_mem:
                checks.append((f"factors of member sum {i},{j} are members",
                               mem[i] and mem[j]))
    return ClosureCheckReport(checks)


def tensor_over_action(c: BasisAlgebra, action_on_m: list[Mat],
                       x_dim: int, x_action: list[Mat],
                       m: Bimodule, name: str = "") -> Bimodule:
    """X (x)_C M for a right C-module X and a C-action C -> End_{A(x)B^o}(M):
    the quotient of X (x) M by (x.c (x) m) - (x (x) c.m)."""
    F = m.a.field
    dm = m.dim
    amb = x_dim * dm
    rels = []
    for j in range(c.dim):
        for xi in range(x_dim):
            for w in range(dm):
                rel: dict = {}
                for x2 in range(x_dim):
                    v = x_action[j].data.get((x2, xi))
                    if v:
                        rel[x2 * dm + w] = v
                for (w2, _w), v in action_on_m[j].data.items():
                    if _w == w:
                        cur = rel.get(xi * dm + w2)
                        nv = F.sub(cur, v) if cur is not None else F.neg(v)
                        if nv:
                            rel[xi * dm + w2] = nv
                        elif cur is not None:
                            del rel[xi * dm + w2]
                if rel:
                    rels.append(rel)
    rel_sub = Subspace.from_vectors(F, amb, rels)
    pivset = set(rel_sub.pivots)
    qcoords = [h for h in range(amb) if h not in pivset]
    qdim = len(qcoords)
    pos = {h: i for i, h in enumerate(qcoords)}

    def project(vec: dict) -> dict:
        resid = rel_sub.reduce(dict(vec))
        return {pos[c]: v for c, v in resid.items()}

    left, right = {}, {}
    for i in range(m.a.dim):
        lm = m.left_mat(i)
        for h in qcoords:
            xi, w = divmod(h, dm)
            img: dict = {}
            for (w2, _w), v in lm.data.items():
                if _w == w:
                    img[xi * dm + w2] = v
            pr = project(img)
            if pr:
                left[(i, pos[h])] = pr
    for j in range(m.b.dim):
        rm = m.right_mat(j)
        for h in qcoords:
            xi, w = divmod(h, dm)
            img = {}
            for (w2, _w), v in rm.data.items():
                if _w == w:
                    img[xi * dm + w2] = v
            pr = project(img)
            if pr:
                right[(pos[h], j)] = pr
    labels = [f"t{i}" for i in range(qdim)]
    return Bimodule(m.a, m.b, qdim, labels, left, right,
                    name=name or f"X(x){m.name}")


# --- small probes used by the corpus scripts --------------------------------

def r1_square_commutes(m: Bimodule, mp: Bimodule, mpp: Bimodule) -> bool:
    """The two composite restrictions HH1(T_{M+M'+M''}) -> HH1(T_M) agree."""
    a, b = m.a, m.b
    big = direct_sum_bimodule([m, mp, mpp])
    t_big = triangular_algebra(a, b, big)
    t_mp = triangular_algebra(a, b, direct_sum_bimodule([m, mp]))
    t_mpp = triangular_algebra(a, b, direct_sum_bimodule([m, mpp]))
    t_m = triangular_algebra(a, b, m)
    ds_big = derivation_space(t_big)
    ds_m = derivation_space(t_m)
    dm, dp, dpp = m.dim, mp.dim, mpp.dim
    for h in ds_big.hh1_basis:
        r1 = restrict_derivation(t_big, t_mp, h, range(0, dm + dp),
                                 range(0, dm + dp))
        r1 = restrict_derivation(t_mp, t_m, r1, range(0, dm), range(0, dm))
        r2 = _restrict_skip(t_big, t_mpp, h, dm, dp, dpp)
        r2 = restrict_derivation(t_mpp, t_m, r2, range(0, dm), range(0, dm))
        c1 = ds_m.class_coords(r1)
        c2 = ds_m.class_coords(r2)
        if c1 != c2:
            return False
    return True


def _restrict_skip(t_big, t_small, d: Mat, dm: int, dp: int, dpp: int) -> Mat:
    """Restriction T_{M+M'+M''} -> T_{M+M''}: drop the M' rows and columns."""
    F = t_big.field
    da = t_big.triangular.a.dim
    keep = list(range(dm)) + list(range(dm + dp, dm + dp + dpp))
    pos = {w: i for i, w in enumerate(keep)}
    out = Mat(F, t_small.dim, t_small.dim)
    big_m = dm + dp + dpp
    for (r, c), v in d.data.items():
        if r < da and c < da:
            out.data[(r, c)] = v
        elif r >= da + big_m and c >= da + big_m:
            out.data[(r - big_m + dm + dpp, c - big_m + dm + dpp)] = v
        elif da <= r < da + big_m and da <= c < da + big_m:
            rr, cc = r - da, c - da
            if rr in pos and cc in pos:
                out.data[(da + pos[rr], da + pos[cc])] = v
    return out


def r1_lie_defect_count(m: Bimodule, n: Bimodule) -> int:
    """How many basis pairs of HH1(T_{M+N}) fail bracket-compatibility under
    the full restriction r1 (not restricted to the diagonal subalgebra).
    Reported, never asserted: the restriction is only known to respect
    brackets on the diagonal part."""
    a, b = m.a, m.b
    t_big = triangular_algebra(a, b, direct_sum_bimodule([m, n]))
    t_m = triangular_algebra(a, b, m)
    ds_big = derivation_space(t_big)
    ds_m = derivation_space(t_m)
    dm = m.dim
    bad = 0
    for x in ds_big.hh1_basis:
        for y in ds_big.hh1_basis:
            bracket = (x @ y) - (y @ x)
            rb = restrict_derivation(t_big, t_m, bracket, range(dm), range(dm))
            rx = restrict_derivation(t_big, t_m, x, range(dm), range(dm))
            ry = restrict_derivation(t_big, t_m, y, range(dm), range(dm))
            defect = rb - ((rx @ ry) - (ry @ rx))
            if not ds_m.int_subspace.contains(dict(mat_to_vec(defect))):
                bad += 1
    return bad
