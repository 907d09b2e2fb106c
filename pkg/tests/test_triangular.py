import pytest

from hhlab.fields import Field, QQ
from hhlab.algebras import (
    BimoduleFamily, direct_sum_bimodule, free_kronecker_bimodule, ground_field,
    make_bimodule, triangular_algebra, upper_triangular_2x2, zero_bimodule,
)
from hhlab.complexes import cohomology
from hhlab.errors import CoverConditionViolated, HypothesisUnverifiable
from hhlab.hochschild import ext_dims, hh_dims
from hhlab.linalg import Mat, kernel_basis, rank, vstack
from hhlab.triangular import (
    cone_les_report, exchange_check, family_cone_data, is_direct_factor_of_power,
    lambda_cone, modified_cohomology, relative_bar, rho_functoriality_holds,
    section_identity_holds, ses_les_report, sigma_complex, theorem1_check,
    triangular_cochain,
)

F2 = Field(2)


def kk_pair(field=QQ):
    return ground_field(field, "K"), ground_field(field, "K")


def a3_bimodule(field=QQ):
    """Row space of the three-vertex linear quiver over (K, two-vertex path algebra)."""
    a = ground_field(field, "K")
    b = upper_triangular_2x2(field, "A2")
    m = make_bimodule(a, b, ["x", "yx"],
                      [(0, 0, 0, 1), (0, 1, 1, 1)],
                      [(0, 0, 0, 1), (0, 1, 1, 1), (1, 2, 1, 1)], name="MA3")
    return a, b, m


# --- relative bar chain complex --------------------------------------------

def test_relative_bar_zero_bimodule():
    a, b = kk_pair()
    rel = relative_bar(zero_bimodule(a, b), 4)
    assert rel.dims == [0, 0, 0, 0]


def test_relative_bar_degree_zero_expansion():
    # A = B = K, M = K: C_0 = (A (x) M) (+) (M (x) B), dimension 2
    a, b = kk_pair()
    rel = relative_bar(free_kronecker_bimodule(a, b, 1), 4)
    assert rel.dims[0] == 2


@pytest.mark.parametrize("field", [QQ, F2])
def test_relative_bar_is_resolution(field):
    cases = []
    a, b = kk_pair(field)
    cases.append(free_kronecker_bimodule(a, b, 2))
    aa, bb, m = a3_bimodule(field)
    cases.append(m)
    for m in cases:
        rel = relative_bar(m, 5)
        for k in range(len(rel.boundaries) - 1):
            assert (rel.boundaries[k] @ rel.boundaries[k + 1]).is_zero()
        hom = rel.homology_dims()
        assert hom[0] == m.dim
        assert all(h == 0 for h in hom[1:])


def test_relative_bar_lambda_dual_matches_block_construction():
    # Mechanical check: the subspace of A(x)B^o-linear forms on the chain
    # complex has the same dimensions and cohomology as the block complex.
    a, b, m = a3_bimodule()
    rel = relative_bar(m, 4)
    tri = triangular_cochain(m, m, 4)
    lam_on_n = []
    for i in range(a.dim):
        for j in range(b.dim):
            lam_on_n.append(m.right_mat(j) @ m.left_mat(i))
    dual_dims = []
    dual_bases = []
    for k in range(rel.top + 1):
        ck = rel.dims[k]
        acts = rel.lambda_action_mats(k)
        constraints = []
        for lam_c, lam_n in zip(acts, lam_on_n):
            # f(lam x) - lam f(x) = 0 on Hom_K(C_k, N), vectorized row-major
            con = Mat(QQ, m.dim * ck, m.dim * ck)
            for (x2, x), v in lam_c.data.items():
                for r in range(m.dim):
                    con.add_entry(r * ck + x, r * ck + x2, v)
            for (r2, r), v in lam_n.data.items():
                for x in range(ck):
                    con.add_entry(r2 * ck + x, r * ck + x, QQ.neg(v))
            constraints.append(con)
        sub = kernel_basis(vstack(constraints)) if ck else None
        dual_dims.append(sub.dim if sub else 0)
        dual_bases.append(sub)
    assert dual_dims == tri.cx.dims
    # dual differential: (df) = f o boundary; compare cohomology dims
    from hhlab.complexes import CochainComplex
    from hhlab.linalg import solve_multi
    diffs = []
    for k in range(rel.top):
        src, tgt = dual_bases[k], dual_bases[k + 1]
        cols = []
        span = Mat.from_columns(
            QQ, m.dim * rel.dims[k + 1],
            [tuple(_dense(dict(r), m.dim * rel.dims[k + 1])) for r in tgt.basis])
        rhs = []
        for row in src.basis:
            fmat = Mat(QQ, m.dim, rel.dims[k])
            for h, v in row.items():
                fmat.data[(h // rel.dims[k], h % rel.dims[k])] = v
            comp = fmat @ rel.boundaries[k]
            vec = [QQ.zero()] * (m.dim * rel.dims[k + 1])
            for (r, c), v in comp.data.items():
                vec[r * rel.dims[k + 1] + c] = v
            rhs.append(tuple(vec))
        sols = solve_multi(span, rhs)
        assert all(s is not None for s in sols)
        diffs.append(Mat.from_columns(QQ, tgt.dim, [tuple(s) for s in sols]))
    dual_cx = CochainComplex(QQ, dual_dims, diffs)
    assert dual_cx.check_dd_zero()
    assert cohomology(dual_cx).dims == cohomology(tri.cx).dims


def _dense(d, n):
    out = [QQ.zero()] * n
    for c, v in d.items():
        out[c] = v
    return out


# --- triangular cochain complex --------------------------------------------

def test_triangular_cochain_zero():
    a, b = kk_pair()
    z = zero_bimodule(a, b)
    tri = triangular_cochain(z, z, 4)
    assert tri.cx.dims == [0, 0, 0, 0]


def test_triangular_cochain_properties():
    a, b = kk_pair()
    m = free_kronecker_bimodule(a, b, 2)
    tri = triangular_cochain(m, m, 4)
    assert tri.cx.check_dd_zero()
    assert tri.i_a.commutes() and tri.i_b.commutes()
    # the edge projections are surjective degreewise
    for k in range(tri.top + 1):
        assert rank(tri.i_a.mat(k)) == tri.edge_a.dim(k)
        assert rank(tri.i_b.mat(k)) == tri.edge_b.dim(k)


def test_kernel_cohomology_is_shifted_ext():
    a, b = kk_pair()
    m1 = free_kronecker_bimodule(a, b, 1)
    m2 = free_kronecker_bimodule(a, b, 2)
    for m, n, expect in [
        (m1, m1, [0, 1, 0]),
        (m2, m2, [0, 4, 0]),
        (m1, m2, [0, 2, 0]),
    ]:
        tri = triangular_cochain(m, n, 4)
        assert cohomology(tri.kernel_complex()).dims == expect
        assert cohomology(sigma_complex(tri).cone).dims == expect


def test_kernel_cohomology_shifted_ext_noncommutative():
    a, b, m = a3_bimodule()
    tri = triangular_cochain(m, m, 5)
    ker_dims = cohomology(tri.kernel_complex()).dims
    ext = ext_dims(m, m, 4)
    assert ker_dims[1:] == ext[:len(ker_dims) - 1]
    assert ker_dims[0] == 0


# --- cones and the equivalence with the bar complex ------------------------

@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_cone_matches_hochschild_kronecker(m):
    a, b = kk_pair()
    bim = free_kronecker_bimodule(a, b, m)
    fam = BimoduleFamily(a, b, [bim])
    t = triangular_algebra(a, b, bim)
    assert modified_cohomology(fam, 4).dims == hh_dims(t, 4)


def test_cone_matches_hochschild_a3():
    a, b, m = a3_bimodule()
    fam = BimoduleFamily(a, b, [m])
    t = triangular_algebra(a, b, m)
    assert modified_cohomology(fam, 4).dims == hh_dims(t, 4) == [1, 0, 0]


def test_cone_matches_hochschild_f2():
    a, b = kk_pair(F2)
    bim = free_kronecker_bimodule(a, b, 2)
    fam = BimoduleFamily(a, b, [bim])
    assert modified_cohomology(fam, 4).dims == hh_dims(triangular_algebra(a, b, bim), 4)


def test_empty_family_and_zero_bimodule_conventions():
    a, b = kk_pair()
    assert modified_cohomology(BimoduleFamily(a, b, []), 4).dims == [2, 0, 0]
    z = BimoduleFamily(a, b, [zero_bimodule(a, b)])
    assert modified_cohomology(z, 4).dims == [2, 0, 0]


def test_family_cohomology_identity():
    # dim HH^n(T_E) = dim H^n(E) + sum_{i != j} dim Ext^{n-1}(M_i, M_j)
    a, b = kk_pair()
    m1 = free_kronecker_bimodule(a, b, 1, "M1")
    m1b = free_kronecker_bimodule(a, b, 1, "M1b")
    fam = BimoduleFamily(a, b, [m1, m1b])
    hmod = modified_cohomology(fam, 4).dims
    t = triangular_algebra(a, b, fam.reduced_bimodule())
    hh = hh_dims(t, 4)
    e01 = ext_dims(m1, m1b, 4)
    e10 = ext_dims(m1b, m1, 4)
    for n in range(3):
        off = (e01[n - 1] + e10[n - 1]) if n >= 1 else 0
        assert hh[n] == hmod[n] + off
    assert hmod == [1, 1, 0]


def test_block_decomposition_dimension_bookkeeping():
    # C{M (+) N} decomposes degreewise as C{M,N} (+) Sigma_{M,N} (+) Sigma_{N,M}
    a, b = kk_pair()
    m = free_kronecker_bimodule(a, b, 1, "M")
    n = free_kronecker_bimodule(a, b, 2, "N")
    whole = lambda_cone(BimoduleFamily(a, b, [direct_sum_bimodule([m, n])]), 4).cone
    pair = lambda_cone(BimoduleFamily(a, b, [m, n]), 4).cone
    smn = sigma_complex(triangular_cochain(m, n, 4)).cone
    snm = sigma_complex(triangular_cochain(n, m, 4)).cone
    for k in range(whole.top + 1):
        assert whole.dim(k) == pair.dim(k) + smn.dim(k) + snm.dim(k)


# --- long exact sequence reports -------------------------------------------

def test_happel_sequence_kronecker():
    a, b = kk_pair()
    rep = cone_les_report(BimoduleFamily(a, b, [free_kronecker_bimodule(a, b, 2)]), 4)
    dims = rep.node_dims()
    # window around degree 0 -> 1: HH^0 T, HH^0 A x HH^0 B, Ext^0, HH^1 T
    assert dims[1:5] == [1, 2, 4, 3]
    assert rep.all_verified_exact
    checked = [v for v in rep.exact_at if v is not None]
    assert checked and all(checked)


def test_happel_alternating_sum_vanishes():
    a, b = kk_pair()
    rep = cone_les_report(BimoduleFamily(a, b, [free_kronecker_bimodule(a, b, 3)]), 4)
    total = 0
    for i, node in enumerate(rep.nodes):
        total += node.dim if i % 2 == 0 else -node.dim
    assert total == 0
    assert rep.all_verified_exact


def test_lemma1_sequence():
    a, b = kk_pair()
    m1 = free_kronecker_bimodule(a, b, 1, "M")
    m1b = free_kronecker_bimodule(a, b, 1, "N")
    rep = ses_les_report("lemma1", BimoduleFamily(a, b, [m1, m1b]), 4)
    assert rep.all_verified_exact
    # middle node computes HH of [A M(+)N; 0 B] = K2; the Ext node at the
    # shifted position is the triple (1, 1, 1)
    assert rep.nodes[4].dim == 3 and rep.nodes[3].dim == 3
    assert ext_dims(m1, m1b, 3)[0] == ext_dims(m1b, m1, 3)[0] == 1
    t = triangular_algebra(a, b, direct_sum_bimodule([m1, m1b]))
    assert [rep.nodes[1].dim, rep.nodes[4].dim, rep.nodes[7].dim] == hh_dims(t, 4)


def test_lemma3_and_mv_sequences():
    a, b = kk_pair()
    m1 = free_kronecker_bimodule(a, b, 1, "M1")
    m1b = free_kronecker_bimodule(a, b, 1, "M2")
    fam = BimoduleFamily(a, b, [m1, m1b])
    rep = ses_les_report("lemma3", fam, 4, f_subset=(0,))
    assert rep.all_verified_exact
    rep = ses_les_report("mv", fam, 4, f_subset=(0,), g_subset=(1,))
    assert rep.all_verified_exact
    # H(F n G) = H(empty) = HH(A) x HH(B)
    assert rep.nodes[2].dim == 2


def test_theorem4_cover_sequence_and_validation():
    a, b = kk_pair()
    ms = [free_kronecker_bimodule(a, b, 1, f"M{i}") for i in range(3)]
    fam = BimoduleFamily(a, b, ms)
    rep = ses_les_report("theorem4", fam, 3, cover=[(0, 1), (0, 2)])
    assert rep.all_verified_exact
    with pytest.raises(CoverConditionViolated):
        # U_1 n U_2 = {2} is not inside U_0 = {0}
        ses_les_report("theorem4", fam, 3, cover=[(0,), (1, 2), (2, 0)])
    with pytest.raises(CoverConditionViolated):
        # not a cover at all
        ses_les_report("theorem4", fam, 3, cover=[(0,), (1,)])


def test_theorem4_partition_gives_product_of_hha_hhb():
    # a partition cover: U_0 n U_i is empty, contributing HH(A) x HH(B) nodes
    a, b = kk_pair()
    ms = [free_kronecker_bimodule(a, b, 1, f"M{i}") for i in range(2)]
    fam = BimoduleFamily(a, b, ms)
    rep = ses_les_report("theorem4", fam, 3, cover=[(0,), (1,)])
    assert rep.all_verified_exact
    assert rep.nodes[2].dim == 2


def test_functoriality_and_section_identities():
    a, b = kk_pair()
    ms = [free_kronecker_bimodule(a, b, i + 1, f"M{i}") for i in range(3)]
    data = family_cone_data(BimoduleFamily(a, b, ms), 3)
    full = (0, 1, 2)
    assert rho_functoriality_holds(data, (), (0,), full)
    assert rho_functoriality_holds(data, (1,), (0, 1), full)
    assert rho_functoriality_holds(data, (0, 2), (0, 2), full)
    assert section_identity_holds(data, (0,), (1,), full)
    assert section_identity_holds(data, (0, 1), (1, 2), full)
    assert section_identity_holds(data, (0, 1, 2), (0, 2), full)
    # sections are one-sided inverses of the restrictions
    for sub in [(0,), (0, 1), (1, 2)]:
        rho = data.restriction(sub, full)
        sig = data.section(full, sub)
        for k in range(data.top + 1):
            assert (rho[k] @ sig[k]) == Mat.identity(QQ, rho[k].rows)


# --- splitting identities ---------------------------------------------------

@pytest.mark.parametrize("mult", [2, 3, 4])
def test_theorem1_single_member(mult):
    a, b = kk_pair()
    fam = BimoduleFamily(a, b, [free_kronecker_bimodule(a, b, 1)], [mult])
    rep = theorem1_check(fam, 4)
    assert rep.all_hold and rep.section_found
    assert rep.mid_dims == [1, mult * mult - 1, 0]


def test_theorem1_two_members():
    a, b = kk_pair()
    m1 = free_kronecker_bimodule(a, b, 1, "M1")
    m1b = free_kronecker_bimodule(a, b, 1, "M2")
    rep = theorem1_check(BimoduleFamily(a, b, [m1, m1b], [2, 2]), 4)
    assert rep.all_hold
    assert rep.mid_dims == [1, 15, 0]
    assert rep.rhs_dims == [1, 3, 0]
    assert rep.lhs_dims == [0, 12, 0]


def test_theorem1_multiplicity_one_degenerates():
    a, b = kk_pair()
    fam = BimoduleFamily(a, b, [free_kronecker_bimodule(a, b, 2)], [1])
    rep = theorem1_check(fam, 4)
    assert rep.all_hold and rep.lhs_dims == [0, 0, 0]
    assert rep.mid_dims == rep.rhs_dims


def test_exchange_identity():
    a, b = kk_pair()
    m1 = free_kronecker_bimodule(a, b, 1, "M")
    m2 = free_kronecker_bimodule(a, b, 2, "N")
    m3 = free_kronecker_bimodule(a, b, 3, "N3")
    assert all(exchange_check(m1, m2, 4))
    assert all(exchange_check(m2, m3, 4))
    assert all(exchange_check(m2, m2, 4))


def test_exchange_hypothesis_check():
    a, b = kk_pair()
    m1 = free_kronecker_bimodule(a, b, 1)
    m2 = free_kronecker_bimodule(a, b, 2)
    assert is_direct_factor_of_power(m1, m2)
    assert is_direct_factor_of_power(m2, m1)
    z = zero_bimodule(a, b)
    assert is_direct_factor_of_power(z, m1)
    assert not is_direct_factor_of_power(m1, z)
    with pytest.raises(HypothesisUnverifiable):
        exchange_check(m1, z, 4)
