from fractions import Fraction

import pytest

from hhlab.errors import FieldMismatch, IncompatibleBimodule, NotASubspace
from hhlab.fields import Field, QQ
from hhlab.algebras import (
    BasisAlgebra, algebra_as_left_module, center, direct_sum_bimodule,
    dual_numbers, end_algebra, free_kronecker_bimodule, ground_field,
    hom_basis, hom_coefficient_bimodule, intertwiner_basis, make_algebra,
    make_bimodule, matrix_algebra, opposite, power_bimodule, product_algebra,
    regular_bimodule, tensor_algebra, triangular_algebra, upper_triangular_2x2,
    validate_algebra, validate_bimodule, zero_bimodule,
)

F2 = Field(2)


def kronecker_algebra(field, m):
    """[K K^m; 0 K], dim m + 2."""
    a = ground_field(field, "K")
    b = ground_field(field, "K")
    bim = free_kronecker_bimodule(a, b, m)
    return triangular_algebra(a, b, bim, name=f"K{m}")


def test_validate_ground_field_and_dual_numbers():
    assert validate_algebra(ground_field(QQ)).valid
    assert validate_algebra(dual_numbers(QQ)).valid
    assert validate_algebra(dual_numbers(F2)).valid


def test_validate_reports_unit_violation():
    # b1*b1 = b2 with a broken unit coordinate
    bad = make_algebra(QQ, ["b1", "b2"], [(0, 0, 1, 1)], [1, 0])
    rep = validate_algebra(bad)
    assert not rep.valid
    assert any("unit" in v for v in rep.violations)


def test_validate_reports_associativity_violation():
    tr = [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1)]
    ok = make_algebra(QQ, ["1", "x"], tr, [1, 0])  # Z/2 group algebra
    assert validate_algebra(ok).valid
    # x*x = y, x*y = 1: then (xx)x = yx = 0 but x(xx) = xy = 1
    unit_rows = [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (0, 2, 2, 1), (2, 0, 2, 1)]
    bad = make_algebra(QQ, ["1", "x", "y"],
                       unit_rows + [(1, 1, 2, 1), (1, 2, 0, 1)], [1, 0, 0])
    rep = validate_algebra(bad)
    assert any("associativity" in v for v in rep.violations)


def test_opposite_is_involution():
    a = upper_triangular_2x2(QQ)
    aoo = opposite(opposite(a))
    assert aoo.mult == a.mult and aoo.unit == a.unit


def test_opposite_of_upper_triangular_validates():
    ao = opposite(upper_triangular_2x2(QQ))
    assert validate_algebra(ao).valid
    assert ao.mult != upper_triangular_2x2(QQ).mult  # genuinely noncommutative


def test_opposite_fixes_commutative():
    d = dual_numbers(QQ)
    assert opposite(d).mult == d.mult


def test_tensor_dims_and_validation():
    k = ground_field(QQ)
    assert tensor_algebra(k, k).dim == 1
    a2 = dual_numbers(QQ)
    a3 = upper_triangular_2x2(QQ)
    assert tensor_algebra(a2, a3).dim == 6
    ee = tensor_algebra(a2, a2)
    assert ee.dim == 4
    assert validate_algebra(ee).valid
    with pytest.raises(FieldMismatch):
        tensor_algebra(ground_field(QQ), ground_field(F2))


def test_triangular_kronecker():
    t = kronecker_algebra(QQ, 2)
    assert t.dim == 4
    assert validate_algebra(t).valid
    for m in range(1, 5):
        assert kronecker_algebra(QQ, m).dim == m + 2


def test_triangular_zero_bimodule_is_product():
    k = ground_field(QQ)
    t = product_algebra(k, k)
    assert t.dim == 2
    assert validate_algebra(t).valid


def test_triangular_rejects_foreign_bimodule():
    a = ground_field(QQ)
    b = ground_field(QQ)
    bim = free_kronecker_bimodule(a, b, 1)
    with pytest.raises(IncompatibleBimodule):
        triangular_algebra(b, a, bim)


def test_center_dims():
    assert center(kronecker_algebra(QQ, 2)).dim == 1
    assert center(dual_numbers(QQ)).dim == 2
    assert center(upper_triangular_2x2(QQ)).dim == 1
    assert center(kronecker_algebra(QQ, 1)).dim == 1


def test_bimodule_validation():
    a = ground_field(QQ)
    b = ground_field(QQ)
    m = free_kronecker_bimodule(a, b, 3)
    assert validate_bimodule(m).valid
    bad = make_bimodule(a, b, ["m0"], [(0, 0, 0, 2)], [(0, 0, 0, 1)])
    rep = validate_bimodule(bad)
    assert any("left unit" in v for v in rep.violations)


def test_alpha_beta_are_algebra_morphisms():
    # alpha(e_i e_j) = alpha(e_i) alpha(e_j); beta lands in the opposite.
    a = upper_triangular_2x2(QQ)
    k = ground_field(QQ)
    m = algebra_as_left_module(a, k)
    assert validate_bimodule(m).valid
    al = m.alpha_mats()
    for i in range(a.dim):
        for j in range(a.dim):
            prod = al[0].field and None
            acc = al[i] @ al[j]
            expect = None
            for kk, c in a.product_basis(i, j).items():
                term = al[kk].scale(c)
                expect = term if expect is None else expect + term
            if expect is None:
                assert acc.is_zero()
            else:
                assert acc == expect
    # unital
    unit_mat = None
    for i, c in enumerate(a.unit):
        if c:
            term = al[i].scale(c)
            unit_mat = term if unit_mat is None else unit_mat + term
    from hhlab.linalg import Mat
    assert unit_mat == Mat.identity(QQ, m.dim)


def test_beta_reverses_products():
    b = upper_triangular_2x2(QQ)
    k = ground_field(QQ)
    # row space K^2 with right multiplication by 2x2 upper triangulars:
    # basis m1, m2; m1.E11 = m1, m1.E12 = m2, m2.E22 = m2
    m = make_bimodule(k, b, ["m1", "m2"],
                      [(0, 0, 0, 1), (0, 1, 1, 1)],
                      [(0, 0, 0, 1), (0, 1, 1, 1), (1, 2, 1, 1)],
                      name="row2")
    assert validate_bimodule(m).valid
    be = m.beta_mats()
    for i in range(b.dim):
        for j in range(b.dim):
            acc = be[j] @ be[i]  # beta(e_i e_j) composes in reversed order
            expect = None
            for kk, c in b.product_basis(i, j).items():
                term = be[kk].scale(c)
                expect = term if expect is None else expect + term
            if expect is None:
                assert acc.is_zero()
            else:
                assert acc == expect


def test_end_algebra_full_matrix():
    a = ground_field(QQ)
    b = ground_field(QQ)
    for m in range(1, 4):
        bim = free_kronecker_bimodule(a, b, m)
        e = end_algebra(bim, "A")
        assert e.dim == m * m
        assert validate_algebra(e).valid


def test_end_algebra_over_both():
    a = ground_field(QQ)
    b = ground_field(QQ)
    bim = free_kronecker_bimodule(a, b, 1)
    assert end_algebra(bim, "both").dim == 1


def test_end_algebra_of_regular_module_is_opposite():
    a = upper_triangular_2x2(QQ)
    k = ground_field(QQ)
    m = algebra_as_left_module(a, k)
    e = end_algebra(m, "A")
    assert e.dim == 3
    assert validate_algebra(e).valid
    # f -> f(1) is an algebra isomorphism End_A(A) -> A^o
    mats = intertwiner_basis(m, "A")
    unit = a.unit
    img = [mm.apply(unit) for mm in mats]
    for i in range(e.dim):
        for j in range(e.dim):
            comp = (mats[i] @ mats[j]).apply(unit)
            expect = a.product(img[j], img[i])  # reversed product
            assert comp == expect


def test_hom_basis_dims():
    a = ground_field(QQ)
    b = ground_field(QQ)
    m2 = free_kronecker_bimodule(a, b, 2)
    m3 = free_kronecker_bimodule(a, b, 3)
    assert len(hom_basis(m2, m3, "both")) == 6
    assert len(hom_basis(m2, m3, "A")) == 6
    z = zero_bimodule(a, b)
    assert len(hom_basis(z, m2, "both")) == 0


def test_hom_coefficient_bimodule():
    a = ground_field(QQ)
    b = ground_field(QQ)
    lam = tensor_algebra(a, opposite(b))
    m2 = free_kronecker_bimodule(a, b, 2)
    m3 = free_kronecker_bimodule(a, b, 3)
    h = hom_coefficient_bimodule(m2, m3, lam)
    assert h.dim == 6
    assert validate_bimodule(h).valid
    hk = hom_coefficient_bimodule(
        free_kronecker_bimodule(a, b, 1), free_kronecker_bimodule(a, b, 1), lam)
    assert hk.dim == 1 and validate_bimodule(hk).valid


def test_hom_coefficient_noncommutative_side():
    # B noncommutative: the action axioms are the sharp part.
    k = ground_field(QQ)
    b = matrix_algebra(QQ, 2)
    m = make_bimodule(k, b, ["c1", "c2"],
                      [(0, 0, 0, 1), (0, 1, 1, 1)],
                      # column K^2 with right action through b = E(rc): e_w . E(rc)
                      # treat M as row vectors: m_w . E(r c) = delta_{w r} m_c
                      [(0, 0, 0, 1), (0, 1, 1, 1), (1, 2, 0, 1), (1, 3, 1, 1)],
                      name="row2")
    assert validate_bimodule(m).valid
    lam = tensor_algebra(k, opposite(b))
    h = hom_coefficient_bimodule(m, m, lam)
    assert validate_bimodule(h).valid


def test_direct_sum_and_power():
    a = ground_field(QQ)
    b = ground_field(QQ)
    m1 = free_kronecker_bimodule(a, b, 1)
    m2 = free_kronecker_bimodule(a, b, 2)
    s = direct_sum_bimodule([m1, m2])
    assert s.dim == 3 and validate_bimodule(s).valid
    p = power_bimodule(m2, 3)
    assert p.dim == 6 and validate_bimodule(p).valid
    assert power_bimodule(m2, 0).dim == 0


def test_regular_bimodule_validates():
    t = kronecker_algebra(QQ, 2)
    r = regular_bimodule(t)
    assert validate_bimodule(r).valid
    d = dual_numbers(F2)
    assert validate_bimodule(regular_bimodule(d)).valid
