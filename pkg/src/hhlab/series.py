"""Hilbert-Poincare series of Hochschild cohomology and the splitting
identities that reduce the series of [A M^m; 0 B] to the m = 1 case.

Series are truncated polynomials: coefficient i is the exact dimension of
HH^i, degrees 0..n_max-2.  Nothing here converges or approximates.
"""
from __future__ import annotations

from dataclasses import dataclass

from .algebras import (
    BasisAlgebra, Bimodule, algebra_as_left_module, end_algebra, hom_basis,
    intertwiner_basis, mat_to_vec, opposite, power_bimodule,
    triangular_algebra,
)
from .errors import NotProjective
from .hochschild import ext_dims, hh_dims
from .linalg import Mat, Subspace
from .triangular import SplitReport


@dataclass
class PoincarePoly:
    """Truncated generating polynomial sum t^i dim HH^i."""

    coefficients: list[int]
    truncation: int

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coefficients):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append("t" if c == 1 else f"{c}t")
            else:
                terms.append(f"t^{i}" if c == 1 else f"{c}t^{i}")
        return " + ".join(terms) if terms else "0"

    def reduced_mod(self, p: int) -> tuple:
        return tuple(c % p for c in self.coefficients)

    def to_list(self) -> list[int]:
        return list(self.coefficients)


def poincare_poly(t: BasisAlgebra, n_max: int,
                  budget: int | None = None) -> PoincarePoly:
    return PoincarePoly(hh_dims(t, n_max, budget=budget), n_max)


def kronecker_series_check(m: Bimodule, mult: int, n_max: int,
                           budget: int | None = None) -> list[bool]:
    """Coefficientwise: series of [A M^mult; 0 B] equals the series of
    [A M; 0 B] plus t (mult^2 - 1) * (Ext series of M), both sides computed
    through independent pipelines."""
    if mult < 1:
        raise ValueError("multiplicity must be >= 1")
    a, b = m.a, m.b
    lhs = hh_dims(triangular_algebra(a, b, power_bimodule(m, mult)),
                  n_max, budget=budget)
    base = hh_dims(triangular_algebra(a, b, m), n_max, budget=budget)
    xi = ext_dims(m, m, n_max, budget=budget)
    out = []
    for i in range(len(lhs)):
        rhs = base[i] + (mult * mult - 1) * (xi[i - 1] if i >= 1 else 0)
        out.append(lhs[i] == rhs)
    return out


def modp_periodicity_check(chi_family: dict[int, PoincarePoly], p: int) -> bool:
    """chi'(m) = chi'(m') mod p whenever m^2 = m'^2 mod p."""
    mults = sorted(chi_family)
    for i, m1 in enumerate(mults):
        for m2 in mults[i + 1:]:
            if (m1 * m1 - m2 * m2) % p == 0:
                if chi_family[m1].reduced_mod(p) != chi_family[m2].reduced_mod(p):
                    return False
    return True


def is_projective_module(m: Bimodule) -> bool:
    """Dual-basis criterion over A (right side must be the ground field):
    M is A-projective iff id_M lies in the span of y -> psi(y) x for
    psi in Hom_A(M, A), x in M."""
    a = m.a
    F = a.field
    if m.dim == 0:
        return True
    free = algebra_as_left_module(a, m.b)
    duals = hom_basis(m, free, "A")       # A-linear maps M -> A
    gens = []
    for psi in duals:
        for x in range(m.dim):
            # y -> psi(y) . x : composition of psi with right mult into M
            comp = Mat(F, m.dim, m.dim)
            for (r, c), v in psi.data.items():
                # psi(e_c) has coefficient v at algebra basis r; then r . e_x
                for w2, cm in m.left.get((r, x), {}).items():
                    comp.add_entry(w2, c, F.mul(v, cm))
            gens.append(mat_to_vec(comp))
    span = Subspace.from_vectors(F, m.dim * m.dim, gens)
    ident = mat_to_vec(Mat.identity(F, m.dim))
    return span.contains(dict(ident))


def corollary1_check(a: BasisAlgebra, m: Bimodule, mult: int, n_max: int,
                     budget: int | None = None) -> SplitReport:
    """For a projective A-module M and B = (End_A M)^o:

        dim HH^n [A M^mult; 0 B] = dim HH^n A + (mult^2 - 1) dim HH^(n-1) B,

    together with dim HH^n B = dim Ext^n over A (x) B^o of (M, M).
    The projectivity hypothesis is verified by the dual-basis solve."""
    if m.a is not a:
        raise ValueError("module is not over the given algebra")
    if not is_projective_module(m):
        raise NotProjective(f"{m.name or 'module'} fails the dual-basis test")
    ends = intertwiner_basis(m, "A")
    b = opposite(end_algebra(m, "A"))
    b.name = f"(End({m.name}))^o"
    # M as an (A, B)-bimodule: x . f = f(x)
    left = {k: dict(v) for k, v in m.left.items()}
    right = {}
    for j, f in enumerate(ends):
        for (w2, w), v in f.data.items():
            right.setdefault((w, j), {})[w2] = v
    mb = Bimodule(a, b, m.dim, list(m.labels), left, right,
                  name=f"{m.name} over End")
    t = triangular_algebra(a, b, power_bimodule(mb, mult))
    mid = hh_dims(t, n_max, budget=budget)
    hha = hh_dims(a, n_max, budget=budget)
    hhb = hh_dims(b, n_max, budget=budget)
    lhs = [(mult * mult - 1) * (hhb[i - 1] if i >= 1 else 0)
           for i in range(len(mid))]
    holds = [mid[i] == hha[i] + lhs[i] for i in range(len(mid))]
    # companion identity: HH(B) = Ext over A (x) B^o of (M, M)
    ext = ext_dims(mb, mb, n_max, budget=budget)
    companion = [hhb[i] == ext[i] for i in range(len(hhb))]
    return SplitReport(lhs, mid, hha, [h and c for h, c in zip(holds, companion)],
                       True)
