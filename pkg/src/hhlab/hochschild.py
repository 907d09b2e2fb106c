"""Bar and normalized cochain complexes, Hochschild cohomology and Ext.

C^n(T, X) = Hom_K(Tbar^(x)n, X) with the usual coboundary

  (df)(a_1,..,a_{n+1}) = a_1 f(a_2,..) + sum_i (-1)^i f(.., a_i a_{i+1}, ..)
                       + (-1)^(n+1) f(..,a_n) a_{n+1},

where Tbar = T (plain bar complex) or T/K.1 (normalized, the default: it cuts
the cochain dimension from dim(T)^n to (dim(T)-1)^n).  Interior products are
projected back to the reduced basis; action terms use lifted basis vectors.

Degree convention: a request for n_max builds spaces C^0..C^(n_max-1), so
cohomology is reported for degrees 0..n_max-2 (the top constructed degree has
no outgoing differential and is never reported).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .algebras import (
    BasisAlgebra, Bimodule, hom_coefficient_bimodule, opposite, tensor_algebra,
)
from .complexes import (
    CochainComplex, CohomologyResult, DEFAULT_BUDGET, cohomology,
)
from .errors import DegreeTooLarge, IncompatibleBimodule
from .linalg import Mat


@dataclass
class ActionPair:
    """Left/right action matrices of an algebra basis on a coefficient space."""

    algebra: BasisAlgebra
    dim: int
    left: list[Mat]
    right: list[Mat]

    @classmethod
    def from_bimodule(cls, coeff: Bimodule) -> "ActionPair":
        if coeff.a is not coeff.b:
            raise IncompatibleBimodule("coefficients must be a (T,T)-bimodule")
        return cls(coeff.a, coeff.dim,
                   [coeff.left_mat(i) for i in range(coeff.a.dim)],
                   [coeff.right_mat(i) for i in range(coeff.b.dim)])

    @classmethod
    def regular(cls, t: BasisAlgebra) -> "ActionPair":
        return cls(t, t.dim,
                   [t.left_mult_mat(i) for i in range(t.dim)],
                   [t.right_mult_mat(i) for i in range(t.dim)])


@dataclass
class ReducedBasis:
    """Basis bookkeeping for Tbar = T/K.1 (or T itself when not normalized)."""

    indices: list[int]          # algebra indices that survive as Tbar basis
    proj: list[dict[int, object]]  # algebra index -> reduced coordinates

    @property
    def dim(self):
        return len(self.indices)

    @classmethod
    def of(cls, t: BasisAlgebra, normalized: bool) -> "ReducedBasis":
        F = t.field
        if not normalized:
            return cls(list(range(t.dim)),
                       [{i: F.one()} for i in range(t.dim)])
        pivot = next(i for i, c in enumerate(t.unit) if c)
        indices = [i for i in range(t.dim) if i != pivot]
        pos = {i: k for k, i in enumerate(indices)}
        proj: list[dict] = []
        inv = F.inv(t.unit[pivot])
        for i in range(t.dim):
            if i == pivot:
                proj.append({pos[j]: F.neg(F.mul(t.unit[j], inv))
                             for j in indices if t.unit[j]})
            else:
                proj.append({pos[i]: F.one()})
        return cls(indices, proj)

    def project_product(self, t: BasisAlgebra, i: int, j: int) -> dict:
        """Reduced coordinates of the image of e_i e_j."""
        F = t.field
        out: dict = {}
        for k, c in t.product_basis(i, j).items():
            for r, w in self.proj[k].items():
                cur = out.get(r)
                nv = F.add(cur, F.mul(c, w)) if cur is not None else F.mul(c, w)
                if nv:
                    out[r] = nv
                elif cur is not None:
                    del out[r]
        return out


def hochschild_complex(t: BasisAlgebra, coeff: ActionPair, top: int,
                       normalized: bool = True,
                       budget: int | None = None,
                       label: str = "") -> CochainComplex:
    """The complex C^0..C^top of Hochschild cochains of t with given coefficients."""
    if budget is None:
        budget = DEFAULT_BUDGET
    F = t.field
    red = ReducedBasis.of(t, normalized)
    tb, x = red.dim, coeff.dim
    dims = [tb ** n * x for n in range(top + 1)]
    for n in range(top):
        if dims[n] * dims[n + 1] > budget:
            raise DegreeTooLarge(n, dims[n] * dims[n + 1], budget)
    # precompute reduced products and action matrices per reduced index
    prods = {}
    for a in range(tb):
        for b in range(tb):
            prods[(a, b)] = red.project_product(t, red.indices[a], red.indices[b])
    lefts = [coeff.left[red.indices[a]] for a in range(tb)]
    rights = [coeff.right[red.indices[a]] for a in range(tb)]
    diffs = []
    for n in range(top):
        d = Mat(F, dims[n + 1], dims[n])
        sign_last = F.one() if (n + 1) % 2 == 0 else F.neg(F.one())
        for J in iproduct(range(tb), repeat=n + 1):
            flat_j = 0
            for j in J:
                flat_j = flat_j * tb + j
            row_base = flat_j * x
            # left action term
            flat = 0
            for j in J[1:]:
                flat = flat * tb + j
            col_base = flat * x
            for (w2, w), v in lefts[J[0]].data.items():
                d.add_entry(row_base + w2, col_base + w, v)
            # interior contractions
            for i in range(1, n + 1):
                sign = F.one() if i % 2 == 0 else F.neg(F.one())
                for l, c in prods[(J[i - 1], J[i])].items():
                    I = J[: i - 1] + (l,) + J[i + 1:]
                    flat = 0
                    for j in I:
                        flat = flat * tb + j
                    col_base = flat * x
                    val = F.mul(sign, c)
                    for w in range(x):
                        d.add_entry(row_base + w, col_base + w, val)
            # right action term
            flat = 0
            for j in J[:n]:
                flat = flat * tb + j
            col_base = flat * x
            for (w2, w), v in rights[J[n]].data.items():
                d.add_entry(row_base + w2, col_base + w, F.mul(sign_last, v))
        diffs.append(d)
    cx = CochainComplex(F, dims, diffs,
                        labels=[f"{label or 'C'}^{n}" for n in range(top + 1)])
    return cx


def bar_cochain_complex(t: BasisAlgebra, coeff: Bimodule, n_max: int,
                        normalized: bool = True,
                        budget: int | None = None) -> CochainComplex:
    """Hochschild cochain complex with coefficients in a (T,T)-bimodule.

    Builds spaces for degrees 0..n_max-1; cohomology is then reliable for
    degrees 0..n_max-2.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    return hochschild_complex(t, ActionPair.from_bimodule(coeff), n_max - 1,
                              normalized=normalized, budget=budget,
                              label=f"C({t.name})")


def hh_cohomology(t: BasisAlgebra, n_max: int, normalized: bool = True,
                  budget: int | None = None) -> CohomologyResult:
    cx = hochschild_complex(t, ActionPair.regular(t), n_max - 1,
                            normalized=normalized, budget=budget,
                            label=f"C({t.name})")
    return cohomology(cx)


def hh_dims(t: BasisAlgebra, n_max: int, normalized: bool = True,
            budget: int | None = None) -> list[int]:
    """dim HH^n(T) for n = 0..n_max-2, coefficients in T itself."""
    return hh_cohomology(t, n_max, normalized=normalized, budget=budget).dims


def ext_setup(m: Bimodule, n: Bimodule):
    """Lambda = A (x) B^o together with Hom_K(M,N) as a Lambda-bimodule."""
    lam = tensor_algebra(m.a, opposite(m.b), name="Lam")
    return lam, hom_coefficient_bimodule(m, n, lam)


def ext_dims(m: Bimodule, n: Bimodule, n_max: int,
             budget: int | None = None) -> list[int]:
    """dim Ext^i over A (x) B^o for i = 0..n_max-2, via Hochschild cohomology
    of Lambda with coefficients in Hom_K(M, N)."""
    if m.a is not n.a or m.b is not n.b:
        raise IncompatibleBimodule("Ext needs bimodules over the same pair")
    if m.dim == 0 or n.dim == 0:
        return [0] * (n_max - 1)
    lam, coeff = ext_setup(m, n)
    cx = hochschild_complex(lam, ActionPair.from_bimodule(coeff), n_max - 1,
                            budget=budget, label=f"Ext({m.name},{n.name})")
    return cohomology(cx).dims
