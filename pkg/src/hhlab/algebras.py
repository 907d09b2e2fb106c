"""Finite-dimensional algebras and bimodules by structure constants.

A `BasisAlgebra` is an associative unital algebra with a distinguished basis;
multiplication is a sparse tensor (i, j) -> {k: c} meaning e_i e_j = sum c e_k.
A `Bimodule` over (A, B) is a left-A right-B module given by action tensors,
i.e. a left A (x) B^op module.  Everything is validated eagerly so malformed
input fails fast with a witnessing triple.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import FieldMismatch, IncompatibleBimodule
from .fields import Field
from .linalg import Mat, Subspace, kernel_basis, vstack


def _tensor_insert(tensor, key, k, v):
    row = tensor.setdefault(key, {})
    cur = row.get(k)
    row[k] = v if cur is None else cur + v


def _clean_tensor(field, tensor):
    out = {}
    for key, row in tensor.items():
        cleaned = {k: field.of(v) for k, v in row.items() if field.of(v)}
        if cleaned:
            out[key] = cleaned
    return out


@dataclass
class TriangularBlocks:
    """Block bookkeeping for T = [A M; 0 B] in the fixed basis order A|M|B."""

    a: "BasisAlgebra"
    b: "BasisAlgebra"
    m: "Bimodule"

    @property
    def a_range(self):
        return range(0, self.a.dim)

    @property
    def m_range(self):
        return range(self.a.dim, self.a.dim + self.m.dim)

    @property
    def b_range(self):
        d = self.a.dim + self.m.dim
        return range(d, d + self.b.dim)


@dataclass
class BasisAlgebra:
    field: Field
    dim: int
    labels: list[str]
    mult: dict  # (i, j) -> {k: scalar}
    unit: tuple  # dense coordinates of 1
    name: str = ""
    triangular: TriangularBlocks | None = None

    def product_basis(self, i: int, j: int) -> dict:
        return self.mult.get((i, j), {})

    def product(self, u, v) -> tuple:
        F = self.field
        acc = [F.zero()] * self.dim
        for i, x in enumerate(u):
            if not x:
                continue
            for j, y in enumerate(v):
                if not y:
                    continue
                for k, c in self.product_basis(i, j).items():
                    acc[k] = F.add(acc[k], F.mul(F.mul(x, y), c))
        return tuple(acc)

    def left_mult_mat(self, i: int) -> Mat:
        """Matrix of x -> e_i * x."""
        m = Mat(self.field, self.dim, self.dim)
        for j in range(self.dim):
            for k, c in self.product_basis(i, j).items():
                m.add_entry(k, j, c)
        return m

    def right_mult_mat(self, i: int) -> Mat:
        """Matrix of x -> x * e_i."""
        m = Mat(self.field, self.dim, self.dim)
        for j in range(self.dim):
            for k, c in self.product_basis(j, i).items():
                m.add_entry(k, j, c)
        return m

    def basis_vector(self, i: int) -> tuple:
        F = self.field
        return tuple(F.one() if j == i else F.zero() for j in range(self.dim))

    def __repr__(self):
        tag = self.name or "algebra"
        return f"BasisAlgebra({tag}, dim={self.dim}, {self.field})"


@dataclass
class ValidationReport:
    violations: list[str] = dc_field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations


def validate_algebra(a: BasisAlgebra) -> ValidationReport:
    """Check associativity on all basis triples and two-sided unitality."""
    rep = ValidationReport()
    F = a.field
    if len(a.labels) != a.dim or len(a.unit) != a.dim:
        rep.violations.append("label or unit length does not match dim")
        return rep
    for i in range(a.dim):
        e = a.basis_vector(i)
        if a.product(a.unit, e) != e:
            rep.violations.append(f"unit violation: 1*{a.labels[i]} != {a.labels[i]}")
        if a.product(e, a.unit) != e:
            rep.violations.append(f"unit violation: {a.labels[i]}*1 != {a.labels[i]}")
    for i in range(a.dim):
        ei = a.basis_vector(i)
        for j in range(a.dim):
            ej = a.basis_vector(j)
            pij = a.product(ei, ej)
            for k in range(a.dim):
                ek = a.basis_vector(k)
                lhs = a.product(pij, ek)
                rhs = a.product(ei, a.product(ej, ek))
                if lhs != rhs:
                    rep.violations.append(
                        "associativity fails on "
                        f"({a.labels[i]}, {a.labels[j]}, {a.labels[k]})"
                    )
    return rep


def make_algebra(field, labels, triples, unit, name="") -> BasisAlgebra:
    """Build an algebra from sparse triples (i, j, k, c); validates nothing."""
    mult = {}
    for i, j, k, c in triples:
        _tensor_insert(mult, (i, j), k, field.of(c))
    return BasisAlgebra(field, len(labels), list(labels), _clean_tensor(field, mult),
                        tuple(field.of(x) for x in unit), name=name)


def ground_field(field: Field, name: str = "K") -> BasisAlgebra:
    return make_algebra(field, ["1"], [(0, 0, 0, 1)], [1], name=name)


def dual_numbers(field: Field, name: str = "K[e]") -> BasisAlgebra:
    # basis 1, e with e^2 = 0
    return make_algebra(field, ["1", "e"],
                        [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)],
                        [1, 0], name=name)


def matrix_algebra(field: Field, n: int, name: str = "") -> BasisAlgebra:
    """Full matrix algebra with basis E_{rc}, index r*n + c."""
    labels = [f"E{r}{c}" for r in range(n) for c in range(n)]
    triples = []
    for r in range(n):
        for c in range(n):
            for c2 in range(n):
                # E_{rc} E_{c c2} = E_{r c2}
                triples.append((r * n + c, c * n + c2, r * n + c2, 1))
    unit = [0] * (n * n)
    for r in range(n):
        unit[r * n + r] = 1
    return make_algebra(field, labels, triples, unit, name=name or f"M{n}")


def upper_triangular_2x2(field: Field, name: str = "UT2") -> BasisAlgebra:
    """Span of E11, E12, E22 inside 2x2 matrices (the two-vertex path algebra)."""
    labels = ["E11", "E12", "E22"]
    triples = [
        (0, 0, 0, 1),  # E11 E11
        (0, 1, 1, 1),  # E11 E12
        (1, 2, 1, 1),  # E12 E22
        (2, 2, 2, 1),  # E22 E22
    ]
    return make_algebra(field, labels, triples, [1, 0, 1], name=name)


def opposite(a: BasisAlgebra) -> BasisAlgebra:
    mult = {}
    for (i, j), row in a.mult.items():
        mult[(j, i)] = dict(row)
    return BasisAlgebra(a.field, a.dim, list(a.labels), mult, a.unit,
                        name=f"{a.name}^o" if a.name else "")


def tensor_algebra(a: BasisAlgebra, b: BasisAlgebra, name: str = "") -> BasisAlgebra:
    """A (x) B with componentwise product; basis index i*dim(B) + j."""
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    F = a.field
    db = b.dim
    labels = [f"{la}*{lb}" for la in a.labels for lb in b.labels]
    mult = {}
    for (i1, i2), rowa in a.mult.items():
        for (j1, j2), rowb in b.mult.items():
            key = (i1 * db + j1, i2 * db + j2)
            for ka, ca in rowa.items():
                for kb, cb in rowb.items():
                    _tensor_insert(mult, key, ka * db + kb, F.mul(ca, cb))
    unit = [F.zero()] * (a.dim * db)
    for i, x in enumerate(a.unit):
        if not x:
            continue
        for j, y in enumerate(b.unit):
            if y:
                unit[i * db + j] = F.mul(x, y)
    return BasisAlgebra(F, a.dim * db, labels, _clean_tensor(F, mult), tuple(unit),
                        name=name or f"{a.name}(x){b.name}")


@dataclass
class Bimodule:
    """Left-A right-B module, i.e. a left A (x) B^op module."""

    a: BasisAlgebra
    b: BasisAlgebra
    dim: int
    labels: list[str]
    left: dict   # (a_idx, m_idx) -> {m2: c}   e_a . m
    right: dict  # (m_idx, b_idx) -> {m2: c}   m . e_b
    name: str = ""

    def left_mat(self, i: int) -> Mat:
        m = Mat(self.a.field, self.dim, self.dim)
        for w in range(self.dim):
            for w2, c in self.left.get((i, w), {}).items():
                m.add_entry(w2, w, c)
        return m

    def right_mat(self, j: int) -> Mat:
        m = Mat(self.a.field, self.dim, self.dim)
        for w in range(self.dim):
            for w2, c in self.right.get((w, j), {}).items():
                m.add_entry(w2, w, c)
        return m

    def left_apply(self, avec, mvec) -> tuple:
        F = self.a.field
        acc = [F.zero()] * self.dim
        for i, x in enumerate(avec):
            if not x:
                continue
            for w, y in enumerate(mvec):
                if not y:
                    continue
                for w2, c in self.left.get((i, w), {}).items():
                    acc[w2] = F.add(acc[w2], F.mul(F.mul(x, y), c))
        return tuple(acc)

    def right_apply(self, mvec, bvec) -> tuple:
        F = self.a.field
        acc = [F.zero()] * self.dim
        for w, y in enumerate(mvec):
            if not y:
                continue
            for j, x in enumerate(bvec):
                if not x:
                    continue
                for w2, c in self.right.get((w, j), {}).items():
                    acc[w2] = F.add(acc[w2], F.mul(F.mul(x, y), c))
        return tuple(acc)

    def alpha_mats(self) -> list[Mat]:
        """a -> left action of e_a, the algebra morphism A -> End_{B^o} M."""
        return [self.left_mat(i) for i in range(self.a.dim)]

    def beta_mats(self) -> list[Mat]:
        """b -> right action of e_b, the morphism B -> (End_A M)^o."""
        return [self.right_mat(j) for j in range(self.b.dim)]

    def __repr__(self):
        tag = self.name or "bimodule"
        return f"Bimodule({tag}, dim={self.dim} over ({self.a.name},{self.b.name}))"


def validate_bimodule(m: Bimodule) -> ValidationReport:
    rep = ValidationReport()
    F = m.a.field
    if m.a.field != m.b.field:
        rep.violations.append("algebras live over different fields")
        return rep
    for w in range(m.dim):
        mv = tuple(F.one() if i == w else F.zero() for i in range(m.dim))
        if m.left_apply(m.a.unit, mv) != mv:
            rep.violations.append(f"left unit fails on {m.labels[w]}")
        if m.right_apply(mv, m.b.unit) != mv:
            rep.violations.append(f"right unit fails on {m.labels[w]}")
    mats_l = m.alpha_mats()
    mats_r = m.beta_mats()
    # left associativity: (e_i e_j) . m = e_i . (e_j . m)
    for i in range(m.a.dim):
        for j in range(m.a.dim):
            prod = Mat(F, m.dim, m.dim)
            for k, c in m.a.product_basis(i, j).items():
                prod = prod + mats_l[k].scale(c)
            if prod != mats_l[i] @ mats_l[j]:
                rep.violations.append(
                    f"left action not associative on ({m.a.labels[i]},{m.a.labels[j]})")
    # right associativity: m . (e_i e_j) = (m . e_i) . e_j
    for i in range(m.b.dim):
        for j in range(m.b.dim):
            prod = Mat(F, m.dim, m.dim)
            for k, c in m.b.product_basis(i, j).items():
                prod = prod + mats_r[k].scale(c)
            if prod != mats_r[j] @ mats_r[i]:
                rep.violations.append(
                    f"right action not associative on ({m.b.labels[i]},{m.b.labels[j]})")
    # actions commute: (a.m).b = a.(m.b)
    for i in range(m.a.dim):
        for j in range(m.b.dim):
            if mats_r[j] @ mats_l[i] != mats_l[i] @ mats_r[j]:
                rep.violations.append(
                    f"actions do not commute on ({m.a.labels[i]},{m.b.labels[j]})")
    return rep


def make_bimodule(a, b, labels, left_triples, right_triples, name="") -> Bimodule:
    """left triples (a, m, m2, c): e_a.e_m = sum c e_m2;
    right triples (m, b, m2, c): e_m.e_b = sum c e_m2."""
    F = a.field
    left, right = {}, {}
    for i, w, w2, c in left_triples:
        _tensor_insert(left, (i, w), w2, F.of(c))
    for w, j, w2, c in right_triples:
        _tensor_insert(right, (w, j), w2, F.of(c))
    return Bimodule(a, b, len(labels), list(labels),
                    _clean_tensor(F, left), _clean_tensor(F, right), name=name)


def zero_bimodule(a: BasisAlgebra, b: BasisAlgebra) -> Bimodule:
    return Bimodule(a, b, 0, [], {}, {}, name="0")


def free_kronecker_bimodule(a, b, m: int, name: str = "") -> Bimodule:
    """K^m over (K, K): both algebras must be the ground field."""
    if a.dim != 1 or b.dim != 1:
        raise IncompatibleBimodule("free Kronecker bimodule needs A = B = K")
    labels = [f"m{w}" for w in range(m)]
    left = [(0, w, w, 1) for w in range(m)]
    right = [(w, 0, w, 1) for w in range(m)]
    return make_bimodule(a, b, labels, left, right, name=name or f"K^{m}")


def direct_sum_bimodule(ms: list[Bimodule], name: str = "") -> Bimodule:
    base = ms[0]
    for m in ms[1:]:
        if m.a is not base.a or m.b is not base.b:
            raise IncompatibleBimodule("summands live over different algebra pairs")
    labels = []
    left, right = {}, {}
    off = 0
    for idx, m in enumerate(ms):
        labels += [f"{lab}#{idx}" for lab in m.labels]
        for (i, w), row in m.left.items():
            left[(i, w + off)] = {w2 + off: c for w2, c in row.items()}
        for (w, j), row in m.right.items():
            right[(w + off, j)] = {w2 + off: c for w2, c in row.items()}
        off += m.dim
    return Bimodule(base.a, base.b, off, labels, left, right,
                    name=name or "(+)".join(m.name or "?" for m in ms))


def power_bimodule(m: Bimodule, k: int, name: str = "") -> Bimodule:
    if k == 0:
        return zero_bimodule(m.a, m.b)
    return direct_sum_bimodule([m] * k, name=name or f"{m.name}^{k}")


def algebra_as_left_module(a: BasisAlgebra, k: BasisAlgebra) -> Bimodule:
    """A as a bimodule over (A, K) with trivial right action of the ground
    field; the shape used for one-point extensions [A A^m; 0 End]."""
    if k.dim != 1:
        raise IncompatibleBimodule("right algebra must be the ground field")
    left = {key: dict(row) for key, row in a.mult.items()}
    right = {(w, 0): {w: k.unit[0]} for w in range(a.dim)}
    return Bimodule(a, k, a.dim, list(a.labels), left, right,
                    name=f"{a.name} as module")


def regular_bimodule(t: BasisAlgebra) -> Bimodule:
    """T as a bimodule over (T, T): coefficients for Hochschild cohomology."""
    left, right = {}, {}
    for (i, j), row in t.mult.items():
        left[(i, j)] = dict(row)    # e_i . e_j
        right[(i, j)] = dict(row)   # e_i . e_j read as right action on e_i
    return Bimodule(t, t, t.dim, list(t.labels), left, right,
                    name=f"{t.name} as bimodule")


@dataclass
class BimoduleFamily:
    """An ordered family E = {M_1, .., M_n} over one pair (A, B), with
    positive multiplicities; the attached algebra is T = [A (+)M_i^k_i; 0 B]."""

    a: BasisAlgebra
    b: BasisAlgebra
    members: list[Bimodule]
    multiplicities: list[int] | None = None

    def __post_init__(self):
        if self.multiplicities is None:
            self.multiplicities = [1] * len(self.members)
        if len(self.multiplicities) != len(self.members):
            raise IncompatibleBimodule("one multiplicity per member required")
        if any(k < 1 for k in self.multiplicities):
            raise IncompatibleBimodule("multiplicities must be >= 1")
        for m in self.members:
            if m.a is not self.a or m.b is not self.b:
                raise IncompatibleBimodule("family member over a different pair")

    def __len__(self):
        return len(self.members)

    def reduced_bimodule(self) -> Bimodule:
        """Direct sum of the members, multiplicities dropped."""
        if not self.members:
            return zero_bimodule(self.a, self.b)
        return direct_sum_bimodule(list(self.members))

    def total_bimodule(self) -> Bimodule:
        """Direct sum with multiplicities."""
        parts = []
        for m, k in zip(self.members, self.multiplicities):
            parts.extend([m] * k)
        if not parts:
            return zero_bimodule(self.a, self.b)
        return direct_sum_bimodule(parts)


def triangular_algebra(a: BasisAlgebra, b: BasisAlgebra, m: Bimodule,
                       name: str = "") -> BasisAlgebra:
    """T = [A M; 0 B], basis ordered A-part | M-part | B-part.

    [a m; 0 b][a' m'; 0 b'] = [aa' am'+mb'; 0 bb'].
    """
    if m.a is not a or m.b is not b:
        raise IncompatibleBimodule("bimodule is not over the given pair")
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    F = a.field
    da, dm = a.dim, m.dim
    off_m, off_b = da, da + dm
    labels = ([f"A:{s}" for s in a.labels] + [f"M:{s}" for s in m.labels]
              + [f"B:{s}" for s in b.labels])
    mult = {}
    for (i, j), row in a.mult.items():
        mult[(i, j)] = dict(row)
    for (i, j), row in b.mult.items():
        mult[(off_b + i, off_b + j)] = {off_b + k: c for k, c in row.items()}
    for (i, w), row in m.left.items():
        mult[(i, off_m + w)] = {off_m + w2: c for w2, c in row.items()}
    for (w, j), row in m.right.items():
        mult[(off_m + w, off_b + j)] = {off_m + w2: c for w2, c in row.items()}
    unit = list(a.unit) + [F.zero()] * dm + list(b.unit)
    t = BasisAlgebra(F, da + dm + b.dim, labels, mult, tuple(unit),
                     name=name or f"[{a.name} {m.name}; 0 {b.name}]")
    t.triangular = TriangularBlocks(a, b, m)
    return t


def product_algebra(a: BasisAlgebra, b: BasisAlgebra, name: str = "") -> BasisAlgebra:
    t = triangular_algebra(a, b, zero_bimodule(a, b),
                           name=name or f"{a.name}x{b.name}")
    return t


def center(a: BasisAlgebra) -> Subspace:
    """Solve [z, e_i] = 0 for all i; echelon basis in algebra coordinates."""
    mats = [a.left_mult_mat(i) - a.right_mult_mat(i) for i in range(a.dim)]
    if not mats:
        return Subspace.from_vectors(a.field, 0, [])
    return kernel_basis(vstack(mats))


# --- Hom spaces and endomorphism algebras ----------------------------------

def mat_to_vec(m: Mat) -> dict:
    """Row-major vectorization of a (target x source) matrix."""
    return {r * m.cols + c: v for (r, c), v in m.data.items()}


def vec_to_mat(field, vec, rows, cols) -> Mat:
    m = Mat(field, rows, cols)
    if isinstance(vec, dict):
        items = vec.items()
    else:
        items = ((i, v) for i, v in enumerate(vec) if v)
    for h, v in items:
        m.data[(h // cols, h % cols)] = v
    return m


def hom_basis(m: Bimodule, n: Bimodule, side: str) -> list[Mat]:
    """Echelon basis of Hom(M, N) commuting with the chosen actions.

    side: "A" (left A-linear), "B" (right B-linear) or "both".
    Maps are (dim N x dim M) matrices, vectorized row-major.
    """
    if m.a is not n.a or m.b is not n.b:
        raise IncompatibleBimodule("Hom needs bimodules over the same pair")
    F = m.a.field
    dm, dn = m.dim, n.dim
    if dm == 0 or dn == 0:
        # Hom space is K^{dm*dn} = 0-dimensional unless both are 0; either way
        # the constraint system is empty and so is the basis.
        return [] if dm * dn == 0 else []
    constraints = []

    def add_constraint(act_m: Mat, act_n: Mat):
        # f . act_m - act_n . f = 0, rows indexed by (out coord, in coord)
        c = Mat(F, dn * dm, dn * dm)
        for (w2, w), v in act_m.data.items():
            # (f @ act_m)[r, w] += f[r, w2] * v
            for r in range(dn):
                c.add_entry(r * dm + w, r * dm + w2, v)
        for (r2, r), v in act_n.data.items():
            # (act_n @ f)[r2, w] += v * f[r, w]
            for w in range(dm):
                c.add_entry(r2 * dm + w, r * dm + w, F.neg(v))
        constraints.append(c)

    if side in ("A", "both"):
        for i in range(m.a.dim):
            add_constraint(m.left_mat(i), n.left_mat(i))
    if side in ("B", "both"):
        for j in range(m.b.dim):
            add_constraint(m.right_mat(j), n.right_mat(j))
    if not constraints:
        sub = Subspace.from_vectors(
            F, dn * dm,
            [{h: F.one()} for h in range(dn * dm)])
    else:
        sub = kernel_basis(vstack(constraints))
    return [vec_to_mat(F, dict(row), dn, dm) for row in sub.basis]


def intertwiner_basis(m: Bimodule, side: str) -> list[Mat]:
    """Basis of End(M) commuting with the chosen action(s)."""
    return hom_basis(m, m, side)


def end_algebra(m: Bimodule, side: str, name: str = "") -> BasisAlgebra:
    """Endomorphism algebra End(M) under composition (f g = f o g).

    side "A" gives End_A M; callers wanting (End_A M)^o apply `opposite`.
    """
    mats = intertwiner_basis(m, side)
    F = m.a.field
    d = len(mats)
    basis_cols = [tuple(_dense(mat_to_vec(b), m.dim * m.dim, F)) for b in mats]
    span = Mat.from_columns(F, m.dim * m.dim, basis_cols)
    from .linalg import solve_multi
    prods = []
    keys = []
    for i in range(d):
        for j in range(d):
            keys.append((i, j))
            prods.append(tuple(_dense(mat_to_vec(mats[i] @ mats[j]),
                                      m.dim * m.dim, F)))
    coords = solve_multi(span, prods)
    triples = []
    for (i, j), x in zip(keys, coords):
        if x is None:
            raise IncompatibleBimodule("endomorphism composition left the span")
        for k, c in enumerate(x):
            if c:
                triples.append((i, j, k, c))
    ident = tuple(_dense(mat_to_vec(Mat.identity(F, m.dim)), m.dim * m.dim, F))
    unit = solve_multi(span, [ident])[0]
    if unit is None:
        raise IncompatibleBimodule("identity is not an intertwiner?")
    labels = [f"f{i}" for i in range(d)]
    return make_algebra(F, labels, triples, unit,
                        name=name or f"End_{side}({m.name})")


def _dense(dvec: dict, n: int, field: Field) -> list:
    z = field.zero()
    out = [z] * n
    for i, v in dvec.items():
        out[i] = v
    return out


def hom_coefficient_bimodule(m: Bimodule, n: Bimodule, lam: BasisAlgebra,
                             name: str = "") -> Bimodule:
    """Hom_K(M, N) as a bimodule over (Lambda, Lambda), Lambda = A (x) B^o.

    For l = a (x) b and l' = a' (x) b':  (l . f . l')(x) = a f(a' x b') b,
    so that H^*(Lambda, Hom_K(M,N)) computes Ext over Lambda.  `lam` must be
    tensor_algebra(A, opposite(B)) so basis index (i, j) -> i*dim(B)+j.
    """
    if m.a is not n.a or m.b is not n.b:
        raise IncompatibleBimodule("bimodules over different pairs")
    F = m.a.field
    da, db = m.a.dim, m.b.dim
    if lam.dim != da * db:
        raise IncompatibleBimodule("lambda algebra has wrong dimension")
    dm, dn = m.dim, n.dim
    dh = dm * dn
    labels = [f"h{r}_{c}" for r in range(dn) for c in range(dm)]
    left, right = {}, {}
    for i in range(da):
        for j in range(db):
            l_idx = i * db + j
            # left: f -> L^N_i f R^N_j   (a acts on output left, b on output right)
            act = n.right_mat(j) @ n.left_mat(i)
            for (r2, r), v in act.data.items():
                for c in range(dm):
                    _tensor_insert(left, (l_idx, r * dm + c), r2 * dm + c, v)
            # right: f -> f . (L^M_i R^M_j)  (precompose with x -> a' x b')
            act = m.right_mat(j) @ m.left_mat(i)
            for (c2, c), v in act.data.items():
                for r in range(dn):
                    _tensor_insert(right, (r * dm + c2, l_idx), r * dm + c, v)
    return Bimodule(lam, lam, dh, labels, _clean_tensor(F, left),
                    _clean_tensor(F, right),
                    name=name or f"Hom({m.name},{n.name})")
