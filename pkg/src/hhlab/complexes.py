"""Cochain complexes, cohomology with chosen representatives, chain maps,
mapping cones and the long-exact-sequence engine.

A complex holds spaces C^0..C^top and differentials d^n: C^n -> C^(n+1) for
n < top; cohomology is reported for degrees 0..top-1 only (no d^top exists,
so H^top would be silently wrong under truncation).
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .fields import Field
from .linalg import (
    Mat, Subspace, block_diag, hstack, kernel_basis, row_space, solve_multi,
    vec_is_zero,
)

DEFAULT_BUDGET = 10_000_000


@dataclass
class CochainComplex:
    field: Field
    dims: list[int]             # dims[n] = dim C^n, n = 0..top
    diffs: list[Mat]            # diffs[n]: C^n -> C^(n+1), n = 0..top-1
    labels: list[str] = dc_field(default_factory=list)  # provenance per degree

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def dim(self, n: int) -> int:
        if 0 <= n < len(self.dims):
            return self.dims[n]
        return 0

    def diff(self, n: int) -> Mat:
        if 0 <= n < len(self.diffs):
            return self.diffs[n]
        return Mat(self.field, self.dim(n + 1), self.dim(n))

    def check_shapes(self):
        for n, d in enumerate(self.diffs):
            assert d.shape == (self.dims[n + 1], self.dims[n]), \
                f"differential {n} has shape {d.shape}"

    def check_dd_zero(self) -> bool:
        for n in range(len(self.diffs) - 1):
            if not (self.diffs[n + 1] @ self.diffs[n]).is_zero():
                return False
        return True

    def shifted_labels(self, tag: str):
        return [f"{tag}[{n}]" for n in range(len(self.dims))]


def zero_complex(field: Field, top: int) -> CochainComplex:
    return CochainComplex(field, [0] * (top + 1),
                          [Mat(field, 0, 0) for _ in range(top)])


def direct_sum_complex(parts: list[CochainComplex]) -> CochainComplex:
    field = parts[0].field
    top = min(p.top for p in parts)
    dims = [sum(p.dim(n) for p in parts) for n in range(top + 1)]
    diffs = [block_diag(field, [p.diff(n) for p in parts]) for n in range(top)]
    return CochainComplex(field, dims, diffs)


def sum_offsets(parts: list[CochainComplex], n: int) -> list[int]:
    offs, acc = [], 0
    for p in parts:
        offs.append(acc)
        acc += p.dim(n)
    return offs


@dataclass
class CohomologyResult:
    """Exact Betti numbers and canonical representative cocycles.

    dims[n] for n = 0..top-1; representatives[n] is a list of dense cocycle
    vectors in C^n whose classes form a basis of H^n.
    """

    dims: list[int]
    representatives: list[list[tuple]]
    cocycle_spaces: list[Subspace]
    coboundary_spaces: list[Subspace]


def cohomology(cx: CochainComplex) -> CohomologyResult:
    dims, reps, kers, ims = [], [], [], []
    for n in range(cx.top):
        ker = kernel_basis(cx.diff(n))
        if n == 0:
            img = Subspace.from_vectors(cx.field, cx.dim(0), [])
        else:
            img = row_space(cx.diff(n - 1).transpose())
        chosen = []
        resid = Subspace(cx.field, img.ambient_dim, [dict(r) for r in img.basis],
                         list(img.pivots))
        for vec in ker.basis:
            r = resid.reduce(dict(vec))
            if r:
                chosen.append(r)
                resid = Subspace.from_vectors(
                    cx.field, img.ambient_dim,
                    [dict(b) for b in resid.basis] + [dict(r)])
        dims.append(ker.dim - img.dim)
        assert len(chosen) == dims[-1]
        dense = []
        z = cx.field.zero()
        for r in chosen:
            v = [z] * cx.dim(n)
            for c, x in r.items():
                v[c] = x
            dense.append(tuple(v))
        reps.append(dense)
        kers.append(ker)
        ims.append(img)
    return CohomologyResult(dims, reps, kers, ims)


def class_coordinates(cx: CochainComplex, coh: CohomologyResult, n: int,
                      cocycles: list[tuple]) -> list[tuple]:
    """Coordinates of cocycle classes in the chosen H^n representative basis."""
    reps = coh.representatives[n]
    img = coh.coboundary_spaces[n]
    cols = [tuple(_densify(cx.field, r, cx.dim(n))) for r in
            ({k: v for k, v in row.items()} for row in img.basis)]
    span = Mat.from_columns(cx.field, cx.dim(n), list(reps) + cols)
    sols = solve_multi(span, cocycles)
    out = []
    for z, s in zip(cocycles, sols):
        if s is None:
            raise ArithmeticError("vector is not a cocycle modulo coboundaries")
        out.append(tuple(s[: len(reps)]))
    return out


def _densify(field, d, n):
    z = field.zero()
    out = [z] * n
    for c, v in d.items():
        out[c] = v
    return out


@dataclass
class ChainMap:
    source: CochainComplex
    target: CochainComplex
    mats: list[Mat]  # mats[n]: source C^n -> target C^n

    def mat(self, n: int) -> Mat:
        if 0 <= n < len(self.mats):
            return self.mats[n]
        return Mat(self.source.field, self.target.dim(n), self.source.dim(n))

    def commutes(self) -> bool:
        top = min(self.source.top, self.target.top)
        for n in range(top):
            if (self.target.diff(n) @ self.mat(n)) != (self.mat(n + 1) @ self.source.diff(n)):
                return False
        return True


@dataclass
class ConeComplex:
    """cone(f)^n = source^n (+) target^(n-1), d(s, t) = (ds, f(s) - dt)."""

    source: CochainComplex
    target: CochainComplex
    chain_map: ChainMap
    cone: CochainComplex

    def project_to_source(self) -> ChainMap:
        mats = []
        for n in range(self.cone.top + 1):
            m = Mat(self.cone.field, self.source.dim(n), self.cone.dim(n))
            for i in range(self.source.dim(n)):
                m.data[(i, i)] = self.cone.field.one()
            mats.append(m)
        return ChainMap(self.cone, self.source, mats)

    def include_shifted_target(self) -> ChainMap:
        mats = []
        for n in range(self.cone.top + 1):
            m = Mat(self.cone.field, self.cone.dim(n), self.target.dim(n - 1))
            off = self.source.dim(n)
            for i in range(self.target.dim(n - 1)):
                m.data[(off + i, i)] = self.cone.field.one()
            mats.append(m)
        shifted = CochainComplex(
            self.cone.field,
            [self.target.dim(n - 1) for n in range(self.cone.top + 1)],
            [(-self.target.diff(n - 1)) for n in range(self.cone.top)])
        return ChainMap(shifted, self.cone, mats)


def cone(f: ChainMap) -> ConeComplex:
    S, D = f.source, f.target
    field = S.field
    top = min(S.top, D.top)
    dims = [S.dim(n) + D.dim(n - 1) for n in range(top + 1)]
    diffs = []
    for n in range(top):
        rows = dims[n + 1]
        cols = dims[n]
        d = Mat(field, rows, cols)
        for (r, c), v in S.diff(n).data.items():
            d.data[(r, c)] = v
        off_r, off_c = S.dim(n + 1), S.dim(n)
        for (r, c), v in f.mat(n).data.items():
            d.add_entry(off_r + r, c, v)
        if n >= 1:
            for (r, c), v in D.diff(n - 1).data.items():
                d.add_entry(off_r + r, off_c + c, field.neg(v))
        diffs.append(d)
    cx = CochainComplex(field, dims, diffs)
    return ConeComplex(S, D, f, cx)


# --- sequences -------------------------------------------------------------

@dataclass
class SequenceNode:
    label: str
    degree: int
    dim: int


@dataclass
class SequenceMap:
    label: str
    matrix: Mat


@dataclass
class SequenceReport:
    """A chain of maps V_0 -> V_1 -> ... with exactness verdicts.

    exact_at[i] is True/False when node i could be checked (its two
    neighbouring maps are inside the truncation window), None otherwise.
    The sequence is implicitly extended by zero on both ends, so the verdict
    at node 0 includes injectivity of the first map when marked checkable.
    """

    kind: str
    nodes: list[SequenceNode]
    maps: list[SequenceMap]
    exact_at: list[bool | None]

    @property
    def all_verified_exact(self) -> bool:
        return all(v is not False for v in self.exact_at) and \
            any(v is True for v in self.exact_at)

    def node_dims(self) -> list[int]:
        return [n.dim for n in self.nodes]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "nodes": [{"label": n.label, "degree": n.degree, "dim": n.dim}
                      for n in self.nodes],
            "exact_at": self.exact_at,
            "all_verified_exact": self.all_verified_exact,
        }


def exactness_verdicts(nodes: list[SequenceNode], mats: list[Mat],
                       checkable: list[bool]) -> list[bool | None]:
    """Verdict per node of ... -> V_{i-1} -> V_i -> V_{i+1} -> ... with zero
    maps attached on both ends."""
    from .linalg import rank
    verdicts: list[bool | None] = []
    k = len(nodes)
    for i in range(k):
        if not checkable[i]:
            verdicts.append(None)
            continue
        incoming_rank = rank(mats[i - 1]) if i - 1 >= 0 else 0
        if i < len(mats):
            out = mats[i]
            ker_dim = kernel_basis(out).dim
            composed_zero = (mats[i] @ mats[i - 1]).is_zero() if i - 1 >= 0 else True
        else:
            ker_dim = nodes[i].dim
            composed_zero = True
        verdicts.append(bool(composed_zero and incoming_rank == ker_dim))
    return verdicts


@dataclass
class ShortExactSequence:
    sub: CochainComplex
    mid: CochainComplex
    quot: CochainComplex
    inc: ChainMap
    proj: ChainMap

    def verify(self) -> bool:
        """Degreewise: inc injective, proj surjective, im inc = ker proj."""
        from .linalg import rank
        top = min(self.sub.top, self.mid.top, self.quot.top)
        for n in range(top + 1):
            i, p = self.inc.mat(n), self.proj.mat(n)
            if not (p @ i).is_zero():
                return False
            if rank(i) != self.sub.dim(n):
                return False
            if rank(p) != self.quot.dim(n):
                return False
            if self.sub.dim(n) != self.mid.dim(n) - self.quot.dim(n):
                return False
        return self.inc.commutes() and self.proj.commutes()


def connecting_maps(ses: ShortExactSequence, coh_sub, coh_mid, coh_quot,
                    n: int) -> Mat:
    """Snake construction: H^n(quot) -> H^(n+1)(sub) on representatives."""
    field = ses.mid.field
    reps = coh_quot.representatives[n]
    if not reps:
        return Mat(field, len(coh_sub.representatives[n + 1]), 0)
    lifts = solve_multi(ses.proj.mat(n), reps)
    dlifts = []
    for z, y in zip(reps, lifts):
        if y is None:
            raise ArithmeticError("projection is not surjective on a cocycle")
        dlifts.append(ses.mid.diff(n).apply(y))
    xs = solve_multi(ses.inc.mat(n + 1), dlifts)
    cocycles = []
    for w, x in zip(dlifts, xs):
        if x is None:
            raise ArithmeticError("d(lift) is not in the subcomplex")
        if not vec_is_zero(ses.sub.diff(n + 1).apply(x)) and n + 1 < ses.sub.top:
            raise ArithmeticError("snake produced a non-cocycle")
        cocycles.append(x)
    coords = class_coordinates(ses.sub, coh_sub, n + 1, cocycles)
    return Mat.from_columns(field, len(coh_sub.representatives[n + 1]),
                            coords)


def induced_map(f: ChainMap, coh_src: CohomologyResult,
                coh_tgt: CohomologyResult, n: int) -> Mat:
    """H^n(f) in the chosen representative bases."""
    field = f.source.field
    reps = coh_src.representatives[n]
    if not reps:
        return Mat(field, len(coh_tgt.representatives[n]), 0)
    images = [f.mat(n).apply(r) for r in reps]
    coords = class_coordinates(f.target, coh_tgt, n, images)
    return Mat.from_columns(field, len(coh_tgt.representatives[n]), coords)


def les_report(ses: ShortExactSequence, kind: str,
               labels: tuple[str, str, str]) -> SequenceReport:
    """Long exact sequence of a short exact sequence of complexes.

    Nodes: H^0(sub) -> H^0(mid) -> H^0(quot) -> H^1(sub) -> ...
    Exactness is only asserted at nodes whose two neighbouring maps live
    fully below the truncation degree.
    """
    if not ses.verify():
        raise ArithmeticError("not a degreewise short exact sequence of complexes")
    coh_sub, coh_mid, coh_quot = cohomology(ses.sub), cohomology(ses.mid), \
        cohomology(ses.quot)
    top = min(ses.sub.top, ses.mid.top, ses.quot.top)
    lab_sub, lab_mid, lab_quot = labels
    nodes: list[SequenceNode] = []
    mats: list[Mat] = []
    map_labels: list[str] = []
    for n in range(top):
        nodes.append(SequenceNode(f"{lab_sub}^{n}", n, coh_sub.dims[n]))
        mats.append(induced_map(ses.inc, coh_sub, coh_mid, n))
        map_labels.append(f"include^{n}")
        nodes.append(SequenceNode(f"{lab_mid}^{n}", n, coh_mid.dims[n]))
        mats.append(induced_map(ses.proj, coh_mid, coh_quot, n))
        map_labels.append(f"project^{n}")
        nodes.append(SequenceNode(f"{lab_quot}^{n}", n, coh_quot.dims[n]))
        if n + 1 < top:
            mats.append(connecting_maps(ses, coh_sub, coh_mid, coh_quot, n))
            map_labels.append(f"connect^{n}")
    # Node i needs its outgoing map; its incoming map is either mats[i-1] or
    # the zero map the sequence starts from.
    checkable = [i < len(mats) for i in range(len(nodes))]
    verdicts = exactness_verdicts(nodes, mats, checkable)
    return SequenceReport(kind, nodes,
                          [SequenceMap(l, m) for l, m in zip(map_labels, mats)],
                          verdicts)


def linear_sequence_report(kind: str, labels: list[str], dims: list[int],
                           mats: list[Mat], field: Field) -> SequenceReport:
    """Exactness report for a finite sequence 0 -> V_0 -> ... -> V_k -> 0."""
    nodes = [SequenceNode(l, i, d) for i, (l, d) in enumerate(zip(labels, dims))]
    checkable = [True] * len(nodes)
    verdicts = exactness_verdicts(nodes, mats, checkable)
    return SequenceReport(kind, nodes,
                          [SequenceMap(f"map{i}", m) for i, m in enumerate(mats)],
                          verdicts)
