"""Bounded complexes of projective A_m-modules and their Hom complexes.

Morphism spaces use the tensor model: a map from the term P_a of R to the term
P_b of S is right multiplication by a path a -> b, so the basis of Hom(R, S)
is labelled ("hom", R, S, t, s, path). Composition is diagrammatic (first the
left factor, then the right one), which makes Hom(Q_i, Q_j) the summand
i B j of the algebra B.

Trigradings are (cohomological, internal, path length); the differential has
degree (1, 0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass

from .ainf import AInfAlgebra, AInfBimodule, AInfMorphism, field_tensor, shift_bimodule
from .f2graded import GradedBasisSpace, GradingShift, ZERO
from .quiver import P, PathElement, internal_degree, multiply, path_basis, path_length

WEIGHT = (1, 0, 1)


@dataclass(frozen=True)
class ProjectiveComplex:
    """Left complex sum_t P_{vertex_t}, term t placed by ``shifts[t]``.

    ``paths[t]`` is the path multiplied on the right to go from term t to t+1.
    """

    name: str
    vertices: tuple
    shifts: tuple
    paths: tuple
    side: str = "left"

    def __post_init__(self) -> None:
        for t, p in enumerate(self.paths):
            if p.start != self.vertices[t] or p.end != self.vertices[t + 1]:
                raise ValueError(f"connecting path {p} does not join terms {t} and {t + 1}")

    def __len__(self) -> int:
        return len(self.vertices)


def build_Q(m: int, j: int) -> ProjectiveComplex:
    if not 0 <= j <= m:
        raise ValueError(f"j={j} outside 0..{m}")
    return ProjectiveComplex(f"Q{j}", tuple(range(j + 1)),
                             tuple(GradingShift((t, 0)) for t in range(j + 1)),
                             tuple(P(t, t + 1) for t in range(j)))


def single_P(m: int, k: int) -> ProjectiveComplex:
    """P_k as a one-term complex, sitting where it sits inside Q_j."""
    if not 0 <= k <= m:
        raise ValueError(f"k={k} outside 0..{m}")
    return ProjectiveComplex(f"P{k}", (k,), (GradingShift((k, 0)),), ())


def complex_d_squared_zero(R: ProjectiveComplex) -> bool:
    return all(multiply(a, b) is None for a, b in zip(R.paths, R.paths[1:]))


def _paths_between(m: int) -> dict:
    out: dict = {}
    for p in path_basis(m):
        out.setdefault((p.start, p.end), []).append(p)
    return out


@dataclass
class HomComplex:
    source: ProjectiveComplex
    target: ProjectiveComplex
    space: GradedBasisSpace
    d: dict


def hom_complex(m: int, R: ProjectiveComplex, S: ProjectiveComplex,
                left=None, right=None) -> HomComplex:
    between = _paths_between(m)
    basis = []
    grading = {}
    for t, a in enumerate(R.vertices):
        for s, b in enumerate(S.vertices):
            for g in between.get((a, b), ()):
                lab = ("hom", R.name, S.name, t, s, g)
                basis.append(lab)
                c = S.shifts[s].shift[0] - R.shifts[t].shift[0]
                i = internal_degree(g) + S.shifts[s].shift[1] - R.shifts[t].shift[1]
                grading[lab] = (c, i, path_length(g))
    d = {}
    for lab in basis:
        _, _, _, t, s, g = lab
        out = set()
        if s + 1 < len(S):
            h = multiply(g, S.paths[s])
            if h is not None:
                out ^= {("hom", R.name, S.name, t, s + 1, h)}
        if t >= 1:
            h = multiply(R.paths[t - 1], g)
            if h is not None:
                out ^= {("hom", R.name, S.name, t - 1, s, h)}
        if out:
            d[lab] = frozenset(out)
    li = {b: left for b in basis} if left is not None else None
    ri = {b: right for b in basis} if right is not None else None
    return HomComplex(R, S, GradedBasisSpace(tuple(basis), grading, None, li, ri), d)


def compose_hom(x, y):
    """Diagrammatic composite of two tensor-model basis maps, or None."""
    _, r1, s1, t1, u1, g1 = x
    _, r2, s2, t2, u2, g2 = y
    if s1 != r2 or u1 != t2:
        return None
    g = multiply(g1, g2)
    if g is None:
        return None
    return ("hom", r1, s2, t1, u2, g)


def _qname_index(name: str) -> int:
    return int(name[1:])


def build_B(m: int) -> AInfAlgebra:
    """The dg algebra of endomorphisms of Q_0 + ... + Q_m."""
    Qs = [build_Q(m, j) for j in range(m + 1)]
    basis, grading, li, ri, d = [], {}, {}, {}, {}
    for i in range(m + 1):
        for j in range(m + 1):
            H = hom_complex(m, Qs[i], Qs[j], i, j)
            basis += H.space.basis
            grading.update(H.space.grading)
            li.update(H.space.left_idem)
            ri.update(H.space.right_idem)
            d.update(H.d)
    space = GradedBasisSpace(tuple(basis), grading, None, li, ri)
    by_src: dict = {}
    for b in basis:
        by_src.setdefault((b[1], b[3]), []).append(b)
    m2 = {}
    for x in basis:
        for y in by_src.get((x[2], x[4]), ()):
            z = compose_hom(x, y)
            if z is not None:
                m2[(x, y)] = frozenset([z])
    mult = {1: {(b,): v for b, v in d.items()}, 2: m2}
    A = AInfAlgebra(space, mult, (), WEIGHT, f"B(m={m})")
    A.unit_vectors = {i: frozenset(("hom", f"Q{i}", f"Q{i}", t, t, P(t)) for t in range(i + 1))
                      for i in range(m + 1)}
    return A


def hom_summand(B: AInfAlgebra, i: int, j: int) -> list:
    return [b for b in B.space.basis if B.left(b) == i and B.right(b) == j]


def build_Ptilde(m: int, k: int, B: AInfAlgebra | None = None) -> AInfBimodule:
    """P~_k = sum_i Hom(Q_i, P_k), a left dg module over B by precomposition."""
    if not 1 <= k <= m:
        raise ValueError(f"k={k} outside 1..{m}")
    B = B or build_B(m)
    Pk = single_P(m, k)
    basis, grading, li, d = [], {}, {}, {}
    for i in range(m + 1):
        H = hom_complex(m, build_Q(m, i), Pk, i, None)
        basis += H.space.basis
        grading.update(H.space.grading)
        li.update(H.space.left_idem)
        d.update(H.d)
    space = GradedBasisSpace(tuple(basis), grading, None, li, None)
    by_src: dict = {}
    for b in basis:
        by_src.setdefault((b[1], b[3]), []).append(b)
    act = {}
    for a in B.space.basis:
        for y in by_src.get((a[2], a[4]), ()):
            z = compose_hom(a, y)
            if z is not None:
                act[(a, y)] = frozenset([z])
    acts = {(0, 0): {(b,): v for b, v in d.items()}, (1, 0): act}
    return AInfBimodule(space, acts, B, None, f"P~{k}")


def build_kPtilde(m: int, k: int, B: AInfAlgebra | None = None) -> AInfBimodule:
    """kP~ = sum_j Hom(P_k, Q_j), a right dg module over B by postcomposition."""
    if not 1 <= k <= m:
        raise ValueError(f"k={k} outside 1..{m}")
    B = B or build_B(m)
    Pk = single_P(m, k)
    basis, grading, ri, d = [], {}, {}, {}
    for j in range(m + 1):
        H = hom_complex(m, Pk, build_Q(m, j), None, j)
        basis += H.space.basis
        grading.update(H.space.grading)
        ri.update(H.space.right_idem)
        d.update(H.d)
    space = GradedBasisSpace(tuple(basis), grading, None, None, ri)
    by_tgt: dict = {}
    for b in B.space.basis:
        by_tgt.setdefault((b[1], b[3]), []).append(b)
    act = {}
    for y in basis:
        for a in by_tgt.get((y[2], y[4]), ()):
            z = compose_hom(y, a)
            if z is not None:
                act[(y, a)] = frozenset([z])
    acts = {(0, 0): {(b,): v for b, v in d.items()}, (0, 1): act}
    return AInfBimodule(space, acts, None, B, f"{k}P~")


def gamma_one(k: int, m: int) -> list:
    """The terms a (x) b of gamma_k(1) that exist in A_m."""
    terms = [((k - 1, k), (k, k - 1)), ((k + 1, k), (k, k + 1)),
             ((k,), (k, k - 1, k)), ((k, k - 1, k), (k,))]
    out = []
    for a, b in terms:
        if max(a + b) <= m:
            out.append((PathElement(a), PathElement(b)))
    return out


def beta_tilde(m: int, k: int, B: AInfAlgebra | None = None):
    """Strict map P~_k (x) kP~ -> B, composition through P_k."""
    B = B or build_B(m)
    Pt, kP = build_Ptilde(m, k, B), build_kPtilde(m, k, B)
    PP = field_tensor(Pt, kP, f"P~{k}*{k}P~")
    Bmod = _regular_dg(B)
    comp = {}
    for lab in PP.space.basis:
        _, x, y = lab
        z = compose_hom(x, y)
        if z is not None:
            comp[(lab,)] = frozenset([z])
    return AInfMorphism(PP, Bmod, {(0, 0): comp}, (), f"beta~{k}")


def gamma_tilde(m: int, k: int, B: AInfAlgebra | None = None):
    """Strict map B -> P~_k (x) kP~{-1}, inserting gamma_k(1) at the middle term."""
    B = B or build_B(m)
    Pt, kP = build_Ptilde(m, k, B), build_kPtilde(m, k, B)
    PP = shift_bimodule(field_tensor(Pt, kP), (0, -1, -2), 0, f"P~{k}*{k}P~{{-1}}")
    Bmod = _regular_dg(B)
    terms = gamma_one(k, m)
    comp = {}
    for lab in B.space.basis:
        _, src, tgt, t, s, g = lab
        out = set()
        for a, b in terms:
            if a.start != s:
                continue
            ga = multiply(g, a)
            if ga is None:
                continue
            left = ("hom", src, f"P{k}", t, 0, ga)
            right = ("hom", f"P{k}", tgt, 0, s, b)
            out ^= {("pair", left, right)}
        if out:
            comp[(lab,)] = frozenset(out)
    return AInfMorphism(Bmod, PP, {(0, 0): comp}, (), f"gamma~{k}")


def _regular_dg(B: AInfAlgebra) -> AInfBimodule:
    acts = {(0, 0): B.mult.get(1, {}), (1, 0): B.mult.get(2, {}), (0, 1): B.mult.get(2, {})}
    return AInfBimodule(B.space, acts, B, B, B.name)


def dg_bimodule(B: AInfAlgebra) -> AInfBimodule:
    return _regular_dg(B)


def chain_map_failures(f: AInfMorphism) -> list:
    """Basis elements x with d(f(x)) != f(d(x)) for a strict f."""
    F = f.comps.get((0, 0), {})
    dS, dT = f.source.d(), f.target.d()
    bad = []
    for x in f.source.space.basis:
        lhs: set = set()
        for y in F.get((x,), ZERO):
            lhs ^= dT.get(y, ZERO)
        rhs: set = set()
        for y in dS.get(x, ZERO):
            rhs ^= F.get((y,), ZERO)
        if lhs != rhs:
            bad.append(x)
    return bad
