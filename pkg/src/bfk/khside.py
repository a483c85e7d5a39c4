"""Khovanov-Seidel side: B^Kh, the modules P_k and kP, the maps beta_k and gamma_k.

Each object exists twice: as hardcoded tables, and derived from the dg model
(build_B, P~_k, kP~, beta~_k, gamma~_k) by homotopy transfer along the
explicit splittings below. The derived layer is the regression oracle for the
hardcoded one.

Labels: ("1", i, j) for i >= j and ("x", i, j) for i > j, with left idempotent i
and right idempotent j; "u*", "v*" span P_k and "u", "v" span kP.
Trigradings are (cohomological, internal, path length).
"""

from __future__ import annotations

from functools import lru_cache

from .ainf import (DEFAULT_CAP, AInfAlgebra, AInfBimodule, AInfMorphism, Mismatch, compare_structures,
                   field_tensor, mapping_cone, reduced_tensor, regular_bimodule, retarget,
                   shift_bimodule)
from .complexes import (WEIGHT, beta_tilde, build_B, build_kPtilde, build_Ptilde, dg_bimodule,
                        gamma_tilde)
from .f2graded import GradedBasisSpace, ZERO
from .quiver import P
from .transfer import (SplittingData, pullback, splitting_from_complement, tensor_splitting,
                       transfer_algebra, transfer_bimodule, transfer_morphism)

GAMMA_SHIFT = (0, -1, -2)


def _check_k(m: int, k: int) -> None:
    if not 1 <= k <= m:
        raise ValueError(f"generator index {k} outside 1..{m}")


def one(i: int, j: int) -> tuple:
    return ("1", i, j)


def x(i: int, j: int) -> tuple:
    return ("x", i, j)


# ---------------------------------------------------------------- hardcoded


def bkh_space(m: int) -> GradedBasisSpace:
    basis, grading, li, ri = [], {}, {}, {}
    for i in range(m + 1):
        for j in range(i + 1):
            labs = [one(i, j)] + ([x(i, j)] if i > j else [])
            for lab in labs:
                basis.append(lab)
                grading[lab] = (0, 0, 0) if lab[0] == "1" else (-1, 1, 1)
                li[lab], ri[lab] = i, j
    return GradedBasisSpace(tuple(basis), grading, None, li, ri)


@lru_cache(maxsize=None)
def bkh(m: int) -> AInfAlgebra:
    """Lower triangular matrices over F[x]/(x^2) with 0/1 diagonal."""
    if m < 0:
        raise ValueError("m must be non-negative")
    space = bkh_space(m)
    m2 = {}
    for a in space.basis:
        for b in space.basis:
            if a[2] != b[1] or (a[0] == "x" and b[0] == "x"):
                continue
            tag = "x" if "x" in (a[0], b[0]) else "1"
            m2[(a, b)] = frozenset([(tag, a[1], b[2])])
    return AInfAlgebra(space, {2: m2}, tuple(one(i, i) for i in range(m + 1)), WEIGHT,
                       f"BKh(m={m})")


@lru_cache(maxsize=None)
def pk_kh(m: int, k: int) -> AInfBimodule:
    _check_k(m, k)
    A = bkh(m)
    space = GradedBasisSpace(("u*", "v*"), {"u*": (0, 1, 2), "v*": (1, 0, 1)}, None,
                             {"u*": k, "v*": k - 1}, None)
    act = {(one(k, k), "u*"): frozenset(["u*"]),
           (one(k - 1, k - 1), "v*"): frozenset(["v*"]),
           (x(k, k - 1), "v*"): frozenset(["u*"])}
    return AInfBimodule(space, {(1, 0): act}, A, None, f"PKh{k}")


@lru_cache(maxsize=None)
def kp_kh(m: int, k: int) -> AInfBimodule:
    _check_k(m, k)
    A = bkh(m)
    space = GradedBasisSpace(("u", "v"), {"u": (0, 0, 0), "v": (-1, 1, 1)}, None,
                             None, {"u": k, "v": k - 1})
    act = {("u", one(k, k)): frozenset(["u"]),
           ("u", x(k, k - 1)): frozenset(["v"]),
           ("v", one(k - 1, k - 1)): frozenset(["v"])}
    return AInfBimodule(space, {(0, 1): act}, None, A, f"{k}PKh")


@lru_cache(maxsize=None)
def pp_kh(m: int, k: int) -> AInfBimodule:
    return field_tensor(pk_kh(m, k), kp_kh(m, k), f"PKh{k}*{k}PKh")


def _pair(a: str, b: str) -> tuple:
    return ("pair", a, b)


@lru_cache(maxsize=None)
def beta_kh(m: int, k: int) -> AInfMorphism:
    """beta_k: P_k (x) kP -> B^Kh; only the (1|1|0) and (0|1|1) components are nonzero."""
    _check_k(m, k)
    uu, vu, vv = _pair("u*", "u"), _pair("v*", "u"), _pair("v*", "v")
    left, right = {}, {}
    for i in range(k, m + 1):
        left[(one(i, k - 1), vu)] = frozenset([one(i, k)])
        left[(one(i, k - 1), vv)] = frozenset([x(i, k - 1)])
    for i in range(k + 1, m + 1):
        left[(one(i, k), uu)] = frozenset([x(i, k)])
        left[(x(i, k - 1), vu)] = frozenset([x(i, k)])
    for j in range(k):
        right[(uu, one(k, j))] = frozenset([x(k, j)])
        right[(vu, one(k, j))] = frozenset([one(k - 1, j)])
    for j in range(k - 1):
        right[(vu, x(k, j))] = frozenset([x(k - 1, j)])
        right[(vv, one(k - 1, j))] = frozenset([x(k - 1, j)])
    return AInfMorphism(pp_kh(m, k), regular_bimodule(bkh(m)), {(1, 0): left, (0, 1): right},
                        (0, 0, 0), f"betaKh{k}")


def _idempotent_extension(A: AInfAlgebra, M: AInfBimodule, on_idem: dict) -> dict:
    """Strict bimodule map A -> M determined by its values on the diagonal idempotents."""
    left = M.acts.get((1, 0), {})
    comp = {}
    for a in A.space.basis:
        r = A.right(a)
        acc: set = set()
        for y in on_idem.get(r, ZERO):
            acc ^= left.get((a, y), ZERO)
        if acc:
            comp[(a,)] = frozenset(acc)
    return comp


@lru_cache(maxsize=None)
def gamma_target_kh(m: int, k: int) -> AInfBimodule:
    return shift_bimodule(pp_kh(m, k), GAMMA_SHIFT, 0, f"PKh{k}*{k}PKh{{-1}}")


@lru_cache(maxsize=None)
def gamma_kh(m: int, k: int) -> AInfMorphism:
    """Strict gamma_k: B^Kh -> P_k (x) kP{-1}."""
    _check_k(m, k)
    A = bkh(m)
    tgt = gamma_target_kh(m, k)
    comp = _idempotent_extension(A, tgt, {k - 1: frozenset([_pair("v*", "v")]),
                                          k: frozenset([_pair("u*", "u")])})
    return AInfMorphism(regular_bimodule(A), tgt, {(0, 0): comp}, (0, 0, 0), f"gammaKh{k}")


@lru_cache(maxsize=None)
def cone_kh(m: int, letter: int) -> AInfBimodule:
    """MC(beta_k) for letter +k, MC(gamma_k) for letter -k."""
    k = abs(letter)
    f = beta_kh(m, k) if letter > 0 else gamma_kh(m, k)
    return mapping_cone(f, f"MKh[{letter}]")


def braid_bimodule_kh(m: int, letters) -> AInfBimodule:
    """Left-to-right fold of reduced tensor products of the letters' cones."""
    letters = tuple(letters)
    for s in letters:
        _check_k(m, abs(s))
    if not letters:
        return regular_bimodule(bkh(m))
    return _word_kh(m, letters)


@lru_cache(maxsize=1024)
def _word_kh(m: int, letters: tuple) -> AInfBimodule:
    if len(letters) == 1:
        return cone_kh(m, letters[0])
    return reduced_tensor(_word_kh(m, letters[:-1]), cone_kh(m, letters[-1]))


# ---------------------------------------------------------------- derived


def _hom(src: str, tgt: str, t: int, s: int, *path: int) -> tuple:
    return ("hom", src, tgt, t, s, P(*path))


def b_splitting(m: int, B: AInfAlgebra | None = None) -> SplittingData:
    """iota(1_ij) = (0)+...+(j), iota(x_ij) = (1|0)+...+(j+1|j), h = d^-1 on the partial sums."""
    B = B or build_B(m)
    H = bkh_space(m)
    d = {k[0]: v for k, v in B.mult.get(1, {}).items()}
    iota, comp = {}, []
    for i in range(m + 1):
        for j in range(m + 1):
            Qi, Qj = f"Q{i}", f"Q{j}"
            sums = [frozenset(_hom(Qi, Qj, t, t, t) for t in range(l + 1))
                    for l in range(min(i, j) + 1)]
            xsums = [frozenset(_hom(Qi, Qj, t + 1, t, t + 1, t) for t in range(l))
                     for l in range(1, min(i, j + 1) + 1)]
            if i >= j:
                iota[one(i, j)] = sums[j]
            if i > j:
                iota[x(i, j)] = xsums[j]
            comp += [s for l, s in enumerate(sums) if l + 1 <= j]
            comp += [s for l, s in enumerate(xsums, start=1) if l <= min(i, j)]
    return splitting_from_complement(B.space, d, H, iota, comp)


def derived_bkh(m: int, cap: int = DEFAULT_CAP) -> AInfAlgebra:
    S = b_splitting(m)
    return transfer_algebra(build_B(m), S, cap, tuple(one(i, i) for i in range(m + 1)),
                            f"H(B(m={m}))")


def _module_splitting(M: AInfBimodule, H: GradedBasisSpace, iota: dict) -> SplittingData:
    """h = d^-1 on basis elements; the complement is spanned by labels with d != 0."""
    d = M.d()
    comp = [b for b in M.space.basis if d.get(b)]
    return splitting_from_complement(M.space, d, H, iota, comp)


def _iota_B(m: int, B: AInfAlgebra) -> dict:
    return b_splitting(m, B).iota


def pk_splitting(m: int, k: int, M: AInfBimodule) -> SplittingData:
    H = pk_kh(m, k).space
    iota = {"u*": frozenset([_hom(f"Q{k}", f"P{k}", k, 0, k, k - 1, k)]),
            "v*": frozenset([_hom(f"Q{k - 1}", f"P{k}", k - 1, 0, k - 1, k)])}
    return _module_splitting(M, H, iota)


def kp_splitting(m: int, k: int, M: AInfBimodule) -> SplittingData:
    H = kp_kh(m, k).space
    iota = {"u": frozenset([_hom(f"P{k}", f"Q{k}", 0, k, k)]),
            "v": frozenset([_hom(f"P{k}", f"Q{k - 1}", 0, k - 1, k, k - 1)])}
    return _module_splitting(M, H, iota)


def pulled_back_modules(m: int, k: int):
    """P~_k, kP~ and the dg bimodule B, restricted to B^Kh along the strict iota_B."""
    B = build_B(m)
    A = bkh(m)
    iota = _iota_B(m, B)
    Pt = pullback(build_Ptilde(m, k, B), iota, A, f"P~{k}")
    kP = pullback(build_kPtilde(m, k, B), iota, A, f"{k}P~")
    Bm = pullback(dg_bimodule(B), iota, A, f"B(m={m})")
    return B, Pt, kP, Bm


def derived_pk(m: int, k: int, cap: int = DEFAULT_CAP) -> AInfBimodule:
    _, Pt, _, _ = pulled_back_modules(m, k)
    return transfer_bimodule(Pt, pk_splitting(m, k, Pt), cap, f"H(P~{k})")


def derived_kp(m: int, k: int, cap: int = DEFAULT_CAP) -> AInfBimodule:
    _, _, kP, _ = pulled_back_modules(m, k)
    return transfer_bimodule(kP, kp_splitting(m, k, kP), cap, f"H({k}P~)")


def _tensor_data(m: int, k: int, shift: tuple = ()):
    B, Pt, kP, Bm = pulled_back_modules(m, k)
    S1, S2 = pk_splitting(m, k, Pt), kp_splitting(m, k, kP)
    PP = field_tensor(Pt, kP, f"P~{k}*{k}P~")
    H = pp_kh(m, k).space
    if shift:
        PP = shift_bimodule(PP, shift, 0, PP.name + "{-1}")
        H = gamma_target_kh(m, k).space
    SPP = tensor_splitting(S1, S2, PP.space, PP.d(), H)
    SB = b_splitting(m, B)
    SB = SplittingData(Bm.space, Bm.d(), SB.H, SB.iota, SB.proj, SB.htpy)
    return B, PP, SPP, Bm, SB


def derived_beta(m: int, k: int, cap: int = DEFAULT_CAP) -> AInfMorphism:
    """p_B o beta~_k o (iota_P (x) iota_P')."""
    B, PP, SPP, Bm, SB = _tensor_data(m, k)
    F = retarget(beta_tilde(m, k, B), PP, Bm)
    out = transfer_morphism(F, SPP, SB, cap, pp_kh(m, k), regular_bimodule(bkh(m)))
    return AInfMorphism(out.source, out.target, out.comps, (0, 0, 0), f"H(beta~{k})")


def derived_gamma(m: int, k: int, cap: int = DEFAULT_CAP) -> AInfMorphism:
    """(p_P (x) p_P') o gamma~_k o iota_B."""
    B, PP, SPP, Bm, SB = _tensor_data(m, k, GAMMA_SHIFT)
    F = retarget(gamma_tilde(m, k, B), Bm, PP)
    out = transfer_morphism(F, SB, SPP, cap, regular_bimodule(bkh(m)), gamma_target_kh(m, k))
    return AInfMorphism(out.source, out.target, out.comps, (0, 0, 0), f"H(gamma~{k})")


def derived_vs_hardcoded(m: int, cap: int = DEFAULT_CAP) -> list[tuple[str, Mismatch | None]]:
    """Compare every derived object with its hardcoded table; None means equal."""
    out = [(f"B^Kh m={m}", compare_structures(derived_bkh(m, cap), bkh(m), gradings=True))]
    for k in range(1, m + 1):
        out.append((f"P_{k}", compare_structures(derived_pk(m, k, cap), pk_kh(m, k), gradings=True)))
        out.append((f"{k}P", compare_structures(derived_kp(m, k, cap), kp_kh(m, k), gradings=True)))
        out.append((f"beta_{k}", compare_structures(derived_beta(m, k, cap), beta_kh(m, k))))
        out.append((f"gamma_{k}", compare_structures(derived_gamma(m, k, cap), gamma_kh(m, k))))
    return out
