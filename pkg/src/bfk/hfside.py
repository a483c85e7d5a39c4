"""Bordered Floer side: B^HF, P_k, kP, beta_k, gamma_k as filtered objects.

The raw tables use the basis 1_ii, rho_ij, sigma_ij (i > j). The filtered
objects live in the adapted basis

    ("1", i, j) = rho_ij + sigma_ij   (level 0)
    ("rho", i, j) = rho_ij            (level 1)
    ("1", i, i)                       (level 0)

obtained from the raw tables by a multilinear change of basis. The only
grading is a Maslov grading: every algebra generator has degree 0 and
u, u*, v, v* have degrees 0, 1, 0, 1.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Mapping

from .ainf import (AInfAlgebra, AInfBimodule, AInfMorphism, _xor, field_tensor, mapping_cone,
                   reduced_tensor, regular_bimodule, shift_bimodule, translate)
from .f2graded import GradedBasisSpace, ZERO

MASLOV = (1,)
GAMMA_FILT_SHIFT = -1


def _check_k(m: int, k: int) -> None:
    if not 1 <= k <= m:
        raise ValueError(f"generator index {k} outside 1..{m}")


def one(i: int, j: int) -> tuple:
    return ("1", i, j)


def rho(i: int, j: int) -> tuple:
    return ("rho", i, j)


def sigma(i: int, j: int) -> tuple:
    return ("sigma", i, j)


# ---------------------------------------------------------------- change of basis


def rebase(tables: Mapping, slots: Mapping, out: Mapping | None) -> dict:
    """Rewrite multilinear tables in a new basis.

    ``slots[s]`` sends an old label in input slot s to the new labels whose
    old-basis expansion contains it (identity when absent); ``out`` rewrites
    an old output label as a new vector (identity when None).
    """
    res: dict = {}
    for sig, t in tables.items():
        tab: dict = {}
        for key, vec in t.items():
            new_out: set = set()
            for o in vec:
                new_out ^= set(out.get(o, frozenset([o]))) if out is not None else {o}
            if not new_out:
                continue
            choices = []
            for s, lab in enumerate(key):
                pre = slots.get((sig, s)) if (sig, s) in slots else slots.get(s)
                choices.append(pre.get(lab, (lab,)) if pre is not None else (lab,))
            for nk in product(*choices):
                _xor(tab, nk, frozenset(new_out))
        res[sig] = {k: v for k, v in tab.items() if v}
    return res


def adapted_maps(m: int) -> tuple[dict, dict]:
    """(old label -> new labels containing it, old label -> new vector)."""
    pre, out = {}, {}
    for i in range(m + 1):
        for j in range(i):
            pre[rho(i, j)] = (one(i, j), rho(i, j))
            pre[sigma(i, j)] = (one(i, j),)
            out[rho(i, j)] = frozenset([rho(i, j)])
            out[sigma(i, j)] = frozenset([one(i, j), rho(i, j)])
    return pre, out


# ---------------------------------------------------------------- raw tables


def raw_space(m: int) -> GradedBasisSpace:
    basis, li, ri = [], {}, {}
    for i in range(m + 1):
        labs = [one(i, i)] + [f(i, j) for j in range(i) for f in (rho, sigma)]
        for lab in labs:
            basis.append(lab)
            li[lab], ri[lab] = lab[1], lab[2]
    return GradedBasisSpace(tuple(basis), {b: (0,) for b in basis}, None, li, ri)


def raw_mult(m: int) -> dict:
    sp = raw_space(m)
    m2 = {}
    for a in sp.basis:
        for b in sp.basis:
            if a[2] != b[1]:
                continue
            if a[0] == "1":
                m2[(a, b)] = frozenset([b])
            elif b[0] == "1":
                m2[(a, b)] = frozenset([a])
            elif a[0] == b[0]:
                m2[(a, b)] = frozenset([(a[0], a[1], b[2])])
    return {2: m2}


def raw_left_action(k: int) -> dict:
    return {(one(k, k), "u*"): frozenset(["u*"]),
            (one(k - 1, k - 1), "v*"): frozenset(["v*"]),
            (rho(k, k - 1), "v*"): frozenset(["u*"]),
            (sigma(k, k - 1), "v*"): frozenset(["u*"])}


def raw_right_action(k: int) -> dict:
    return {("u", one(k, k)): frozenset(["u"]),
            ("u", rho(k, k - 1)): frozenset(["v"]),
            ("u", sigma(k, k - 1)): frozenset(["v"]),
            ("v", one(k - 1, k - 1)): frozenset(["v"])}


def _pair(a: str, b: str) -> tuple:
    return ("pair", a, b)


def raw_beta(m: int, k: int) -> dict:
    """The ten families of nonzero beta_k components, raw basis."""
    uu, vu, vv = _pair("u*", "u"), _pair("v*", "u"), _pair("v*", "v")
    left, right = {}, {}
    left[(sigma(k, k - 1), vu)] = frozenset([one(k, k)])
    for i in range(k + 1, m + 1):
        left[(rho(i, k), uu)] = frozenset([rho(i, k)])
        left[(rho(i, k - 1), vu)] = frozenset([rho(i, k)])
        left[(sigma(i, k - 1), vu)] = frozenset([sigma(i, k)])
    for i in range(k, m + 1):
        left[(rho(i, k - 1), vv)] = frozenset([rho(i, k - 1)])
    right[(vu, sigma(k, k - 1))] = frozenset([one(k - 1, k - 1)])
    for j in range(k):
        right[(uu, rho(k, j))] = frozenset([rho(k, j)])
    for j in range(k - 1):
        right[(vu, rho(k, j))] = frozenset([rho(k - 1, j)])
        right[(vu, sigma(k, j))] = frozenset([sigma(k - 1, j)])
        right[(vv, rho(k - 1, j))] = frozenset([rho(k - 1, j)])
    return {(1, 0): left, (0, 1): right}


def raw_gamma(m: int, k: int) -> dict:
    """gamma_k(a) = a . gamma_k(1_jj) for a with right idempotent j."""
    images = {k - 1: frozenset([_pair("v*", "v")]), k: frozenset([_pair("u*", "u")])}
    act = raw_left_action(k)
    comp = {}
    for a in raw_space(m).basis:
        acc: set = set()
        for y in images.get(a[2], ZERO):
            _, l, r = y
            acc ^= {_pair(o, r) for o in act.get((a, l), ZERO)}
        if acc:
            comp[(a,)] = frozenset(acc)
    return {(0, 0): comp}


def _pp_left(k: int, a, vec) -> frozenset:
    act = raw_left_action(k)
    out: set = set()
    for _, l, r in vec:
        out ^= {_pair(o, r) for o in act.get((a, l), ZERO)}
    return frozenset(out)


def _pp_right(k: int, vec, b) -> frozenset:
    act = raw_right_action(k)
    out: set = set()
    for _, l, r in vec:
        out ^= {_pair(l, o) for o in act.get((r, b), ZERO)}
    return frozenset(out)


def verify_hf_homomorphism_identities(m: int, k: int, beta: dict | None = None):
    """Check the three identities that make beta_k an A-infinity homomorphism.

    Returns None on success, else (identity number, (a1, a2, x)). Works on the
    raw basis; ``beta`` overrides the raw beta tables (for mutation tests).
    """
    _check_k(m, k)
    beta = raw_beta(m, k) if beta is None else beta
    b110, b011 = beta.get((1, 0), {}), beta.get((0, 1), {})
    mult = raw_mult(m)[2]
    basis = raw_space(m).basis
    gens = [_pair(a, b) for a in ("u*", "v*") for b in ("u", "v")]

    def mul(u, v) -> frozenset:
        out: set = set()
        for a in u:
            for b in v:
                out ^= mult.get((a, b), ZERO)
        return frozenset(out)

    def B110(vec_a, vec_x) -> frozenset:
        out: set = set()
        for a in vec_a:
            for x in vec_x:
                out ^= b110.get((a, x), ZERO)
        return frozenset(out)

    def B011(vec_x, vec_b) -> frozenset:
        out: set = set()
        for x in vec_x:
            for b in vec_b:
                out ^= b011.get((x, b), ZERO)
        return frozenset(out)

    def L(vec_a, vec_x) -> frozenset:
        out: set = set()
        for a in vec_a:
            out ^= _pp_left(k, a, vec_x)
        return frozenset(out)

    def R(vec_x, vec_b) -> frozenset:
        out: set = set()
        for b in vec_b:
            out ^= _pp_right(k, vec_x, b)
        return frozenset(out)

    for a1 in basis:
        A1 = frozenset([a1])
        for a2 in basis:
            A2 = frozenset([a2])
            for x in gens:
                X = frozenset([x])
                one_ = B110(mul(A1, A2), X) ^ B110(A1, L(A2, X)) ^ mul(A1, B110(A2, X))
                if one_:
                    return 1, (a1, a2, x)
                two = B011(X, mul(A1, A2)) ^ B011(R(X, A1), A2) ^ mul(B011(X, A1), A2)
                if two:
                    return 2, (a1, a2, x)
                three = (mul(A1, B011(X, A2)) ^ B011(L(A1, X), A2)
                         ^ mul(B110(A1, X), A2) ^ B110(A1, R(X, A2)))
                if three:
                    return 3, (a1, a2, x)
    return None


# ---------------------------------------------------------------- filtered objects


def bhf_space(m: int) -> GradedBasisSpace:
    basis, level, li, ri = [], {}, {}, {}
    for i in range(m + 1):
        for j in range(i + 1):
            labs = [one(i, j)] + ([rho(i, j)] if i > j else [])
            for lab in labs:
                basis.append(lab)
                level[lab] = 1 if lab[0] == "rho" else 0
                li[lab], ri[lab] = i, j
    return GradedBasisSpace(tuple(basis), {b: (0,) for b in basis}, level, li, ri)


@lru_cache(maxsize=None)
def bhf(m: int) -> AInfAlgebra:
    if m < 0:
        raise ValueError("m must be non-negative")
    pre, out = adapted_maps(m)
    mult = rebase(raw_mult(m), {0: pre, 1: pre}, out)
    return AInfAlgebra(bhf_space(m), mult, tuple(one(i, i) for i in range(m + 1)), MASLOV,
                       f"BHF(m={m})")


@lru_cache(maxsize=None)
def pk_hf(m: int, k: int) -> AInfBimodule:
    _check_k(m, k)
    pre, _ = adapted_maps(m)
    space = GradedBasisSpace(("u*", "v*"), {"u*": (1,), "v*": (1,)}, {"u*": 1, "v*": 0},
                             {"u*": k, "v*": k - 1}, None)
    acts = rebase({(1, 0): raw_left_action(k)}, {0: pre}, None)
    return AInfBimodule(space, acts, bhf(m), None, f"PHF{k}")


@lru_cache(maxsize=None)
def kp_hf(m: int, k: int) -> AInfBimodule:
    _check_k(m, k)
    pre, _ = adapted_maps(m)
    space = GradedBasisSpace(("u", "v"), {"u": (0,), "v": (0,)}, {"u": 0, "v": 1},
                             None, {"u": k, "v": k - 1})
    acts = rebase({(0, 1): raw_right_action(k)}, {1: pre}, None)
    return AInfBimodule(space, acts, None, bhf(m), f"{k}PHF")


@lru_cache(maxsize=None)
def pp_hf(m: int, k: int) -> AInfBimodule:
    return field_tensor(pk_hf(m, k), kp_hf(m, k), f"PHF{k}*{k}PHF")


@lru_cache(maxsize=None)
def beta_hf(m: int, k: int) -> AInfMorphism:
    _check_k(m, k)
    pre, out = adapted_maps(m)
    comps = rebase(raw_beta(m, k), {((1, 0), 0): pre, ((0, 1), 1): pre}, out)
    return AInfMorphism(pp_hf(m, k), regular_bimodule(bhf(m)), comps, (0,), f"betaHF{k}")


@lru_cache(maxsize=None)
def gamma_target_hf(m: int, k: int) -> AInfBimodule:
    return shift_bimodule(pp_hf(m, k), (), GAMMA_FILT_SHIFT, f"PHF{k}*{k}PHF{{-1}}")


@lru_cache(maxsize=None)
def gamma_hf(m: int, k: int) -> AInfMorphism:
    _check_k(m, k)
    pre, _ = adapted_maps(m)
    comps = rebase(raw_gamma(m, k), {0: pre}, None)
    return AInfMorphism(regular_bimodule(bhf(m)), gamma_target_hf(m, k), comps, (1,),
                        f"gammaHF{k}")


@lru_cache(maxsize=None)
def cone_hf(m: int, letter: int) -> AInfBimodule:
    k = abs(letter)
    f = beta_hf(m, k) if letter > 0 else gamma_hf(m, k)
    return mapping_cone(f, f"MHF[{letter}]")


def braid_bimodule_hf(m: int, letters) -> AInfBimodule:
    """Left-to-right fold of reduced tensor products of the letters' cones."""
    letters = tuple(letters)
    for s in letters:
        _check_k(m, abs(s))
    if not letters:
        return regular_bimodule(bhf(m))
    return _word_hf(m, letters)


@lru_cache(maxsize=1024)
def _word_hf(m: int, letters: tuple) -> AInfBimodule:
    if len(letters) == 1:
        return cone_hf(m, letters[0])
    return reduced_tensor(_word_hf(m, letters[:-1]), cone_hf(m, letters[-1]))


def to_kh_label(label):
    """The identification rho_ij <-> x_ij used when comparing gr(HF) with Kh."""
    return translate(label, {"rho": "x"})
