"""Homotopy transfer: splittings, tree sums, transferred modules and morphisms.

A splitting of a complex (C, d) is a triple (iota, p, h) with

    p iota = 1,  iota p = 1 + d h + h d,  h h = 0,  p h = 0,  h iota = 0.

Algebra structures transfer along planar rooted trees; bimodule structures
(over an algebra that is not itself transferred) transfer along combs: the
module input is pushed through iota, then absorbs blocks of the innermost
remaining algebra inputs one action at a time, with h between actions and p
at the root.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from .ainf import (DEFAULT_CAP, AInfAlgebra, AInfBimodule, AInfMorphism, apply_table, compose,
                   fmt)
from .f2graded import GradedBasisSpace, ZERO, echelonize, reduce_by


class SplittingError(ValueError):
    def __init__(self, identity: str, label) -> None:
        super().__init__(f"{identity} fails on {fmt(label)}")
        self.identity, self.label = identity, label


def _lin(table: Mapping, vec) -> frozenset:
    acc: set = set()
    for b in vec:
        acc ^= table.get(b, ZERO)
    return frozenset(acc)


@dataclass
class SplittingData:
    space: GradedBasisSpace
    d: dict
    H: GradedBasisSpace
    iota: dict
    proj: dict
    htpy: dict = field(default_factory=dict)

    def i(self, vec) -> frozenset:
        return _lin(self.iota, vec)

    def p(self, vec) -> frozenset:
        return _lin(self.proj, vec)

    def h(self, vec) -> frozenset:
        return _lin(self.htpy, vec)

    def dd(self, vec) -> frozenset:
        return _lin(self.d, vec)

    def violations(self) -> list:
        """Failing (identity, basis label) pairs, in basis order."""
        bad = []
        for x in self.H.basis:
            v = frozenset([x])
            if self.p(self.i(v)) != v:
                bad.append(("p iota = 1", x))
            if self.h(self.i(v)):
                bad.append(("h iota = 0", x))
            if self.dd(self.i(v)):
                bad.append(("d iota = 0", x))
        for c in self.space.basis:
            v = frozenset([c])
            if self.dd(self.dd(v)):
                bad.append(("d d = 0", c))
            lhs = self.i(self.p(v))
            rhs = v ^ self.dd(self.h(v)) ^ self.h(self.dd(v))
            if lhs != rhs:
                bad.append(("iota p = 1 + dh + hd", c))
            if self.h(self.h(v)):
                bad.append(("h h = 0", c))
            if self.p(self.h(v)):
                bad.append(("p h = 0", c))
            if self.p(self.dd(v)):
                bad.append(("p d = 0", c))
        return bad

    def verify(self) -> None:
        bad = self.violations()
        if bad:
            raise SplittingError(*bad[0])


def split_prescribed(space: GradedBasisSpace, d: Mapping, H: GradedBasisSpace,
                     iota: Mapping, proj: Mapping, htpy: Mapping) -> SplittingData:
    S = SplittingData(space, dict(d), H, {k: frozenset(v) for k, v in iota.items() if v},
                      {k: frozenset(v) for k, v in proj.items() if v},
                      {k: frozenset(v) for k, v in htpy.items() if v})
    S.verify()
    return S


def _solve_basis(space: GradedBasisSpace, vectors: Sequence[frozenset]):
    """Coordinates of any vector of C in a basis given by ``vectors`` of C."""
    n = len(vectors)
    piv: dict = {}
    for j, v in enumerate(vectors):
        img, combo = space.to_mask(v), 1 << j
        while img:
            top = img.bit_length() - 1
            hit = piv.get(top)
            if hit is None:
                piv[top] = (img, combo)
                break
            img ^= hit[0]
            combo ^= hit[1]
        if not img:
            raise ValueError("vectors are linearly dependent")
    if len(piv) != len(space):
        raise ValueError(f"{n} vectors do not span a space of dimension {len(space)}")

    def coords(vec) -> int:
        img, combo = space.to_mask(vec), 0
        while img:
            top = img.bit_length() - 1
            hv, hc = piv[top]
            img ^= hv
            combo ^= hc
        return combo

    return coords


def splitting_from_complement(space: GradedBasisSpace, d: Mapping, H: GradedBasisSpace,
                              iota: Mapping, complement: Sequence) -> SplittingData:
    """The splitting with h = d^-1 from im d onto span(complement), zero on iota(H) + complement.

    ``complement`` lists vectors (or labels) spanning a complement of ker d.
    """
    comp = [frozenset([c]) if not isinstance(c, frozenset) else c for c in complement]
    comp_d = [_lin(d, c) for c in comp]
    hvec = [frozenset(iota.get(x, ZERO)) for x in H.basis]
    basis = comp_d + hvec + comp
    coords = _solve_basis(space, basis)
    nb, nh = len(comp_d), len(hvec)
    proj, htpy = {}, {}
    for c in space.basis:
        co = coords(frozenset([c]))
        p: set = set()
        h: set = set()
        for j in range(nb + nh):
            if (co >> j) & 1:
                if j < nb:
                    h ^= comp[j]
                else:
                    p ^= {H.basis[j - nb]}
        proj[c], htpy[c] = frozenset(p), frozenset(h)
    return split_prescribed(space, d, H, iota, proj, htpy)


def split(space: GradedBasisSpace, d: Mapping, key: Callable | None = None,
          name: Callable | None = None) -> SplittingData:
    """A splitting whose complement of ker d is spanned by basis labels.

    ``key`` groups labels into blocks that d maps block to block (by default
    grading and idempotents), so every H basis vector is homogeneous. H labels
    default to ("H", n).
    """
    key = key or (lambda b: (space.deg(b), space.idems(b)))
    blocks: dict = {}
    for b in space.basis:
        blocks.setdefault(key(b), []).append(b)
    comp, kernels, images = [], [], []
    for labels in blocks.values():
        piv: dict = {}
        for j, b in enumerate(labels):
            img, combo = space.to_mask(d.get(b, ZERO)), 1 << j
            while img:
                hit = piv.get(img.bit_length() - 1)
                if hit is None:
                    piv[img.bit_length() - 1] = (img, combo)
                    comp.append(b)
                    images.append(space.to_mask(d.get(b, ZERO)))
                    break
                img ^= hit[0]
                combo ^= hit[1]
            if not img:
                sub = space.restrict(labels)
                kernels.append(space.to_mask(sub.to_vec(combo)))
    span = {v.bit_length() - 1: v for v in echelonize(images)}
    hlabels, hgrad, hlev, hli, hri, iota = [], {}, {}, {}, {}, {}
    for v in kernels:
        w = reduce_by(v, span)
        if not w:
            continue
        span[w.bit_length() - 1] = w
        lab = name(len(hlabels)) if name else ("H", len(hlabels))
        vec = space.to_vec(v)
        some = next(iter(vec))
        hlabels.append(lab)
        iota[lab] = vec
        hgrad[lab] = space.deg(some)
        hlev[lab] = max(space.lev(c) for c in vec)
        hli[lab], hri[lab] = space.idems(some)
    H = GradedBasisSpace(tuple(hlabels), hgrad, hlev if space.level is not None else None,
                         hli if space.left_idem is not None else None,
                         hri if space.right_idem is not None else None)
    return splitting_from_complement(space, d, H, iota, comp)


def tensor_splitting(S1: SplittingData, S2: SplittingData, space: GradedBasisSpace,
                     d: Mapping, H: GradedBasisSpace) -> SplittingData:
    """iota1 (x) iota2, p1 (x) p2, h1 (x) 1 + iota1 p1 (x) h2 on labels ("pair", a, b)."""
    pair = lambda u, v: frozenset(("pair", a, b) for a in u for b in v)
    iota = {("pair", a, b): pair(S1.iota.get(a, ZERO), S2.iota.get(b, ZERO))
            for a in S1.H.basis for b in S2.H.basis}
    proj, htpy = {}, {}
    for a in S1.space.basis:
        for b in S2.space.basis:
            lab = ("pair", a, b)
            proj[lab] = pair(S1.proj.get(a, ZERO), S2.proj.get(b, ZERO))
            h = pair(S1.htpy.get(a, ZERO), frozenset([b]))
            h ^= pair(S1.i(S1.proj.get(a, ZERO)), S2.htpy.get(b, ZERO))
            htpy[lab] = h
    return split_prescribed(space, d, H, iota, proj, htpy)


# ---------------------------------------------------------------- algebras


def rooted_trees(n: int) -> tuple:
    """Planar rooted trees with n leaves, internal vertices of valence >= 3.

    A leaf is "L"; an internal vertex is the tuple of its children.
    """
    return _trees(n)


@lru_cache(maxsize=None)
def _trees(n: int) -> tuple:
    if n == 1:
        return ("L",)
    out = []
    for parts in _compositions(n):
        for kids in _products([_trees(p) for p in parts]):
            out.append(tuple(kids))
    return tuple(out)


@lru_cache(maxsize=None)
def _compositions(n: int) -> tuple:
    """Compositions of n into at least two positive parts."""
    out = []

    def go(rest, acc):
        if rest == 0:
            if len(acc) >= 2:
                out.append(tuple(acc))
            return
        for k in range(1, rest + 1):
            if k == n:
                continue
            go(rest - k, acc + [k])

    go(n, [])
    return tuple(out)


def _products(lists):
    if not lists:
        yield ()
        return
    for head in lists[0]:
        for tail in _products(lists[1:]):
            yield (head,) + tail


def _leaves(tree) -> int:
    return 1 if tree == "L" else sum(_leaves(c) for c in tree)


def _eval_tree(A: AInfAlgebra, S: SplittingData, tree, inputs: tuple, root: bool) -> frozenset:
    if tree == "L":
        return S.i(frozenset([inputs[0]]))
    vals = []
    pos = 0
    for child in tree:
        k = _leaves(child)
        vals.append(_eval_tree(A, S, child, inputs[pos:pos + k], False))
        pos += k
        if not vals[-1]:
            return ZERO
    out = A.m(len(tree), *vals)
    return S.p(out) if root else S.h(out)


def _composable(H: GradedBasisSpace, n: int) -> list:
    if H.left_idem is None:
        from itertools import product
        return list(product(H.basis, repeat=n))
    res = []

    def grow(prefix):
        if len(prefix) == n:
            res.append(prefix)
            return
        for a in H.basis:
            if prefix and H.idems(prefix[-1])[1] != H.idems(a)[0]:
                continue
            grow(prefix + (a,))

    grow(())
    return res


def transfer_algebra(A: AInfAlgebra, S: SplittingData, cap: int = DEFAULT_CAP,
                     idempotents: tuple = (), name: str = "") -> AInfAlgebra:
    """Minimal model on H by the sum over planar rooted trees."""
    if cap < 2:
        raise ValueError("cap must be at least 2")
    mult: dict = {}
    for n in range(2, cap + 1):
        trees = rooted_trees(n)
        tab = {}
        for key in _composable(S.H, n):
            acc: set = set()
            for T in trees:
                acc ^= _eval_tree(A, S, T, key, True)
            if acc:
                tab[key] = frozenset(acc)
        mult[n] = tab
    return AInfAlgebra(S.H, mult, idempotents, A.weight, name or f"H({A.name})")


def _lambda(A: AInfAlgebra, S: SplittingData) -> Callable:
    """lambda_1 = iota, lambda_n = sum over compositions of m_k(h lambda, ..., h lambda)."""
    memo: dict = {}

    def lam(key: tuple) -> frozenset:
        if len(key) == 1:
            return S.i(frozenset(key))
        if key not in memo:
            acc: set = set()
            for parts in _compositions(len(key)):
                vals, pos = [], 0
                for k in parts:
                    v = lam(key[pos:pos + k])
                    vals.append(v if k == 1 else S.h(v))
                    pos += k
                acc ^= A.m(len(parts), *vals)
            memo[key] = frozenset(acc)
        return memo[key]

    return lam


def transfer_algebra_recursive(A: AInfAlgebra, S: SplittingData, cap: int = DEFAULT_CAP) -> dict:
    """The same m_n as :func:`transfer_algebra`, as p(lambda_n)."""
    lam = _lambda(A, S)
    out: dict = {}
    for n in range(2, cap + 1):
        out[n] = {key: v for key in _composable(S.H, n) if (v := S.p(lam(key)))}
    return out


def algebra_iota_components(A: AInfAlgebra, S: SplittingData, cap: int = DEFAULT_CAP) -> dict:
    """Higher components iota_n = h(lambda_n) of the quasi-isomorphism H -> A."""
    lam = _lambda(A, S)
    out: dict = {}
    for n in range(2, cap + 1):
        out[n] = {key: v for key in _composable(S.H, n) if (v := S.h(lam(key)))}
    return out


# ---------------------------------------------------------------- bimodules


def _left_chains(M: AInfBimodule, n: int, x) -> list:
    if n == 0:
        return [()]
    alg = M.left
    if alg is None:
        return []
    return alg.chains(n, end=M.space.idems(x)[0]) if M.space.left_idem is not None else alg.chains(n)


def _right_chains(M: AInfBimodule, n: int, x) -> list:
    if n == 0:
        return [()]
    alg = M.right
    if alg is None:
        return []
    return alg.chains(n, start=M.space.idems(x)[1]) if M.space.right_idem is not None else alg.chains(n)


def _act(M: AInfBimodule, left: tuple, vec: frozenset, right: tuple) -> frozenset:
    t = M.acts.get((len(left), len(right)))
    if not t:
        return ZERO
    acc: set = set()
    for y in vec:
        out = t.get(left + (y,) + right)
        if out:
            acc ^= out
    return frozenset(acc)


def _comb(M: AInfBimodule, S: SplittingData, vec: frozenset, left: tuple, right: tuple,
          finish: Callable, first: bool) -> frozenset:
    """Sum over absorption sequences; each step applies one action then h (or finish)."""
    acc: set = set()
    l, r = len(left), len(right)
    for p in range(l + 1):
        for q in range(r + 1):
            if p + q == 0:
                continue
            v = _act(M, left[l - p:], vec, right[:q])
            if not v:
                continue
            if p == l and q == r:
                acc ^= finish(v)
            else:
                hv = S.h(v)
                if hv:
                    acc ^= _comb(M, S, hv, left[:l - p], right[q:], finish, False)
    return frozenset(acc)


def _signatures(cap: int, M: AInfBimodule):
    for total in range(0, cap):
        for n1 in range(total + 1):
            n2 = total - n1
            if n1 and M.left is None or n2 and M.right is None:
                continue
            yield n1, n2


def transfer_bimodule(M: AInfBimodule, S: SplittingData, cap: int = DEFAULT_CAP,
                      name: str = "") -> AInfBimodule:
    """Transferred bimodule structure on H(M) over the same acting algebras."""
    H = S.H
    acts: dict = {}
    for n1, n2 in _signatures(cap, M):
        if n1 + n2 == 0:
            continue
        tab = {}
        for x in H.basis:
            ix = S.i(frozenset([x]))
            for left in _left_chains(M, n1, x):
                for right in _right_chains(M, n2, x):
                    v = _comb(M, S, ix, left, right, S.p, True)
                    if v:
                        tab[left + (x,) + right] = v
        acts[(n1, n2)] = tab
    return AInfBimodule(H, acts, M.left, M.right, name or f"H({M.name})")


def iota_morphism(M: AInfBimodule, S: SplittingData, HM: AInfBimodule,
                  cap: int = DEFAULT_CAP) -> AInfMorphism:
    """A-infinity quasi-isomorphism H(M) -> M extending iota."""
    comps: dict = {(0, 0): {(x,): S.i(frozenset([x])) for x in S.H.basis}}
    for n1, n2 in _signatures(cap, M):
        if n1 + n2 == 0:
            continue
        tab = {}
        for x in S.H.basis:
            ix = S.i(frozenset([x]))
            for left in _left_chains(M, n1, x):
                for right in _right_chains(M, n2, x):
                    v = _comb(M, S, ix, left, right, S.h, True)
                    if v:
                        tab[left + (x,) + right] = v
        comps[(n1, n2)] = tab
    return AInfMorphism(HM, M, comps, (), f"iota[{M.name}]")


def proj_morphism(M: AInfBimodule, S: SplittingData, HM: AInfBimodule,
                  cap: int = DEFAULT_CAP) -> AInfMorphism:
    """A-infinity quasi-isomorphism M -> H(M) extending p."""
    comps: dict = {(0, 0): {(y,): S.p(frozenset([y])) for y in M.space.basis}}
    for n1, n2 in _signatures(cap, M):
        if n1 + n2 == 0:
            continue
        tab = {}
        for y in M.space.basis:
            hy = S.h(frozenset([y]))
            if not hy:
                continue
            for left in _left_chains(M, n1, y):
                for right in _right_chains(M, n2, y):
                    v = _comb(M, S, hy, left, right, S.p, True)
                    if v:
                        tab[left + (y,) + right] = v
        comps[(n1, n2)] = tab
    return AInfMorphism(M, HM, comps, (), f"p[{M.name}]")


def transfer_morphism(F: AInfMorphism, S_src: SplittingData, S_tgt: SplittingData,
                      cap: int = DEFAULT_CAP, H_src: AInfBimodule | None = None,
                      H_tgt: AInfBimodule | None = None) -> AInfMorphism:
    """p_tgt o F o iota_src between the transferred bimodules."""
    H_src = H_src or transfer_bimodule(F.source, S_src, cap)
    H_tgt = H_tgt or transfer_bimodule(F.target, S_tgt, cap)
    i_src = iota_morphism(F.source, S_src, H_src, cap)
    p_tgt = proj_morphism(F.target, S_tgt, H_tgt, cap)
    out = compose(p_tgt, compose(F, i_src, cap), cap)
    return AInfMorphism(H_src, H_tgt, out.comps, F.degree, f"H({F.name})")


def pullback(M: AInfBimodule, phi: Mapping, H_alg: AInfAlgebra, name: str = "") -> AInfBimodule:
    """Restrict a dg bimodule along a strict algebra map phi: H_alg -> M's algebra.

    Only the actions (1|1|0), (0|1|1) and (0|1|0) are supported, as for dg
    bimodules; phi must be multiplicative, which is checked.
    """
    for sig in M.acts:
        if sig not in ((0, 0), (1, 0), (0, 1)):
            raise ValueError(f"pullback expects a dg bimodule, found action {sig}")
    src = M.left or M.right
    for (a, b), out in H_alg.mult.get(2, {}).items():
        if src.m(2, phi.get(a, ZERO), phi.get(b, ZERO)) != _lin(phi, out):
            raise ValueError(f"phi is not multiplicative on ({fmt(a)}, {fmt(b)})")
    for (a, b) in _composable(H_alg.space, 2):
        if (a, b) not in H_alg.mult.get(2, {}) and src.m(2, phi.get(a, ZERO), phi.get(b, ZERO)):
            raise ValueError(f"phi is not multiplicative on ({fmt(a)}, {fmt(b)})")
    acts: dict = {(0, 0): M.acts.get((0, 0), {})}
    sp = M.space
    if M.left is not None:
        tab: dict = {}
        base = M.acts.get((1, 0), {})
        for a in H_alg.space.basis:
            pa = phi.get(a, ZERO)
            for x in sp.basis:
                if sp.left_idem is not None and H_alg.right(a) != sp.idems(x)[0]:
                    continue
                v = apply_table(base, (pa, (x,)))
                if v:
                    tab[(a, x)] = v
        acts[(1, 0)] = tab
    if M.right is not None:
        tab = {}
        base = M.acts.get((0, 1), {})
        for b in H_alg.space.basis:
            pb = phi.get(b, ZERO)
            for x in sp.basis:
                if sp.right_idem is not None and H_alg.left(b) != sp.idems(x)[1]:
                    continue
                v = apply_table(base, ((x,), pb))
                if v:
                    tab[(x, b)] = v
        acts[(0, 1)] = tab
    return AInfBimodule(sp, acts, H_alg if M.left is not None else None,
                        H_alg if M.right is not None else None, name or M.name)


# ---------------------------------------------------------------- formality


@dataclass(frozen=True)
class FormalityCertificate:
    conditions: tuple
    counterexample: str = ""

    @property
    def ok(self) -> bool:
        return bool(self.conditions)


def check_formality_alg(S: SplittingData, A: AInfAlgebra) -> FormalityCertificate:
    """FormalCond: h iota = 0 and products of iota-images stay in im iota."""
    for x in S.H.basis:
        if S.h(S.i(frozenset([x]))):
            return FormalityCertificate((), f"h iota({fmt(x)}) != 0")
    for a, b in _composable(S.H, 2):
        prod = A.m(2, S.i(frozenset([a])), S.i(frozenset([b])))
        if S.i(S.p(prod)) != prod:
            return FormalityCertificate((), f"iota({fmt(a)}) iota({fmt(b)}) not in im iota")
    return FormalityCertificate(("FormalCond",))


def _in_span(space: GradedBasisSpace, vectors: list) -> Callable:
    piv = {v.bit_length() - 1: v for v in echelonize(space.to_mask(v) for v in vectors)}
    return lambda vec: not reduce_by(space.to_mask(vec), piv)


def _one_sided(M: AInfBimodule, side: str, a, v: frozenset) -> frozenset:
    return _act(M, (a,), v, ()) if side == "left" else _act(M, (), v, (a,))


def _submodule(M: AInfBimodule, side: str, vectors: list) -> bool:
    inside = _in_span(M.space, vectors)
    alg = M.left if side == "left" else M.right
    return all(inside(_one_sided(M, side, a, v)) for v in vectors for a in alg.space.basis)


def check_formality_mod(S: SplittingData, M: AInfBimodule, side: str) -> FormalityCertificate:
    """Conditions on a splitting of a dg module under which the transferred
    one-sided structure has no higher actions.

    FormalCond: h iota = 0 and im iota is a submodule.
    FormalCond2: p h = 0 and both im h and im d are submodules.
    """
    if (M.left if side == "left" else M.right) is None:
        raise ValueError(f"no {side} action")
    conds = []
    ims = [S.i(frozenset([x])) for x in S.H.basis]
    if all(not S.h(v) for v in ims) and _submodule(M, side, ims):
        conds.append("FormalCond")
    cells = [frozenset([c]) for c in M.space.basis]
    if all(not S.p(S.h(c)) for c in cells):
        imh = [v for c in cells if (v := S.h(c))]
        imd = [v for c in cells if (v := S.dd(c))]
        if _submodule(M, side, imh) and _submodule(M, side, imd):
            conds.append("FormalCond2")
    return FormalityCertificate(tuple(conds), "" if conds else "neither condition holds")
