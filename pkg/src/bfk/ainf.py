"""Generic A-infinity layer over GF(2).

Structure maps are sparse tables ``{key tuple: frozenset of output labels}``.
Algebra tables are keyed by arity n; bimodule and morphism tables by the
signature (n1, n2), with keys laid out flat as (a_1..a_n1, x, b_1..b_n2).

Relations are checked by sparse joins: every nonzero composite arises from a
nonzero inner entry feeding a nonzero outer entry, so enumerating those pairs
evaluates every relation instance up to the arity cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Mapping

from .f2graded import (GradedBasisSpace, ZERO, echelonize, homology_dims,
                       rank_of)

DEFAULT_CAP = 4


# ---------------------------------------------------------------- labels


def fmt(label) -> str:
    """Human-readable rendering of a basis label."""
    if isinstance(label, str):
        return label
    if isinstance(label, tuple) and label:
        tag = label[0]
        if tag in ("1", "x", "rho", "sigma") and len(label) == 3:
            return f"{tag}[{label[1]},{label[2]}]"
        if tag == "hom":
            _, src, tgt, t, s, path = label
            return f"{src}>{tgt}:{t},{s}{path}"
        if tag == "pair":
            return f"{fmt(label[1])}*{fmt(label[2])}"
        if tag == "cone":
            return ("M:" if label[1] == 0 else "N:") + fmt(label[2])
        if tag == "bar":
            _, x, bar, y = label
            return "<" + " | ".join([fmt(x)] + [fmt(a) for a in bar] + [fmt(y)]) + ">"
        if tag == "H":
            return f"h{label[1]}"
        return "(" + ",".join(fmt(p) for p in label) + ")"
    return str(label)


def translate(label, mapping: Mapping[str, str]):
    """Rename algebra tags inside a (possibly nested) label."""
    if isinstance(label, tuple) and label:
        if isinstance(label[0], str) and label[0] in mapping and len(label) == 3:
            return (mapping[label[0]],) + label[1:]
        return tuple(translate(p, mapping) for p in label)
    return label


def _xor(table: dict, key, out) -> None:
    cur = table.get(key)
    table[key] = out if cur is None else cur ^ out


def _clean(tables: Mapping) -> dict:
    out = {}
    for sig, t in tables.items():
        t2 = {k: frozenset(v) for k, v in t.items() if v}
        if t2:
            out[sig] = t2
    return out


def apply_table(table: Mapping, vecs: Iterable) -> frozenset:
    acc: set = set()
    for key in product(*vecs):
        out = table.get(key)
        if out:
            acc ^= out
    return frozenset(acc)


# ---------------------------------------------------------------- structures


class AInfAlgebra:
    def __init__(self, space: GradedBasisSpace, mult: Mapping, idempotents: Iterable = (),
                 weight: tuple = (), name: str = "") -> None:
        self.space = space
        self.mult = _clean(mult)
        self.idempotents = tuple(idempotents)
        self.weight = tuple(weight)
        self.name = name
        self._chains: dict = {}
        self._pre: dict | None = None

    def __repr__(self) -> str:
        return f"AInfAlgebra({self.name!r}, dim={len(self.space)})"

    def op(self, n: int, key: tuple) -> frozenset:
        return self.mult.get(n, {}).get(key, ZERO)

    def m(self, n: int, *vecs) -> frozenset:
        return apply_table(self.mult.get(n, {}), vecs)

    def left(self, a):
        return self.space.idems(a)[0]

    def right(self, a):
        return self.space.idems(a)[1]

    def idem_of(self, e):
        """Index of a diagonal idempotent label."""
        return self.left(e)

    def bar_basis(self) -> tuple:
        idem = set(self.idempotents)
        return tuple(b for b in self.space.basis if b not in idem)

    def preimages(self) -> dict:
        """Output label -> list of (arity, input key)."""
        if self._pre is None:
            pre: dict = {}
            for n, t in self.mult.items():
                for key, out in t.items():
                    for c in out:
                        pre.setdefault(c, []).append((n, key))
            self._pre = pre
        return self._pre

    def chains(self, n: int, end=None, start=None) -> list:
        """Composable n-tuples; ``end`` pins right_idem(a_n), ``start`` left_idem(a_1)."""
        ck = (n, end, start)
        if ck in self._chains:
            return self._chains[ck]
        basis = self.space.basis
        if self.space.left_idem is None:
            res = [t for t in product(basis, repeat=n)]
        else:
            res = []

            def grow(prefix, last_right):
                if len(prefix) == n:
                    if end is None or last_right == end:
                        res.append(prefix)
                    return
                for a in basis:
                    if prefix:
                        if self.left(a) != last_right:
                            continue
                    elif start is not None and self.left(a) != start:
                        continue
                    grow(prefix + (a,), self.right(a))

            grow((), None)
        self._chains[ck] = res
        return res

    def same_as(self, other: AInfAlgebra) -> bool:
        return self is other or (self.space.basis == other.space.basis and self.mult == other.mult
                                 and self.idempotents == other.idempotents)


class AInfBimodule:
    def __init__(self, space: GradedBasisSpace, acts: Mapping, left: AInfAlgebra | None = None,
                 right: AInfAlgebra | None = None, name: str = "") -> None:
        self.space = space
        self.acts = _clean(acts)
        self.left = left
        self.right = right
        self.name = name
        self._by_elem: dict | None = None

    def __repr__(self) -> str:
        return f"AInfBimodule({self.name!r}, dim={len(self.space)})"

    @property
    def over(self) -> AInfAlgebra | None:
        return self.left or self.right

    @property
    def weight(self) -> tuple:
        alg = self.over
        return alg.weight if alg is not None else ()

    def op(self, n1: int, n2: int, key: tuple) -> frozenset:
        return self.acts.get((n1, n2), {}).get(key, ZERO)

    def d(self) -> dict:
        return {k[0]: v for k, v in self.acts.get((0, 0), {}).items()}

    def by_elem(self) -> dict:
        if self._by_elem is None:
            idx: dict = {}
            for sig, t in self.acts.items():
                for key, out in t.items():
                    idx.setdefault(key[sig[0]], []).append((sig, key, out))
            self._by_elem = idx
        return self._by_elem

    def pair(self, x) -> tuple:
        return self.space.idems(x)


class AInfMorphism:
    def __init__(self, source: AInfBimodule, target: AInfBimodule, comps: Mapping,
                 degree: tuple = (), name: str = "") -> None:
        self.source = source
        self.target = target
        self.comps = _clean(comps)
        self.degree = tuple(degree)
        self.name = name
        self._by_elem: dict | None = None

    def __repr__(self) -> str:
        return f"AInfMorphism({self.name!r})"

    def by_elem(self) -> dict:
        if self._by_elem is None:
            idx: dict = {}
            for sig, t in self.comps.items():
                for key, out in t.items():
                    idx.setdefault(key[sig[0]], []).append((sig, key, out))
            self._by_elem = idx
        return self._by_elem

    def is_strict(self) -> bool:
        return set(self.comps) <= {(0, 0)}


# ---------------------------------------------------------------- constructors


def regular_bimodule(A: AInfAlgebra, name: str = "") -> AInfBimodule:
    acts: dict = {}
    for n, t in A.mult.items():
        for n1 in range(n):
            acts[(n1, n - 1 - n1)] = dict(t)
    return AInfBimodule(A.space, acts, A, A, name or A.name)


def identity_morphism(M: AInfBimodule) -> AInfMorphism:
    return AInfMorphism(M, M, {(0, 0): {(x,): frozenset([x]) for x in M.space.basis}}, name="id")


def shift_bimodule(M: AInfBimodule, shift: tuple = (), filt_shift: int = 0, name: str = "") -> AInfBimodule:
    sp = M.space
    grading = {}
    for b in sp.basis:
        g = sp.deg(b)
        pad = tuple(shift) + (0,) * (len(g) - len(shift))
        grading[b] = tuple(x + y for x, y in zip(g, pad))
    level = None if sp.level is None else {b: sp.level[b] + filt_shift for b in sp.basis}
    space = GradedBasisSpace(sp.basis, grading, level, sp.left_idem, sp.right_idem)
    return AInfBimodule(space, M.acts, M.left, M.right, name or M.name)


def retarget(f: AInfMorphism, source: AInfBimodule | None = None,
             target: AInfBimodule | None = None) -> AInfMorphism:
    """Same component tables between relabel-compatible source/target objects."""
    return AInfMorphism(source or f.source, target or f.target, f.comps, f.degree, f.name)


def field_tensor(L: AInfBimodule, R: AInfBimodule, name: str = "") -> AInfBimodule:
    """L (left module) tensored over F with R (right module)."""
    basis = tuple(("pair", a, b) for a in L.space.basis for b in R.space.basis)
    ls, rs = L.space, R.space
    grading = {}
    for a in ls.basis:
        for b in rs.basis:
            ga, gb = ls.deg(a), rs.deg(b)
            grading[("pair", a, b)] = tuple(x + y for x, y in zip(ga, gb)) if ga and gb else ()
    level = None
    if ls.level is not None and rs.level is not None:
        level = {("pair", a, b): ls.level[a] + rs.level[b] for a in ls.basis for b in rs.basis}
    left_idem = {("pair", a, b): ls.idems(a)[0] for a in ls.basis for b in rs.basis}
    right_idem = {("pair", a, b): rs.idems(b)[1] for a in ls.basis for b in rs.basis}
    space = GradedBasisSpace(basis, grading, level, left_idem, right_idem)
    acts: dict = {}
    for (n1, n2), t in L.acts.items():
        if n2:
            continue
        tab = acts.setdefault((n1, 0), {})
        for key, out in t.items():
            for b in rs.basis:
                _xor(tab, key[:n1] + (("pair", key[n1], b),), frozenset(("pair", o, b) for o in out))
    for (n1, n2), t in R.acts.items():
        if n1:
            continue
        tab = acts.setdefault((0, n2), {})
        for key, out in t.items():
            for a in ls.basis:
                _xor(tab, (("pair", a, key[0]),) + key[1:], frozenset(("pair", a, o) for o in out))
    return AInfBimodule(space, acts, L.left, R.right, name or f"{L.name}*{R.name}")


# ---------------------------------------------------------------- checkers


@dataclass(frozen=True)
class CheckFailure:
    relation: str
    sig: tuple
    inputs: tuple
    residual: tuple

    def __str__(self) -> str:
        ins = ", ".join(fmt(x) for x in self.inputs)
        res = " + ".join(fmt(x) for x in self.residual) or "0"
        return f"{self.relation} relation {self.sig} fails on ({ins}): residual {res}"


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    instances: int
    failures: tuple

    def __bool__(self) -> bool:
        return self.ok

    def first(self) -> CheckFailure | None:
        return self.failures[0] if self.failures else None


def _report(kind: str, acc: Mapping, unit_failures: list) -> CheckReport:
    fails = list(unit_failures)
    n = 0
    for sig in sorted(acc):
        t = acc[sig]
        n += len(t)
        bad = [(k, v) for k, v in t.items() if v]
        bad.sort(key=lambda kv: [fmt(x) for x in kv[0]])
        for k, v in bad:
            fails.append(CheckFailure(kind, sig, k, tuple(sorted(fmt(x) for x in v))))
    return CheckReport(not fails, n, tuple(fails))


def _module_inner_outer(acc, inner, outer_idx, cap) -> None:
    """Outer module map applied with an inner module-valued map in its module slot."""
    for (p, q), t in inner.items():
        for key, out in t.items():
            for y in out:
                for (i1, i2), okey, oout in outer_idx.get(y, ()):
                    if i1 + p + i2 + q + 1 > cap:
                        continue
                    _xor(acc.setdefault((i1 + p, i2 + q), {}),
                         okey[:i1] + key + okey[i1 + 1:], oout)


def _algebra_slots(acc, tables, alg, side, cap) -> None:
    """Outer map with an algebra operation plugged into one algebra slot."""
    if alg is None:
        return
    pre = alg.preimages()
    for (n1, n2), t in tables.items():
        slots = range(n1) if side == "left" else range(n1 + 1, n1 + 1 + n2)
        for key, out in t.items():
            for s in slots:
                for j, akey in pre.get(key[s], ()):
                    if n1 + n2 + j > cap:
                        continue
                    sig = (n1 + j - 1, n2) if side == "left" else (n1, n2 + j - 1)
                    _xor(acc.setdefault(sig, {}), key[:s] + akey + key[s + 1:], out)


def unit_failures_algebra(A: AInfAlgebra) -> list:
    fails = []
    if not A.idempotents:
        return fails
    idem = set(A.idempotents)
    for a in A.space.basis:
        for e in A.idempotents:
            i = A.idem_of(e)
            want = frozenset([a]) if A.left(a) == i else ZERO
            if A.op(2, (e, a)) != want:
                fails.append(CheckFailure("unit", (2,), (e, a), tuple(fmt(x) for x in A.op(2, (e, a)))))
            want = frozenset([a]) if A.right(a) == i else ZERO
            if A.op(2, (a, e)) != want:
                fails.append(CheckFailure("unit", (2,), (a, e), tuple(fmt(x) for x in A.op(2, (a, e)))))
    for n, t in A.mult.items():
        if n == 2:
            continue
        for key, out in t.items():
            if idem & set(key):
                fails.append(CheckFailure("unit", (n,), key, tuple(fmt(x) for x in out)))
    return fails


def unit_failures_bimodule(M: AInfBimodule) -> list:
    fails = []
    for side, alg in (("left", M.left), ("right", M.right)):
        if alg is None or not alg.idempotents:
            continue
        for x in M.space.basis:
            li, ri = M.pair(x)
            for e in alg.idempotents:
                i = alg.idem_of(e)
                if side == "left":
                    key, sig, want = (e, x), (1, 0), frozenset([x]) if li == i else ZERO
                else:
                    key, sig, want = (x, e), (0, 1), frozenset([x]) if ri == i else ZERO
                got = M.op(*sig, key)
                if got != want:
                    fails.append(CheckFailure("unit", sig, key, tuple(fmt(y) for y in got)))
    idem = set()
    for alg in (M.left, M.right):
        if alg is not None:
            idem |= set(alg.idempotents)
    for (n1, n2), t in M.acts.items():
        if n1 + n2 <= 1:
            continue
        for key, out in t.items():
            algslots = key[:n1] + key[n1 + 1:]
            if idem & set(algslots):
                fails.append(CheckFailure("unit", (n1, n2), key, tuple(fmt(y) for y in out)))
    return fails


def check_algebra(A: AInfAlgebra, cap: int = DEFAULT_CAP) -> CheckReport:
    acc: dict = {}
    pre = A.preimages()
    for r, t in A.mult.items():
        for key, out in t.items():
            for s in range(r):
                for j, akey in pre.get(key[s], ()):
                    if r + j - 1 > cap:
                        continue
                    _xor(acc.setdefault(r + j - 1, {}), key[:s] + akey + key[s + 1:], out)
    return _report("algebra", acc, unit_failures_algebra(A))


def check_bimodule(M: AInfBimodule, cap: int = DEFAULT_CAP) -> CheckReport:
    acc: dict = {}
    _module_inner_outer(acc, M.acts, M.by_elem(), cap)
    _algebra_slots(acc, M.acts, M.left, "left", cap)
    _algebra_slots(acc, M.acts, M.right, "right", cap)
    return _report("bimodule", acc, unit_failures_bimodule(M))


def unit_failures_morphism(f: AInfMorphism) -> list:
    idem = set()
    for alg in (f.source.left, f.source.right):
        if alg is not None:
            idem |= set(alg.idempotents)
    fails = []
    for (n1, n2), t in f.comps.items():
        if n1 + n2 == 0:
            continue
        for key, out in t.items():
            if idem & set(key[:n1] + key[n1 + 1:]):
                fails.append(CheckFailure("unit", (n1, n2), key, tuple(fmt(y) for y in out)))
    return fails


def check_morphism(f: AInfMorphism, cap: int = DEFAULT_CAP) -> CheckReport:
    M, N = f.source, f.target
    acc: dict = {}
    _module_inner_outer(acc, M.acts, f.by_elem(), cap)
    _module_inner_outer(acc, f.comps, N.by_elem(), cap)
    _algebra_slots(acc, f.comps, M.left, "left", cap)
    _algebra_slots(acc, f.comps, M.right, "right", cap)
    return _report("morphism", acc, unit_failures_morphism(f))


def check_degrees(obj, weight: tuple | None = None) -> list:
    """Entries whose degree differs from (2-n)w, resp. (1-n)w + degree(f).

    n counts all inputs. Returns the offending (sig, key) pairs.
    """
    bad = []
    if isinstance(obj, AInfAlgebra):
        w = obj.weight if weight is None else weight
        sp = obj.space
        for n, t in obj.mult.items():
            for key, out in t.items():
                src = _sum_deg([sp.deg(a) for a in key])
                want = tuple(s + (2 - n) * x for s, x in zip(src, w)) + src[len(w):]
                for c in out:
                    if sp.deg(c) != want:
                        bad.append(((n,), key))
        return bad
    if isinstance(obj, AInfBimodule):
        w = obj.weight if weight is None else weight
        tables, out_space, shift, spaces = obj.acts, obj.space, (), (obj.left, obj.space, obj.right)
    else:
        w = obj.source.weight if weight is None else weight
        tables, out_space, shift = obj.comps, obj.target.space, obj.degree
        spaces = (obj.source.left, obj.source.space, obj.source.right)
    left, msp, right = spaces
    for (n1, n2), t in tables.items():
        n = n1 + n2 + 1
        for key, out in t.items():
            degs = [left.space.deg(a) for a in key[:n1]] + [msp.deg(key[n1])]
            degs += [right.space.deg(b) for b in key[n1 + 1:]]
            src = _sum_deg(degs)
            base = 2 - n if isinstance(obj, AInfBimodule) else 1 - n
            want = list(src)
            for i, x in enumerate(w):
                want[i] += base * x
            for i, x in enumerate(shift):
                want[i] += x
            for c in out:
                if out_space.deg(c) != tuple(want):
                    bad.append(((n1, n2), key))
    return bad


def _sum_deg(degs: list) -> tuple:
    degs = [d for d in degs]
    if not degs or any(len(d) != len(degs[0]) for d in degs):
        return ()
    return tuple(sum(c) for c in zip(*degs))


# ---------------------------------------------------------------- cones and tensors


def mapping_cone(f: AInfMorphism, name: str = "") -> AInfBimodule:
    M, N = f.source, f.target
    w = M.weight
    deg = f.degree + (0,) * (len(w) - len(f.degree))
    shift = tuple(a - b for a, b in zip(w, deg))
    ms, ns = M.space, N.space
    basis = tuple(("cone", 0, x) for x in ms.basis) + tuple(("cone", 1, y) for y in ns.basis)
    grading = {("cone", 0, x): ms.deg(x) for x in ms.basis}
    for y in ns.basis:
        g = ns.deg(y)
        pad = shift + (0,) * (len(g) - len(shift))
        grading[("cone", 1, y)] = tuple(a + b for a, b in zip(g, pad)) if g else ()
    level = None
    if ms.level is not None and ns.level is not None:
        level = {("cone", 0, x): ms.level[x] for x in ms.basis}
        level.update({("cone", 1, y): ns.level[y] for y in ns.basis})
    li = {("cone", 0, x): ms.idems(x)[0] for x in ms.basis}
    li.update({("cone", 1, y): ns.idems(y)[0] for y in ns.basis})
    ri = {("cone", 0, x): ms.idems(x)[1] for x in ms.basis}
    ri.update({("cone", 1, y): ns.idems(y)[1] for y in ns.basis})
    space = GradedBasisSpace(basis, grading, level, li, ri)
    acts: dict = {}
    for tables, src, dst in ((M.acts, 0, 0), (f.comps, 0, 1), (N.acts, 1, 1)):
        for (n1, n2), t in tables.items():
            tab = acts.setdefault((n1, n2), {})
            for key, out in t.items():
                k = key[:n1] + (("cone", src, key[n1]),) + key[n1 + 1:]
                _xor(tab, k, frozenset(("cone", dst, o) for o in out))
    return AInfBimodule(space, acts, M.left, M.right, name or f"MC({f.name})")


class TensorError(ValueError):
    pass


def _bar_chains(A: AInfAlgebra, start, bar: tuple, full: bool, cutoff: int) -> list:
    """Composable words over ``bar`` starting at idempotent ``start``."""
    by_left: dict = {}
    for a in bar:
        by_left.setdefault(A.left(a), []).append(a)
    out = []

    def grow(word, cur):
        out.append((word, cur))
        if len(word) >= cutoff:
            return
        for a in by_left.get(cur, ()):
            grow(word + (a,), A.right(a))

    grow((), start)
    return out


def _tensor_space(M: AInfBimodule, N: AInfBimodule, full: bool, cutoff: int):
    A = M.right
    if A is None or N.left is None or not A.same_as(N.left):
        raise TensorError("M and N are not over the same algebra")
    if full:
        bar = A.space.basis
    else:
        bar = A.bar_basis()
        for a in bar:
            if A.left(a) == A.right(a):
                raise TensorError(f"non-idempotent element {fmt(a)} is not index-lowering")
        cutoff = len(A.idempotents) + 1
    n_by_left: dict = {}
    for y in N.space.basis:
        n_by_left.setdefault(N.pair(y)[0], []).append(y)
    basis = []
    cache: dict = {}
    for x in M.space.basis:
        r = M.pair(x)[1]
        if r not in cache:
            cache[r] = _bar_chains(A, r, bar, full, cutoff)
        for word, end in cache[r]:
            for y in n_by_left.get(end, ()):
                basis.append(("bar", x, word, y))
    ms, ns, asp = M.space, N.space, A.space
    w = A.weight
    grading = {}
    level = {} if (ms.level is not None and ns.level is not None and asp.level is not None) else None
    li, ri = {}, {}
    for X in basis:
        _, x, word, y = X
        degs = [ms.deg(x), ns.deg(y)] + [asp.deg(a) for a in word]
        g = _sum_deg(degs)
        if g:
            g = tuple(c - len(word) * (w[i] if i < len(w) else 0) for i, c in enumerate(g))
        grading[X] = g
        if level is not None:
            level[X] = ms.level[x] + ns.level[y] + sum(asp.level[a] for a in word)
        li[X] = ms.idems(x)[0]
        ri[X] = ns.idems(y)[1]
    return GradedBasisSpace(tuple(basis), grading, level, li, ri)


def _tensor_tables(M: AInfBimodule, N: AInfBimodule, space: GradedBasisSpace, full: bool) -> dict:
    A = M.right
    idem = set(A.idempotents)
    pre: dict = {}
    suf: dict = {}
    for X in space.basis:
        _, x, word, y = X
        n = len(word)
        for i in range(n + 1):
            pre.setdefault((x, word[:i]), []).append((i, X))
            suf.setdefault((word[n - i:], y), []).append((i, X))
    acts: dict = {}
    for (p, i), t in M.acts.items():
        tab = acts.setdefault((p, 0), {})
        for key, out in t.items():
            for _, X in pre.get((key[p], key[p + 1:]), ()):
                _, x, word, y = X
                res = frozenset(("bar", o, word[i:], y) for o in out)
                _xor(tab, key[:p] + (X,), res)
    for (i, q), t in N.acts.items():
        tab = acts.setdefault((0, q), {})
        for key, out in t.items():
            for _, X in suf.get((key[:i], key[i]), ()):
                _, x, word, y = X
                res = frozenset(("bar", x, word[:len(word) - i], o) for o in out)
                _xor(tab, (X,) + key[i + 1:], res)
    d = acts.setdefault((0, 0), {})
    for X in space.basis:
        _, x, word, y = X
        for j, t in A.mult.items():
            for l in range(len(word) - j + 1):
                out = t.get(word[l:l + j])
                if not out:
                    continue
                res = frozenset(("bar", x, word[:l] + (c,) + word[l + j:], y)
                                for c in out if full or c not in idem)
                if res:
                    _xor(d, (X,), res)
    return acts


def reduced_tensor(M: AInfBimodule, N: AInfBimodule, name: str = "") -> AInfBimodule:
    """Idempotent-reduced bar tensor product M (x)~ N."""
    space = _tensor_space(M, N, False, 0)
    acts = _tensor_tables(M, N, space, False)
    for sig, t in acts.items():
        for key, out in t.items():
            for o in out:
                if o not in space:
                    raise TensorError(f"action leaves the tensor basis at {fmt(o)}")
    return AInfBimodule(space, acts, M.left, N.right, name or f"({M.name})~({N.name})")


def full_bar_truncated_homology(M: AInfBimodule, N: AInfBimodule, cutoff: int) -> dict:
    """Per-pair dims of the image of H(C<=cutoff-1) in H(C<=cutoff), C the full bar complex.

    The degenerate part of the full bar is a contractible subcomplex whose
    contraction raises bar length by one, so these images are the honest
    homology once cutoff exceeds the reduced bar length.
    """
    space = _tensor_space(M, N, True, cutoff)
    d = {k[0]: v for k, v in _tensor_tables(M, N, space, True)[(0, 0)].items()}
    blocks: dict = {}
    for X in space.basis:
        blocks.setdefault(space.idems(X), []).append(X)
    out = {}
    for pair, labels in blocks.items():
        idx = {X: i for i, X in enumerate(labels)}
        low = [X for X in labels if len(X[2]) < cutoff]
        mask = lambda vec: sum(1 << idx[o] for o in vec)
        cols_low = [(1 << idx[X], mask(d.get(X, ZERO))) for X in low]
        cycles = _kernel(cols_low)
        bounds = echelonize(mask(d.get(X, ZERO)) for X in labels)
        both = rank_of(list(cycles) + bounds)
        inter = len(cycles) + len(bounds) - both
        out[pair] = len(cycles) - inter
    return {k: v for k, v in out.items() if v}


def _kernel(cols: list) -> list:
    """Kernel of a map given as (source vector, image) pairs, as source vectors."""
    piv: dict = {}
    ker = []
    for src, img in cols:
        while img:
            top = img.bit_length() - 1
            hit = piv.get(top)
            if hit is None:
                piv[top] = (img, src)
                break
            img ^= hit[0]
            src ^= hit[1]
        if not img:
            ker.append(src)
    return ker


# ---------------------------------------------------------------- filtrations


class FiltrationError(ValueError):
    def __init__(self, sig, key, label) -> None:
        super().__init__(f"component {fmt(label)} of {sig} on ({', '.join(fmt(k) for k in key)}) "
                         "raises filtration level")
        self.sig, self.key, self.label = sig, key, label


def _gr_tables(tables: Mapping, level_of: Callable, out_level: Callable) -> dict:
    out: dict = {}
    for sig, t in tables.items():
        tab = {}
        for key, vec in t.items():
            s = level_of(sig, key)
            keep = []
            for c in vec:
                lc = out_level(c)
                if lc > s:
                    raise FiltrationError(sig, key, c)
                if lc == s:
                    keep.append(c)
            if keep:
                tab[key] = frozenset(keep)
        out[sig] = tab
    return out


def associated_graded(x):
    """Level-preserving part of a filtered algebra, bimodule, or morphism."""
    if isinstance(x, AInfAlgebra):
        lv = x.space.lev
        mult = _gr_tables(x.mult, lambda n, key: sum(lv(a) for a in key), lv)
        return AInfAlgebra(x.space, mult, x.idempotents, x.weight, f"gr({x.name})")
    if isinstance(x, AInfBimodule):
        if x.space.level is None:
            raise ValueError("bimodule carries no filtration")
        left = associated_graded(x.left) if x.left is not None else None
        right = left if (x.right is x.left) else (
            associated_graded(x.right) if x.right is not None else None)
        acts = _gr_tables(x.acts, _module_level(x), x.space.lev)
        return AInfBimodule(x.space, acts, left, right, f"gr({x.name})")
    if isinstance(x, AInfMorphism):
        src = associated_graded(x.source)
        tgt = associated_graded(x.target)
        comps = _gr_tables(x.comps, _module_level(x.source), x.target.space.lev)
        return AInfMorphism(src, tgt, comps, x.degree, f"gr({x.name})")
    raise TypeError(type(x))


def _module_level(M: AInfBimodule) -> Callable:
    llev = M.left.space.lev if M.left is not None else None
    rlev = M.right.space.lev if M.right is not None else None
    mlev = M.space.lev

    def level_of(sig, key):
        n1 = sig[0]
        s = mlev(key[n1])
        s += sum(llev(a) for a in key[:n1])
        s += sum(rlev(b) for b in key[n1 + 1:])
        return s

    return level_of


def check_filtered(x) -> FiltrationError | None:
    try:
        associated_graded(x)
    except FiltrationError as e:
        return e
    return None


@dataclass(frozen=True)
class Mismatch:
    where: str
    sig: tuple | None = None
    key: tuple | None = None
    left: tuple = ()
    right: tuple = ()

    def __str__(self) -> str:
        if self.sig is None:
            return self.where
        k = ", ".join(fmt(a) for a in self.key or ())
        return (f"{self.where} {self.sig} on ({k}): "
                f"{' + '.join(self.left) or '0'} != {' + '.join(self.right) or '0'}")


def _compare_tables(where: str, A: Mapping, B: Mapping, tr: Callable) -> Mismatch | None:
    tA = {sig: {tuple(tr(a) for a in k): frozenset(tr(o) for o in v) for k, v in t.items()}
          for sig, t in A.items()}
    sigs = sorted(set(tA) | set(B), key=str)
    for sig in sigs:
        ta, tb = tA.get(sig, {}), B.get(sig, {})
        if ta == tb:
            continue
        keys = sorted(set(ta) | set(tb), key=lambda k: [fmt(a) for a in k])
        for k in keys:
            va, vb = ta.get(k, ZERO), tb.get(k, ZERO)
            if va != vb:
                return Mismatch(where, sig, k, tuple(sorted(fmt(o) for o in va)),
                                tuple(sorted(fmt(o) for o in vb)))
    return None


def compare_structures(X, Y, tr: Callable = lambda lab: lab, gradings: bool = False,
                       levels: bool = False) -> Mismatch | None:
    """Constant-for-constant comparison of X (relabelled by ``tr``) with Y."""
    if isinstance(X, AInfAlgebra):
        sx, sy = X.space, Y.space
        bad = _compare_spaces(sx, sy, tr, gradings, levels)
        return bad or _compare_tables("m", X.mult, Y.mult, tr)
    if isinstance(X, AInfBimodule):
        for a, b in ((X.left, Y.left), (X.right, Y.right)):
            if (a is None) != (b is None):
                return Mismatch("acting algebras differ")
            if a is not None:
                bad = compare_structures(a, b, tr)
                if bad:
                    return Mismatch(f"algebra: {bad}")
        bad = _compare_spaces(X.space, Y.space, tr, gradings, levels)
        return bad or _compare_tables("m", X.acts, Y.acts, tr)
    if isinstance(X, AInfMorphism):
        bad = compare_structures(X.source, Y.source, tr, gradings, levels)
        bad = bad or compare_structures(X.target, Y.target, tr, gradings, levels)
        return bad or _compare_tables("f", X.comps, Y.comps, tr)
    raise TypeError(type(X))


def _compare_spaces(sx, sy, tr, gradings, levels) -> Mismatch | None:
    bx = [tr(b) for b in sx.basis]
    if set(bx) != set(sy.basis) or len(bx) != len(sy.basis):
        extra = sorted(fmt(b) for b in set(bx) ^ set(sy.basis))[:3]
        return Mismatch(f"bases differ (e.g. {', '.join(extra)})")
    for b in sx.basis:
        t = tr(b)
        if sx.idems(b) != sy.idems(t):
            return Mismatch(f"idempotents of {fmt(t)} differ")
        if gradings and sx.deg(b) != sy.deg(t):
            return Mismatch(f"grading of {fmt(t)} differs")
        if levels and sx.lev(b) != sy.lev(t):
            return Mismatch(f"level of {fmt(t)} differs")
    return None


@dataclass(frozen=True)
class TensorComparison:
    ok: bool
    phi_size: int
    detail: str = ""


def gr_commutes_with_tensor(M: AInfBimodule, N: AInfBimodule) -> TensorComparison:
    """Compare gr(M (x)~ N) with gr(M) (x)~ gr(N) through the basis bijection Phi."""
    try:
        lhs = associated_graded(reduced_tensor(M, N))
        rhs = reduced_tensor(associated_graded(M), associated_graded(N))
    except FiltrationError as e:
        return TensorComparison(False, 0, f"counterexample: {e}")
    # Phi sends x (x) a_1..a_n (x) y to the same adapted-basis word
    phi = {X: X for X in rhs.space.basis}
    if set(phi) != set(lhs.space.basis):
        return TensorComparison(False, len(phi), "Phi is not a bijection of bases")
    bad = compare_structures(rhs, lhs, lambda lab: phi.get(lab, lab), gradings=True, levels=True)
    if bad:
        return TensorComparison(False, len(phi), f"counterexample: {bad}")
    return TensorComparison(True, len(phi))


# ---------------------------------------------------------------- homology


def pair_key(M: AInfBimodule, graded: bool = False) -> Callable:
    sp = M.space
    if graded:
        return lambda x: (sp.idems(x), sp.deg(x))
    return lambda x: sp.idems(x)


def bimodule_homology(M: AInfBimodule, graded: bool = False) -> dict:
    """Homology dimensions of m_(0|1|0) per idempotent pair (and grading)."""
    d = M.d()
    if graded and M.space.basis and not M.space.deg(M.space.basis[0]):
        graded = False
    key = pair_key(M, graded)
    dims = homology_dims(M.space.basis, d, key)
    return {k: v for k, v in dims.items() if v}


def compose(g: AInfMorphism, f: AInfMorphism, cap: int = DEFAULT_CAP) -> AInfMorphism:
    """(g o f) with the inner morphism consuming the innermost inputs."""
    comps: dict = {}
    gidx = g.by_elem()
    for (p, q), t in f.comps.items():
        for key, out in t.items():
            for y in out:
                for (i1, i2), gkey, gout in gidx.get(y, ()):
                    if p + q + i1 + i2 + 1 > cap:
                        continue
                    _xor(comps.setdefault((p + i1, q + i2), {}), gkey[:i1] + key + gkey[i1 + 1:], gout)
    deg = tuple(a + b for a, b in zip(f.degree, g.degree)) if f.degree and g.degree else (
        f.degree or g.degree)
    return AInfMorphism(f.source, g.target, comps, deg, f"{g.name}o{f.name}")


# ---------------------------------------------------------------- spectral sequence


@dataclass(frozen=True)
class SpectralSequence:
    pages: tuple
    collapse: int
    levels: tuple

    def totals(self, r: int) -> dict:
        """Per-block total dimension on page r (r beyond the last page means E-infinity)."""
        page = self.pages[min(r, len(self.pages) - 1)]
        out: dict = {}
        for (blk, _), v in page.items():
            out[blk] = out.get(blk, 0) + v
        return {k: v for k, v in out.items() if v}

    def dims(self, r: int) -> int:
        return sum(self.totals(r).values())

    def d_rank(self, r: int) -> int:
        return (self.dims(r) - self.dims(r + 1)) // 2


def spectral_sequence(x, key: Callable | None = None) -> SpectralSequence:
    """Pages E_0 .. E_R (R past the filtration length, so E_R = E_infinity).

    Uses only the differential. ``x`` is a filtered bimodule, or a pair
    (space, d) for a bare filtered complex.
    """
    if isinstance(x, AInfBimodule):
        space, d = x.space, x.d()
        key = key or (lambda b: space.idems(b))
    elif isinstance(x, AInfAlgebra):
        space, d = x.space, {k[0]: v for k, v in x.mult.get(1, {}).items()}
    else:
        space, d = x
    key = key or (lambda b: None)
    lo, hi = space.filtration_bounds()
    R = hi - lo + 2
    blocks: dict = {}
    for b in space.basis:
        blocks.setdefault(key(b), []).append(b)
    pages = [dict() for _ in range(R + 1)]
    for blk, labels in blocks.items():
        labels = sorted(labels, key=space.lev)
        idx = {b: i for i, b in enumerate(labels)}
        lev = [space.lev(b) for b in labels]
        img = []
        for b in labels:
            m = 0
            for o in d.get(b, ZERO):
                m ^= 1 << idx[o]
            img.append(m)
        F = {}
        for p in range(lo - 1, hi + 1):
            F[p] = sum(1 << i for i, l in enumerate(lev) if l <= p)

        def fmask(p):
            if p < lo:
                return 0
            return F[min(p, hi)]

        def dvec(v):
            out = 0
            i = 0
            while v:
                if v & 1:
                    out ^= img[i]
                v >>= 1
                i += 1
            return out

        def Z(r, p):
            if r < 0:
                return [1 << i for i in range(len(labels)) if (fmask(p) >> i) & 1]
            keep = fmask(p)
            outside = ~fmask(p - r)
            cols = [(1 << i, dvec(1 << i) & outside) for i in range(len(labels)) if (keep >> i) & 1]
            return _kernel(cols)

        for r in range(R + 1):
            for p in range(lo, hi + 1):
                z = Z(r, p)
                den = Z(r - 1, p - 1) + [dvec(v) for v in Z(r - 1, p + r - 1)]
                pages[r][(blk, p)] = len(z) - rank_of(den)
    pages_t = tuple({k: v for k, v in pg.items()} for pg in pages)
    collapse = R
    for r in range(R, -1, -1):
        if pages_t[r] == pages_t[R]:
            collapse = r
        else:
            break
    return SpectralSequence(pages_t, collapse, tuple(range(lo, hi + 1)))


# ---------------------------------------------------------------- serialization


def to_json(x) -> dict:
    def basis_json(sp: GradedBasisSpace) -> list:
        out = []
        for b in sp.basis:
            li, ri = sp.idems(b)
            out.append({"label": fmt(b), "grading": list(sp.deg(b)),
                        "level": None if sp.level is None else sp.level[b],
                        "idem": [li, ri]})
        return out

    def ops_json(tables: Mapping, bimod: bool) -> list:
        out = []
        for sig in sorted(tables, key=lambda s: (s if isinstance(s, tuple) else (s,))):
            t = tables[sig]
            rows = []
            for key, vec in t.items():
                rows.append({"sig": [sig[0], 1, sig[1]] if bimod else [sig],
                             "in": [fmt(a) for a in key],
                             "out": sorted(fmt(o) for o in vec)})
            rows.sort(key=lambda r: r["in"])
            out += rows
        return out

    if isinstance(x, AInfAlgebra):
        return {"name": x.name, "basis": basis_json(x.space), "ops": ops_json(x.mult, False)}
    if isinstance(x, AInfBimodule):
        return {"name": x.name, "basis": basis_json(x.space), "ops": ops_json(x.acts, True)}
    if isinstance(x, AInfMorphism):
        return {"name": x.name, "source": x.source.name, "target": x.target.name,
                "comps": ops_json(x.comps, True)}
    raise TypeError(type(x))
