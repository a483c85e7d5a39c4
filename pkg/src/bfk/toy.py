"""The Z/2-equivariant cochain algebra of the circle.

S^1 has vertices a, b and edges A, B with boundary a + b each; the involution
tau swaps A and B. Cochains a*, b*, A*, B* carry the cup product, the
coboundary delta and d_tau = 1 + tau. The total complex (delta + d_tau) is
filtered by 0 <= ker d_tau <= C; its associated graded is (C, delta).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ainf import (AInfAlgebra, associated_graded, check_algebra, check_filtered,
                   compare_structures, spectral_sequence)
from .f2graded import GradedBasisSpace, ZERO
from .hfside import rebase
from .transfer import SplittingData, check_formality_alg, split_prescribed, transfer_algebra

BASIS = ("a*", "b*", "A*", "B*")
VERTICES = ("a", "b")
EDGES = {"A": ("a", "b"), "B": ("a", "b")}
TAU = {"a": "a", "b": "b", "A": "B", "B": "A"}

CUP = {("a*", "a*"): "a*", ("a*", "A*"): "A*", ("a*", "B*"): "B*",
       ("b*", "b*"): "b*", ("A*", "b*"): "A*", ("B*", "b*"): "B*"}


def _cochain(simplex: str) -> str:
    return simplex + "*"


def coboundary() -> dict:
    """delta(c*)(e) = c*(boundary e), from the simplicial structure."""
    d: dict = {}
    for e, ends in EDGES.items():
        for v in ends:
            c = _cochain(v)
            d[c] = d.get(c, ZERO) ^ frozenset([_cochain(e)])
    return {k: v for k, v in d.items() if v}


def tau_differential() -> dict:
    d = {}
    for s, t in TAU.items():
        v = frozenset([_cochain(s)]) ^ frozenset([_cochain(t)])
        if v:
            d[_cochain(s)] = v
    return d


@dataclass
class ToyComplex:
    basis: tuple = BASIS
    cup: dict = field(default_factory=lambda: {k: frozenset([v]) for k, v in CUP.items()})
    delta: dict = field(default_factory=coboundary)
    dtau: dict = field(default_factory=tau_differential)

    def total(self) -> dict:
        out = {}
        for b in self.basis:
            v = self.delta.get(b, ZERO) ^ self.dtau.get(b, ZERO)
            if v:
                out[b] = v
        return out

    def algebra(self, d: dict, graded: bool, name: str) -> AInfAlgebra:
        grading = {b: ((1 if b[0].isupper() else 0),) if graded else () for b in self.basis}
        space = GradedBasisSpace(self.basis, grading, None, {b: 0 for b in self.basis},
                                 {b: 0 for b in self.basis})
        return AInfAlgebra(space, {1: {(k,): v for k, v in d.items()}, 2: dict(self.cup)}, (),
                           (1,) if graded else (), name)


def build_toy() -> ToyComplex:
    return ToyComplex()


def _lin(table: dict, vec) -> frozenset:
    out: set = set()
    for b in vec:
        out ^= table.get(b, ZERO)
    return frozenset(out)


def leibniz_failures(T: ToyComplex, d: dict) -> list:
    bad = []
    for a in T.basis:
        for b in T.basis:
            lhs = _lin(d, T.cup.get((a, b), ZERO))
            rhs: set = set()
            for x in d.get(a, ZERO):
                rhs ^= T.cup.get((x, b), ZERO)
            for y in d.get(b, ZERO):
                rhs ^= T.cup.get((a, y), ZERO)
            if lhs != frozenset(rhs):
                bad.append((a, b))
    return bad


def _point_space(basis: tuple, grading: dict, level: dict | None = None) -> GradedBasisSpace:
    return GradedBasisSpace(basis, grading, level, {b: 0 for b in basis}, {b: 0 for b in basis})


def circle_splitting(T: ToyComplex) -> SplittingData:
    """iota(1) = a* + b*, iota(x) = A*, p(a*) = 1, p(A*) = p(B*) = x, h(B*) = b*."""
    H = _point_space(("1", "x"), {"1": (0,), "x": (1,)})
    A = T.algebra(T.delta, True, "C(delta)")
    return split_prescribed(A.space, T.delta, H,
                            {"1": {"a*", "b*"}, "x": {"A*"}},
                            {"a*": {"1"}, "A*": {"x"}, "B*": {"x"}},
                            {"B*": {"b*"}})


def points_splitting(T: ToyComplex) -> SplittingData:
    """iota(rho) = a* + A*, iota(sigma) = b* + A*, p(a*) = rho, p(b*) = sigma, h(B*) = A*."""
    H = _point_space(("rho", "sigma"), {"rho": (), "sigma": ()})
    A = T.algebra(T.total(), False, "C(delta+dtau)")
    return split_prescribed(A.space, T.total(), H,
                            {"rho": {"a*", "A*"}, "sigma": {"b*", "A*"}},
                            {"a*": {"rho"}, "b*": {"sigma"}},
                            {"B*": {"A*"}})


# the filtered total complex, in the basis a*, b*, S = A* + B* (level 0), A* (level 1)
_ADAPT_PRE = {"B*": ("S",), "A*": ("S", "A*")}
_ADAPT_OUT = {"B*": frozenset(["S", "A*"])}
_ADAPT_LEVEL = {"a*": 0, "b*": 0, "S": 0, "A*": 1}


def _adapted(T: ToyComplex, d: dict, graded: bool, name: str) -> AInfAlgebra:
    A = T.algebra(d, graded, name)
    basis = ("a*", "b*", "S", "A*")
    grading = {b: ((1 if b in ("S", "A*") else 0),) if graded else () for b in basis}
    space = GradedBasisSpace(basis, grading, dict(_ADAPT_LEVEL), {b: 0 for b in basis},
                             {b: 0 for b in basis})
    mult = rebase(A.mult, {s: _ADAPT_PRE for s in range(2)}, _ADAPT_OUT)
    return AInfAlgebra(space, mult, (), A.weight, name)


def filtered_total(T: ToyComplex) -> AInfAlgebra:
    return _adapted(T, T.total(), False, "C(delta+dtau)")


def circle_adapted(T: ToyComplex) -> AInfAlgebra:
    """(C, delta) written in the adapted basis, with the same levels."""
    return _adapted(T, T.delta, False, "C(delta)")


def filtered_points(HS0: AInfAlgebra) -> AInfAlgebra:
    """H*(S^0) in the basis 1 = rho + sigma (level 0), rho (level 1)."""
    pre = {"rho": ("1", "rho"), "sigma": ("1",)}
    out = {"sigma": frozenset(["1", "rho"])}
    space = _point_space(("1", "rho"), {"1": (), "rho": ()}, {"1": 0, "rho": 1})
    mult = rebase(HS0.mult, {s: pre for s in range(max(HS0.mult, default=0))}, out)
    return AInfAlgebra(space, mult, ("1",), (), "H*(S^0)")


def circle_algebra() -> AInfAlgebra:
    """H*(S^1) = F[x]/(x^2), written directly."""
    space = _point_space(("1", "x"), {"1": (0,), "x": (1,)})
    mult = {2: {("1", "1"): frozenset(["1"]), ("1", "x"): frozenset(["x"]),
                ("x", "1"): frozenset(["x"])}}
    return AInfAlgebra(space, mult, ("1",), (1,), "H*(S^1)")


@dataclass
class ToyReport:
    lines: list

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.lines)

    def render(self) -> str:
        out = [f"{'ok ' if ok else 'FAIL'} {text}" for text, ok in self.lines]
        out.append("OK" if self.ok else "FAILED")
        return "\n".join(out)


def _is_zero(A: AInfAlgebra, n_from: int) -> bool:
    return all(not A.mult.get(n) for n in A.mult if n >= n_from)


def toy_verify(cap: int = 4) -> ToyReport:
    T = build_toy()
    lines = []

    def add(text: str, ok: bool) -> None:
        lines.append((text, bool(ok)))

    add("delta^2 = 0, dtau^2 = 0", not any(_lin(d, _lin(d, [b])) for d in (T.delta, T.dtau)
                                           for b in T.basis))
    add("delta dtau = dtau delta",
        all(_lin(T.delta, _lin(T.dtau, [b])) == _lin(T.dtau, _lin(T.delta, [b])) for b in T.basis))
    add("Leibniz for delta and dtau", not leibniz_failures(T, T.delta)
        and not leibniz_failures(T, T.dtau))
    add("delta(a*) = A* + B*", T.delta.get("a*") == frozenset(["A*", "B*"]))

    Sd = circle_splitting(T)
    Ad = T.algebra(T.delta, True, "C(delta)")
    HS1 = transfer_algebra(Ad, Sd, cap, ("1",), "H(C, delta)")
    add("prescribed splitting of (C, delta) accepted", not Sd.violations())
    add("H(C, delta) has dims (1, 1)",
        sorted(Sd.H.deg(b) for b in Sd.H.basis) == [(0,), (1,)])
    add("H(C, delta) = H*(S^1), x^2 = 0, no higher products",
        compare_structures(HS1, circle_algebra(), gradings=True) is None and _is_zero(HS1, 3))
    add("FormalCond for (C, delta)", check_formality_alg(Sd, Ad).ok)

    St = points_splitting(T)
    At = T.algebra(T.total(), False, "C(delta+dtau)")
    HS0 = transfer_algebra(At, St, cap, (), "H(C, delta+dtau)")
    m2 = HS0.mult.get(2, {})
    add("prescribed splitting of (C, delta+dtau) accepted", not St.violations())
    add("H(C, delta+dtau) has dim 2", len(St.H.basis) == 2)
    add("rho, sigma orthogonal idempotents",
        m2.get(("rho", "rho")) == frozenset(["rho"]) and m2.get(("sigma", "sigma")) == frozenset(["sigma"])
        and not m2.get(("rho", "sigma")) and not m2.get(("sigma", "rho")) and _is_zero(HS0, 3))
    add("FormalCond for (C, delta+dtau)", check_formality_alg(St, At).ok)

    F = filtered_total(T)
    add("ker dtau . ker dtau <= ker dtau", check_filtered(F) is None)
    add("gr(C, delta+dtau) = (C, delta)",
        check_filtered(F) is None and compare_structures(associated_graded(F), circle_adapted(T)) is None)
    FP = filtered_points(HS0)
    add("gr H*(S^0) = H*(S^1) (rho -> x)",
        check_filtered(FP) is None and compare_structures(
            associated_graded(FP), circle_algebra(), lambda b: "x" if b == "rho" else b) is None
        and check_algebra(FP).ok)
    ss = spectral_sequence(F)
    add("spectral sequence: E1 and E-infinity have dim 2", ss.dims(1) == 2 and ss.dims(len(ss.pages)) == 2)
    return ToyReport(lines)
