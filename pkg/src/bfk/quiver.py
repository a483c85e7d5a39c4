"""The zigzag path algebra A_m on the line quiver 0 - 1 - ... - m.

Paths are vertex tuples, composed left to right: p*q is nonzero only when
p ends where q starts. Relations, for every admissible i:

    (i-1|i|i+1) = (i+1|i|i-1) = 0,   (i|i+1|i) = (i|i-1|i),   (0|1|0) = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product


@dataclass(frozen=True, order=True)
class PathElement:
    vertices: tuple

    def __post_init__(self) -> None:
        vs = self.vertices
        if not vs or len(vs) > 3:
            raise ValueError(f"not a normal-form path: {vs}")
        for a, b in zip(vs, vs[1:]):
            if abs(a - b) != 1:
                raise ValueError(f"vertices {a},{b} are not adjacent")
        if len(vs) == 3 and not (vs[0] == vs[2] and vs[1] == vs[0] - 1):
            raise ValueError(f"not a normal-form path: {vs}")

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def __str__(self) -> str:
        return "(" + "|".join(str(v) for v in self.vertices) + ")"

    __repr__ = __str__


def P(*vertices: int) -> PathElement:
    return PathElement(tuple(vertices))


def path_basis(m: int) -> list[PathElement]:
    if m < 0:
        raise ValueError("m must be non-negative")
    out = [P(i) for i in range(m + 1)]
    out += [P(i, i + 1) for i in range(m)]
    out += [P(i, i - 1) for i in range(1, m + 1)]
    out += [P(i, i - 1, i) for i in range(1, m + 1)]
    return out


def _rewrites(vs: tuple):
    """Every single-step rewrite of a vertex walk; None stands for zero."""
    for s in range(len(vs) - 2):
        a, b, c = vs[s:s + 3]
        if a != c:
            yield None
        elif b == a + 1:
            if a == 0:
                yield None
            else:
                yield vs[:s + 1] + (a - 1,) + vs[s + 2:]


def normal_forms(vs: tuple) -> set:
    """All normal forms reachable from a walk, over every rewrite order."""
    seen: dict = {}

    def go(w):
        if w in seen:
            return seen[w]
        steps = list(_rewrites(w))
        if not steps:
            res = {w}
        else:
            res = set()
            for nxt in steps:
                res |= {None} if nxt is None else go(nxt)
        seen[w] = res
        return res

    return go(vs)


def reduce_walk(vs: tuple) -> PathElement | None:
    """Normal form of a walk by leftmost rewriting; None is zero."""
    while True:
        step = next(_rewrites(vs), "stop")
        if step == "stop":
            return PathElement(vs)
        if step is None:
            return None
        vs = step


def walks(m: int, max_edges: int) -> list[tuple]:
    out = [(i,) for i in range(m + 1)]
    frontier = list(out)
    for _ in range(max_edges):
        nxt = []
        for w in frontier:
            for v in (w[-1] - 1, w[-1] + 1):
                if 0 <= v <= m:
                    nxt.append(w + (v,))
        out += nxt
        frontier = nxt
    return out


@lru_cache(maxsize=None)
def multiply(p: PathElement, q: PathElement) -> PathElement | None:
    if p.end != q.start:
        return None
    return reduce_walk(p.vertices + q.vertices[1:])


def internal_degree(p: PathElement) -> int:
    return sum(1 for a, b in zip(p.vertices, p.vertices[1:]) if b == a - 1)


def path_length(p: PathElement) -> int:
    return len(p.vertices) - 1


class QuiverAlgebra:
    def __init__(self, m: int) -> None:
        self.m = m
        self.basis = path_basis(m)
        self.table = {}
        for p, q in product(self.basis, repeat=2):
            r = multiply(p, q)
            if r is not None:
                self.table[(p, q)] = r

    @property
    def dim(self) -> int:
        return len(self.basis)

    def mul(self, p: PathElement, q: PathElement) -> PathElement | None:
        return self.table.get((p, q))

    def idempotents(self) -> list[PathElement]:
        return [P(i) for i in range(self.m + 1)]
