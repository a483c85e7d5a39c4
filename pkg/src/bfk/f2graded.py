"""GF(2) linear algebra on int bitsets, plus labeled graded/filtered bases.

Vectors in a labeled space are frozensets of basis labels (addition is
symmetric difference). Matrices are lists of int bitsets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

Label = Hashable
Vec = frozenset

ZERO: frozenset = frozenset()


def vsum(vectors: Iterable[frozenset]) -> frozenset:
    acc: set = set()
    for v in vectors:
        acc ^= v
    return frozenset(acc)


# ---------------------------------------------------------------- matrices


@dataclass(frozen=True)
class F2Matrix:
    """Dense GF(2) matrix; ``bits[r]`` is row r with bit c set iff entry (r, c) = 1."""

    rows: int
    cols: int
    bits: tuple

    @classmethod
    def zero(cls, rows: int, cols: int) -> F2Matrix:
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> F2Matrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[int]) -> F2Matrix:
        bits = [0] * rows
        for c, col in enumerate(columns):
            r = 0
            while col:
                if col & 1:
                    bits[r] |= 1 << c
                col >>= 1
                r += 1
        return cls(rows, len(columns), tuple(bits))

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> F2Matrix:
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        bits = tuple(sum((e & 1) << c for c, e in enumerate(row)) for row in entries)
        return cls(rows, cols, bits)

    def columns(self) -> list[int]:
        out = [0] * self.cols
        for r, row in enumerate(self.bits):
            c = 0
            while row:
                if row & 1:
                    out[c] |= 1 << r
                row >>= 1
                c += 1
        return out

    def apply(self, x: int) -> int:
        y = 0
        for r, row in enumerate(self.bits):
            if (row & x).bit_count() & 1:
                y |= 1 << r
        return y

    def __add__(self, other: F2Matrix) -> F2Matrix:
        assert (self.rows, self.cols) == (other.rows, other.cols)
        return F2Matrix(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def __matmul__(self, other: F2Matrix) -> F2Matrix:
        assert self.cols == other.rows
        out = []
        for row in self.bits:
            acc = 0
            c = 0
            while row:
                if row & 1:
                    acc ^= other.bits[c]
                row >>= 1
                c += 1
            out.append(acc)
        return F2Matrix(self.rows, other.cols, tuple(out))

    def rank(self) -> int:
        return rank_of(list(self.bits))


def rank_of(vectors: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = v
                break
            v ^= p
    return len(pivots)


def reduce_by(v: int, pivots: Mapping[int, int]) -> int:
    """Fully reduce v against vectors keyed by their leading bit."""
    for top in sorted(pivots, reverse=True):
        if (v >> top) & 1:
            v ^= pivots[top]
    return v


def echelonize(vectors: Iterable[int]) -> list[int]:
    """Reduced echelon basis of the span, sorted by leading bit."""
    pivots: dict[int, int] = {}
    for v in vectors:
        v = reduce_by(v, pivots)
        if not v:
            continue
        top = v.bit_length() - 1
        for k, p in pivots.items():
            if (p >> top) & 1:
                pivots[k] = p ^ v
        pivots[top] = v
    return [pivots[k] for k in sorted(pivots)]


@dataclass(frozen=True)
class RankKernelImage:
    rank: int
    kernel: tuple
    image: tuple
    preimage: Mapping[int, int]

    def solve(self, target: int) -> int | None:
        """Some w with M w = target, or None."""
        w = 0
        v = target
        basis = {b.bit_length() - 1: b for b in self.image}
        while v:
            top = v.bit_length() - 1
            b = basis.get(top)
            if b is None:
                return None
            v ^= b
            w ^= self.preimage[b]
        return w


def rank_kernel_image(M: F2Matrix) -> RankKernelImage:
    cols = M.columns()
    pivots: dict[int, tuple[int, int]] = {}
    kernel = []
    for j, col in enumerate(cols):
        combo = 1 << j
        v = col
        while v:
            top = v.bit_length() - 1
            hit = pivots.get(top)
            if hit is None:
                break
            v ^= hit[0]
            combo ^= hit[1]
        if v:
            pivots[v.bit_length() - 1] = (v, combo)
        else:
            kernel.append(combo)
    # fully reduce the image basis, carrying preimages along
    keys = sorted(pivots)
    for k in keys:
        v, c = pivots[k]
        for k2 in keys:
            if k2 == k:
                continue
            v2, c2 = pivots[k2]
            if (v2 >> k) & 1:
                pivots[k2] = (v2 ^ v, c2 ^ c)
    image = tuple(pivots[k][0] for k in keys)
    pre = {pivots[k][0]: pivots[k][1] for k in keys}
    return RankKernelImage(len(image), tuple(echelonize(kernel)), image, pre)


# ---------------------------------------------------------------- graded spaces


@dataclass(frozen=True)
class GradingShift:
    shift: tuple = ()
    filt_shift: int = 0

    def __neg__(self) -> GradingShift:
        return GradingShift(tuple(-s for s in self.shift), -self.filt_shift)

    def __add__(self, other: GradingShift) -> GradingShift:
        n = max(len(self.shift), len(other.shift))
        a = self.shift + (0,) * (n - len(self.shift))
        b = other.shift + (0,) * (n - len(other.shift))
        return GradingShift(tuple(x + y for x, y in zip(a, b)), self.filt_shift + other.filt_shift)


@dataclass(frozen=True)
class GradedBasisSpace:
    """Finite GF(2) space with a labeled basis and per-label bookkeeping."""

    basis: tuple
    grading: Mapping = field(default_factory=dict)
    level: Mapping | None = None
    left_idem: Mapping | None = None
    right_idem: Mapping | None = None

    def __post_init__(self) -> None:
        if len(set(self.basis)) != len(self.basis):
            raise ValueError("basis labels must be unique")
        object.__setattr__(self, "_index", {b: i for i, b in enumerate(self.basis)})

    @property
    def index(self) -> dict:
        return self._index  # type: ignore[attr-defined]

    def __len__(self) -> int:
        return len(self.basis)

    def __contains__(self, label: object) -> bool:
        return label in self._index  # type: ignore[attr-defined]

    def deg(self, label: Label) -> tuple:
        return tuple(self.grading.get(label, ()))

    def lev(self, label: Label) -> int:
        return 0 if self.level is None else self.level[label]

    def idems(self, label: Label) -> tuple:
        li = None if self.left_idem is None else self.left_idem.get(label)
        ri = None if self.right_idem is None else self.right_idem.get(label)
        return li, ri

    def to_mask(self, vec: Iterable) -> int:
        m = 0
        for b in vec:
            m ^= 1 << self._index[b]  # type: ignore[attr-defined]
        return m

    def to_vec(self, mask: int) -> frozenset:
        out = []
        i = 0
        while mask:
            if mask & 1:
                out.append(self.basis[i])
            mask >>= 1
            i += 1
        return frozenset(out)

    def sorted_vec(self, vec: Iterable) -> list:
        return sorted(vec, key=self._index.__getitem__)  # type: ignore[attr-defined]

    def filtration_bounds(self) -> tuple[int, int]:
        if not self.basis or self.level is None:
            return (0, 0)
        vals = [self.level[b] for b in self.basis]
        return (min(vals), max(vals))

    def restrict(self, labels: Iterable) -> GradedBasisSpace:
        keep = tuple(labels)
        pick = lambda d: None if d is None else {b: d[b] for b in keep if b in d}
        return GradedBasisSpace(keep, {b: self.deg(b) for b in keep}, pick(self.level),
                                pick(self.left_idem), pick(self.right_idem))


def apply_shift(V: GradedBasisSpace, s: GradingShift) -> GradedBasisSpace:
    grading = {}
    for b in V.basis:
        g = V.deg(b)
        if len(s.shift) > len(g):
            raise ValueError(f"shift {s.shift} has more components than grading {g}")
        pad = s.shift + (0,) * (len(g) - len(s.shift))
        grading[b] = tuple(x + y for x, y in zip(g, pad))
    level = None if V.level is None else {b: V.level[b] + s.filt_shift for b in V.basis}
    return GradedBasisSpace(V.basis, grading, level, V.left_idem, V.right_idem)


@dataclass(frozen=True)
class Quotient:
    space: GradedBasisSpace
    project: Callable[[frozenset], frozenset]
    section: Callable[[frozenset], frozenset]


def quotient_basis(V: GradedBasisSpace, W: Iterable[Iterable]) -> Quotient:
    """V/W with representatives chosen among the basis labels of V."""
    masks = []
    for w in W:
        w = frozenset(w)
        bad = [b for b in w if b not in V]
        if bad:
            raise ValueError(f"spanning vector has labels outside V: {bad}")
        masks.append(V.to_mask(w))
    ech = echelonize(masks)
    pivots = {v.bit_length() - 1: v for v in ech}
    reps = tuple(b for i, b in enumerate(V.basis) if i not in pivots)
    Q = V.restrict(reps)

    def project(vec: frozenset) -> frozenset:
        m = V.to_mask(vec)
        for top in sorted(pivots, reverse=True):
            if (m >> top) & 1:
                m ^= pivots[top]
        return V.to_vec(m)

    def section(vec: frozenset) -> frozenset:
        return frozenset(vec)

    return Quotient(Q, project, section)


# ---------------------------------------------------------------- complexes


def homology_dims(basis: Sequence, d: Mapping, key: Callable | None = None) -> dict:
    """Homology dimensions of (span basis, d), split into blocks by ``key``.

    ``d`` maps each label to a frozenset of labels and must send each block
    into a single block (true for homogeneous differentials).
    """
    key = key or (lambda b: None)
    blocks: dict = {}
    for b in basis:
        blocks.setdefault(key(b), []).append(b)
    ranks: dict = {}
    incoming: dict = {k: 0 for k in blocks}
    for k, labels in blocks.items():
        target = None
        cols = []
        for b in labels:
            img = d.get(b, ZERO)
            if not img:
                continue
            if target is None:
                tk = key(next(iter(img)))
                target = (tk, {x: i for i, x in enumerate(blocks[tk])})
            idx = target[1]
            m = 0
            for x in img:
                m ^= 1 << idx[x]
            cols.append(m)
        r = rank_of(cols)
        ranks[k] = r
        if target is not None:
            incoming[target[0]] += r
    return {k: len(blocks[k]) - ranks[k] - incoming[k] for k in blocks}


def square_zero(basis: Sequence, d: Mapping) -> bool:
    for b in basis:
        acc: set = set()
        for x in d.get(b, ZERO):
            acc ^= d.get(x, ZERO)
        if acc:
            return False
    return True
