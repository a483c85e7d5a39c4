from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import naive_rank

from bfk.f2graded import (F2Matrix, GradedBasisSpace, GradingShift, apply_shift, echelonize,
                          homology_dims, quotient_basis, rank_kernel_image, rank_of, square_zero)


matrices = st.integers(1, 7).flatmap(
    lambda r: st.integers(1, 7).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


@given(matrices)
def test_rank_matches_naive_elimination(entries) -> None:
    assert F2Matrix.from_lists(entries).rank() == naive_rank(entries)


@given(matrices)
def test_rank_nullity(entries) -> None:
    M = F2Matrix.from_lists(entries)
    rki = rank_kernel_image(M)
    assert rki.rank + len(rki.kernel) == M.cols
    assert rki.rank <= min(M.rows, M.cols)
    for k in rki.kernel:
        assert M.apply(k) == 0
    for v in rki.image:
        assert M.apply(rki.preimage[v]) == v


@given(matrices, st.integers(0, 127))
def test_solve_returns_a_preimage(entries, x) -> None:
    M = F2Matrix.from_lists(entries)
    x &= (1 << M.cols) - 1
    rki = rank_kernel_image(M)
    w = rki.solve(M.apply(x))
    assert w is not None and M.apply(w) == M.apply(x)


@given(matrices, matrices)
def test_rank_of_product_bounded(a, b) -> None:
    A = F2Matrix.from_lists(a)
    B = F2Matrix.from_lists([row[:] for row in b])
    if A.cols != B.rows:
        B = F2Matrix.identity(A.cols)
    assert (A @ B).rank() <= min(A.rank(), B.rank())


@given(st.lists(st.integers(0, 255), max_size=10))
def test_echelonize_preserves_span(vs) -> None:
    ech = echelonize(vs)
    assert rank_of(ech) == len(ech) == rank_of(vs)
    assert len({v.bit_length() for v in ech}) == len(ech)


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.integers(-4, 4))
def test_shift_inverse(s, f) -> None:
    V = GradedBasisSpace(("a", "b"), {"a": (0, 0, 0), "b": (1, 2, 3)}, {"a": 0, "b": 1})
    g = GradingShift(tuple(s), f)
    W = apply_shift(apply_shift(V, g), -g)
    assert [W.deg(b) for b in W.basis] == [V.deg(b) for b in V.basis]
    assert [W.lev(b) for b in W.basis] == [V.lev(b) for b in V.basis]


def test_duplicate_labels_rejected() -> None:
    with pytest.raises(ValueError):
        GradedBasisSpace(("a", "a"), {"a": ()})


def test_quotient_projection_kills_subspace() -> None:
    V = GradedBasisSpace(("a", "b", "c"), {x: () for x in "abc"})
    Q = quotient_basis(V, [{"a", "b"}])
    assert len(Q.space) == 2
    assert Q.project(frozenset({"a", "b"})) == frozenset()
    assert Q.project(frozenset({"a"})) == Q.project(frozenset({"b"}))


def test_homology_of_interval() -> None:
    # cellular chains of [0, 1]: d(e) = v0 + v1
    d = {"e": frozenset({"v0", "v1"})}
    assert square_zero(["v0", "v1", "e"], d)
    dims = homology_dims(["v0", "v1", "e"], d, lambda b: len(b) == 1)
    assert dims == {False: 1, True: 0}


@given(st.integers(1, 6))
def test_homology_of_acyclic_chain(n) -> None:
    # x_0 -> x_1 -> ... with d(x_i) = x_{i+1} on even i only: acyclic for even length
    basis = [f"x{i}" for i in range(2 * n)]
    d = {f"x{2 * i}": frozenset({f"x{2 * i + 1}"}) for i in range(n)}
    assert homology_dims(basis, d) == {None: 0}
