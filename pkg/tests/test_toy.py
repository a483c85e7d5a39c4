from __future__ import annotations

from bfk.ainf import associated_graded, check_algebra, check_filtered, spectral_sequence
from bfk.toy import (CUP, build_toy, circle_splitting, coboundary, filtered_total,
                     leibniz_failures, points_splitting, tau_differential, toy_verify)


def test_cup_table() -> None:
    assert CUP[("a*", "A*")] == "A*"
    assert ("A*", "a*") not in CUP
    assert CUP[("A*", "b*")] == "A*"


def test_differentials() -> None:
    assert coboundary()["a*"] == frozenset(["A*", "B*"])
    assert coboundary()["b*"] == frozenset(["A*", "B*"])
    assert tau_differential()["A*"] == frozenset(["A*", "B*"])
    assert "a*" not in tau_differential()


def test_leibniz() -> None:
    T = build_toy()
    assert leibniz_failures(T, T.delta) == []
    assert leibniz_failures(T, T.dtau) == []
    assert leibniz_failures(T, T.total()) == []
    broken = {"a*": frozenset(["A*"])}
    assert leibniz_failures(T, broken)


def test_prescribed_splittings() -> None:
    T = build_toy()
    S = circle_splitting(T)
    assert S.iota["x"] == frozenset(["A*"]) and S.htpy["B*"] == frozenset(["b*"])
    assert points_splitting(T).violations() == []


def test_filtered_total() -> None:
    F = filtered_total(build_toy())
    assert check_algebra(F).ok and check_filtered(F) is None
    G = associated_graded(F)
    assert not G.mult.get(1, {}).get(("A*",))


def test_spectral_sequence() -> None:
    ss = spectral_sequence(filtered_total(build_toy()))
    assert ss.dims(0) == 4
    assert ss.dims(1) == 2 and ss.dims(len(ss.pages)) == 2
    assert ss.d_rank(1) == 0


def test_report() -> None:
    rep = toy_verify()
    assert rep.ok
    text = rep.render()
    assert text.endswith("OK") and "FAIL" not in text
