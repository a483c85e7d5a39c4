from __future__ import annotations

import pytest

from bfk import hfside, khside
from bfk.ainf import (associated_graded, check_algebra, check_bimodule, check_degrees,
                      check_filtered, check_morphism, compare_structures)
from bfk.hfside import (beta_hf, bhf, cone_hf, gamma_hf, kp_hf, one, pk_hf, raw_beta, raw_mult,
                        rho, sigma, to_kh_label, verify_hf_homomorphism_identities)

KM = [(m, k) for m in range(1, 5) for k in range(1, m + 1)]


def pair(a: str, b: str) -> tuple:
    return ("pair", a, b)


def test_raw_products() -> None:
    m2 = raw_mult(3)[2]
    assert m2[(rho(3, 2), rho(2, 0))] == frozenset([rho(3, 0)])
    assert m2[(sigma(3, 1), sigma(1, 0))] == frozenset([sigma(3, 0)])
    assert (rho(2, 1), sigma(1, 0)) not in m2


def test_adapted_products() -> None:
    A = bhf(2)
    assert A.op(2, (rho(2, 1), rho(1, 0))) == frozenset([rho(2, 0)])
    assert A.op(2, (one(2, 1), one(1, 0))) == frozenset([one(2, 0)])
    # (rho + sigma)(rho) = rho
    assert A.op(2, (one(2, 1), rho(1, 0))) == frozenset([rho(2, 0)])


@pytest.mark.parametrize("m", range(6))
def test_bhf_is_filtered_algebra_with_kh_gr(m) -> None:
    A = bhf(m)
    assert check_algebra(A).ok
    assert check_filtered(A) is None
    assert compare_structures(associated_graded(A), khside.bkh(m), to_kh_label) is None


def test_maslov_degrees() -> None:
    A = bhf(2)
    assert {A.space.deg(b) for b in A.space.basis} == {(0,)}
    P, Q = pk_hf(2, 1), kp_hf(2, 1)
    assert P.space.deg("u*")[0] + Q.space.deg("u")[0] == 1
    assert P.space.deg("v*")[0] + Q.space.deg("v")[0] == 1


def test_module_tables_and_levels() -> None:
    k = 2
    P, Q = pk_hf(3, k), kp_hf(3, k)
    assert Q.op(0, 1, ("u", rho(k, k - 1))) == frozenset(["v"])
    # u . sigma = v, and sigma = 1 + rho in the adapted basis
    assert Q.op(0, 1, ("u", one(k, k - 1))) == frozenset()
    assert P.op(1, 0, (one(k, k), "u*")) == frozenset(["u*"])
    assert (P.space.lev("v*"), P.space.lev("u*")) == (0, 1)
    assert (Q.space.lev("u"), Q.space.lev("v")) == (0, 1)
    for M in (P, Q):
        assert set(M.acts) <= {(1, 0), (0, 1)}
        assert check_bimodule(M).ok and check_filtered(M) is None


def test_beta_examples() -> None:
    m, k = 3, 2
    raw = raw_beta(m, k)
    assert raw[(1, 0)][(sigma(k, k - 1), pair("v*", "u"))] == frozenset([one(k, k)])
    assert (rho(k, k - 1), pair("v*", "u")) not in raw[(1, 0)]
    for j in range(k):
        assert raw[(0, 1)][(pair("u*", "u"), rho(k, j))] == frozenset([rho(k, j)])


def test_gamma_examples() -> None:
    m, k = 3, 2
    g = hfside.raw_gamma(m, k)[(0, 0)]
    assert g[(rho(k, k - 1),)] == g[(sigma(k, k - 1),)] == frozenset([pair("u*", "v")])


@pytest.mark.parametrize("m,k", KM)
def test_homomorphism_identities(m, k) -> None:
    assert verify_hf_homomorphism_identities(m, k) is None


def test_removed_beta_entry_is_reported() -> None:
    m, k = 2, 1
    beta = raw_beta(m, k)
    left = dict(beta[(1, 0)])
    del left[(sigma(k, k - 1), pair("v*", "u"))]
    res = verify_hf_homomorphism_identities(m, k, {(1, 0): left, (0, 1): beta[(0, 1)]})
    assert res is not None
    no, (a1, a2, x) = res
    assert no in (1, 2, 3) and x[0] == "pair"


def test_zero_beta_satisfies_identities() -> None:
    assert verify_hf_homomorphism_identities(1, 1, {}) is None


@pytest.mark.parametrize("m,k", KM)
def test_morphisms_filtered_and_graded(m, k) -> None:
    for f in (beta_hf(m, k), gamma_hf(m, k)):
        assert check_morphism(f).ok
        assert check_filtered(f) is None
        assert check_degrees(f) == []
    assert gamma_hf(m, k).is_strict()


@pytest.mark.parametrize("m,k", KM)
def test_gr_cones_are_kh_cones(m, k) -> None:
    for s in (k, -k):
        C = cone_hf(m, s)
        assert check_bimodule(C).ok and check_filtered(C) is None
        assert compare_structures(associated_graded(C), khside.cone_kh(m, s), to_kh_label) is None


def test_words_empty_and_single() -> None:
    assert hfside.braid_bimodule_hf(2, ()).space.basis == bhf(2).space.basis
    assert hfside.braid_bimodule_hf(2, (-2,)) is cone_hf(2, -2)
    with pytest.raises(ValueError):
        hfside.braid_bimodule_hf(2, (0,))


def test_label_translation() -> None:
    assert to_kh_label(rho(2, 1)) == khside.x(2, 1)
    assert to_kh_label(("cone", 0, ("bar", "u", (rho(1, 0),), one(0, 0)))) == \
        ("cone", 0, ("bar", "u", (khside.x(1, 0),), one(0, 0)))
