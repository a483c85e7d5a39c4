"""One test per acceptance criterion. All comparisons are exact over F_2
(tolerance 0); each test prints a single PASS/FAIL line."""

from __future__ import annotations

import itertools

from oracles import naive_homology

from bfk import hfside, khside
from bfk.ainf import (AInfAlgebra, associated_graded, bimodule_homology, check_algebra,
                      check_bimodule, check_filtered, check_morphism, compare_structures,
                      full_bar_truncated_homology, reduced_tensor, regular_bimodule,
                      spectral_sequence)
from bfk.braidcli import BraidWord, gr_compare, invariants, parse, ss_report
from bfk.complexes import build_Q, hom_complex
from bfk.quiver import PathElement, multiply, normal_forms, path_basis, reduce_walk, P
from bfk.toy import CUP, build_toy, filtered_total, toy_verify

CAP = 4
TOL = "exact, 0 mismatches allowed"


def report(name: str, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail} [{TOL}]")
    assert ok, detail


def words(m: int, max_len: int):
    letters = [s for k in range(1, m + 1) for s in (k, -k)]
    for n in range(max_len + 1):
        yield from itertools.product(letters, repeat=n)


SMALL_WORDS = [(m, w) for m in range(1, 4) for w in words(m, 3)]


def test_quiver_algebra() -> None:
    bad = []
    for m in range(6):
        B = path_basis(m)
        if len(B) != 4 * m + 1:
            bad.append(f"dim A_{m}")
        for p, q in itertools.product(B, repeat=2):
            forms = normal_forms(p.vertices + q.vertices[1:]) if p.end == q.start else {None}
            (f,) = forms
            if multiply(p, q) != (None if f is None else PathElement(f)):
                bad.append(f"product {p}{q}")
        for a, b, c in itertools.product(B, repeat=3):
            ab, bc = multiply(a, b), multiply(b, c)
            if (multiply(ab, c) if ab else None) != (multiply(a, bc) if bc else None):
                bad.append(f"assoc {a}{b}{c}")
        if m >= 1 and reduce_walk((0, 1, 0)) is not None:
            bad.append("(0|1|0)")
        for i in range(1, m):
            if reduce_walk((i - 1, i, i + 1)) or reduce_walk((i + 1, i, i - 1)):
                bad.append(f"zero relation at {i}")
            if reduce_walk((i, i + 1, i)) != P(i, i - 1, i):
                bad.append(f"loop relation at {i}")
    report("quiver algebra m<=5", not bad, f"{len(bad)} failures; dims "
           + ",".join(str(len(path_basis(m))) for m in range(6)))


def test_hom_complex_ranks() -> None:
    bad = []
    for m in range(5):
        for i in range(m + 1):
            for j in range(m + 1):
                H = hom_complex(m, build_Q(m, i), build_Q(m, j))
                want = 0 if i < j else 1 if i == j else 2
                if naive_homology(list(H.space.basis), H.d) != want:
                    bad.append((m, i, j))
    report("Hom(Q_i,Q_j) homology ranks 0/1/2, m<=4", not bad, f"{len(bad)} wrong pairs")


def test_transfer_oracle() -> None:
    bad = []
    for m in range(1, 5):
        H = khside.derived_bkh(m, CAP)
        if any(H.mult.get(n) for n in (3, 4)):
            bad.append(f"m={m}: higher products")
        bad += [f"m={m}: {n}: {b}" for n, b in khside.derived_vs_hardcoded(m, CAP) if b is not None]
    report("transfer of B, P~, beta~, gamma~ equals hardcoded tables, m<=4", not bad,
           f"{len(bad)} mismatches")


def test_ainf_relation_suite() -> None:
    bad = []
    for m in range(1, 5):
        for A in (khside.bkh(m), hfside.bhf(m)):
            if not check_algebra(A, CAP).ok:
                bad.append(A.name)
        for k in range(1, m + 1):
            objs = [khside.pk_kh(m, k), khside.kp_kh(m, k), hfside.pk_hf(m, k), hfside.kp_hf(m, k),
                    khside.cone_kh(m, k), khside.cone_kh(m, -k), hfside.cone_hf(m, k),
                    hfside.cone_hf(m, -k)]
            bad += [M.name for M in objs if not check_bimodule(M, CAP).ok]
            for f in (khside.beta_kh(m, k), khside.gamma_kh(m, k), hfside.beta_hf(m, k),
                      hfside.gamma_hf(m, k)):
                if not check_morphism(f, CAP).ok:
                    bad.append(f.name)
    for m, w in SMALL_WORDS:
        if not w:
            continue
        for M in (khside.braid_bimodule_kh(m, w), hfside.braid_bimodule_hf(m, w)):
            if not check_bimodule(M, CAP).ok:
                bad.append(f"{M.name} m={m}")
    A = khside.bkh(3)
    key = (khside.one(2, 1), khside.one(1, 0))
    m2 = dict(A.mult[2])
    m2[key] = m2[key] ^ frozenset([khside.one(2, 0)])
    mutant = check_algebra(AInfAlgebra(A.space, {2: m2}, A.idempotents, A.weight), CAP)
    located = not mutant.ok and mutant.first().relation == "algebra" and bool(mutant.first().inputs)
    report("A-infinity relations at cap 4 (algebras, modules, cones, morphisms, words)",
           not bad and located, f"{len(bad)} failures; mutant located: {located} "
           f"({mutant.first()})")


def test_hf_homomorphism_identities() -> None:
    bad = [(m, k, r) for m in range(1, 5) for k in range(1, m + 1)
           if (r := hfside.verify_hf_homomorphism_identities(m, k)) is not None]
    report("beta^HF homomorphism identities, k<=m<=4", not bad, f"{len(bad)} counterexamples")


def test_gr_bhf_is_bkh() -> None:
    bad = []
    for m in range(6):
        A = hfside.bhf(m)
        r = check_filtered(A) or compare_structures(associated_graded(A), khside.bkh(m),
                                                    hfside.to_kh_label)
        if r is not None:
            bad.append(f"m={m}: {r}")
    report("gr(B^HF) = B^Kh under rho <-> x, m<=5", not bad, f"{len(bad)} mismatches")


def test_gr_elementary_cones() -> None:
    bad = []
    for m in range(1, 5):
        for k in range(1, m + 1):
            for f in (hfside.beta_hf(m, k), hfside.gamma_hf(m, k)):
                if check_filtered(f) is not None:
                    bad.append(f"{f.name} not filtered")
            for s in (k, -k):
                r = compare_structures(associated_graded(hfside.cone_hf(m, s)),
                                       khside.cone_kh(m, s), hfside.to_kh_label)
                if r is not None:
                    bad.append(f"m={m} letter {s}: {r}")
    report("gr(MC(beta^HF)), gr(MC(gamma^HF)) = Kh cones, k<=m<=4", not bad,
           f"{len(bad)} mismatches")


def test_gr_word_bimodules() -> None:
    cases = [(m, BraidWord(m, w)) for m, w in SMALL_WORDS]
    cases += [(2, parse(t, 2)) for t in ("1 -2 1", "1 2 1", "2 1 2")]
    bad, phis = [], 0
    for m, w in cases:
        res = gr_compare(m, w)
        phis += len(res.steps)
        if not res.ok or not all(tc.ok for _, tc in res.steps):
            bad.append(f"m={m} [{w}]: {res.detail}")
    report("gr(M^HF) = M^Kh for words of length <=3 over m<=3 and three m=2 words", not bad,
           f"{len(cases)} words, {phis} Phi bijections checked, {len(bad)} failures")


def test_quasi_isomorphism_fingerprints() -> None:
    bad = []
    a, b = invariants(2, parse("1 2 1", 2)), invariants(2, parse("2 1 2", 2))
    if a.hf != b.hf or a.gr != b.gr:
        bad.append("121 vs 212")
    for m in (1, 2):
        u, e = invariants(m, parse("1 -1", m)), invariants(m, parse("", m))
        ranks = {(i, j): (1 if i == j else 2) for i in range(m + 1) for j in range(i + 1)}
        if u.totals("hf") != e.totals("hf") or e.totals("hf") != ranks:
            bad.append(f"1 -1 vs empty, m={m}")
        if u.relative_shift(e) is None:
            bad.append(f"1 -1 vs empty, m={m}: graded tables differ by more than a shift")
    bars = [(1, (1,), -1), (2, (1,), -1), (2, (1, 2), 1), (2, (2, 1), 2)]
    for m, prefix, last in bars:
        M, N = hfside.braid_bimodule_hf(m, prefix), hfside.cone_hf(m, last)
        if full_bar_truncated_homology(M, N, m + 2) != bimodule_homology(reduced_tensor(M, N)):
            bad.append(f"bar check m={m} {prefix}+{last}")
    report("homology fingerprints (braid relation, free cancellation, full bar)", not bad,
           f"{len(bad)} failures")


def test_toy_model() -> None:
    T = build_toy()
    rep = toy_verify(CAP)
    table_ok = (CUP[("a*", "A*")] == "A*" and ("A*", "a*") not in CUP
                and T.delta["a*"] == frozenset(["A*", "B*"]))
    failed = [t for t, ok in rep.lines if not ok]
    report("toy model (S^1 and S^0 homology, splittings, formality, gr)", rep.ok and table_ok,
           f"{len(rep.lines) - len(failed)}/{len(rep.lines)} report lines ok")


def test_spectral_sequences() -> None:
    bad = []
    ss = spectral_sequence(filtered_total(build_toy()))
    if ss.dims(1) != 2 or ss.dims(len(ss.pages)) != 2 or ss.collapse > len(ss.pages):
        bad.append("toy")
    cases = [(m, BraidWord(m, w)) for m in (1, 2) for w in words(m, 2) if w]
    cases += [(2, parse(t, 2)) for t in ("1 -2 1", "1 2 1", "2 1 2")]
    for m, w in cases:
        rep = ss_report(m, w)
        if not (rep["E1_ok"] and rep["Einf_ok"]):
            bad.append(f"m={m} [{w}]")
    e = ss_report(1, parse("1 -1", 1))["Einf"]
    if e != bimodule_homology(regular_bimodule(hfside.bhf(1))):
        bad.append("1 -1 E-infinity")
    report("spectral sequences: toy E1 = Einf = 2; words E1 = H(gr), Einf = H", not bad,
           f"{len(cases) + 1} filtered objects, {len(bad)} failures")
