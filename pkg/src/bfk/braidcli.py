"""Braid words, comparison drivers, invariants and the command line."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import hfside, khside
from .ainf import (DEFAULT_CAP, TensorComparison, associated_graded, bimodule_homology,
                   check_algebra, check_bimodule, check_filtered, compare_structures,
                   gr_commutes_with_tensor, regular_bimodule, spectral_sequence,
                   to_json)
from .f2graded import homology_dims
from .toy import toy_verify

M_CEILING = 5


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class BraidWord:
    m: int
    letters: tuple = ()

    def __post_init__(self) -> None:
        for s in self.letters:
            if not isinstance(s, int) or s == 0:
                raise WordError(f"bad generator {s!r}")
            if abs(s) > self.m:
                raise WordError(f"generator {s} needs m >= {abs(s)}, got m = {self.m}")

    def __str__(self) -> str:
        return " ".join(str(s) for s in self.letters)

    def __len__(self) -> int:
        return len(self.letters)


def parse(text: str, m: int) -> BraidWord:
    letters = []
    for tok in text.replace("−", "-").split():
        try:
            letters.append(int(tok))
        except ValueError:
            raise WordError(f"not an integer: {tok!r}") from None
    return BraidWord(m, tuple(letters))


def workers() -> int:
    try:
        return max(1, int(os.environ.get("BFK_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------- drivers


@dataclass
class GrComparison:
    ok: bool
    detail: str = ""
    steps: list = field(default_factory=list)


def gr_compare(m: int, w: BraidWord) -> GrComparison:
    """gr of the HF word bimodule against the Kh one, constant for constant."""
    tr = hfside.to_kh_label
    if not w.letters:
        A = hfside.bhf(m)
        bad = check_filtered(A) or compare_structures(associated_graded(A), khside.bkh(m), tr)
        if not bad:
            bad = compare_structures(associated_graded(regular_bimodule(A)),
                                     regular_bimodule(khside.bkh(m)), tr)
        return GrComparison(bad is None, str(bad or ""))
    steps: list[tuple[str, TensorComparison]] = []
    for n in range(2, len(w) + 1):
        tc = gr_commutes_with_tensor(hfside.braid_bimodule_hf(m, w.letters[:n - 1]),
                                     hfside.cone_hf(m, w.letters[n - 1]))
        steps.append((str(BraidWord(m, w.letters[:n])), tc))
        if not tc.ok:
            return GrComparison(False, f"Phi fails at prefix {steps[-1][0]}: {tc.detail}", steps)
    M = hfside.braid_bimodule_hf(m, w.letters)
    bad = check_filtered(M)
    if bad:
        return GrComparison(False, f"not filtered: {bad}", steps)
    bad = compare_structures(associated_graded(M), khside.braid_bimodule_kh(m, w.letters), tr)
    return GrComparison(bad is None, str(bad or ""), steps)


def _blocks(M) -> dict:
    out: dict = {}
    for b in M.space.basis:
        out.setdefault(M.space.idems(b), []).append(b)
    return out


@dataclass
class Invariants:
    hf: dict
    gr: dict

    def rows(self) -> list:
        out = []
        for name, table in (("HF", self.hf), ("gr", self.gr)):
            for pair in sorted(table):
                for g in sorted(table[pair]):
                    out.append((name, pair, g, table[pair][g]))
        return out

    def totals(self, which: str) -> dict:
        table = self.hf if which == "hf" else self.gr
        return {p: sum(v.values()) for p, v in table.items() if sum(v.values())}

    def relative_shift(self, other: Invariants) -> int | None:
        """The uniform Maslov shift s with self = other[s] on the HF table, or None.

        Cones carry an absolute Maslov offset per letter, so words that differ
        by a free cancellation only agree up to such a shift.
        """
        mine = sorted((p, g, v) for p, t in self.hf.items() for g, v in t.items())
        theirs = sorted((p, g, v) for p, t in other.hf.items() for g, v in t.items())
        if len(mine) != len(theirs) or not mine:
            return 0 if mine == theirs else None
        s = mine[0][1][0] - theirs[0][1][0]
        moved = sorted((p, (g[0] + s,), v) for p, g, v in theirs)
        return s if moved == mine else None


def invariants(m: int, w: BraidWord) -> Invariants:
    """Per idempotent pair and Maslov grading, dims of H(M^HF) and of H(gr M^HF)."""
    M = hfside.braid_bimodule_hf(m, w.letters)
    G = associated_graded(M)
    dM, dG = M.d(), G.d()
    deg = M.space.deg
    blocks = sorted(_blocks(M).items(), key=lambda kv: kv[0])

    def one(item):
        pair, labels = item
        return pair, homology_dims(labels, dM, deg), homology_dims(labels, dG, deg)

    with ThreadPoolExecutor(max_workers=workers()) as pool:
        results = list(pool.map(one, blocks))
    hf = {p: {g: v for g, v in a.items() if v} for p, a, _ in results}
    gr = {p: {g: v for g, v in b.items() if v} for p, _, b in results}
    return Invariants({p: v for p, v in hf.items() if v}, {p: v for p, v in gr.items() if v})


def ss_report(m: int, w: BraidWord) -> dict:
    M = hfside.braid_bimodule_hf(m, w.letters)
    ss = spectral_sequence(M)
    last = len(ss.pages) - 1
    gr_h = bimodule_homology(associated_graded(M))
    tot_h = bimodule_homology(M)
    return {"ss": ss, "E1": ss.totals(1), "Einf": ss.totals(last), "gr": gr_h, "total": tot_h,
            "E1_ok": ss.totals(1) == gr_h, "Einf_ok": ss.totals(last) == tot_h}


# ---------------------------------------------------------------- CLI


def _pair(p) -> str:
    return f"{p[0]},{p[1]}"


def _emit(args, payload: dict) -> None:
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=1, sort_keys=True, default=str)


def _check_m(args) -> None:
    if args.m < 0:
        raise WordError("m must be non-negative")
    if args.m > M_CEILING and not args.force:
        raise WordError(f"m = {args.m} exceeds {M_CEILING}; pass --force")


def cmd_algebra(args) -> bool:
    _check_m(args)
    if args.side == "kh":
        A = khside.bkh(args.m)
        checks = {"A-infinity relations": check_algebra(A, args.cap).ok}
    elif args.side == "hf":
        A = hfside.bhf(args.m)
        filt = check_filtered(A)
        checks = {"A-infinity relations": check_algebra(A, args.cap).ok, "filtered": filt is None,
                  "gr == B^Kh": filt is None and compare_structures(
                      associated_graded(A), khside.bkh(args.m), hfside.to_kh_label) is None}
    else:
        A = khside.derived_bkh(args.m, args.cap)
        checks = {"A-infinity relations": check_algebra(A, args.cap).ok,
                  "formal": all(not A.mult.get(n) for n in A.mult if n >= 3),
                  "== B^Kh": compare_structures(A, khside.bkh(args.m), gradings=True) is None}
    print(f"{A.name}: dim {len(A.space)}")
    for n in sorted(A.mult):
        print(f"  m_{n}: {len(A.mult[n])} nonzero entries")
    for name, ok in checks.items():
        print(f"  {name}: {'pass' if ok else 'FAIL'}")
    _emit(args, {"structure": to_json(A), "checks": checks})
    return all(checks.values())


def _word_bimodule(side: str, m: int, w: BraidWord):
    return (hfside.braid_bimodule_hf if side == "hf" else khside.braid_bimodule_kh)(m, w.letters)


def cmd_bimodule(args) -> bool:
    _check_m(args)
    w = parse(args.word, args.m)
    M = _word_bimodule(args.side, args.m, w)
    print(f"word [{w}] side {args.side}, m = {args.m}: dim {len(M.space)}")
    hom = bimodule_homology(M)
    print("  homology per idempotent pair:")
    for p in sorted(hom):
        print(f"    ({_pair(p)}): {hom[p]}")
    checks = {}
    if args.check:
        rep = check_bimodule(M, args.cap)
        checks["A-infinity relations"] = rep.ok
        if not rep.ok:
            print(f"  first failure: {rep.first()}")
        if args.side == "hf":
            checks["filtered"] = check_filtered(M) is None
        for k, v in checks.items():
            print(f"  {k}: {'pass' if v else 'FAIL'}")
    _emit(args, {"word": str(w), "side": args.side, "structure": to_json(M),
                 "homology": {_pair(p): v for p, v in hom.items()}, "checks": checks})
    return all(checks.values())


def cmd_gr_compare(args) -> bool:
    _check_m(args)
    w = parse(args.word, args.m)
    res = gr_compare(args.m, w)
    for prefix, tc in res.steps:
        print(f"  Phi at [{prefix}]: {'pass' if tc.ok else 'FAIL'} ({tc.phi_size} basis elements)")
    print(f"gr(M^HF) == M^Kh for [{w}], m = {args.m}: {'pass' if res.ok else 'FAIL'}")
    if not res.ok:
        print(f"  first mismatch: {res.detail}")
    _emit(args, {"word": str(w), "ok": res.ok, "detail": res.detail,
                 "steps": [{"prefix": p, "ok": tc.ok, "phi": tc.phi_size} for p, tc in res.steps]})
    return res.ok


def cmd_invariants(args) -> bool:
    _check_m(args)
    w = parse(args.word, args.m)
    inv = invariants(args.m, w)
    print(f"homology of word [{w}], m = {args.m}")
    print(f"  {'side':4} {'pair':6} {'maslov':>6} {'dim':>4}")
    for name, pair, g, v in inv.rows():
        print(f"  {name:4} {_pair(pair):6} {str(g[0] if g else '-'):>6} {v:>4}")
    _emit(args, {"word": str(w), "rows": [[n, list(p), list(g), v] for n, p, g, v in inv.rows()]})
    return True


def cmd_ss(args) -> bool:
    _check_m(args)
    w = parse(args.word, args.m)
    rep = ss_report(args.m, w)
    ss = rep["ss"]
    print(f"spectral sequence of M^HF for [{w}], m = {args.m}")
    for r in range(len(ss.pages)):
        print(f"  E{r}: dim {ss.dims(r)}")
    print(f"  collapses at E{ss.collapse}")
    print(f"  E1 == H(gr): {'pass' if rep['E1_ok'] else 'FAIL'}")
    print(f"  Einf == H(total): {'pass' if rep['Einf_ok'] else 'FAIL'}")
    if args.figures:
        from .report import render_pages
        paths = render_pages(ss, args.figures, f"[{w}]")
        print(f"  wrote {len(paths)} figures to {args.figures}")
    _emit(args, {"word": str(w), "pages": [ss.dims(r) for r in range(len(ss.pages))],
                 "collapse": ss.collapse, "E1": {_pair(p): v for p, v in rep["E1"].items()},
                 "Einf": {_pair(p): v for p, v in rep["Einf"].items()},
                 "E1_ok": rep["E1_ok"], "Einf_ok": rep["Einf_ok"]})
    return rep["E1_ok"] and rep["Einf_ok"]


def cmd_transfer(args) -> bool:
    _check_m(args)
    rows = khside.derived_vs_hardcoded(args.m, args.cap)
    for name, bad in rows:
        print(f"  {name}: {'equal' if bad is None else bad}")
    ok = all(bad is None for _, bad in rows)
    print(f"derived == hardcoded: {'true' if ok else 'false'}")
    _emit(args, {"m": args.m, "ok": ok, "rows": {n: str(b or "") for n, b in rows}})
    return ok


def cmd_toy(args) -> bool:
    rep = toy_verify(args.cap)
    print(rep.render())
    _emit(args, {"ok": rep.ok, "lines": [[t, ok] for t, ok in rep.lines]})
    return rep.ok


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write machine-readable output")
    common.add_argument("--force", action="store_true", help=f"allow m > {M_CEILING}")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="arity cap")
    p = argparse.ArgumentParser(prog="bfk", description="Kh and HF braid bimodules over F_2.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("algebra", parents=[common])
    a.add_argument("--side", choices=("kh", "hf", "homB"), required=True)
    a.add_argument("--m", type=int, required=True)
    a.set_defaults(func=cmd_algebra)

    b = sub.add_parser("bimodule", parents=[common])
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--word", default="")
    b.add_argument("--side", choices=("kh", "hf"), default="hf")
    b.add_argument("--check", action="store_true")
    b.set_defaults(func=cmd_bimodule)

    for name, func in (("gr-compare", cmd_gr_compare), ("invariants", cmd_invariants),
                       ("ss", cmd_ss)):
        c = sub.add_parser(name, parents=[common])
        c.add_argument("--m", type=int, required=True)
        c.add_argument("--word", default="")
        if name == "ss":
            c.add_argument("--figures", metavar="DIR", help="write page heatmaps as PNG")
        c.set_defaults(func=func)

    t = sub.add_parser("transfer", parents=[common])
    t.add_argument("--m", type=int, required=True)
    t.set_defaults(func=cmd_transfer)

    y = sub.add_parser("toy", parents=[common])
    y.set_defaults(func=cmd_toy)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ok = args.func(args)
    except ValueError as e:
        print(f"bfk: error: {e}", file=sys.stderr)
        return 2
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
