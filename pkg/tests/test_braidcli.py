from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bfk.braidcli import BraidWord, WordError, gr_compare, invariants, main, parse, ss_report


def test_parse_examples() -> None:
    assert parse("1 −2 1", 2).letters == (1, -2, 1)
    assert parse("", 3).letters == ()
    with pytest.raises(WordError):
        parse("3", 2)
    with pytest.raises(WordError):
        parse("0", 2)
    with pytest.raises(WordError):
        parse("1 x", 2)


def test_words_are_not_reduced() -> None:
    assert len(parse("1 -1", 1)) == 2


@given(st.integers(1, 5).flatmap(lambda m: st.tuples(
    st.just(m), st.lists(st.integers(1, m).flatmap(lambda k: st.sampled_from([k, -k])),
                         max_size=8))))
def test_parse_print_round_trip(case) -> None:
    m, letters = case
    w = BraidWord(m, tuple(letters))
    assert parse(str(w), m) == w


@pytest.mark.parametrize("m,word", [(1, ""), (2, "1 -2"), (2, "-1"), (3, "3 -2")])
def test_gr_compare_passes(m, word) -> None:
    res = gr_compare(m, parse(word, m))
    assert res.ok, res.detail
    assert all(tc.ok for _, tc in res.steps)


def test_invariants_identity_word() -> None:
    inv = invariants(2, parse("", 2))
    assert inv.totals("hf") == {(i, j): (1 if i == j else 2) for i in range(3) for j in range(i + 1)}
    assert inv.totals("gr") == inv.totals("hf")


def test_relative_shift() -> None:
    a, b = invariants(1, parse("1 -1", 1)), invariants(1, parse("", 1))
    assert a.totals("hf") == b.totals("hf")
    assert a.relative_shift(b) == 1
    c, d = invariants(2, parse("1 2 1", 2)), invariants(2, parse("2 1 2", 2))
    assert c.relative_shift(d) == 0
    assert invariants(1, parse("1", 1)).relative_shift(b) is None


def test_ss_report_consistency() -> None:
    rep = ss_report(1, parse("1 -1", 1))
    assert rep["E1_ok"] and rep["Einf_ok"]
    assert rep["Einf"] == {(0, 0): 1, (1, 0): 2, (1, 1): 1}


def run(capsys, argv) -> tuple[int, str]:
    code = main(argv)
    return code, capsys.readouterr().out


def test_cli_toy(capsys) -> None:
    code, out = run(capsys, ["toy"])
    assert code == 0 and out.rstrip().endswith("OK")


def test_cli_transfer(capsys) -> None:
    code, out = run(capsys, ["transfer", "--m", "2"])
    assert code == 0 and "derived == hardcoded: true" in out


def test_cli_gr_compare(capsys) -> None:
    code, _ = run(capsys, ["gr-compare", "--m", "2", "--word", "1 2 1"])
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["algebra", "--side", "hf", "--m", "2"],
    ["algebra", "--side", "homB", "--m", "2"],
    ["bimodule", "--m", "2", "--word", "1 -2", "--check"],
    ["invariants", "--m", "2", "--word", "1 2 1"],
    ["ss", "--m", "1", "--word", "1 -1"],
])
def test_cli_deterministic(capsys, argv) -> None:
    code1, out1 = run(capsys, argv)
    code2, out2 = run(capsys, argv)
    assert code1 == code2 == 0
    assert out1 == out2


def test_cli_json(capsys, tmp_path) -> None:
    path = tmp_path / "out.json"
    code, _ = run(capsys, ["bimodule", "--m", "1", "--word", "1", "--json", str(path)])
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["word"] == "1" and doc["structure"]["basis"]


def test_cli_figures(capsys, tmp_path) -> None:
    code, out = run(capsys, ["ss", "--m", "1", "--word", "1", "--figures", str(tmp_path)])
    assert code == 0 and list(tmp_path.glob("page_E*.png"))


def test_cli_usage_errors(capsys) -> None:
    assert main(["gr-compare", "--m", "2", "--word", "3"]) == 2
    assert main(["invariants", "--m", "7", "--word", ""]) == 2
    with pytest.raises(SystemExit) as e:
        main(["toy", "--bogus"])
    assert e.value.code == 2


def test_cli_mismatch_exit_code(capsys, monkeypatch) -> None:
    from bfk import braidcli
    monkeypatch.setattr(braidcli, "gr_compare",
                        lambda m, w: braidcli.GrComparison(False, "planted mismatch"))
    code, out = run(capsys, ["gr-compare", "--m", "1", "--word", "1"])
    assert code == 1 and "planted mismatch" in out
