import json
import subprocess
import sys
from pathlib import Path

import pytest

from qcrit import fixtures
from qcrit.cli import main
from qcrit.rcode import dual, load_code

ROOT = Path(__file__).resolve().parent.parent
FIX = ROOT / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_charpoly_of_fixture_file(capsys):
    code, out, _ = run(capsys, "charpoly", FIX / "ex4_3.rmc")
    assert code == 0 and out == "z^6 - 4*z^4 - 25*z^3 + 44*z^2 + 40*z - 56\n"


def test_charpoly_methods_agree_and_evaluate(capsys):
    _, direct, _ = run(capsys, "charpoly", "ex4_3", "--eval", "1", "2", "4")
    _, recursive, _ = run(capsys, "charpoly", "ex4_3", "--method", "recursive", "--eval", "1", "2", "4")
    assert direct == recursive
    assert direct.splitlines()[1:] == ["P(1) = 0", "P(2) = 0", "P(4) = 2280"]


def test_charpoly_minors(capsys):
    _, out, _ = run(capsys, "charpoly", FIX / "ex3_7.wlat", "--restrict", "100;010")
    assert out.strip() == "z^5 - z^3 - 2*z^2 + 2"
    _, out, _ = run(capsys, "charpoly", "ex3_7", "--contract", "001")
    assert out.strip() == "z^2 - 2*z + 1"


def test_charpoly_json(capsys):
    code, out, _ = run(capsys, "charpoly", "ex5_8", "--json")
    data = json.loads(out)
    assert code == 0 and set(data) == {"polynomial", "coefficients", "values"}
    assert data["coefficients"][-1] == 1


def test_crit_fixture_file(capsys):
    assert run(capsys, "crit", FIX / "table1_row1.rmc")[1] == "3\n"


def test_crit_witness_lines(capsys):
    code, out, _ = run(capsys, "crit", "ex4_3", "--method", "oracle", "--witness")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "2"
    assert [ln.split(":")[0] for ln in lines[1:]] == ["support 1", "support 2"]
    _, out, _ = run(capsys, "crit", "simplex_2_2_2", "--method", "hyperplanes", "--witness")
    assert out.splitlines()[0] == "2" and out.count("hyperplane ") == 2


def test_crit_of_degenerate_code(capsys, tmp_path):
    p = tmp_path / "deg.rmc"
    p.write_text("kind: matrix\nq: 2\nn: 2\nm: 1\nk: 1\ngenerator:\n1\n0\n")
    assert run(capsys, "crit", p)[1] == "infinity\n"
    assert run(capsys, "crit", p, "--method", "oracle")[1] == "infinity\n"


def test_crit_json_keys(capsys):
    _, out, _ = run(capsys, "crit", "ex5_9", "--json")
    assert json.loads(out) == {"crit": "2", "method": "formula"}


def test_weights_table(capsys):
    code, out, _ = run(capsys, "weights", "ex5_8")
    assert code == 0
    assert out.splitlines() == ["i W_i A_i check", "0 1 1 ok", "1 0 0 ok", "2 15 15 ok", "3 0 0 ok"]


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "gabidulin_2_3_3_2")
    assert code == 0 and "is_MRD: true" in out.splitlines()


def test_dual_round_trip(capsys, tmp_path):
    once, twice = tmp_path / "d1.rmc", tmp_path / "d2.rmc"
    assert run(capsys, "dual", FIX / "ex5_8.rmc", "-o", once)[0] == 0
    assert run(capsys, "dual", once, "-o", twice)[0] == 0
    original = load_code(FIX / "ex5_8.rmc")
    assert load_code(once).same_code(dual(original))
    assert load_code(twice).canonical() == original.canonical()


def test_puncture(capsys):
    code, out, _ = run(capsys, "puncture", "ex4_3", "--rows", "5")
    assert code == 0 and "n: 4" in out.splitlines()
    assert run(capsys, "puncture", "ex4_3", "--rows", "0")[0] == 1
    assert run(capsys, "puncture", "ex4_3", "--rows", "1", "--matrix", "10000;10000;00100;00010;00001")[0] == 1


def test_count(capsys):
    code, out, _ = run(capsys, "count", "ex4_3", "--t", "2")
    assert code == 0 and out.splitlines() == ["formula 2280", "brute 2280"]
    code, out, _ = run(capsys, "count", "ex4_3", "--t", "1", "--support", "-")
    assert out.splitlines() == ["formula 1", "brute 1"]
    code, out, _ = run(capsys, "count", "table1_row4", "--t", "2")
    assert code == 0 and out.splitlines()[1].startswith("brute skipped")


def test_count_support_file(capsys, tmp_path):
    p = tmp_path / "plane.txt"
    p.write_text("100\n010\n")
    code, out, _ = run(capsys, "count", "ex5_8", "--t", "1", "--support", p)
    assert code == 0 and out.splitlines()[0] == out.splitlines()[1].replace("brute", "formula")


@pytest.mark.parametrize(
    "argv,suite_ok",
    [
        (["verify", "--suite", "section3", str(FIX / "ex3_7.wlat")], True),
        (["verify", "--suite", "axioms", "ex4_3", "--level", "exhaustive"], True),
        (["verify", "--suite", "duality", "table1_row3"], True),
        (["verify", "--suite", "critical", "ex5_8"], True),
        # the minimal-set comparison fails here; see the counterexample test in test_crit
        (["verify", "--suite", "critical", "ex5_9"], False),
    ],
)
def test_verify_suites(capsys, argv, suite_ok):
    code, out, _ = run(capsys, *argv)
    assert code == (0 if suite_ok else 3)
    assert out.splitlines()[-1].startswith("summary:")


@pytest.mark.parametrize("name", sorted(fixtures.BUILTIN_CODES))
def test_axioms_pass_on_every_fixture(capsys, name):
    assert run(capsys, "verify", "--suite", "axioms", name)[0] == 0


def test_table_reference_results(capsys):
    code, out, _ = run(capsys, "table", "ex4_3")
    assert code == 0 and "FAIL" not in out
    code, out, _ = run(capsys, "table", "ex3_7")
    assert code == 0 and "FAIL" not in out


def test_table_appendix(capsys):
    code, out, _ = run(capsys, "table", "appendix", "--json")
    assert code == 0
    rows = json.loads(out)["tables"][0]["rows"]
    crits = [r["computed"] for r in rows if r["name"].endswith(" crit")]
    assert crits == ["3", "2", "2", "2", "3"]
    notes = [r["name"] for r in rows if not r["ok"]]
    assert notes == ["row 2 [5x5,6,3]_2 minimum distance"]


@pytest.mark.parametrize(
    "argv,code",
    [
        (["charpoly", "no_such_thing"], 1),
        (["frobnicate"], 1),
        (["crit", "ex4_3", "--method", "psychic"], 1),
        (["count", "ex4_3", "--t", "0"], 1),
        (["count", "ex4_3", "--t", "1", "--support", "1111"], 1),
        (["weights", "ex3_7"], 1),
        (["crit", "ex4_3", "--method", "hyperplanes"], 1),
        (["charpoly", "ex4_3", "--cap", "10"], 2),
        (["weights", "table1_row4", "--enum-cap", "100"], 2),
    ],
)
def test_exit_codes(capsys, argv, code):
    got, out, err = run(capsys, *argv)
    assert got == code
    assert err and not out


def test_parse_error_exit_code(capsys, tmp_path):
    p = tmp_path / "bad.rmc"
    p.write_text("kind: matrix\nq: 2\n")
    assert run(capsys, "crit", p)[0] == 1
    w = tmp_path / "bad.wlat"
    w.write_text("wlat 2 1\n0 - 0\n")
    assert run(capsys, "charpoly", w)[0] == 1


def _cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "qcrit.cli", *argv], capture_output=True, text=True, check=False
    )


def test_entry_point_and_thread_determinism():
    a = _cli("table", "all", "--threads", "1")
    b = _cli("table", "all", "--threads", "4")
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
    assert a.stdout.encode() == _cli("table", "all", "--threads", "1").stdout.encode()
