import json
import math
import subprocess
import sys
from fractions import Fraction

import pytest

from plap import cli
from plap.cli import CSV_HEADER, EXIT_CAP, EXIT_INPUT, EXIT_NUMERIC, fmt_float, main, to_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def k2_file(tmp_path):
    path = tmp_path / "k2.txt"
    path.write_text("# single edge\n2\n1 2\n")
    return path


# --------------------------------------------------------------------------
# spectrum


def test_spectrum_g6_p1(capsys):
    code, out, _ = run(capsys, "spectrum", "--catalog", "g6", "--p", "1", "--json")
    assert code == 0
    doc = json.loads(out)
    assert [v["value"] for v in doc["values"]] == ["0/1", "2/5", "5/9", "3/5", "2/3", "5/7", "3/4", "7/9", "1/1"]
    assert all(v["label"] == "certified eigenvalues (vertex search)" for v in doc["values"])


def test_spectrum_p6_p1(capsys):
    code, out, _ = run(capsys, "spectrum", "--catalog", "p6", "--p", "1", "--json")
    values = [Fraction(v["value"]) for v in json.loads(out)["values"]]
    assert values == [Fraction(0), Fraction(1, 5), Fraction(1, 3), Fraction(1, 2), Fraction(1)]


def test_spectrum_g6_p2(capsys):
    code, out, _ = run(capsys, "spectrum", "--catalog", "g6", "--p", "2", "--json")
    r6, r10 = math.sqrt(6), math.sqrt(10)
    expected = sorted([0, (6 - r6) / 6, (20 - r10) / 15, 4 / 3, (6 + r6) / 6, (20 + r10) / 15])
    got = [v["value"] for v in json.loads(out)["values"]]
    assert got == pytest.approx(expected, abs=1e-9)


def test_spectrum_other_p_is_labelled_approximate(capsys, k2_file):
    code, out, _ = run(capsys, "spectrum", "--edges", str(k2_file), "--p", "3", "--json")
    vals = json.loads(out)["values"]
    assert all(v["label"] == "approximate (continuation from p = 2)" for v in vals)
    assert vals[-1]["value"] == pytest.approx(4)


def test_spectrum_table_output(capsys):
    code, out, _ = run(capsys, "spectrum", "--catalog", "p6")
    assert code == 0 and "1/5" in out and "certified" in out


def test_out_file_matches_stdout(capsys, tmp_path):
    dest = tmp_path / "s.json"
    code, out, _ = run(capsys, "spectrum", "--catalog", "g6", "--p", "2", "--json", "--out", str(dest))
    assert dest.read_text() == out


# --------------------------------------------------------------------------
# serialization


def test_float_format_round_trips():
    for x in (0.1, 1 / 3, 2 ** 0.5, 1e-300, 123456789.123):
        assert float(fmt_float(x)) == x
    assert fmt_float(0.59175170953613709) == "0.59175170953613709"


def test_json_fractions_and_floats():
    text = to_json({"a": Fraction(5, 9), "b": [1.0, 2], "c": None, "d": "x"})
    doc = json.loads(text)
    assert doc == {"a": "5/9", "b": [1.0, 2], "c": None, "d": "x"}


# --------------------------------------------------------------------------
# sweep


def test_sweep_k2_branch(capsys, k2_file, tmp_path):
    dest = tmp_path / "k2.csv"
    code, _, _ = run(capsys, "sweep", "--edges", str(k2_file), "--seeds", "2", "--pmin", "1.2", "--pmax", "3",
                     "--steps", "20", "--out", str(dest))
    lines = dest.read_text().splitlines()
    assert code == 0 and lines[0] == CSV_HEADER
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 42
    for branch, p, lam, res in rows:
        assert branch == "p2-k2"
        assert float(lam) == pytest.approx(2 ** (float(p) - 1), rel=1e-10)


def test_sweep_empty_seed_list(capsys):
    code, out, _ = run(capsys, "sweep", "--catalog", "g6", "--seeds", "")
    assert code == 0 and out == CSV_HEADER + "\n"


def test_sweep_g6_endpoints(capsys):
    code, out, _ = run(capsys, "sweep", "--catalog", "g6", "--pmax", "2")
    rows = [line.split(",") for line in out.splitlines()[1:]]
    ends = {}
    for branch, p, lam, _ in rows:
        if lam != "nan" and float(p) == pytest.approx(1.01):
            ends[branch] = float(lam)
    assert sorted(ends) == [f"p2-k{k}" for k in range(1, 7)]
    assert ends["p2-k2"] == pytest.approx(0.4, abs=0.05)
    assert ends["p2-k3"] == pytest.approx(5 / 7, abs=0.05)


def test_sweep_lost_branch_warns_then_strict_fails(capsys):
    args = ["sweep", "--catalog", "g6", "--seeds", "", "--delta1-seed", "2,5,6", "--pmin", "1.01", "--pmax", "2",
            "--steps", "100"]
    code, out, err = run(capsys, *args)
    assert code == 0
    assert "warning" in err and "delta1-2-5-6" in err
    assert out.splitlines()[-1].endswith(",nan,lost")
    assert float(out.splitlines()[1].split(",")[2]) == pytest.approx(5 / 9, abs=0.01)
    code, _, _ = run(capsys, *args, "--strict")
    assert code == EXIT_NUMERIC


def test_sweep_is_byte_identical(capsys, tmp_path):
    outs = []
    for i in range(2):
        dest = tmp_path / f"run{i}.csv"
        run(capsys, "sweep", "--catalog", "g6", "--k", "2", "--k", "3", "--steps", "30", "--out", str(dest))
        outs.append(dest.read_bytes())
    assert outs[0] == outs[1]


# --------------------------------------------------------------------------
# homological and cheeger


def test_homological_g6(capsys):
    code, out, _ = run(capsys, "homological", "--catalog", "g6", "--link", "2,5,6", "--json")
    doc = json.loads(out)
    assert "5/9" in doc["homological"]
    assert doc["link"]["status"] == "applicable-true" and doc["link"]["components"] == 2
    assert doc["thresholds"]["5/9"]["homological"] is True


def test_cheeger_g6(capsys):
    code, out, _ = run(capsys, "cheeger", "--catalog", "g6", "--k", "3", "--json")
    doc = json.loads(out)
    assert list(doc["k"]) == ["3"]
    assert doc["k"]["3"]["h_k"] == "5/7"


def test_cheeger_table(capsys):
    code, out, _ = run(capsys, "cheeger", "--catalog", "p6", "--p", "2", "--k", "2")
    assert code == 0 and "not checkable" in out and "FAILS" not in out


# --------------------------------------------------------------------------
# errors and exit codes


@pytest.mark.parametrize("argv", [
    ["spectrum"],
    ["spectrum", "--catalog", "nope"],
    ["spectrum", "--catalog", "g6", "--edges", "x.txt"],
    ["spectrum", "--catalog", "g6", "--p", "0.5"],
    ["sweep", "--catalog", "g6", "--pmin", "0.9"],
    ["sweep", "--catalog", "g6", "--seeds", "9"],
    ["homological", "--catalog", "g6", "--link", "8"],
    ["cheeger", "--catalog", "g6", "--k", "9"],
    ["verify", "bogus"],
    ["verify", "exact", "--seed", "zz"],
    ["frobnicate"],
])
def test_input_errors_exit_2(capsys, argv):
    assert main(argv) == EXIT_INPUT


def test_bad_edge_file_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("3\n1 4\n")
    assert main(["spectrum", "--edges", str(bad)]) == EXIT_INPUT
    assert main(["spectrum", "--edges", str(tmp_path / "missing.txt")]) == EXIT_INPUT


def test_cap_exits_3(capsys, tmp_path):
    edges = tmp_path / "p8.txt"
    edges.write_text("8\n" + "".join(f"{i} {i + 1}\n" for i in range(1, 8)))
    assert main(["homological", "--edges", str(edges)]) == EXIT_CAP


def test_no_partial_file_on_failure(capsys, tmp_path):
    dest = tmp_path / "out.csv"
    code = main(["sweep", "--catalog", "g6", "--seeds", "", "--delta1-seed", "2,5,6", "--steps", "100", "--strict",
                 "--out", str(dest)])
    assert code == EXIT_NUMERIC
    assert not dest.exists()
    assert list(tmp_path.iterdir()) == []


def test_atomic_write_replaces(tmp_path):
    dest = tmp_path / "f.txt"
    dest.write_text("old")
    cli.write_atomic(dest, "new\n")
    assert dest.read_text() == "new\n" and len(list(tmp_path.iterdir())) == 1


def test_verify_exact_passes(capsys):
    code, out, _ = run(capsys, "verify", "exact")
    assert code == 0
    assert out.splitlines()[-1] == "6/6 criteria passed"
    assert all(line.startswith("PASS") for line in out.splitlines()[:-1])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "plap", "spectrum", "--catalog", "p6", "--p", "1", "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["n"] == 6
