import json
import subprocess
import sys

import pytest

from polytope_rigidity.cli import format_text, parse_text, run


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def as_json(capsys, *argv):
    code, out, _ = invoke(capsys, *argv, "--json")
    assert code == 0
    return json.loads(out)


def test_belts_as3_k4(capsys):
    rep = as_json(capsys, "belts", "as3", "--k", "4")
    assert rep["4"]["count"] == 3
    assert rep["4"]["trivial"] == 3 and rep["4"]["nontrivial"] == 0
    # face indices are reported 1-based
    assert min(min(b["faces"]) for b in rep["4"]["belts"]) >= 1


def test_betti_table(capsys):
    code, out, _ = invoke(capsys, "betti", "as3", "--table")
    assert code == 0
    row = [line for line in out.splitlines() if line.startswith("H^k(Z_P)|")][0]
    cells = [c.strip() for c in row.split("|")[1:]]
    assert cells == ["Z", "0", "0", "Z^15", "Z^35", "Z^24", "Z^6", "Z^24", "Z^35", "Z^15",
                     "0", "0", "Z"]


def test_enumerate_ideal_count_only(capsys):
    code, out, err = invoke(capsys, "enumerate", "--family", "iapog", "--max-faces", "20",
                            "--count-only", "--json")
    assert code == 0
    assert json.loads(out)["census"] == {"14": 1, "16": 0, "18": 1, "20": 1}
    # progress lines go to stderr and never pollute stdout
    assert "closure" in err


@pytest.mark.parametrize("argv", [
    ("build", "as3"), ("classify", "pe3"), ("belts", "p8"), ("betti", "cube"),
    ("ring", "as3"), ("fingerprint", "p8"), ("compare", "p8", "m6xi"),
    ("enumerate", "--family", "apog", "--max-faces", "10"),
    ("verify", "cube"), ("verify", "--family", "flag", "--max-faces", "8"),
])
def test_text_and_json_carry_same_data(capsys, argv):
    code, text, _ = invoke(capsys, *argv)
    assert code == 0
    data = as_json(capsys, *argv)
    assert parse_text(text) == data


def test_format_text_round_trip():
    report = {"a": 1, "b": {"c": [1, 2], "d": None, "e": {}}, "f": "x: y"}
    assert parse_text(format_text(report)) == report


def test_exit_codes(capsys, tmp_path):
    code, _, err = invoke(capsys, "build", "no-such-polytope")
    assert code == 2 and "UnknownName" in err
    code, _, err = invoke(capsys, "betti", "c60")
    assert code == 3 and "BoundTooLarge" in err
    code, _, err = invoke(capsys, "ring", "prism:15")
    assert code == 3
    code, _, _ = invoke(capsys, "belts")
    assert code == 2
    code, _, _ = invoke(capsys, "enumerate", "--family", "flag", "--max-faces", "30")
    assert code == 3
    code, _, err = invoke(capsys, "verify")
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = invoke(capsys, "build", str(bad))
    assert code == 2
    noncubic = tmp_path / "noncubic.json"
    noncubic.write_text(json.dumps({"m": 4, "faces": [[1, 2], [0, 2, 3], [0, 1, 3], [1, 2]]}))
    code, _, err = invoke(capsys, "build", str(noncubic))
    assert code == 2 and "NonCubic" in err


def test_json_file_input(capsys, tmp_path):
    data = as_json(capsys, "build", "as3")
    path = tmp_path / "as3.json"
    path.write_text(json.dumps({"m": data["m"], "faces": data["faces"]}))
    assert as_json(capsys, "build", str(path))["code"] == data["code"]


def test_output_independent_of_threads(capsys):
    one = invoke(capsys, "enumerate", "--family", "flag", "--max-faces", "9", "--threads", "1")
    two = invoke(capsys, "enumerate", "--family", "flag", "--max-faces", "9", "--threads", "3")
    assert one[0] == two[0] == 0
    assert one[1] == two[1]


def test_repeated_runs_identical(capsys):
    first = invoke(capsys, "fingerprint", "as3", "--json")[1]
    second = invoke(capsys, "fingerprint", "as3", "--json")[1]
    assert first == second


def test_verify_sampled_with_seed(capsys):
    rep = as_json(capsys, "verify", "p8", "--seed", "11")
    assert rep["mode"] == "sampled" and rep["ok"]


def test_ring_export_and_rational(capsys):
    rep = as_json(capsys, "ring", "as3", "--coeff", "q", "--export")
    assert rep["annihilator_codims"] == {"5": 3, "9": 6, "21": 6}
    assert len(rep["basis"]) == rep["dimension"] == 156
    assert rep["criteria"]["almost_pogorelov"] is True


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "polytope_rigidity", "classify", "as3", "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["family"] == "almost-pogorelov"
