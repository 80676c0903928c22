import json
import subprocess
import sys
from pathlib import Path

import pytest

from sefcc.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main

EXAMPLE_TEXT = "01 01 00 00 00 00 01 01 11 11 10 10 10 10 11 11\n"


@pytest.fixture
def files(tmp_path):
    c1 = tmp_path / "c1.txt"
    c2 = tmp_path / "c2.txt"
    assert main(["construct", "max-sum", "--out", str(c1)]) == EXIT_OK
    assert main(["construct", "optimal-fer", "--parity", "00", "--out", str(c2)]) == EXIT_OK
    return c1, c2


def test_construct_defaults_give_reference_code(files, capsys):
    c1, c2 = files
    assert c1.read_text() == EXAMPLE_TEXT
    assert c2.read_text() == "11 " * 15 + "11\n"


def test_construct_summary(tmp_path, capsys):
    main(["construct", "max-sum", "--out", str(tmp_path / "a.txt")])
    assert "sum=73728 dmin=2" in capsys.readouterr().out


def test_construct_to_stdout(capsys):
    assert main(["construct", "max-sum", "--swap", "--odd-subset", "3,4,5,9", "--even-subset", "1,2,7,11"]) == EXIT_OK
    out = capsys.readouterr()
    assert len(out.out.split()) == 16
    assert "sum=73728 dmin=2" in out.err


@pytest.mark.parametrize("subset", ["1,2,3,4", "3,4,5", "x"])
def test_construct_rejects_bad_subset(subset, capsys):
    assert main(["construct", "max-sum", "--odd-subset", subset]) == EXIT_USAGE


def test_validate(files, tmp_path, capsys):
    c1, _ = files
    capsys.readouterr()
    assert main(["validate", str(c1)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "valid=true" in out and "dmin=2" in out and "2,960" in out

    zero = tmp_path / "zero.txt"
    zero.write_text("00 " * 16)
    assert main(["validate", str(zero)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "valid=true" in out and "dmin=1" in out

    bad = tmp_path / "bad.txt"
    # codewords 1 (0000000) and 4 (0011001) are at distance 3
    bad.write_text("00 00 00 11" + " 00" * 12)
    assert main(["validate", str(bad)]) == EXIT_FAIL
    assert "valid=false" in capsys.readouterr().out


def test_validate_parse_error(tmp_path, capsys):
    p = tmp_path / "p.txt"
    p.write_text("00 01\n10 2x\n")
    assert main(["validate", str(p)]) == EXIT_USAGE
    assert "line 2, token 2" in capsys.readouterr().err
    assert main(["validate", str(tmp_path / "missing.txt")]) == EXIT_USAGE


def test_spectrum(files, tmp_path):
    out = tmp_path / "spec.csv"
    assert main(["spectrum", str(files[0]), "--out", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "d,count" and "2,960" in lines


def test_certify_and_worker_independence(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert main(["certify", "--out", str(a)]) == EXIT_OK
    assert main(["certify", "--workers", "3", "--out", str(b)]) == EXIT_OK
    text = a.read_text()
    assert "max_sum_count=9800" in text and "min_N2_over_valid_dmin2=960" in text
    assert "all_passed=true" in text
    assert a.read_bytes() == b.read_bytes()


def test_simulate_compare_and_reproducible(files, tmp_path):
    c1, c2 = files
    args = ["simulate", "--compare", str(c1), str(c2), "--trials", "2000", "--snr-stop", "3"]
    out1, out2 = tmp_path / "x.csv", tmp_path / "y.csv"
    assert main(args + ["--out", str(out1)]) == EXIT_OK
    assert main(args + ["--out", str(out2)]) == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()
    rows = [r for r in out1.read_text().splitlines() if not r.startswith("#")]
    assert rows[0].startswith("ebn0_db,a_trials") and "b_fer" in rows[0]
    assert len(rows) == 5


def test_simulate_each_code_to_directory(files, tmp_path):
    outdir = tmp_path / "runs"
    assert main(["simulate", str(files[0]), str(files[1]), "--trials", "500", "--snr-stop", "1",
                 "--out", str(outdir)]) == EXIT_OK
    assert sorted(p.name for p in outdir.iterdir()) == ["c1.csv", "c2.csv", "manifest.json"]


def test_simulate_rejects_invalid(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("00 00 00 11" + " 00" * 12)
    assert main(["simulate", str(bad), "--trials", "10"]) == EXIT_FAIL
    assert main(["simulate", str(bad), "--trials", "10", "--snr-stop", "0", "--allow-invalid"]) == EXIT_OK


def test_simulate_usage_errors(files):
    assert main(["simulate", "--compare", str(files[0]), "--trials", "10"]) == EXIT_USAGE
    assert main(["simulate", str(files[0]), "--snr-step", "0"]) == EXIT_USAGE
    assert main(["simulate", str(files[0]), "--trials", "0"]) == EXIT_USAGE


def test_manifest_and_replay(files, tmp_path, capsys):
    out = tmp_path / "sim.csv"
    args = ["simulate", str(files[0]), "--trials", "1000", "--snr-stop", "2", "--seed", "9", "--out", str(out)]
    assert main(args) == EXIT_OK
    manifest_path = tmp_path / "sim.csv.manifest.json"
    manifest = json.loads(manifest_path.read_text())
    assert manifest["subcommand"] == "simulate" and manifest["seed"] == 9
    assert str(files[0]) in manifest["inputs"]
    assert list(manifest["outputs"]) == [str(out)]
    first = manifest_path.read_text()
    assert main(args) == EXIT_OK
    assert manifest_path.read_text() == first

    assert main(["replay", str(manifest_path)]) == EXIT_OK
    expected = out.read_bytes()
    out.write_text("stale")
    assert main(["replay", str(manifest_path)]) == EXIT_OK
    assert out.read_bytes() == expected
    files[0].write_text("00 " * 16)
    assert main(["replay", str(manifest_path)]) == EXIT_FAIL


def test_usage_errors():
    assert main([]) == EXIT_USAGE
    assert main(["certify", "--strategy", "dfs"]) == EXIT_USAGE


def test_module_entry_point(tmp_path):
    res = subprocess.run(
        [sys.executable, "-m", "sefcc", "construct", "optimal-fer", "--parity", "01"],
        capture_output=True, text=True, check=True,
    )
    assert res.stdout.split() == ["10"] * 16
