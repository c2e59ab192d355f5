import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from orbitcone.cli import main
from orbitcone.doubleext import oscillator, spec_to_json, standard_oscillator

DATA = Path(__file__).parent / "data"


def run(tmp_path, *argv, name="out"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out.read_bytes() if out.exists() else b""


def write_spec(tmp_path, dext, name):
    p = tmp_path / name
    p.write_text(json.dumps(spec_to_json(dext.spec)))
    return str(p)


def test_same_seed_is_byte_identical(tmp_path):
    a = run(tmp_path, "schurhorn", "--n", "3", "--trials", "50", "--seed", "7", name="a")
    b = run(tmp_path, "schurhorn", "--n", "3", "--trials", "50", "--seed", "7", name="b")
    assert a == b and a[0] == 0


def test_different_seed_differs(tmp_path):
    _, a = run(tmp_path, "schurhorn", "--n", "3", "--trials", "5", "--seed", "1", name="a")
    _, b = run(tmp_path, "schurhorn", "--n", "3", "--trials", "5", "--seed", "2", name="b")
    assert a != b


def test_jobs_do_not_change_report(tmp_path):
    _, a = run(tmp_path, "maj-equiv", "--pairs", "40", "--jobs", "1", name="a")
    _, b = run(tmp_path, "maj-equiv", "--pairs", "40", "--jobs", "2", name="b")
    assert a == b


def test_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("ORBITCONE_SEED", "11")
    _, a = run(tmp_path, "schurhorn", "--n", "3", "--trials", "3", name="a")
    monkeypatch.delenv("ORBITCONE_SEED")
    _, b = run(tmp_path, "schurhorn", "--n", "3", "--trials", "3", "--seed", "11", name="b")
    assert a == b and json.loads(a)["config"]["seed"] == 11


def test_config_file_overridden_by_flags(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": [4], "trials": 6, "seed": 3}))
    _, out = run(tmp_path, "schurhorn", "--config", str(cfg), "--trials", "2")
    doc = json.loads(out)
    assert doc["config"]["n"] == [4] and doc["config"]["trials"] == 2 and doc["config"]["seed"] == 3
    assert doc["summary"]["checks"] == 2


def test_schurhorn_csv_golden(tmp_path):
    code, out = run(tmp_path, "maj", "schurhorn", "--n", "3", "--trials", "1000", "--seed", "0",
                    "--format", "csv")
    assert code == 0
    got = list(csv.reader(out.decode().splitlines()))
    want = list(csv.reader((DATA / "schurhorn_n3_seed0.csv").read_text().splitlines()))
    assert got[0] == want[0] == ["trial", "max_slack", "inside"]
    assert len(got) == len(want) == 1001
    for g, w in zip(got[1:], want[1:]):
        assert g[0] == w[0] and g[2] == w[2] == "true"
        assert abs(float(g[1]) - float(w[1])) < 1e-12


def test_header_only_csv(tmp_path):
    code, out = run(tmp_path, "schurhorn", "--n", "3", "--trials", "0", "--format", "csv")
    assert code == 0 and out.decode().splitlines() == ["trial,max_slack,inside"]


def test_exit_zero_on_correct_verdicts(tmp_path):
    code, out = run(tmp_path, "cox-hull", "--system", "A2", "--v", "0,1,2", "--u", "1,1,1")
    assert code == 0 and json.loads(out)["notes"]["member"] is True
    code, out = run(tmp_path, "maj", "hull", "--x", "0,1,2", "--y", "1/2,3/2,1.0", name="b")
    assert code == 0 and json.loads(out)["notes"]["member"] is True


def test_exit_one_on_failed_pec(tmp_path):
    good = write_spec(tmp_path, standard_oscillator(), "good.json")
    bad = write_spec(tmp_path, oscillator(2, [[0, 1], [-1, 0]], [[0, -1], [1, 0]]), "bad.json")
    assert run(tmp_path, "pec", "--spec", good, name="g")[0] == 0
    code, out = run(tmp_path, "pec", "--spec", bad, name="b")
    assert code == 1 and json.loads(out)["summary"]["failed"] == 1


def test_exit_two_on_schema_errors(tmp_path, capsys):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert main(["pec", "--spec", str(broken)]) == 2
    assert main(["pec", "--spec", str(tmp_path / "missing.json")]) == 2
    assert main(["maj", "hull", "--x", "0,1", "--y", "1,2,3"]) == 2
    assert main(["pec"]) == 2
    err = capsys.readouterr().err
    assert "Traceback" not in err


def test_rational_parsing(tmp_path):
    _, out = run(tmp_path, "maj", "sk", "--x", "1/3,0.5,-2", "--k", "2")
    doc = json.loads(out)
    assert doc["notes"]["s_k"] == "5/6"


def test_wall_time_only_with_timing(tmp_path):
    _, plain = run(tmp_path, "maxnorm", name="a")
    _, timed = run(tmp_path, "maxnorm", "--timing", name="b")
    assert "wall_time" not in json.loads(plain)
    assert "wall_time" in json.loads(timed)


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "orbitcone", "maj", "sk", "--x", "3,1,2", "--k", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["notes"]["s_k"] == "3"


@pytest.mark.parametrize("argv", [["roots", "build", "un", "2"], ["roots", "build", "upq", "1", "1"]])
def test_roots_build(tmp_path, argv):
    code, out = run(tmp_path, *argv)
    doc = json.loads(out)
    assert code == 0 and doc
