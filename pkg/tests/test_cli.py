import json
import subprocess
import sys

import pytest

from cylink.cli import main
from cylink.pipeline import EXIT_FATAL, EXIT_OK, EXIT_PARTIAL, load_records, write_weights_file


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_basis(capsys):
    code, out, _ = run(capsys, "basis", "22,29,49,50,75")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "# 7 monomials of degree 225" and len(lines) == 8
    code, out, _ = run(capsys, "basis", "1,1,1,1,2", "--json")
    assert len(json.loads(out)["monomials"]) == 130


def test_hodge_and_cn_on_known_systems(capsys, tmp_path):
    code, out, _ = run(capsys, "hodge", "22,29,49,50,75")
    assert code == EXIT_OK and json.loads(out) == {"weights": [22, 29, 49, 50, 75],
                                                   "h30": 1, "h21": 2, "b3": 6}
    code, out, _ = run(capsys, "cn", "1,1,1,1,1", "--seed", 3)
    got = json.loads(out)
    assert (got["nu"], got["mu"], got["mu_zero"]) == (5, 1024, 204)
    # a polynomial given as JSON file
    sample = tmp_path / "s.json"
    assert run(capsys, "sample", "31,35,36,42,108", "--out", sample)[0] == EXIT_OK
    # the sampled member doubles as polynomial input
    code, out, _ = run(capsys, "cn", "31,35,36,42,108", "--poly", sample)
    got = json.loads(out)
    assert (got["nu"], got["raw"], got["mu"]) == (35, -13, 1768)


def test_groebner(capsys):
    code, out, _ = run(capsys, "groebner", "1,1,1,1,2", "--field", "gf:101")
    row = json.loads(out)
    assert row["p"] == 101 and row["standard_monomial_count"] == 1250 and row["status"] == "ok"


def test_bad_inputs(capsys):
    with pytest.raises(SystemExit) as e:
        main(["basis", "1,1,1"])
    assert e.value.code == 2
    capsys.readouterr()
    code, _, err = run(capsys, "hodge", "0,1,1,1,1")
    assert code == EXIT_FATAL and err.startswith("cylink:")
    code, _, err = run(capsys, "ingest", "/no/such/file.csv")
    assert code == EXIT_FATAL


def test_timeout_exit_code(capsys):
    code, _, err = run(capsys, "groebner", "22,29,49,50,75", "--budget", "1e-9")
    assert code == EXIT_PARTIAL and "cylink:" in err


def test_batch_ingest_conjecture_predict(capsys, tmp_path, data_dir):
    wf = tmp_path / "w.csv"
    write_weights_file(wf, [(1, 1, 1, 1, 1), (1, 1, 1, 1, 2), (1, 1, 1, 8, 19, 28)[1:]])
    code, out, _ = run(capsys, "batch", wf, tmp_path / "run", "--seed", 1)
    summary = json.loads(out)
    assert code == EXIT_OK and summary["computed"] == 2
    assert summary["skipped_hard"] == [[1, 1, 8, 19, 28]]
    assert len(load_records(tmp_path / "run" / "invariants.csv")) == 2

    cy = data_dir / "cy_h21_reconstructed.csv"
    code, out, _ = run(capsys, "ingest", cy)
    assert json.loads(out)["rows"] == 7555

    code, out, _ = run(capsys, "conjecture", tmp_path / "run" / "invariants.csv", cy)
    rep = json.loads(out)
    assert code == EXIT_OK and rep["n"] == 2 and rep["violations"] == 0

    code, out, _ = run(capsys, "predict", "--cy", cy, "--out", tmp_path / "pred.json")
    assert code == EXIT_OK and "BOUND VIOLATED" not in out
    rows = json.loads((tmp_path / "pred.json").read_text())
    assert [r["h21_sr"] for r in rows] == [338, 377, 447, 476, 243, 272]


def test_train_symreg_plots(capsys, tmp_path, data_dir):
    recs = data_dir / "records_600.csv"
    code, out, _ = run(capsys, "train", recs, "--folds", 2, "--epochs", 5,
                       "--model", tmp_path / "m.json")
    assert code == EXIT_OK and out.startswith("h21:")
    code, out, _ = run(capsys, "predict", "1,1,1,1,1", "--h21-model", tmp_path / "m.json")
    assert code == EXIT_OK and "(1, 1, 1, 1, 1)" in out
    code, out, _ = run(capsys, "symreg", recs, "--population", 50, "--generations", 2,
                       "--top", 3, "--out", tmp_path / "sr.json")
    assert code == EXIT_OK and len(out.splitlines()) == 3
    code, out, _ = run(capsys, "plots", recs, tmp_path / "plots")
    assert code == EXIT_OK and (tmp_path / "plots" / "nu_hist.svg").exists()


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "cylink", "basis", "1,1,1,1,1"],
                       capture_output=True, text=True, check=True)
    assert r.stdout.startswith("# 126 monomials")
