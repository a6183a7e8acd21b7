import json
import subprocess
import sys

import numpy as np
import pytest

from ellcomm import cli
from ellcomm.elliptic import Torus
from ellcomm.errors import ConfigInvalid, SchemaMismatch
from ellcomm.operators import BandedOperator


def write_config(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run_main(tmp_path, doc, out="out", extra=()):
    cfg = write_config(tmp_path, doc)
    outdir = tmp_path / out
    code = cli.main(["run", "--config", cfg, "--out", str(outdir), *extra])
    report = json.loads((outdir / "report.json").read_text()) if (outdir / "report.json").exists() else None
    return code, report, outdir


def test_elliptic_check_passes(tmp_path):
    code, rep, _ = run_main(tmp_path, {"experiment": "elliptic-check", "params": {"n_points": 30}})
    assert code == 0
    assert rep["passed"] is True
    assert len(rep["criteria"]) >= 8
    assert set(rep) == {"experiment", "passed", "criteria", "metrics", "series", "versions", "config"}
    assert rep["config"]["experiment"] == "elliptic-check"
    assert "numpy" in rep["versions"]


def test_rank1_demo_passes(tmp_path):
    code, rep, _ = run_main(tmp_path, {"experiment": "rank1-demo", "params": {"window": [-4, 4]}})
    assert code == 0
    assert rep["criteria"]["commutator_norm"]["passed"]


def test_failed_criterion_exits_2(tmp_path):
    doc = {"experiment": "rank1-demo", "params": {"window": [-4, 4]}, "tolerances": {"commutator_norm": 1e-40}}
    code, rep, _ = run_main(tmp_path, doc)
    assert code == 2
    assert rep["passed"] is False
    assert rep["criteria"]["commutator_norm"]["passed"] is False


def test_unknown_keys_rejected():
    with pytest.raises(ConfigInvalid, match=r"config\.params\.k"):
        cli.RunConfig.from_dict({"experiment": "rank1-demo", "params": {"k": 1}})
    with pytest.raises(ConfigInvalid, match=r"config\.extra"):
        cli.RunConfig.from_dict({"experiment": "rank1-demo", "extra": 1})
    with pytest.raises(ConfigInvalid, match="tolerances"):
        cli.RunConfig.from_dict({"experiment": "rank1-demo", "tolerances": {"nope": 1.0}})
    with pytest.raises(ConfigInvalid, match="positive"):
        cli.RunConfig.from_dict({"experiment": "rank1-demo", "tolerances": {"commutator_norm": -1}})
    with pytest.raises(ConfigInvalid, match="experiment"):
        cli.RunConfig.from_dict({"experiment": "nothing"})
    with pytest.raises(ConfigInvalid, match="omega_prime"):
        cli.RunConfig.from_dict({"experiment": "rank1-demo", "torus": {"omega": [1, 0], "omega_prime": [0, -1]}})


def test_config_error_exit_code(tmp_path, capsys):
    code, rep, _ = run_main(tmp_path, {"experiment": "rank1-demo", "params": {"bogus": 2}})
    assert code == 1 and rep is None
    assert "ConfigInvalid" in capsys.readouterr().err


def test_equal_slopes_exit_1(tmp_path, capsys):
    doc = {"experiment": "tyurin-run",
           "params": {"mode": "general", "window": [0, 12], "a0": [[0.5, 0.1], [0.5, 0.1]], "c_const": [0.1, 0.0]}}
    code, _, _ = run_main(tmp_path, doc)
    assert code == 1
    assert "DegenerateState" in capsys.readouterr().err


def test_tyurin_general_mode(tmp_path):
    doc = {"experiment": "tyurin-run",
           "params": {"mode": "general", "window": [0, 20], "a0": [[0.8, 0.2], [-0.5, 0.1]], "c_const": [0.13, 0.07]}}
    code, rep, out = run_main(tmp_path, doc)
    assert code == 0
    assert rep["metrics"]["partner_residual"] < 1e-8
    assert (out / "tyurin.csv").exists()


def test_tyurin_symmetric_reports_control(tmp_path):
    code, rep, out = run_main(tmp_path, {"experiment": "tyurin-run", "params": {"window": [0, 20]}})
    assert rep["criteria"]["partner_residual"]["passed"]
    assert rep["criteria"]["control_min"]["relation"] == ">"
    assert rep["metrics"]["control_ratio"] > 1e4
    lines = (out / "tyurin.csv").read_text().splitlines()
    assert lines[0].split(",") == __import__("ellcomm.tyurin", fromlist=["x"]).CSV_HEADER


def test_partner_solve_from_document(tmp_path):
    L = BandedOperator.from_bands(0, 20, {1: 1.0, -1: 1.0})
    code, rep, _ = run_main(tmp_path, {"experiment": "partner-solve", "params": {"operator": L.to_json()}})
    assert code == 0
    assert rep["metrics"]["has_partner"] is True
    A = BandedOperator.from_json(rep["metrics"]["partner"])
    assert (A.lower, A.upper) == (3, 3)
    opfile = tmp_path / "op.json"
    opfile.write_text(json.dumps(L.to_json()))
    code, rep2, _ = run_main(tmp_path, {"experiment": "partner-solve", "params": {"operator": str(opfile)}}, out="o2")
    assert code == 0 and rep2["metrics"]["partner_residual"] == rep["metrics"]["partner_residual"]


def test_partner_solve_needs_operator(tmp_path):
    code, _, _ = run_main(tmp_path, {"experiment": "partner-solve"})
    assert code == 1


def test_elltoda_run_short(tmp_path):
    doc = {"experiment": "elltoda-run", "torus": {"omega": [1, 0], "omega_prime": [0, 1.3]},
           "params": {"T": 0.5, "calibration_states": 5}}
    code, rep, out = run_main(tmp_path, doc)
    assert code == 0
    assert abs(rep["metrics"]["calibration_constant"][0] - 1) < 1e-6
    rows = (out / "trajectory.csv").read_text().splitlines()
    assert rows[0] == "t,site,re_x,im_x,re_p,im_p,re_H,im_H"
    assert len(rows) == 1 + 51 * 4


def test_deterministic_csv(tmp_path):
    doc = {"experiment": "elltoda-run", "torus": {"omega": [1, 0], "omega_prime": [0, 1.3]},
           "params": {"T": 0.3, "calibration_states": 3}, "seed": 5}
    _, _, a = run_main(tmp_path, doc, out="a")
    _, _, b = run_main(tmp_path, doc, out="b")
    assert (a / "trajectory.csv").read_bytes() == (b / "trajectory.csv").read_bytes()


def test_seed_override(tmp_path):
    doc = {"experiment": "rank1-demo", "params": {"window": [-4, 4]}}
    _, rep, _ = run_main(tmp_path, doc, out="s7", extra=("--seed", "7"))
    assert rep["config"]["seed"] == 7


def test_diff_identical_and_seed(tmp_path):
    doc = {"experiment": "rank1-demo", "params": {"window": [-4, 4]}}
    _, _, a = run_main(tmp_path, doc, out="a")
    _, _, b = run_main(tmp_path, doc, out="b")
    _, _, c = run_main(tmp_path, doc, out="c", extra=("--seed", "3"))
    same = cli.report_diff(a / "report.json", b / "report.json")
    assert same["identical"]
    other = cli.report_diff(a / "report.json", c / "report.json")
    assert not other["identical"]
    assert other["numeric"] and not other["flags"]
    assert any(e["path"] == "config.seed" for e in other["config"])


def test_diff_schema_mismatch(tmp_path, capsys):
    _, _, a = run_main(tmp_path, {"experiment": "rank1-demo", "params": {"window": [-4, 4]}}, out="a")
    _, _, b = run_main(tmp_path, {"experiment": "elliptic-check", "params": {"n_points": 10}}, out="b")
    with pytest.raises(SchemaMismatch):
        cli.report_diff(a / "report.json", b / "report.json")
    assert cli.main(["diff", str(a / "report.json"), str(b / "report.json")]) == 1
    assert cli.main(["diff", str(a / "report.json"), str(a / "report.json")]) == 0
    assert '"identical": true' in capsys.readouterr().out


def test_eval_output_format(capsys):
    assert cli.main(["eval", "wp", "--omega", "1", "0", "--omega-prime", "0", "1", "--z", "0.7", "0.3"]) == 0
    re_, im_ = capsys.readouterr().out.split()
    ref = Torus(1, 1j).wp(0.7 + 0.3j)
    assert float(re_) == ref.real and float(im_) == ref.imag


def test_eval_via_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "ellcomm", "eval", "sigma", "--z", "0.7", "0.3"],
                         capture_output=True, text=True, check=True).stdout
    re_, im_ = map(float, out.split())
    assert abs(complex(re_, im_) - (0.7055938414344368 + 0.2886974235116691j)) < 1e-13


def test_to_jsonable():
    doc = cli.to_jsonable({"a": 1 + 2j, "b": float("nan"), "c": np.arange(2), "d": np.bool_(True)})
    assert doc == {"a": [1.0, 2.0], "b": None, "c": [0, 1], "d": True}
