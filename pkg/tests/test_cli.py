import csv
import json

import pytest

from fracblow.cli import main, worker_count
from fracblow.errors import ValidationError

from references import CONFIGS, load_config


def run(tmp_path, mode, cfg, name="out"):
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(cfg))
    out = tmp_path / name
    return main([mode, "--config", str(path), "--out", str(out)]), out


def strip_stamp(path):
    data = json.loads(path.read_text())
    data.pop("generated_at")
    return data


def test_criterion_fujita(tmp_path, capsys):
    code = main(["criterion", "--config", str(CONFIGS / "criterion_fujita.json"), "--out", str(tmp_path)])
    assert code == 0
    rep = json.loads((tmp_path / "criterion_report.json").read_text())
    assert rep["verdict"] == "blow_up" and rep["method"] == "exact_power_law"
    for key in ("verdict", "method", "theta", "condition8_lhs", "condition8_rhs", "bounds", "f_samples", "F_samples"):
        assert key in rep
    assert rep["config"] == load_config("criterion_fujita.json")
    assert "blow_up" in capsys.readouterr().out


def test_bounds_in_json(tmp_path):
    cfg = {"system": {"dim": 1, "alpha": [2, 2], "beta": [2, 3]}, "criterion": {"bounds": True}}
    code, out = run(tmp_path, "criterion", cfg)
    assert code == 0
    bounds = json.loads((out / "criterion_report.json").read_text())["bounds"]
    assert bounds == pytest.approx({"C_U": 1.6, "C_A": 1.0, "C_V": 1.4}, rel=1e-15)


def test_missing_beta(tmp_path, capsys):
    code, _ = run(tmp_path, "criterion", {"system": {"dim": 1, "alpha": [2, 2]}})
    assert code == 2
    assert "beta" in capsys.readouterr().err


def test_mode_mismatch(tmp_path):
    code, _ = run(tmp_path, "ode", load_config("criterion_fujita.json"))
    assert code == 2


def test_missing_file(tmp_path):
    assert main(["criterion", "--config", str(tmp_path / "nope.json")]) == 2


def test_simulate_demo(tmp_path, capsys):
    code = main(["simulate", "--config", str(CONFIGS / "blowup_demo.json"), "--out", str(tmp_path)])
    assert code == 0
    assert capsys.readouterr().out.startswith("blew_up t_e≈")
    rec = json.loads((tmp_path / "run_record.json").read_text())
    assert rec["verdict"] == "blew_up" and rec["trigger"] == "dt_underflow"
    assert rec["config"]["input"] == load_config("blowup_demo.json")
    with open(tmp_path / "run_series.csv") as fh:
        assert next(csv.reader(fh)) == ["t", "sup1", "sup2", "moment1", "moment2", "dt"]


def test_simulate_linear(tmp_path, capsys):
    code = main(["simulate", "--config", str(CONFIGS / "linear_decay.json"), "--out", str(tmp_path)])
    assert code == 0
    assert capsys.readouterr().out.strip() == "bounded_on_horizon"


def test_simulate_three_dimensions(tmp_path):
    cfg = load_config("blowup_demo.json")
    cfg["system"]["dim"] = 3
    code, _ = run(tmp_path, "simulate", cfg)
    assert code == 2


def test_ode(tmp_path):
    code = main(["ode", "--config", str(CONFIGS / "ode_symmetric.json"), "--out", str(tmp_path)])
    assert code == 0
    rep = json.loads((tmp_path / "ode_report.json").read_text())
    assert rep["t_blowup_numeric"] == pytest.approx(3.0, rel=5e-3)
    assert rep["t_blowup_envelope"] == pytest.approx(5.0, rel=1e-12)


def test_kernel(tmp_path):
    code = main(["kernel", "--config", str(CONFIGS / "kernel_stable.json"), "--out", str(tmp_path), "--seed", "7"])
    assert code == 0
    rep = json.loads((tmp_path / "kernel_report.json").read_text())
    assert rep["densities"][0] == {"t": 0.5, "x": 0.0, "density": pytest.approx(0.287352751452164437 * 0.5 ** (-1 / 1.5), rel=1e-9)}
    assert rep["properties"]["c_lower"] > 0


def test_determinism(tmp_path):
    outs = []
    for name in ("a", "b"):
        code = main(["simulate", "--config", str(CONFIGS / "blowup_demo.json"), "--out", str(tmp_path / name)])
        assert code == 0
        outs.append(tmp_path / name)
    assert strip_stamp(outs[0] / "run_record.json") == strip_stamp(outs[1] / "run_record.json")
    assert (outs[0] / "run_series.csv").read_bytes() == (outs[1] / "run_series.csv").read_bytes()


def test_sweep_matches_C_V(tmp_path):
    code = main(["sweep", "--config", str(CONFIGS / "sweep_symmetric.json"), "--out", str(tmp_path)])
    assert code == 0
    with open(tmp_path / "sweep.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 20 * 20 * 4
    assert all((r["verdict"] == "blow_up") == (r["d_le_C_V"] == "True") for r in rows)


def test_sweep_empty_range(tmp_path):
    cfg = {"sweep": {"beta1": [], "beta2": [2.0]}}
    code, _ = run(tmp_path, "sweep", cfg)
    assert code == 2


def test_sweep_with_simulation(tmp_path, monkeypatch):
    monkeypatch.setenv("FRACBLOW_THREADS", "2")
    demo = load_config("blowup_demo.json")
    cfg = {"sweep": {"beta1": [2.0], "beta2": [2.0, 3.0], "dim": [1], "simulate": True}, "solver": demo["solver"]}
    code, out = run(tmp_path, "sweep", cfg)
    assert code == 0
    with open(out / "sweep.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 2
    assert sorted(p.name for p in out.glob("run_*.json")) == ["run_0000.json", "run_0001.json"]
    assert all(r["verdict"] == "blow_up" and r["simulation"] == "blew_up" and r["agreement"] == "yes" for r in rows)


def test_worker_count(monkeypatch):
    monkeypatch.setenv("FRACBLOW_THREADS", "3")
    assert worker_count(10) == 3 and worker_count(2) == 2
    monkeypatch.setenv("FRACBLOW_THREADS", "many")
    with pytest.raises(ValidationError):
        worker_count(4)
