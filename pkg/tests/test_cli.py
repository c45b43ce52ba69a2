import csv
import json
import subprocess
import sys
from math import pi

import pytest

from thinshield.cli import main


def run(args, tmp_path, capsys):
    code = main(list(args) + ["--out", str(tmp_path)])
    out, err = capsys.readouterr()
    return code, out.strip(), err


def field(summary, key):
    return dict(part.split("=", 1) for part in summary.split() if "=" in part)[key]


def test_optimize_circle(tmp_path, capsys):
    code, out, _ = run(
        ["optimize", "--shape", "circle", "--radius", "1", "--beta", "1",
         "--eps", "0.1", "--mass", "6.2831853"], tmp_path, capsys)
    assert code == 0
    assert field(out, "regime") == "layer"
    assert float(field(out, "value")) == pytest.approx(pi + 0.075 * pi, rel=1e-7)
    rows = list(csv.DictReader((tmp_path / "mu.csv").open()))
    assert len(rows) == 256 and set(rows[0]) == {"x", "y", "weight", "H", "mu"}
    report = json.loads((tmp_path / "optimize.json").read_text())
    assert report["regime"] == "layer" and report["config"]["physics"]["eps"] == 0.1


def test_verify_radial(tmp_path, capsys):
    code, out, _ = run(
        ["verify-radial", "--n", "2", "--radius", "1", "--beta", "1", "--h", "1",
         "--eps", "1e-1,1e-2,1e-3"], tmp_path, capsys)
    assert code == 0 and out.startswith("PASS")
    assert float(field(out, "fitted_F1")) == pytest.approx(3 * pi / 4, rel=0.01)
    assert (tmp_path / "verify_radial.csv").exists()


def test_evaluate_bare_circle(tmp_path, capsys):
    code, out, _ = run(
        ["evaluate", "--shape", "circle", "--radius", "1", "--beta", "1", "--h-const", "0"],
        tmp_path, capsys)
    assert code == 0
    assert float(field(out, "value")) == pytest.approx(2 * pi, rel=1e-15)


def test_evaluate_from_file(tmp_path, capsys):
    run(["optimize", "--shape", "ellipse", "--a", "2", "--b", "1", "--beta", "1",
         "--eps", "0.1", "--mass", "1"], tmp_path, capsys)
    opt = json.loads((tmp_path / "optimize.json").read_text())
    code, out, _ = run(
        ["evaluate", "--shape", "ellipse", "--a", "2", "--b", "1", "--beta", "1",
         "--eps", "0.1", "--h-file", str(tmp_path / "mu.csv")], tmp_path, capsys)
    assert code == 0
    assert float(field(out, "value")) == pytest.approx(opt["value"], rel=1e-15)


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = {
        "command": "optimize",
        "shape": {"family": "ellipse", "params": {"a": 2.0, "b": 1.0}, "N": 128},
        "physics": {"beta": 1.0, "eps": 0.5, "mass": 1.0},
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    code, _, err = run(["optimize", "--config", str(path)], tmp_path, capsys)
    assert code == 2 and "regime" in err
    code, out, _ = run(["optimize", "--config", str(path), "--eps", "0.1"], tmp_path, capsys)
    assert code == 0 and field(out, "regime") == "layer"


def test_config_for_other_command_rejected(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"command": "af-check"}))
    code, _, _ = run(["optimize", "--config", str(path)], tmp_path, capsys)
    assert code == 2


def test_bad_json_exit_code(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text("{not json")
    code, _, err = run(["optimize", "--config", str(path)], tmp_path, capsys)
    assert code == 2 and err


@pytest.mark.parametrize(
    "args",
    [
        ["optimize", "--shape", "blob", "--beta", "1", "--eps", "0.1", "--mass", "1"],
        ["optimize", "--shape", "circle", "--radius", "1", "--beta", "1", "--eps", "0.1"],
        ["optimize", "--shape", "circle", "--radius", "-1", "--beta", "1", "--eps", "0.1",
         "--mass", "1"],
        ["optimize", "--shape", "circle", "--radius", "1", "--beta", "1", "--eps", "0.1,0.2",
         "--mass", "1"],
        ["evaluate", "--shape", "circle", "--radius", "1"],
    ],
)
def test_invalid_input_exit_code(args, tmp_path, capsys):
    assert run(args, tmp_path, capsys)[0] == 2


def test_threads_env_validated(tmp_path, capsys, monkeypatch):
    args = ["af-check", "--shape", "sphere", "--radius", "1"]
    monkeypatch.setenv("THINSHIELD_THREADS", "4")
    assert run(args, tmp_path, capsys)[0] == 0
    monkeypatch.setenv("THINSHIELD_THREADS", "-1")
    assert run(args, tmp_path, capsys)[0] == 2
    monkeypatch.setenv("THINSHIELD_THREADS", "many")
    assert run(args, tmp_path, capsys)[0] == 2


def test_experiment_outputs_are_hashed(tmp_path, capsys):
    code, out, _ = run(["cookie-sweep", "--beta", "1", "--eps", "1e-4", "--mass", "1"],
                       tmp_path, capsys)
    assert code == 0 and out.startswith("PASS")
    names = sorted(p.name for p in tmp_path.iterdir())
    assert any(n.startswith("cookie_sweep-") and n.endswith(".csv") for n in names)
    assert any(n.startswith("cookie_sweep-") and n.endswith(".json") for n in names)


@pytest.mark.parametrize(
    "args,prefix",
    [
        (["ball-compare", "--shape", "ellipse", "--a", "2", "--b", "1", "--beta", "1",
          "--eps", "0.01", "--mass", "1"], "satisfied=True"),
        (["af-check", "--shape", "spheroid", "--a", "1", "--c", "2"], "satisfied=True"),
        (["concentration", "--shape", "ellipse", "--a", "2", "--b", "1", "--beta", "1",
          "--eps", "0.05", "--mass", "1"], "PASS"),
        (["verify-fiber", "--shape", "ellipse", "--a", "2", "--b", "1", "--beta", "1",
          "--h-const", "0.5"], "PASS"),
    ],
)
def test_other_commands(args, prefix, tmp_path, capsys):
    code, out, _ = run(args, tmp_path, capsys)
    assert code == 0 and out.startswith(prefix)


def test_ball_compare_outside_theory(tmp_path, capsys):
    code, _, err = run(["ball-compare", "--shape", "ellipse", "--a", "2", "--b", "1",
                        "--beta", "1", "--eps", "0.5", "--mass", "1"], tmp_path, capsys)
    assert code == 2 and "regime" in err


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "thinshield", "evaluate", "--shape", "circle", "--radius", "1",
         "--beta", "1", "--h-const", "0", "--out", str(tmp_path)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("value=6.28318530717958")


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["no-such-command"])
    assert info.value.code == 2
