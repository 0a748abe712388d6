import csv
import hashlib
import io
import json
import subprocess
import sys

import pytest

from muubqkd import __version__
from muubqkd.cli import cli_main


def run(capsys, *argv):
    code = cli_main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_muub_check(capsys):
    code, out, _ = run(capsys, "muub-check")
    data = json.loads(out)
    assert code == 0
    assert data["pairs"] == 4 and data["constant"] == 2.0
    assert data["max_deviation"] < 1e-12
    assert data["identity_overlap"] == pytest.approx(4.0)


def test_ie_curve_csv(capsys):
    code, out, _ = run(capsys, "ie-curve", "--steps", "11")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["q", "i_e"] and len(rows) == 12
    assert rows[1] == ["0", "0"]
    assert float(rows[-1][0]) == 0.25
    assert float(rows[-1][1]) == pytest.approx(0.6009, abs=1e-3)
    # nine significant digits
    assert rows[-1][1] == "0.600876037"


def test_keyrate_grid_csv(capsys):
    code, out, _ = run(capsys, "keyrate-grid", "--protocol", "lm05", "--q-cells", "4", "--qab-cells", "5")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["q", "q_ab", "i_e", "rate"] and len(rows) == 21
    for q, q_ab, i_e, rate in rows[1:]:
        assert 0 < float(q) < 0.25 and 0 < float(q_ab) < 0.5


def test_threshold_area(capsys):
    code, out, _ = run(capsys, "threshold-area", "--resolution", "400")
    data = json.loads(out)
    assert code == 0
    assert data["protocol"] == "muub2" and data["resolution"] == 400
    assert data["area"] == pytest.approx(0.037, abs=0.002)


def test_qab_bound(capsys):
    code, out, _ = run(capsys, "qab-bound")
    assert code == 0
    assert json.loads(out)["bound"] == pytest.approx(0.0794, abs=1e-3)


def test_gram_eigs(capsys):
    code, out, _ = run(capsys, "gram-eigs", "--Q", "0.25", "--cos-y", "1")
    data = json.loads(out)
    assert code == 0
    assert data["i_e"] == pytest.approx(0.6008760366928562, abs=1e-12)
    assert data["entropy"] - 1 == pytest.approx(data["i_e"], abs=1e-9)
    assert data["closed_vs_numeric_delta"] < 1e-12
    assert data["lambda_plus"] + data["lambda_minus"] == pytest.approx(0.5)


def test_simulate_noiseless(capsys):
    code, out, _ = run(capsys, "simulate", "--pulses", "20000", "--seed", "3")
    data = json.loads(out)
    assert code == 0
    assert data["stats"]["q_ab_hat"] == 0.0 and data["stats"]["q_hat"] == 0.0
    assert data["classification"]["region"] == "distillable"
    assert data["params"]["seed"] == 3


def test_simulate_symmetric_attack_shorthand(capsys):
    code, out, _ = run(capsys, "simulate", "--pulses", "4000", "--attack", "0.25,,1")
    data = json.loads(out)
    assert code == 0
    assert data["params"]["attack"]["cos_x"] == pytest.approx(1 - 0.25 * 2 / 0.75)


def test_compare(capsys):
    code, out, _ = run(capsys, "compare", "--resolution", "400", "--grid-cells", "50")
    data = json.loads(out)
    assert code == 0
    assert data["muub2_area"] > data["lm05_area"]
    assert data["dominance"]["holds"] is True


@pytest.mark.parametrize("argv", [[], ["nope"], ["ie-curve", "--steps", "x"], ["simulate", "--protocol", "bb84"]])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["gram-eigs", "--Q", "0.6"],
        ["threshold-area", "--resolution", "10"],
        ["simulate", "--noise-fwd", "rot:x"],
        ["simulate", "--control-prob", "2"],
        ["simulate", "--attack", "0.1,0.2"],
        ["ie-curve", "--config", "/nonexistent/file"],
    ],
)
def test_domain_errors_exit_1(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert out == "" and "error" in err


def test_out_and_manifest(tmp_path, capsys):
    out, manifest = tmp_path / "o.json", tmp_path / "m.json"
    code, stdout, _ = run(capsys, "simulate", "--pulses", "1000", "--seed", "5", "--out", str(out), "--manifest", str(manifest))
    assert code == 0 and stdout == ""
    m = json.loads(manifest.read_text())
    assert m["subcommand"] == "simulate" and m["seed"] == 5 and m["version"] == __version__
    assert m["sha256"] == hashlib.sha256(out.read_bytes()).hexdigest()
    assert m["params"]["pulses"] == 1000


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# session\npulses = 1500\nseed = 9\ncm-random-basis = true\n")
    _, out, _ = run(capsys, "simulate", "--config", str(cfg), "--seed", "2")
    params = json.loads(out)["params"]
    assert params["pulses"] == 1500 and params["seed"] == 2 and params["cm_random_basis"] is True


def test_config_rejects_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run(capsys, "ie-curve", "--config", str(cfg))[0] == 1


def test_simulate_is_byte_identical(tmp_path, capsys):
    argv = ["simulate", "--pulses", "20000", "--attack", "0.1,0.6,0.9", "--noise-bwd", "depol:0.05", "--seed", "42"]
    outputs = []
    for k in range(2):
        log = tmp_path / f"log{k}.csv"
        outputs.append((run(capsys, *argv, "--log", str(log))[1], log.read_bytes()))
    assert outputs[0] == outputs[1]
    header = outputs[0][1].decode().split("\n", 1)[0]
    assert header == "round,mode,theta,prep_bit,encoding,meas_choice,outcome,verdict,correct"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "muubqkd", "qab-bound"], capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["bound"] == pytest.approx(0.0791350033, abs=1e-9)
