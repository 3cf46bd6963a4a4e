import json
import os
import subprocess
import sys

from dsepp.cli import main


def run_cli(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as e:
        code = e.code
    out, err = capsys.readouterr()
    return code, out, err


def test_compile_steane(tmp_path, capsys):
    code, out, err = run_cli(["compile", "--preset", "steane",
                              "--out", str(tmp_path)], capsys)
    assert code == 0
    assert "layers=4" in out and "exact=true" in out
    doc = json.loads((tmp_path / "circuit.json").read_text())
    assert list(doc) == ["n", "k", "v_s", "v_l", "u1", "u2", "h_blocks"]
    assert doc["n"] == 7
    layers = json.loads((tmp_path / "layers.json").read_text())
    assert layers["exact"] is True and len(layers["layers"]) == 4
    dot = (tmp_path / "graph.dot").read_text()
    assert dot.startswith("graph G {")


def test_compile_513_summary(tmp_path, capsys):
    code, out, _ = run_cli(["compile", "--preset", "five_one_three",
                            "--out", str(tmp_path)], capsys)
    assert code == 0
    assert "cz=9" in out and "layers=6" in out


def test_compile_empty_code_fails(tmp_path, capsys):
    bad = tmp_path / "empty.stab"
    bad.write_text("\n")
    code, out, err = run_cli(["compile", "--code", str(bad),
                              "--out", str(tmp_path)], capsys)
    assert code == 2
    doc = json.loads(err.strip())
    assert doc["code"] == 2 and "no stabilizers" in doc["error"]


def test_compile_requires_a_code(capsys):
    code, _, err = run_cli(["compile"], capsys)
    assert code == 2
    assert json.loads(err.strip())["code"] == 2


def test_simulate_noiseless(capsys):
    code, out, _ = run_cli(["simulate", "--preset", "five_one_three",
                            "--p", "0", "--q", "0"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    header = lines[0].split(",")
    row = dict(zip(header, lines[1].split(",")))
    assert float(row["fidelity_joint"]) == 1.0
    assert float(row["p_success"]) == 1.0


def test_simulate_exact_matches_library(capsys, circuits):
    from dsepp import simulate_exact, table_713

    code, out, _ = run_cli(["simulate", "--preset", "steane", "--p", "0.1",
                            "--q", "0"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    row = dict(zip(lines[0].split(","), lines[1].split(",")))
    want = simulate_exact(circuits["steane"], table_713(), 0.1)
    assert float(row["fidelity_joint"]) == want.fidelity_joint


def test_simulate_shots_required_for_noise(capsys):
    code, _, err = run_cli(["simulate", "--preset", "iceberg4",
                            "--p", "0.1", "--q", "0.001"], capsys)
    assert code == 2
    assert "--shots" in json.loads(err.strip())["error"]


def test_simulate_seed_required_for_mc(capsys):
    code, _, err = run_cli(["simulate", "--preset", "iceberg4", "--p", "0.1",
                            "--q", "0.001", "--shots", "1000"], capsys)
    assert code == 2
    assert "--seed" in json.loads(err.strip())["error"]


def test_simulate_mode_conflict(capsys):
    code, _, err = run_cli(["simulate", "--preset", "iceberg4", "--p", "0.1",
                            "--mode", "1epp"], capsys)
    assert code == 2


def test_simulate_mode_override_two_way(capsys):
    # a distance-3 code may be run two-way: postselect instead of decode
    code, out, _ = run_cli(["simulate", "--preset", "steane", "--p", "0.1",
                            "--mode", "2epp"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    row = dict(zip(lines[0].split(","), lines[1].split(",")))
    assert float(row["p_success"]) < 1.0


def test_simulate_byte_identical_reruns(tmp_path, capsys):
    argv = ["simulate", "--preset", "iceberg4", "--p", "0.05,0.1",
            "--q", "0.002", "--shots", "20000", "--seed", "11"]
    outs = []
    for threads, path in [("1", tmp_path / "a.csv"), ("3", tmp_path / "b.csv")]:
        code, _, _ = run_cli(argv + ["--threads", threads, "--out", str(path)],
                             capsys)
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_simulate_json_format(capsys):
    code, out, _ = run_cli(["simulate", "--preset", "iceberg4", "--p", "0.1",
                            "--format", "json"], capsys)
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 1 and "fidelity_joint" in rows[0]


def test_simulate_p_range(capsys):
    code, out, _ = run_cli(["simulate", "--preset", "iceberg4",
                            "--p", "0:0.2:3"], capsys)
    assert code == 0
    assert len(out.strip().split("\n")) == 4


def test_simulate_custom_code_file(tmp_path, capsys):
    stab = tmp_path / "code.stab"
    stab.write_text("XZXZ\nZXZX\n")
    code, out, _ = run_cli(["simulate", "--code", str(stab), "--p", "0.1"],
                           capsys)
    assert code == 0
    row = out.strip().split("\n")[1].split(",")
    assert float(dict(zip(out.strip().split("\n")[0].split(","), row))["p_success"]) > 0.7


def test_rates_csv(capsys):
    code, out, _ = run_cli(["rates", "--pmax", "0.4", "--points", "3"], capsys)
    assert code == 0
    lines = out.strip().split("\n")
    header = lines[0].split(",")
    for col in ("p", "D_H", "Rains", "D_R", "D_M", "D_LS_4", "D_LS_6",
                "D_Sh_best_4", "D_best_4"):
        assert col in header
    first = dict(zip(header, lines[1].split(",")))
    assert float(first["D_H"]) == 1.0
    assert len(lines) == 4


def test_rates_protocol_ls_n6(capsys):
    code, out, _ = run_cli(["rates", "--pmax", "0.3", "--points", "2",
                            "--protocol", "ls", "--n", "6"], capsys)
    assert code == 0
    assert "D_LS_6" in out.split("\n")[0]


def test_rates_svg(capsys):
    code, out, _ = run_cli(["rates", "--pmax", "0.3", "--points", "4",
                            "--format", "svg"], capsys)
    assert code == 0
    assert out.startswith("<svg")
    code, out, _ = run_cli(["rates", "--pmax", "0.3", "--points", "4",
                            "--format", "svg", "--plot", "fidelity"], capsys)
    assert code == 0
    assert "f_out_red" in out


def test_rates_cap_exceeded(capsys):
    code, _, err = run_cli(["rates", "--pmax", "0.3", "--points", "2",
                            "--n", "12"], capsys)
    assert code == 3
    assert json.loads(err.strip())["code"] == 3


def test_rates_bad_pmax(capsys):
    code, _, err = run_cli(["rates", "--pmax", "0"], capsys)
    assert code == 2


def test_console_script_installed():
    env = dict(os.environ, PYTHONPATH="")
    proc = subprocess.run([sys.executable, "-m", "dsepp.cli", "--version"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0


def test_cli_module_entrypoint(capsys, tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "dsepp.cli", "compile", "--preset", "iceberg4",
         "--out", str(tmp_path)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "layers=2" in proc.stdout
