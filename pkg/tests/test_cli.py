"""End-to-end tests for the command line interface."""

import json

import numpy as np
import pytest

from quditphase.cli import load_config, main
from quditphase.wigner import grid_from_csv


def write_state(path, d, amps, n=1):
    payload = {"d": d, "n": n, "state": amps}
    path.write_text(json.dumps(payload))
    return str(path)


def zero_state_file(tmp_path, d=3):
    amps = [1] + [0] * (d - 1)
    return write_state(tmp_path / "zero.json", d, amps)


def plus_state_file(tmp_path):
    r = 1 / np.sqrt(2)
    return write_state(tmp_path / "plus.json", 3, [[r, 0], [r, 0], 0])


def test_wigner_writes_deterministic_csv(tmp_path, capsys):
    state = zero_state_file(tmp_path)
    assert main(["--out", str(tmp_path), "wigner", state]) == 0
    out = capsys.readouterr().out
    assert "wrote zero_wigner.csv" in out
    path = tmp_path / "zero_wigner.csv"
    first = path.read_bytes()
    with open(path) as fh:
        grid = grid_from_csv(fh)
    vals = sorted(grid.real_values())
    assert vals[:6] == [0.0] * 6
    assert np.allclose(vals[6:], 1 / 3, atol=1e-15)
    assert main(["--out", str(tmp_path), "wigner", state]) == 0
    assert path.read_bytes() == first


def test_wigner_from_grid_statistics(tmp_path, capsys):
    state = zero_state_file(tmp_path)
    main(["--out", str(tmp_path), "wigner", state])
    capsys.readouterr()
    assert main(["wigner", "--from-grid", str(tmp_path / "zero_wigner.csv")]) == 0
    line = capsys.readouterr().out.strip()
    assert line == "min=0, at=0:1, sum=1"


def test_wigner_other_formats(tmp_path, capsys):
    state = zero_state_file(tmp_path)
    for fmt, suffix in (("pgm", ".pgm"), ("svg", ".svg"), ("json", ".json")):
        assert main(["--out", str(tmp_path), "--format", fmt, "wigner", state]) == 0
        target = tmp_path / f"zero_wigner{suffix}"
        assert target.exists()
    payload = json.loads((tmp_path / "zero_wigner.json").read_text())
    assert payload["d"] == 3 and len(payload["values"]) == 9
    capsys.readouterr()


def test_wigner_requires_input(capsys):
    assert main(["wigner"]) == 2
    assert "state file" in capsys.readouterr().err


def test_wigner_accepts_density(tmp_path, capsys):
    rho = np.eye(3) / 3
    payload = {
        "d": 3,
        "density": [[[float(z.real), float(z.imag)] for z in row] for row in rho],
    }
    f = tmp_path / "mixed.json"
    f.write_text(json.dumps(payload))
    assert main(["--out", str(tmp_path), "wigner", str(f)]) == 0
    with open(tmp_path / "mixed_wigner.csv") as fh:
        grid = grid_from_csv(fh)
    assert np.allclose(grid.real_values(), 1 / 9, atol=1e-15)
    capsys.readouterr()


def test_classify_exit_codes_and_reports(tmp_path, capsys):
    zero = zero_state_file(tmp_path)
    assert main(["classify", zero]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "stabilizer"
    assert report["module"] == [[0, 0], [1, 0], [2, 0]]
    assert report["character"] == [0, 0]

    plus = plus_state_file(tmp_path)
    assert main(["classify", plus]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "negative"
    assert report["witness"] == [1, 2]

    even = write_state(tmp_path / "even.json", 4, [1, 0, 0, 0])
    assert main(["classify", even]) == 2
    assert "unsupported modulus" in capsys.readouterr().err

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["classify", str(bad)]) == 2
    capsys.readouterr()


def test_classify_normalization_flag(tmp_path, capsys):
    raw = write_state(tmp_path / "raw.json", 3, [1, 1, 0])
    assert main(["classify", raw]) == 2
    capsys.readouterr()
    assert main(["classify", "--normalize", raw]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "negative"


def test_classify_density_not_pure(tmp_path, capsys):
    from quditphase.hudson import counterexample_mixture

    rho, _ = counterexample_mixture()
    payload = {
        "d": 3,
        "density": [[[float(z.real), float(z.imag)] for z in row] for row in rho],
    }
    f = tmp_path / "cx.json"
    f.write_text(json.dumps(payload))
    assert main(["classify", str(f)]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "not_pure"
    assert abs(report["gram_defect"] - 0.5) < 1e-9


def test_count_outputs(capsys):
    assert main(["count", "1", "1", "3"]) == 0
    assert capsys.readouterr().out.strip() == "iso=4, stabs=12"
    assert main(["count", "1", "1", "5"]) == 0
    assert capsys.readouterr().out.strip() == "iso=6, stabs=30"
    assert main(["count", "1", "1", "9"]) == 0
    assert capsys.readouterr().out.strip() == "iso=13, stabs=117"
    assert main(["count", "2", "2", "3"]) == 0
    assert capsys.readouterr().out.strip() == "iso=40, stabs=360"
    assert main(["--format", "json", "count", "1", "1", "3"]) == 0
    assert json.loads(capsys.readouterr().out) == {"iso": 4, "stabs": 12}
    assert main(["count", "1", "2", "3"]) == 2
    capsys.readouterr()


def test_enumerate_listing(capsys):
    assert main(["enumerate", "3", "1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "index,character,module"
    assert lines[-1] == "modules=4, states=12"
    assert len(lines) == 14
    assert main(["--format", "json", "enumerate", "3", "1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["modules"] == 4
    assert payload["states"] == 12
    assert len(payload["descriptors"]) == 12


def test_enumerate_uses_global_flags(capsys):
    assert main(["--d", "5", "--n", "1", "enumerate"]) == 0
    assert capsys.readouterr().out.strip().endswith("modules=6, states=30")


def test_harness_report(capsys):
    assert main(["--seed", "7", "harness", "3", "1", "40"]) == 0
    line = capsys.readouterr().out.strip()
    assert line == "violations=0, forward=12/12, negative=40, stabilizer_hits=0"
    assert main(["--format", "json", "--seed", "7", "harness", "3", "1", "40"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["violations"] == 0
    assert payload["forward_pass"] == 12
    assert payload["negative"] == 40


def test_counterexample_artifacts(tmp_path, capsys):
    assert main(["--out", str(tmp_path), "counterexample"]) == 0
    out = capsys.readouterr().out
    assert "feasible=False, surviving=3, zeros=0:0;2:0;2:2" in out
    for name in (
        "parity_state_wigner.csv",
        "mixture_wigner.csv",
        "mixture_wigner.pgm",
        "surviving_lines.svg",
    ):
        assert (tmp_path / name).exists()
    with open(tmp_path / "mixture_wigner.csv") as fh:
        grid = grid_from_csv(fh)
    assert abs(grid.total() - 1) < 1e-15
    assert grid.minimum()[0] == 0.0
    with open(tmp_path / "parity_state_wigner.csv") as fh:
        parity = grid_from_csv(fh)
    assert abs(parity.value_at((0, 0)) + 1 / 3) < 1e-15
    assert abs(parity.total() - 1) < 1e-15
    pgm = (tmp_path / "mixture_wigner.pgm").read_text()
    grays = [int(t) for t in pgm.split() if t.isdigit()][3:]
    assert min(grays) == 0 and max(grays) == 255
    svg = (tmp_path / "surviving_lines.svg").read_text()
    assert svg.count("stroke=") == 9
    # deterministic bytes on a second run
    first = (tmp_path / "surviving_lines.svg").read_bytes()
    assert main(["--out", str(tmp_path), "counterexample"]) == 0
    capsys.readouterr()
    assert (tmp_path / "surviving_lines.svg").read_bytes() == first


def test_galois_reports(capsys):
    assert main(["galois", "3", "2"]) == 0
    assert capsys.readouterr().out.strip() == "factorization=exact, gap_ratio=4"
    assert main(["galois", "3", "1"]) == 0
    assert capsys.readouterr().out.strip() == "factorization=exact, gap_ratio=1"
    assert main(["--format", "json", "galois", "3", "2"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["factorization"] == "exact"
    assert payload["weyl_exact"] == 81
    assert payload["gap_ratio"] == "4"
    assert main(["galois", "3", "5"]) == 2
    capsys.readouterr()


def test_clifford_synth_and_recognize(tmp_path, capsys):
    spec = {"d": 3, "n": 1, "S": [[0, 1], [2, 0]], "a": [1, 2]}
    f = tmp_path / "fourier.json"
    f.write_text(json.dumps(spec))
    assert main(["--out", str(tmp_path), "clifford", "synth", str(f)]) == 0
    out = capsys.readouterr().out
    assert "verified=True" in out
    unitary_file = tmp_path / "fourier_unitary.json"
    assert unitary_file.exists()
    assert main(["clifford", "recognize", str(unitary_file)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "clifford"
    assert report["S"] == [[0, 1], [2, 0]]
    assert report["a"] == [1, 2]


def test_clifford_recognize_rejects_generic_unitary(tmp_path, capsys):
    rng = np.random.default_rng(3)
    X = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    Q, R = np.linalg.qr(X)
    U = Q * (np.diag(R) / np.abs(np.diag(R)))
    payload = {
        "d": 3,
        "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in U],
    }
    f = tmp_path / "haar.json"
    f.write_text(json.dumps(payload))
    assert main(["clifford", "recognize", str(f)]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "not_clifford"


def test_config_file_toml_and_json(tmp_path, capsys):
    cfg = tmp_path / "run.toml"
    cfg.write_text(f'format = "json"\nout = "{tmp_path}"\nseed = 7\n')
    assert main(["--config", str(cfg), "count", "1", "1", "3"]) == 0
    assert json.loads(capsys.readouterr().out) == {"iso": 4, "stabs": 12}
    jcfg = tmp_path / "run.json"
    jcfg.write_text(json.dumps({"format": "json"}))
    assert main(["--config", str(jcfg), "count", "1", "1", "5"]) == 0
    assert json.loads(capsys.readouterr().out) == {"iso": 6, "stabs": 30}
    # explicit flags beat the config file
    assert main(["--config", str(cfg), "--format", "csv", "count", "1", "1", "3"]) == 0
    assert capsys.readouterr().out.strip() == "iso=4, stabs=12"


def test_config_rejections(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text("mystery = 1\n")
    assert main(["--config", str(bad), "count", "1", "1", "3"]) == 2
    assert "unknown config keys" in capsys.readouterr().err
    assert load_config.__doc__
    evil = tmp_path / "broken.json"
    evil.write_text("{oops")
    assert main(["--config", str(evil), "count", "1", "1", "3"]) == 2
    capsys.readouterr()


def test_output_dir_env_var(tmp_path, capsys, monkeypatch):
    target = tmp_path / "envout"
    monkeypatch.setenv("QUDITPHASE_OUT", str(target))
    state = zero_state_file(tmp_path)
    assert main(["wigner", state]) == 0
    assert (target / "zero_wigner.csv").exists()
    capsys.readouterr()


def test_global_d_validation(capsys):
    assert main(["--d", "4", "count", "1", "1", "3"]) == 2
    assert "unsupported modulus" in capsys.readouterr().err
