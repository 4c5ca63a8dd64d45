"""End-to-end command line runs: outputs, exit codes, determinism."""

import subprocess
import sys

import numpy as np
import pytest

from canonfactor import (HalfLineFunction, read_halfline, read_hamiltonian,
                         read_matrix, write_halfline, write_hamiltonian)
from canonfactor.hamiltonian import Hamiltonian


def run_cli(*args):
    proc = subprocess.run([sys.executable, "-m", "canonfactor.cli", *args],
                          capture_output=True, text=True, timeout=300)
    return proc


def test_szego_constant_table_is_zero(tmp_path):
    proc = run_cli("szego", "--weight", "constant:c=2", "--y", "0.5,1,2")
    assert proc.returncode == 0
    vals = [float(line.split()[-1]) for line in
            proc.stdout.strip().splitlines() if not line.startswith("#")]
    assert vals == [0.0, 0.0, 0.0]


def test_szego_step_matches_library(tmp_path):
    proc = run_cli("szego", "--weight", "step:inner=2,half_width=1")
    assert proc.returncode == 0
    val = float(proc.stdout.strip().splitlines()[-1].split()[-1])
    assert abs(val - (np.log(1.5) - 0.5 * np.log(2.0))) < 1e-10


def test_invert_then_forward_round_trip(tmp_path):
    hfile = tmp_path / "h.txt"
    proc = run_cli("invert", "--weight", "sinc-bump:amplitude=0.5,scale=1",
                   "--span", "16", "--cells", "128",
                   "--out-hamiltonian", str(hfile))
    assert proc.returncode == 0, proc.stderr
    ham = read_hamiltonian(hfile)
    assert ham.grid.n_cells == 128
    out = tmp_path / "dens.txt"
    proc = run_cli("forward", "--hamiltonian", str(hfile),
                   "--density-grid=-3:3:13", "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    rows = [line.split() for line in out.read_text().splitlines()
            if line and not line.startswith("#")]
    xs = np.array([float(r[0]) for r in rows])
    ws = np.array([float(r[1]) for r in rows])
    truth = 1.0 + 0.5 * np.sinc(xs / np.pi) ** 2
    assert np.max(np.abs(ws - truth) / truth) < 1e-2


def test_weyl_values(tmp_path):
    hfile = tmp_path / "h.txt"
    write_hamiltonian(Hamiltonian.identity(40.0, 4), hfile)
    proc = run_cli("weyl", "--hamiltonian", str(hfile), "--z", "1j,2j")
    assert proc.returncode == 0, proc.stderr
    rows = [l.split() for l in proc.stdout.splitlines()
            if l and not l.startswith("#")]
    # columns: Re z, Im z, Re m, Im m, diam; m = i for the free system
    for r in rows:
        assert abs(float(r[2])) < 1e-9
        assert abs(float(r[3]) - 1.0) < 1e-9


def test_a2_and_decompose_commands(tmp_path):
    f = HalfLineFunction([0.0, 1.0, 2.0], [1.0, 2.0], tail=1.0)
    ffile = tmp_path / "f.txt"
    write_halfline(f, ffile)
    proc = run_cli("a2", "--function", str(ffile), "--tail", "1.0")
    assert proc.returncode == 0, proc.stderr
    assert "1.125" in proc.stdout          # [f]_2 = 9/8

    g = HalfLineFunction([0.0, 1.0, 2.0], [3.0, -0.25])
    gfile = tmp_path / "g.txt"
    write_halfline(g, gfile)
    f1p, f2p = tmp_path / "f1.txt", tmp_path / "f2.txt"
    proc = run_cli("decompose", "--function", str(gfile),
                   "--out-f1", str(f1p), "--out-f2", str(f2p))
    assert proc.returncode == 0, proc.stderr
    f1, f2 = read_halfline(f1p), read_halfline(f2p)
    assert np.array_equal(f1.values + f2.values, g.values)


def test_factorize_writes_factor(tmp_path):
    afile = tmp_path / "A.txt"
    proc = run_cli("factorize", "--weight", "step:inner=2,half_width=1",
                   "--window", "6.4", "--cells", "64",
                   "--out-factor", str(afile))
    assert proc.returncode == 0, proc.stderr
    assert "residual=" in proc.stdout
    A = read_matrix(afile)
    assert A.shape == (64, 64)
    assert np.allclose(A, np.triu(A))


def test_transform_isometry_cli(tmp_path):
    hfile = tmp_path / "h.txt"
    write_hamiltonian(Hamiltonian.identity(2.0, 2), hfile)
    f = HalfLineFunction([0.0, 1.0, 2.0], [1.0, -2.0], tail=0.0)
    ffile = tmp_path / "f.txt"
    write_halfline(f, ffile)
    proc = run_cli("transform", "--hamiltonian", str(hfile),
                   "--function", str(ffile), "--z", "0.5,1.5",
                   "--weight", "constant:c=1")
    assert proc.returncode == 0, proc.stderr
    assert "isometry_residual" in proc.stdout


def test_verify_subset(tmp_path):
    proc = run_cli("verify", "--only", "1,9")
    assert proc.returncode == 0, proc.stderr
    assert "[PASS]  1" in proc.stdout
    assert "[PASS]  9" in proc.stdout


def test_deterministic_output(tmp_path):
    a = run_cli("szego", "--weight", "cosine-bump:amplitude=1,half_width=1",
                "--y", "0.5,1,2,4")
    b = run_cli("szego", "--weight", "cosine-bump:amplitude=1,half_width=1",
                "--y", "0.5,1,2,4")
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_exit_code_2_config_error(tmp_path):
    # unreadable weight spec
    proc = run_cli("szego", "--weight", "step:inner=two")
    assert proc.returncode == 2
    assert "error" in proc.stderr
    # malformed config file
    cfg = tmp_path / "c.ini"
    cfg.write_text("not an ini\n")
    proc = run_cli("--config", str(cfg), "szego", "--weight", "constant:c=1")
    assert proc.returncode == 2


def test_exit_code_2_missing_file():
    proc = run_cli("weyl", "--hamiltonian", "/nonexistent/h.txt", "--z", "1j")
    assert proc.returncode == 2


def test_exit_code_3_domain_error():
    # szego needs Im z > 0 <=> y > 0
    proc = run_cli("szego", "--weight", "constant:c=1", "--y", "-1")
    assert proc.returncode == 3
    assert "kind=domain" in proc.stderr


def test_exit_code_4_convergence_error(tmp_path):
    hfile = tmp_path / "h.txt"
    write_hamiltonian(Hamiltonian.identity(3.0, 3), hfile)
    proc = run_cli("weyl", "--hamiltonian", str(hfile), "--z", "0.05j",
                   "--tol-weyl", "1e-14")
    assert proc.returncode == 4
    assert "kind=convergence" in proc.stderr


def test_config_file_supplies_defaults(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[szego]\nweight = constant:c=3\ny = 1,2\n")
    proc = run_cli("--config", str(cfg), "szego")
    assert proc.returncode == 0, proc.stderr
    vals = [float(l.split()[-1]) for l in proc.stdout.strip().splitlines()
            if not l.startswith("#")]
    assert vals == [0.0, 0.0]
