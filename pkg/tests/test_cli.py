import numpy as np

from bosefold.cli import main
from bosefold.folding import plan_from_text

SWEEP_CFG = """\
[scenario]
kind = collision_sweep
m1 = 1
m2 = 1
mu_values = 0 2 6

[model]
n_sites = 6
base = jx
"""

GROUND_CFG = """\
[scenario]
kind = ground_state
m = 2

[model]
n_sites = 5
base = inverse_distance
j1 = 0.3
trap_omega = 0.05
"""

QUENCH_CFG = """\
[scenario]
kind = quench_release
m = 3
t_start = 0
t_end = 2
steps = 5
snapshot_times = 1.0

[model]
n_sites = 6
base = inverse_distance
j1 = 0.3
barrier = 3 4 50
"""

TRANSFER_CFG = """\
[scenario]
kind = transfer_report
epsilon = 0.001
beta = 0.5

[model]
n_sites = 7
base = jx
"""


def _write(tmp_path, text):
    p = tmp_path / "cfg.ini"
    p.write_text(text)
    return str(p)


def test_sweep_command_and_determinism(tmp_path):
    cfg = _write(tmp_path, SWEEP_CFG)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["sweep", "--config", cfg, "--out-dir", str(out1)]) == 0
    assert main(["sweep", "--config", cfg, "--out-dir", str(out2)]) == 0
    b1 = (out1 / "sweep.csv").read_bytes()
    b2 = (out2 / "sweep.csv").read_bytes()
    assert b1 == b2
    lines = b1.decode().splitlines()
    assert lines[0] == "mu,mu_over_N,E_N_bits,collection_fraction,discarded_weight"
    assert len(lines) == 4


def test_ground_command_outputs(tmp_path):
    cfg = _write(tmp_path, GROUND_CFG)
    out = tmp_path / "out"
    assert main(["ground", "--config", cfg, "--out-dir", str(out)]) == 0
    occ = (out / "occupations.csv").read_text().splitlines()
    assert occ[0] == "t,site,n"
    total = sum(float(ln.split(",")[2]) for ln in occ[1:])
    assert abs(total - 2.0) < 1e-8
    assert (out / "schmidt.csv").read_text().startswith("bond,index,lambda")


def test_quench_command_with_plan_dump(tmp_path):
    cfg = _write(tmp_path, QUENCH_CFG)
    out = tmp_path / "out"
    plan_path = tmp_path / "plan.txt"
    assert main(["quench", "--config", cfg, "--out-dir", str(out),
                 "--dump-plan", str(plan_path)]) == 0
    assert (out / "occupations.csv").exists()
    assert (out / "occupations_mps.csv").exists()
    plan = plan_from_text(plan_path.read_text())
    assert plan.n_modes == 6
    assert len(plan.ops) == 11


def test_transfer_command(tmp_path):
    cfg = _write(tmp_path, TRANSFER_CFG)
    out = tmp_path / "out"
    assert main(["transfer", "--config", cfg, "--out-dir", str(out)]) == 0
    rows = (out / "transfer.csv").read_text().splitlines()
    assert rows[0].startswith("k,exact_re,exact_im")
    assert len(rows) == 8
    last = rows[-1].split(",")
    amp = complex(float(last[1]), float(last[2]))
    assert abs(abs(amp) - 1.0) < 0.01


def test_config_error_exit_code(tmp_path, capsys):
    cfg = _write(tmp_path, "[scenario]\nkind = nope\n")
    assert main(["sweep", "--config", cfg, "--out-dir", str(tmp_path)]) == 2
    assert "config error" in capsys.readouterr().err


def test_missing_config_is_io_error(tmp_path):
    assert main(["sweep", "--config", str(tmp_path / "absent.ini"),
                 "--out-dir", str(tmp_path)]) == 4


def test_numeric_error_exit_code(tmp_path):
    # m exceeds an explicitly tiny local dimension only at run time when the
    # parser is bypassed; here a barrier outside the chain trips a ModelError
    cfg = _write(tmp_path, QUENCH_CFG.replace("barrier = 3 4 50",
                                              "barrier = 5 9 50"))
    assert main(["quench", "--config", cfg, "--out-dir", str(tmp_path)]) == 3


def test_selftest_passes(capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 3
    assert "FAIL" not in out


def test_sweep_threads_flag(tmp_path):
    cfg = _write(tmp_path, SWEEP_CFG)
    out = tmp_path / "thr"
    assert main(["sweep", "--config", cfg, "--out-dir", str(out),
                 "--threads", "2"]) == 0
    assert (out / "sweep.csv").exists()
