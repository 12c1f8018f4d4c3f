import csv
import io

import numpy as np
import pytest

from oamris import cli
from oamris.config import ConfigError, dbm_to_watt, load_config, watt_to_dbm


def test_dbm_conversion():
    assert dbm_to_watt(30) == 1.0
    assert dbm_to_watt(-20) == pytest.approx(1e-5, rel=1e-15)
    assert float(dbm_to_watt(watt_to_dbm(1e-5))) == pytest.approx(1e-5, abs=1e-12)


def test_defaults_resolve_to_scene():
    cfg = load_config()
    sc = cfg.scenario()
    assert sc.P_T == 1.0 and sc.rho == 0.9
    assert sc.noise.sigma_B2 == pytest.approx(1e-5)
    assert sc.geometry.Q == 150 and sc.geometry.varphi == pytest.approx(-np.pi / 20)
    assert sc.geometry.vartheta_x == pytest.approx(np.pi / 4)
    assert sc.plan.K == 8


@pytest.mark.parametrize("text,field", [
    ("power.rho = 1.5", "power.rho"), ("scene.n = eight", "scene.n"), ("bogus.key = 1", "bogus.key"),
    ("ris.center = 1, 2", "ris.center"), ("run.scheme = fast", "run.scheme"), ("noline", "expected"),
    ("modes.low = 0, 1, -1, 5", "modes"),
])
def test_bad_config_names_field(tmp_path, text, field):
    path = tmp_path / "c.cfg"
    path.write_text(text + "\n")
    with pytest.raises(ConfigError, match=field.replace(".", r"\.")):
        load_config(path)


def test_cli_config_error_exit(tmp_path, capsys):
    path = tmp_path / "c.cfg"
    path.write_text("power.rho = 0\n")
    assert cli.main(["convergence", "--config", str(path), "--out", str(tmp_path)]) == 1
    assert "power.rho" in capsys.readouterr().err


def test_cli_io_error_exit(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert cli.main(["convergence", "--out", str(blocker / "sub")]) == 3


def _body(path):
    return "".join(l for l in path.read_text().splitlines(True) if not l.startswith("# generated"))


def _rows(path):
    return list(csv.reader(io.StringIO("".join(l for l in path.read_text().splitlines(True) if not l.startswith("#")))))


def test_sweep_zr_shape(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("ris.q_y = 3\nris.q_z = 2\n")
    assert cli.main(["sweep-zr", "--config", str(cfg), "--out", str(tmp_path), "--threads", "2"]) == 0
    for scheme in ("proposed", "equal-power", "no-an"):
        path = tmp_path / f"sweep-zr_{scheme}.csv"
        text = path.read_text()
        assert "# config-sha256:" in text
        rows = _rows(path)
        assert rows[0] == ["z_r", "secrecy_rate", "rate_bob", "rate_eve", "iterations"]
        assert [r[0] for r in rows[1:]] == ["0", "5", "10", "15", "20", "25", "30"]


def test_convergence_indices(tmp_path):
    assert cli.main(["convergence", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "convergence.csv")
    assert rows[0][0] == "iteration"
    assert [int(r[0]) for r in rows[1:]] == list(range(len(rows) - 1))


def test_sweep_q_rejects_indivisible(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("sweep.q = 25\n")
    assert cli.main(["sweep-q", "--config", str(cfg), "--out", str(tmp_path)]) == 1


@pytest.mark.parametrize("experiment,files", [
    ("sweep-power", ["sweep-power.csv"]), ("ber", ["ber.csv"]), ("sweep-q", ["sweep-q_proposed.csv"]),
])
def test_byte_identical_bodies(tmp_path, experiment, files):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("ris.q_y = 3\nris.q_z = 2\nber.trials = 3000\nsweep.q = 6, 12\n"
                   "sweep.p_t_dbm = 20, 30\nsweep.sigma_dbm = -20\n")
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main([experiment, "--config", str(cfg), "--out", str(a), "--seed", "5"]) == 0
    assert cli.main([experiment, "--config", str(cfg), "--out", str(b), "--seed", "5", "--threads", "2"]) == 0
    for f in files:
        assert _body(a / f) == _body(b / f)


def test_ber_columns(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("ris.q_y = 3\nris.q_z = 2\nber.trials = 2000\n")
    assert cli.main(["ber", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "ber.csv")
    assert rows[0][:6] == ["snr_db", "ber_bob", "ber_eve", "ci_low", "ci_high", "trials"]
    assert len(rows) == 6


def test_selftest_passes(capsys):
    assert cli.main(["selftest"]) == 0
    assert "FAIL" not in capsys.readouterr().out
