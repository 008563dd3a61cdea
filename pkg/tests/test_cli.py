import io
import math

import numpy as np
import pytest

from hubbard_ucc import cli, fock
from hubbard_ucc.spectrum import ground_energy_cubic
from hubbard_ucc.stateprep import DomainError, Mode, prepare


def read_csv(path):
    text = path.read_bytes().decode("utf-8")
    assert "\r" not in text
    lines = text.splitlines()
    assert lines[0].startswith("# ")
    assert sum(line.startswith("#") for line in lines) == 1
    return lines[0], np.array([[float(x) for x in line.split(",")] for line in lines[1:]])


def test_sweep_angles(tmp_path):
    out = tmp_path / "angles.csv"
    assert cli.main(["sweep-angles", "--u-min", "0.1", "--u-max", "16", "--steps", "100", "--out", str(out)]) == 0
    header, data = read_csv(out)
    assert header.startswith("# u,theta1,theta2,theta3,theta4")
    assert "pi/4" in header
    assert data.shape == (100, 5)
    assert np.all(np.diff(data[:, 1]) < 0)
    small = data[data[:, 0] <= 0.5]
    assert np.allclose(small[:, 2], small[:, 1] ** 2, rtol=0.1)


def test_sweep_angles_tiny_u(tmp_path):
    out = tmp_path / "a.csv"
    assert cli.main(["sweep-angles", "--u-min", "1e-6", "--u-max", "1e-5", "--steps", "2", "--out", str(out)]) == 0
    _, data = read_csv(out)
    assert np.abs(data[0, 1:]).max() < 1e-5


def test_sweep_energy_exact(tmp_path):
    out = tmp_path / "e.csv"
    assert cli.main(["sweep-energy", "--steps", "20", "--scale", "log", "--out", str(out)]) == 0
    header, data = read_csv(out)
    assert header.startswith("# u,e_cubic,e_ed,e_prepared,fidelity")
    assert "units of t" in header
    assert np.abs(data[:, 3] - data[:, 2]).max() < 1e-8
    assert np.abs(data[:, 1] - data[:, 2]).max() < 1e-9


def test_sweep_energy_doubles(tmp_path):
    out = tmp_path / "d.csv"
    assert cli.main(["sweep-energy", "--mode", "doubles", "--u-min", "0.1", "--u-max", "16", "--steps", "30", "--out", str(out)]) == 0
    _, data = read_csv(out)
    assert np.all(data[:, 4] <= 1) and np.all(np.diff(data[:, 4]) <= 0)
    assert data[0, 3] - data[0, 2] < 1e-3


def test_float_format(tmp_path):
    out = tmp_path / "e.csv"
    cli.main(["sweep-energy", "--steps", "2", "--out", str(out)])
    first = out.read_text().splitlines()[1].split(",")[0]
    assert first == "%.17e" % 0.1


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep-angles", "--steps", "1"],
        ["sweep-angles", "--u-min", "5", "--u-max", "1"],
        ["sweep-angles", "--u-min", "-1"],
        ["sweep-angles", "--u-min", "0", "--scale", "log"],
        ["sweep-energy", "--mode", "triples"],
        ["sweep-energy", "--t", "0"],
        ["vqe", "--u", "-2"],
        ["nonsense"],
    ],
)
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as info:
        raise SystemExit(cli.main(argv))
    assert info.value.code == 2


def test_domain_error_skips_row(tmp_path, monkeypatch):
    real = prepare

    def flaky(u, mode=Mode.EXACT, t=1.0):
        if 4 < u < 6:
            raise DomainError("forced")
        return real(u, mode, t)

    monkeypatch.setattr(cli, "prepare", flaky)
    out = tmp_path / "a.csv"
    assert cli.main(["sweep-angles", "--u-min", "1", "--u-max", "7", "--steps", "4", "--out", str(out)]) == 3
    _, data = read_csv(out)
    assert list(data[:, 0]) == [1.0, 3.0, 7.0]


def test_verify_fast():
    out = io.StringIO()
    assert cli.cmd_verify("fast", out) == 0
    assert "checks passed" in out.getvalue()


def test_verify_full():
    out = io.StringIO()
    assert cli.cmd_verify("full", out) == 0
    assert "random-identities" in out.getvalue()


def test_verify_catches_sign_bug(monkeypatch, fresh_caches):
    monkeypatch.setattr(fock, "_parity_below", lambda state, bit: 1)
    out = io.StringIO()
    assert cli.cmd_verify("fast", out) == 1
    assert "PatternMismatch" in out.getvalue()


def test_vqe_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert cli.main(["vqe", "--u", "4", "--mode", "exact", "--seed", "1", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    header, data = read_csv(a)
    assert header.startswith("# evaluation,energy,best_energy")
    assert data[-1, 2] == pytest.approx(ground_energy_cubic(4.0), abs=1e-7)
    assert np.array_equal(data[:, 0], np.arange(1, len(data) + 1))


def test_vqe_doubles_beats_closed_form(tmp_path):
    out = tmp_path / "v.csv"
    assert cli.main(["vqe", "--u", "8", "--mode", "doubles", "--seed", "1", "--out", str(out)]) == 0
    _, data = read_csv(out)
    assert data[-1, 2] <= prepare(8.0, Mode.DOUBLES).energy


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "hubbard_ucc", "sweep-angles", "--steps", "2"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.startswith("# u,theta1")
    assert math.isfinite(float(res.stdout.splitlines()[1].split(",")[1]))
