import subprocess
import sys

import pytest

from painleve_asymptotics import cli
from painleve_asymptotics.harness import ladder_state
from painleve_asymptotics.ladder import loads


def read(path):
    return path.read_text()


def test_ladder_files(tmp_path):
    assert cli.dispatch(["ladder", "--m", "13", "--emit", "rational", "--out", str(tmp_path)]) == 0
    m, u = loads(read(tmp_path / "U_13.txt"))
    assert m == 13 and u == ladder_state(13).u
    _, v = loads(read(tmp_path / "V_13.txt"))
    assert v == ladder_state(13).v


def test_every_output_carries_the_hash(tmp_path):
    cli.dispatch(["ladder", "--m", "4", "--out", str(tmp_path)])
    conf = read(tmp_path / "config.kv")
    digest = next(line.split("=", 1)[1] for line in conf.splitlines() if line.startswith("config_hash="))
    for f in tmp_path.iterdir():
        assert digest in read(f)


def test_hash_ignores_output_directory(tmp_path):
    cli.dispatch(["ladder", "--m", "4", "--out", str(tmp_path / "a")])
    cli.dispatch(["ladder", "--m", "4", "--out", str(tmp_path / "b")])
    for f in (tmp_path / "a").iterdir():
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_roots_output(tmp_path):
    assert cli.dispatch(["ladder", "--m", "3", "--emit", "roots", "--out", str(tmp_path)]) == 0
    rows = read(tmp_path / "P_3_poles.csv").splitlines()
    body = [r for r in rows if r and not r.startswith("#") and not r.startswith("re_")]
    # U_3 has degree 6 numerator and degree 3 denominator
    assert len(body) == 9


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["ladder", "--bogus", "1"],
    ["ladder", "--m", "ten"],
    ["edge", "--window", "1", "2"],
])
def test_usage_errors(argv, tmp_path, capsys):
    assert cli.dispatch(argv + ["--out", str(tmp_path)]) == 2
    assert capsys.readouterr().err


def test_config_file_and_flag_precedence(tmp_path):
    conf = tmp_path / "run.kv"
    conf.write_text("# comment\nm=5\nprecision=128\n")
    cfg = cli.resolve(["ladder", "--config", str(conf), "--m", "7"])
    assert cfg.m == 7 and cfg.precision == 128
    cfg = cli.resolve(["ladder", "--config", str(conf)])
    assert cfg.m == 5


def test_unknown_config_key(tmp_path):
    conf = tmp_path / "run.kv"
    conf.write_text("colour=blue\n")
    assert cli.dispatch(["ladder", "--config", str(conf), "--out", str(tmp_path)]) == 2


def test_geometry_window(tmp_path):
    assert cli.dispatch(["geometry", "--window", "1", "2", "-0.5", "0.5", "--points", "3",
                         "--out", str(tmp_path)]) == 0
    lines = read(tmp_path / "geometry.csv").splitlines()
    assert lines[1].startswith("re_x,im_x,re_S,im_S")
    # three points request a 2 x 2 window grid; every field parses as a float
    assert len(lines) == 6
    for row in lines[2:]:
        assert len([float(v) for v in row.split(",")]) == 26


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "painleve_asymptotics", "ladder", "--m", "2",
                          "--out", str(tmp_path)], capture_output=True, text=True)
    assert res.returncode == 0
    assert (tmp_path / "U_2.txt").exists()
