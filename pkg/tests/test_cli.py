import subprocess
import sys

import numpy as np
import pytest

from dividerset.cli import RunConfig, build_parser, main, resolve_config
from dividerset.io import read_bitmap, read_csv, write_pbm
from dividerset.lattice import Bitmap


def run(tmp_path, *args):
    return main([*args, "--out", str(tmp_path)])


def test_divider_ellipse_csv(tmp_path):
    assert run(tmp_path, "divider", "--preset", "ellipse:2,1", "--n-grid", "256") == 0
    chash, cols, rows = read_csv(tmp_path / "divider.csv")
    assert cols == ["t1", "side", "x10", "x20", "radius", "t2", "kind", "residual_max", "feet"]
    assert len(chash) == 16
    radius = np.array([float(r[4]) for r in rows])
    t1 = np.array([float(r[0]) for r in rows])
    top = t1[radius == radius.max()]
    assert radius.max() == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(np.sort(top), [np.pi / 2, 3 * np.pi / 2])
    assert (tmp_path / "divider.svg").stat().st_size > 0


def test_divider_circle_single_point(tmp_path):
    assert run(tmp_path, "divider", "--preset", "circle:1", "--n-grid", "128", "--figure", "none") == 0
    _, _, rows = read_csv(tmp_path / "divider.csv")
    assert len(rows) == 1
    assert float(rows[0][2]) == pytest.approx(0, abs=1e-12) and float(rows[0][4]) == pytest.approx(1.0)
    assert not (tmp_path / "divider.svg").exists()


def test_divider_parabola_rmax(tmp_path):
    assert run(tmp_path, "divider", "--preset", "parabola:0.25", "--rmax", "8", "--n-grid", "256",
               "--figure", "png") == 0
    _, _, rows = read_csv(tmp_path / "divider.csv")
    xy = np.array([[float(r[2]), float(r[3])] for r in rows])
    assert np.abs(xy[:, 0]).max() < 1e-6 and xy[:, 1].min() == pytest.approx(0.5, abs=1e-4)
    assert max(float(r[4]) for r in rows) <= 8
    assert (tmp_path / "divider.png").read_bytes()[:4] == b"\x89PNG"


def test_evolute_rows(tmp_path):
    assert run(tmp_path, "evolute", "--preset", "ellipse:2,1") == 0
    _, cols, rows = read_csv(tmp_path / "evolute.csv")
    pts = sorted((round(float(r[1]), 9) + 0, round(float(r[2]), 9) + 0) for r in rows)
    assert pts == [(-1.5, 0), (0, -3), (0, 3), (1.5, 0)]
    assert run(tmp_path, "evolute", "--preset", "circle:1") == 0
    assert read_csv(tmp_path / "evolute.csv")[2] == []


def test_lclt_field_zero_for_circle(tmp_path):
    assert run(tmp_path, "lclt-field", "--preset", "circle:1", "--res", "24x20", "--window=-1.5,-1.5,1.5,1.5") == 0
    lines = (tmp_path / "lclt_field.pgm").read_text().splitlines()
    assert lines[0] == "P2" and lines[2] == "24 20"
    assert set(" ".join(lines[4:]).split()) == {"0"}
    _, cols, rows = read_csv(tmp_path / "lclt_field.csv")
    assert cols == ["x", "y", "k_lct"] and len(rows) == 480


def test_lattice_rectangle(tmp_path):
    src = tmp_path / "rect.pbm"
    write_pbm(src, Bitmap.rectangle(10, 4).foreground)
    assert main(["lattice", str(src), "--out", str(tmp_path)]) == 0
    mask = read_bitmap(tmp_path / "rect_divider.pbm").foreground
    assert mask[2:4, 2:10].all() and mask.sum() == 16
    _, cols, rows = read_csv(tmp_path / "rect_lattice.csv")
    assert cols == ["x", "y", "distance", "feet_count", "divider"] and len(rows) == 40


def test_lattice_errors(tmp_path, capsys):
    src = tmp_path / "empty.pbm"
    write_pbm(src, np.zeros((3, 3), bool))
    assert main(["lattice", str(src), "--out", str(tmp_path)]) == 1
    assert "no foreground" in capsys.readouterr().err
    assert main(["lattice", str(tmp_path / "missing.pbm")]) == 1
    write_pbm(src, np.ones((3, 3), bool))
    assert main(["lattice", str(src), "--metric", "cosine", "--out", str(tmp_path)]) == 1


@pytest.mark.parametrize("argv", [[], ["divider", "--preset", "nope:1"], ["divider", "--n-grid", "10"],
                                  ["lclt-field", "--res", "axb"], ["divider", "--window", "1,2,3"],
                                  ["divider", "--side", "up"], ["frobnicate"]])
def test_usage_errors_exit_one(argv, tmp_path):
    assert main(argv + (["--out", str(tmp_path)] if argv and argv[0] != "frobnicate" else [])) == 1


def test_validation_failure_exit_two(tmp_path, monkeypatch):
    import dividerset.cli as cli
    from dividerset.divider import ValidationReport

    monkeypatch.setattr(cli, "divider_validate", lambda pts, c, n: ValidationReport(1, 0, 0, [(0, (0.0, 0.0))]))
    assert run(tmp_path, "validate", "--preset", "ellipse:2,1", "--n-grid", "128", "--figure", "none") == 2
    assert len(read_csv(tmp_path / "violations.csv")[2]) == 1


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# settings\nn-grid = 300\npreset = parabola:0.5\nres = 20x30\n")
    args = build_parser().parse_args(["divider", "--config", str(cfg), "--preset", "ellipse:3,1"])
    rc = resolve_config(args)
    assert rc.n_grid == 300 and rc.preset == "ellipse:3,1"
    assert rc.res == (20, 30) and rc.n_scan == RunConfig().n_scan
    cfg.write_text("colour = red\n")
    assert main(["divider", "--config", str(cfg)]) == 1


def test_outputs_are_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(["divider", "--preset", "hypotrochoid:5,2,0.6", "--n-grid", "200", "--out", str(d)]) == 0
    for name in ("divider.csv", "divider.svg"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    src = tmp_path / "shape.pbm"
    write_pbm(src, Bitmap.rectangle(13, 6).foreground)
    for d in (a, b):
        assert main(["lattice", str(src), "--out", str(d), "--metric", "euclid"]) == 0
    for name in ("shape_divider.pbm", "shape_lattice.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_console_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "dividerset.cli", "evolute", "--preset", "parabola:0.25",
                          "--out", str(tmp_path), "--figure", "none"], capture_output=True, text=True)
    assert out.returncode == 0 and "cusps=1" in out.stdout
