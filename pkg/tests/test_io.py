import numpy as np
import pytest

from dividerset.io import config_hash, read_bitmap, read_csv, write_csv, write_pbm, write_pgm


def test_config_hash_is_order_independent():
    assert config_hash({"a": 1, "b": 2.5}) == config_hash({"b": 2.5, "a": 1})
    assert config_hash({"a": 1}) != config_hash({"a": 2})


def test_csv_roundtrip_exact_floats(tmp_path):
    vals = [0.1, 1 / 3, -2.5e-300, 1e17 + 1]
    p = write_csv(tmp_path / "t.csv", ["x", "kind"], [[v, "regular"] for v in vals], "abc", note="n=4")
    chash, cols, rows = read_csv(p)
    assert chash == "abc" and cols == ["x", "kind"]
    assert [float(r[0]) for r in rows] == vals
    assert p.read_text().splitlines()[:3] == ["# config=abc", "# n=4", "x,kind"]


def test_pbm_layout(tmp_path):
    mask = np.array([[0, 1, 0], [1, 1, 1]], bool)
    p = write_pbm(tmp_path / "m.pbm", mask)
    assert p.read_bytes() == b"P1\n3 2\n0 1 0\n1 1 1\n"
    assert np.array_equal(read_bitmap(p).foreground, mask)


def test_read_packed_pbm_and_pgm(tmp_path):
    (tmp_path / "a.pbm").write_text("P1\n# comment\n4 2\n0110\n1001\n")
    assert read_bitmap(tmp_path / "a.pbm").foreground.astype(int).tolist() == [[0, 1, 1, 0], [1, 0, 0, 1]]
    (tmp_path / "b.pgm").write_text("P2\n3 1\n255\n0 7 255\n")
    assert read_bitmap(tmp_path / "b.pgm").foreground.tolist() == [[False, True, True]]


@pytest.mark.parametrize("text", ["P3\n1 1\n0\n", "P1\n2 2\n0 1 1\n", "", "P1\nx y\n"])
def test_read_rejects_malformed(tmp_path, text):
    (tmp_path / "bad.pbm").write_text(text)
    with pytest.raises(ValueError):
        read_bitmap(tmp_path / "bad.pbm")


def test_pgm_scale_comment(tmp_path):
    v = np.array([[0.0, 0.5], [1.0, 2.0]])
    p = write_pgm(tmp_path / "v.pgm", v)
    lines = p.read_text().splitlines()
    assert lines[0] == "P2" and lines[1] == "# scale 2 per 255" and lines[2] == "2 2"
    # rows are stored top first, so the last array row comes first
    assert lines[4:] == ["128 255", "0 64"]
    flat = write_pgm(tmp_path / "z.pgm", np.zeros((2, 2))).read_text().splitlines()
    assert flat[4:] == ["0 0", "0 0"]
