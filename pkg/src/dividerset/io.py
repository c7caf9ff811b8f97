"""Plain-text table and image formats: CSV, PBM (P1) and PGM (P2)."""

from __future__ import annotations

import csv
import hashlib
from pathlib import Path

import numpy as np

from .lattice import Bitmap


def config_hash(cfg: dict) -> str:
    """Short stable digest of a flat configuration mapping."""
    text = "\n".join(f"{k}={cfg[k]!r}" for k in sorted(cfg))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return "" if v is None else str(v)


def write_csv(path, columns, rows, chash: str, note: str | None = None) -> Path:
    """Write rows under a ``# config=<hash>`` line and a header row.

    Floats are printed with 17 significant digits so the text round-trips.
    """
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write(f"# config={chash}\n")
        if note:
            fh.write(f"# {note}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(v) for v in r])
    return path


def read_csv(path):
    """Return ``(config_hash, columns, rows)`` with rows as lists of strings."""
    chash = None
    lines = []
    with Path(path).open() as fh:
        for line in fh:
            if line.startswith("#"):
                if line.startswith("# config="):
                    chash = line.strip().split("=", 1)[1]
                continue
            lines.append(line)
    rows = list(csv.reader(lines))
    return chash, rows[0], rows[1:]


def _tokens(path) -> tuple[str, list[str]]:
    text = Path(path).read_text()
    toks = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        toks.extend(line.split())
    if not toks:
        raise ValueError(f"{path}: empty image file")
    return toks[0], toks[1:]


def read_bitmap(path) -> Bitmap:
    """Read a plain PBM (``P1``) or PGM (``P2``); nonzero cells are foreground.

    Plain PBM allows cell digits without separating whitespace, so a ``P1``
    body is split into single characters.
    """
    magic, toks = _tokens(path)
    if magic not in ("P1", "P2"):
        raise ValueError(f"{path}: expected a plain P1 or P2 image, got {magic!r}")
    try:
        w, h = int(toks[0]), int(toks[1])
        body = toks[2:]
        if magic == "P2":
            body = body[1:]  # maxval
            vals = [int(v) for v in body]
        else:
            vals = [int(ch) for tok in body for ch in tok]
    except (IndexError, ValueError) as exc:
        raise ValueError(f"{path}: malformed image header or body") from exc
    if w < 1 or h < 1 or len(vals) != w * h:
        raise ValueError(f"{path}: expected {w * h} cells, found {len(vals)}")
    return Bitmap(np.array(vals, dtype=np.int64).reshape(h, w) != 0)


def write_pbm(path, mask: np.ndarray) -> Path:
    """Plain PBM with one token per cell, one image row per line, LF endings."""
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    lines = ["P1", f"{w} {h}"]
    lines += [" ".join("1" if v else "0" for v in row) for row in mask]
    path = Path(path)
    path.write_bytes(("\n".join(lines) + "\n").encode("ascii"))
    return path


def write_pgm(path, values: np.ndarray, maxval: int = 255, scale: float | None = None,
              flip: bool = True) -> Path:
    """Plain PGM of non-negative ``values`` scaled so ``scale`` maps to ``maxval``.

    ``scale`` defaults to the largest finite value; the factor is recorded
    in a comment line.  With ``flip`` the first stored row is the last
    array row, so arrays indexed with ``y`` ascending come out upright.
    """
    v = np.asarray(values, dtype=float)
    v = np.where(np.isfinite(v), v, 0.0)
    if scale is None:
        scale = float(v.max()) if v.size and v.max() > 0 else 1.0
    g = np.clip(np.rint(v / scale * maxval), 0, maxval).astype(int)
    if flip:
        g = g[::-1]
    h, w = g.shape
    lines = ["P2", f"# scale {scale:.17g} per {maxval}", f"{w} {h}", str(maxval)]
    lines += [" ".join(str(x) for x in row) for row in g]
    path = Path(path)
    path.write_bytes(("\n".join(lines) + "\n").encode("ascii"))
    return path
