"""Command-line front end.

Every command writes a CSV table (with a config-hash line and a header
row) into ``--out`` together with a figure, and prints a short summary.
Exit codes: 0 success, 1 usage or input error, 2 validation failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io, plotting
from .curves import parse_preset
from .divider import DividerKind, divider_trace, divider_validate, parse_sides
from .errors import DividerError
from .evolute import evolute_polyline, find_cusps
from .geometry import DEFAULT_N_SCAN, MetricKind
from .lattice import DEFAULT_FEET_TOLERANCE, DEFAULT_SEPARATION, discrete_divider, distance_transform
from .lclt import pi_set_raster

log = logging.getLogger("dividerset")

EXIT_OK, EXIT_USAGE, EXIT_INVALID = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Settings shared by all commands; see ``dividerset --help``."""

    preset: str = "ellipse:2,1"
    metric: str = "maxcoord"
    n_scan: int = DEFAULT_N_SCAN
    n_grid: int = 1024
    window: tuple | None = None
    res: tuple = (256, 256)
    rmax: float | None = None
    side: str = "both"
    out: str = "out"
    figure: str = "svg"
    thin: bool = False
    separation: float = DEFAULT_SEPARATION
    feet_tol: float = DEFAULT_FEET_TOLERANCE

    def validate(self) -> "RunConfig":
        if self.n_scan < 64:
            raise UsageError("n-scan must be at least 64")
        if self.n_grid < 128:
            raise UsageError("n-grid must be at least 128")
        if min(self.res) < 16:
            raise UsageError("res must be at least 16x16")
        if self.rmax is not None and not self.rmax > 0:
            raise UsageError("rmax must be positive")
        if self.window is not None:
            x0, y0, x1, y1 = self.window
            if not (x1 > x0 and y1 > y0):
                raise UsageError("window must be x0,y0,x1,y1 with x1>x0 and y1>y0")
        if self.figure not in ("svg", "png", "none"):
            raise UsageError("figure must be svg, png or none")
        if not (self.separation > 0 and self.feet_tol >= 0):
            raise UsageError("separation must be positive and feet-tol non-negative")
        return self

    def digest(self, command: str) -> str:
        d = dataclasses.asdict(self)
        d.pop("out")
        d["command"] = command
        return io.config_hash(d)


def _floats(text, n, what):
    try:
        v = tuple(float(x) for x in str(text).split(","))
    except ValueError:
        raise UsageError(f"{what}: expected {n} comma-separated numbers") from None
    if len(v) != n:
        raise UsageError(f"{what}: expected {n} comma-separated numbers")
    return v


def _resolution(text):
    parts = str(text).lower().replace(",", "x").split("x")
    try:
        w, h = (int(p) for p in parts)
    except ValueError:
        raise UsageError("res: expected WxH") from None
    return (w, h)


def _bool(text) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off", ""):
        return False
    raise UsageError(f"not a boolean: {text!r}")


_CONVERT = {
    "preset": str, "metric": str, "side": str, "out": str, "figure": str,
    "n_scan": int, "n_grid": int, "rmax": float, "separation": float, "feet_tol": float,
    "window": lambda s: _floats(s, 4, "window"), "res": _resolution, "thin": _bool,
}


def read_config_file(path) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment; dashes equal underscores."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    for num, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{num}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        k = k.replace("-", "_")
        if k not in _CONVERT:
            raise UsageError(f"{path}:{num}: unknown key {k!r}")
        try:
            out[k] = _CONVERT[k](v)
        except ValueError:
            raise UsageError(f"{path}:{num}: bad value for {k}") from None
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dividerset", description="Divider sets of plane curves and bitmaps.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, curve=True):
        sp.add_argument("--config", help="key=value file; command-line flags win")
        sp.add_argument("--out", help="output directory (default: out)")
        sp.add_argument("--figure", choices=["svg", "png", "none"], help="figure format")
        if curve:
            sp.add_argument("--preset", help="name:params, e.g. ellipse:2,1 or hypotrochoid:5,2,0.6")
            sp.add_argument("--n-scan", type=int, help="distance-profile scan samples")
            sp.add_argument("--window", help="x0,y0,x1,y1")

    d = sub.add_parser("divider", help="trace the Divider of a curve")
    common(d)
    d.add_argument("--n-grid", type=int, help="t1 samples")
    d.add_argument("--rmax", type=float, help="largest contact radius kept, plane units")
    d.add_argument("--side", help="both, inward, outward, left or right")

    v = sub.add_parser("validate", help="trace and check centres against the positive-curvature region")
    common(v)
    v.add_argument("--n-grid", type=int)
    v.add_argument("--rmax", type=float)
    v.add_argument("--side")

    f = sub.add_parser("lclt-field", help="sample the curvature of locally convex type on a grid")
    common(f)
    f.add_argument("--res", help="WxH cells")

    e = sub.add_parser("evolute", help="evolute and its cusps")
    common(e)

    lat = sub.add_parser("lattice", help="discrete Divider of a PBM/PGM bitmap")
    common(lat, curve=False)
    lat.add_argument("input", help="plain PBM (P1) or PGM (P2) file")
    lat.add_argument("--metric", help="euclid, maxcoord or add")
    lat.add_argument("--thin", action="store_const", const=True, help="one thinning pass")
    lat.add_argument("--separation", type=float)
    lat.add_argument("--feet-tol", type=float)
    return p


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the config file, then explicit flags."""
    values = dataclasses.asdict(RunConfig())
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    for k in _CONVERT:
        v = getattr(args, k, None)
        if v is None:
            continue
        values[k] = _CONVERT[k](v) if k in ("window", "res") else v
    if values["window"] is not None:
        values["window"] = tuple(values["window"])
    values["res"] = tuple(values["res"])
    return RunConfig(**values).validate()


def _figure_path(out: Path, stem: str, cfg: RunConfig):
    return None if cfg.figure == "none" else out / f"{stem}.{cfg.figure}"


def _curve_xy(c, n=2048):
    return c(np.append(c.grid(n), c.t_hi))


def _trace(cfg: RunConfig):
    c = parse_preset(cfg.preset)
    try:
        sides = parse_sides(cfg.side, c)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    tr = divider_trace(c, n_grid=cfg.n_grid, sides=sides, n_scan=cfg.n_scan, r_max=cfg.rmax)
    return c, tr


_DIVIDER_COLUMNS = ["t1", "side", "x10", "x20", "radius", "t2", "kind", "residual_max", "feet"]


def _divider_rows(points):
    for p in points:
        yield [p.t1, p.side.value if p.side else "", p.center[0], p.center[1], p.radius,
               p.t2, p.kind.value, p.residual_max, p.foot_count]


def cmd_divider(cfg: RunConfig, command: str = "divider") -> int:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    c, tr = _trace(cfg)
    rep = divider_validate(tr.points, c, cfg.n_scan)
    chash = cfg.digest(command)
    csv_path = io.write_csv(out / f"{command}.csv", _DIVIDER_COLUMNS, _divider_rows(tr.points), chash,
                            note=f"curve={c.name} points={len(tr.points)} gaps={len(tr.gaps)} "
                                 f"truncated={tr.truncated} violations={len(rep.violations)}")
    if command == "validate":
        k_rows = [[i, p[0], p[1]] for i, p in rep.violations]
        io.write_csv(out / "violations.csv", ["index", "x10", "x20"], k_rows, chash)
    fig = _figure_path(out, command, cfg)
    if fig is not None:
        cxy = _curve_xy(c)
        ev = evolute_polyline(c, clip=2.0 * c.diameter)
        window = cfg.window or plotting.auto_window(cxy, tr.centers() if tr.points else cxy)
        iso = tr.centers([DividerKind.ZERO_RADIUS, DividerKind.ENDPOINT])
        plotting.curve_figure(fig, cxy, window, evolute_xy=ev, divider_lines=tr.polylines,
                              divider_points=iso, title=c.name)
    kinds = {k.value: len(tr.of_kind(k)) for k in DividerKind}
    print(f"{csv_path}\tpoints={len(tr.points)}\t" + "\t".join(f"{k}={v}" for k, v in kinds.items())
          + f"\tgaps={len(tr.gaps)}\tviolations={len(rep.violations)}")
    return EXIT_OK if rep.ok else EXIT_INVALID


def cmd_lclt_field(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    c = parse_preset(cfg.preset)
    cxy = _curve_xy(c)
    window = cfg.window or plotting.auto_window(cxy, pad=0.25)
    ras = pi_set_raster(c, window, cfg.res, cfg.n_scan)
    chash = cfg.digest("lclt-field")
    X, Y = np.meshgrid(ras.xs, ras.ys)
    rows = zip(X.ravel(), Y.ravel(), ras.values.ravel())
    x0, y0, x1, y1 = window
    note = f"window={x0:.17g},{y0:.17g},{x1:.17g},{y1:.17g} res={cfg.res[0]}x{cfg.res[1]}"
    csv_path = io.write_csv(out / "lclt_field.csv", ["x", "y", "k_lct"], rows, chash, note=note)
    io.write_pgm(out / "lclt_field.pgm", ras.values)
    fig = _figure_path(out, "lclt_field", cfg)
    if fig is not None:
        plotting.curve_figure(fig, cxy, window, evolute_xy=evolute_polyline(c), raster=ras, title=c.name)
    print(f"{csv_path}\tcells={ras.values.size}\tpositive={int((ras.values > 0).sum())}"
          f"\tarea={ras.positive_area():.6g}")
    return EXIT_OK


def cmd_evolute(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    c = parse_preset(cfg.preset)
    cusps = find_cusps(c, cfg.n_scan)
    chash = cfg.digest("evolute")
    rows = ([q.t, q.center[0], q.center[1], q.radius, q.kind.value] for q in cusps)
    csv_path = io.write_csv(out / "evolute.csv", ["t", "x1", "x2", "radius", "kind"], rows, chash)
    fig = _figure_path(out, "evolute", cfg)
    if fig is not None:
        cxy = _curve_xy(c)
        ev = evolute_polyline(c, clip=2.0 * c.diameter)
        cz = np.array([q.center for q in cusps]).reshape(-1, 2)
        window = cfg.window or plotting.auto_window(cxy, ev, cz)
        plotting.curve_figure(fig, cxy, window, evolute_xy=ev, cusps=cz, title=c.name)
    print(f"{csv_path}\tcusps={len(cusps)}")
    return EXIT_OK


def cmd_lattice(cfg: RunConfig, input_path) -> int:
    try:
        b = io.read_bitmap(input_path)
    except OSError as exc:
        raise UsageError(f"cannot read bitmap: {exc}") from None
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        m = MetricKind.parse(cfg.metric)
    except ValueError:
        raise UsageError(f"unknown metric {cfg.metric!r}") from None
    field = distance_transform(b, m, cfg.feet_tol)
    mask = discrete_divider(b, m, separation=cfg.separation, feet_tolerance=cfg.feet_tol,
                            thin=cfg.thin, field=field)
    chash = cfg.digest("lattice")
    stem = Path(input_path).stem
    io.write_pbm(out / f"{stem}_divider.pbm", mask)
    counts = field.feet_count
    rows = ([int(x), int(y), field.distance[y, x], int(n), bool(mask[y, x])]
            for (x, y), n in zip(field.cells, counts))
    csv_path = io.write_csv(out / f"{stem}_lattice.csv", ["x", "y", "distance", "feet_count", "divider"],
                            rows, chash, note=f"metric={m.value} size={b.width}x{b.height}")
    fig = _figure_path(out, f"{stem}_lattice", cfg)
    if fig is not None:
        plotting.lattice_figure(fig, b.foreground, mask, field.distance, title=f"{stem} ({m.value})")
    print(f"{csv_path}\tcells={int(b.foreground.sum())}\tdivider={int(mask.sum())}")
    return EXIT_OK


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(message)s")
        cfg = resolve_config(args)
        if args.command in ("divider", "validate"):
            return cmd_divider(cfg, args.command)
        if args.command == "lclt-field":
            return cmd_lclt_field(cfg)
        if args.command == "evolute":
            return cmd_evolute(cfg)
        return cmd_lattice(cfg, args.input)
    except (UsageError, DividerError, ValueError) as exc:
        print(f"dividerset: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
