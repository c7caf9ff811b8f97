"""Distance transforms and a discrete Divider on bitmaps.

Cells are addressed ``(x, y)`` with ``x`` the column and ``y`` the row.
The boundary of a bitmap is the set of foreground cells with a background
4-neighbour; cells outside the image are not background, so a bitmap with
no background cell has no boundary.

A foreground cell ``c`` at distance ``D`` from the boundary has as *feet*
every boundary cell within ``D + feet_tolerance``.  It belongs to the
discrete Divider when two of its feet are farther apart along the boundary
than ``separation * (D + feet_tolerance)``, or when it is a strict local
maximum of the distance under 8-adjacency.  A foreground component made
only of boundary cells (a line one or two cells thick) is its own Divider.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import distance_transform_cdt, distance_transform_edt, label
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path
from scipy.spatial import cKDTree

from .errors import EmptyForegroundError, NoBoundaryError
from .geometry import MetricKind

DEFAULT_FEET_TOLERANCE = 1.0
DEFAULT_SEPARATION = 2.0
_EIGHT = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]
_P_NORM = {MetricKind.EUCLIDEAN: 2, MetricKind.MAX_COORDINATE: np.inf, MetricKind.ADDITION: 1}


def _shift(a: np.ndarray, dy: int, dx: int, fill) -> np.ndarray:
    """``out[y, x] = a[y + dy, x + dx]`` with ``fill`` outside the image."""
    out = np.full_like(a, fill)
    h, w = a.shape
    ys, yd = slice(max(dy, 0), h + min(dy, 0)), slice(max(-dy, 0), h + min(-dy, 0))
    xs, xd = slice(max(dx, 0), w + min(dx, 0)), slice(max(-dx, 0), w + min(-dx, 0))
    out[yd, xd] = a[ys, xs]
    return out


@dataclass(frozen=True, eq=False)
class Bitmap:
    """Foreground cells of a ``height x width`` lattice (``True`` = shape)."""

    foreground: np.ndarray

    def __post_init__(self):
        fg = np.asarray(self.foreground, dtype=bool)
        if fg.ndim != 2 or min(fg.shape) < 1:
            raise ValueError("a bitmap needs at least one row and one column")
        object.__setattr__(self, "foreground", fg)

    @property
    def height(self) -> int:
        return self.foreground.shape[0]

    @property
    def width(self) -> int:
        return self.foreground.shape[1]

    @property
    def boundary(self) -> np.ndarray:
        fg = self.foreground
        bg_near = np.zeros_like(fg)
        for dy, dx in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            # out-of-image neighbours count as foreground
            bg_near |= ~_shift(fg, dy, dx, True)
        return fg & bg_near

    @classmethod
    def from_rows(cls, rows) -> "Bitmap":
        """Build from strings like ``"..##."`` (``#``, ``1``, ``X`` are foreground)."""
        return cls(np.array([[ch in "#1Xx" for ch in r] for r in rows], dtype=bool))

    @classmethod
    def rectangle(cls, width: int, height: int, pad: int = 1) -> "Bitmap":
        """Filled ``width x height`` rectangle framed by ``pad`` background cells."""
        fg = np.zeros((height + 2 * pad, width + 2 * pad), dtype=bool)
        fg[pad:pad + height, pad:pad + width] = True
        return cls(fg)


@dataclass(frozen=True, eq=False)
class DistanceField:
    """Distance of every foreground cell to the boundary, with its feet.

    ``distance`` is ``inf`` on background cells.  Feet are stored in
    compressed rows: the feet of foreground cell number ``i`` (row-major
    order among foreground cells) are ``boundary_cells[feet_index[feet_ptr[i]:feet_ptr[i+1]]]``.
    """

    metric: MetricKind
    distance: np.ndarray
    boundary_cells: np.ndarray  # (k, 2) as (x, y)
    cells: np.ndarray           # (m, 2) foreground cells as (x, y)
    feet_ptr: np.ndarray
    feet_index: np.ndarray
    feet_tolerance: float = DEFAULT_FEET_TOLERANCE
    _lookup: dict = field(default_factory=dict, repr=False)

    def feet(self, x: int, y: int) -> np.ndarray:
        if not self._lookup:
            self._lookup.update({(int(a), int(b)): i for i, (a, b) in enumerate(self.cells)})
        i = self._lookup[(int(x), int(y))]
        return self.boundary_cells[self.feet_index[self.feet_ptr[i]:self.feet_ptr[i + 1]]]

    @property
    def feet_count(self) -> np.ndarray:
        return np.diff(self.feet_ptr)


def _metric_distance_to(seeds: np.ndarray, m: MetricKind) -> np.ndarray:
    """Exact distance from every cell to the nearest seed cell."""
    if m is MetricKind.EUCLIDEAN:
        return distance_transform_edt(~seeds)
    kind = "chessboard" if m is MetricKind.MAX_COORDINATE else "taxicab"
    return distance_transform_cdt(~seeds, metric=kind).astype(float)


def distance_transform(b: Bitmap, m: MetricKind = MetricKind.MAX_COORDINATE,
                       feet_tolerance: float = DEFAULT_FEET_TOLERANCE) -> DistanceField:
    """Exact distance from each foreground cell to the boundary under ``m``.

    Raises
    ------
    EmptyForegroundError
        If the bitmap has no foreground cell.
    NoBoundaryError
        If no foreground cell touches the background.

    Examples
    --------
    >>> f = distance_transform(Bitmap.from_rows([".#####."]), MetricKind.MAX_COORDINATE)
    >>> f.distance[0, 1:6].tolist()
    [0.0, 1.0, 2.0, 1.0, 0.0]
    """
    fg = b.foreground
    if not fg.any():
        raise EmptyForegroundError("bitmap has no foreground cells")
    bnd = b.boundary
    if not bnd.any():
        raise NoBoundaryError("foreground never touches the background")
    dist = _metric_distance_to(bnd, m)
    dist = np.where(fg, dist, np.inf)

    by, bx = np.nonzero(bnd)
    bcells = np.column_stack([bx, by])
    fy, fx = np.nonzero(fg)
    cells = np.column_stack([fx, fy])
    tree = cKDTree(bcells.astype(float))
    radius = dist[fy, fx] + feet_tolerance + 1e-9
    hits = tree.query_ball_point(cells.astype(float), radius, p=_P_NORM[m])
    counts = np.array([len(hh) for hh in hits], dtype=np.int64)
    ptr = np.r_[0, np.cumsum(counts)]
    index = np.fromiter((j for hh in hits for j in sorted(hh)), dtype=np.int64, count=int(ptr[-1]))
    return DistanceField(m, dist, bcells, cells, ptr, index, feet_tolerance)


def boundary_geodesic(bcells: np.ndarray) -> np.ndarray:
    """Step counts along 8-connected boundary cells; ``inf`` between components."""
    k = len(bcells)
    tree = cKDTree(bcells.astype(float))
    pairs = tree.query_pairs(1.0, p=np.inf, output_type="ndarray")
    g = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(k, k)) if len(pairs) \
        else coo_matrix((k, k))
    return shortest_path(g.tocsr(), method="D", directed=False, unweighted=True)


def discrete_divider(b: Bitmap, m: MetricKind = MetricKind.MAX_COORDINATE, *,
                     separation: float = DEFAULT_SEPARATION,
                     feet_tolerance: float = DEFAULT_FEET_TOLERANCE,
                     thin: bool = False, field: DistanceField | None = None) -> np.ndarray:
    """Boolean mask of Divider cells.

    Parameters
    ----------
    separation : float
        Two feet count as separated when their boundary distance exceeds
        ``separation * (D + feet_tolerance)``.
    thin : bool
        Apply one sequential thinning pass that drops cells whose removal
        keeps their neighbourhood connected.
    """
    fg = b.foreground
    out = np.zeros_like(fg)
    if not fg.any() or not b.boundary.any():
        return out
    if field is None:
        field = distance_transform(b, m, feet_tolerance)
    dist = field.distance
    geo = boundary_geodesic(field.boundary_cells)
    for i, (x, y) in enumerate(field.cells):
        d = dist[y, x]
        if d <= 0:
            continue
        f = field.feet_index[field.feet_ptr[i]:field.feet_ptr[i + 1]]
        if len(f) < 2:
            continue
        if geo[np.ix_(f, f)].max() > separation * (d + feet_tolerance):
            out[y, x] = True

    # strict local maxima; background neighbours never block
    nb = np.full(fg.shape, -np.inf)
    d0 = np.where(fg, dist, -np.inf)
    for dy, dx in _EIGHT:
        nb = np.maximum(nb, _shift(d0, dy, dx, -np.inf))
    out |= fg & (d0 > nb)

    # components without interior cells are their own skeleton
    lab, n = label(fg, structure=np.ones((3, 3), dtype=int))
    if n:
        interior = np.bincount(lab[fg & ~b.boundary].ravel(), minlength=n + 1)
        thin_comp = (interior == 0)
        thin_comp[0] = False
        out |= thin_comp[lab]
    if thin:
        out = thin_once(out)
    return out


def thin_once(mask: np.ndarray) -> np.ndarray:
    """One raster-order pass removing cells that are not needed for 8-connectivity.

    A cell goes when it has between two and six neighbours in the mask and
    exactly one 0-to-1 transition around its 8-neighbourhood.
    """
    m = mask.copy()
    ring = [(-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1)]
    h, w = m.shape
    for y, x in zip(*np.nonzero(mask)):
        vals = [bool(m[y + dy, x + dx]) if 0 <= y + dy < h and 0 <= x + dx < w else False
                for dy, dx in ring]
        n = sum(vals)
        trans = sum((not vals[i]) and vals[(i + 1) % 8] for i in range(8))
        if 2 <= n <= 6 and trans == 1:
            m[y, x] = False
    return m
