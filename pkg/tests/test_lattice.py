import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dividerset.errors import EmptyForegroundError, NoBoundaryError
from dividerset.geometry import MetricKind
from dividerset.lattice import Bitmap, boundary_geodesic, discrete_divider, distance_transform, thin_once
from oracles import lattice_distance, lattice_divider

METRICS = {"euclid": MetricKind.EUCLIDEAN, "maxcoord": MetricKind.MAX_COORDINATE, "add": MetricKind.ADDITION}


def centerline_widths(mask, w, h, pad=1):
    """Divider cells per cross-section in the part of the long axis away from the ends."""
    core = mask[pad:pad + h, pad:pad + w]
    if w < h:
        core, w, h = core.T, h, w
    cols = [x for x in range(w) if min(x, w - 1 - x) >= h]
    return {int(core[:, x].sum()) for x in cols}


def random_polyomino(rng, n=40, k=4):
    g = np.zeros((n, n), dtype=bool)
    for _ in range(k):
        x0, y0 = rng.integers(1, n - 6, 2)
        w, h = rng.integers(3, n // 2, 2)
        g[y0:min(y0 + h, n - 1), x0:min(x0 + w, n - 1)] = True
    return Bitmap(g)


def test_row_distances():
    f = distance_transform(Bitmap.from_rows([".#####."]), MetricKind.MAX_COORDINATE)
    assert f.distance[0, 1:6].tolist() == [0, 1, 2, 1, 0]


def test_single_cell():
    b = Bitmap.from_rows(["...", ".#.", "..."])
    for m in MetricKind:
        f = distance_transform(b, m)
        assert f.distance[1, 1] == 0
        assert f.feet(1, 1).tolist() == [[1, 1]]


def test_rectangle_cell_distance():
    b = Bitmap.rectangle(10, 4)
    f = distance_transform(b, MetricKind.MAX_COORDINATE)
    # cell (5, 2) of the rectangle sits at (6, 3) in the padded image
    assert f.distance[3, 6] == 1


def test_boundary_is_four_adjacent():
    b = Bitmap.from_rows([".....", ".###.", ".###.", ".###.", "....."])
    assert b.boundary.sum() == 8 and not b.boundary[2, 2]
    assert not Bitmap(np.ones((3, 3), bool)).boundary.any()


def test_errors_and_degenerate_grids():
    with pytest.raises(EmptyForegroundError):
        distance_transform(Bitmap(np.zeros((4, 4), bool)), MetricKind.MAX_COORDINATE)
    full = Bitmap(np.ones((6, 6), bool))
    with pytest.raises(NoBoundaryError):
        distance_transform(full, MetricKind.MAX_COORDINATE)
    assert not discrete_divider(full).any()
    assert not discrete_divider(Bitmap(np.zeros((4, 4), bool))).any()
    with pytest.raises(ValueError):
        Bitmap(np.zeros((0, 3), bool))


@settings(max_examples=60, deadline=None)
@given(fg=st.integers(1, 32).flatmap(
    lambda h: st.integers(1, 32).flatmap(lambda w: arrays(bool, (h, w), elements=st.booleans()))),
    metric=st.sampled_from(sorted(METRICS)))
def test_distance_matches_brute_force(fg, metric):
    b = Bitmap(fg)
    if not fg.any() or not b.boundary.any():
        return
    f = distance_transform(b, METRICS[metric])
    ref = lattice_distance(fg, metric)
    assert np.array_equal(np.where(fg, f.distance, -1), np.where(fg, ref, -1))


@pytest.mark.parametrize("metric", sorted(METRICS))
def test_distance_is_lipschitz(metric, rng):
    b = random_polyomino(rng)
    fg = b.foreground
    d = np.where(fg, distance_transform(b, METRICS[metric]).distance, 0.0)
    step = {"euclid": np.sqrt(2), "maxcoord": 1, "add": 2}[metric]
    for sl_a, sl_b in (((slice(None), slice(1, None)), (slice(None), slice(None, -1))),
                       ((slice(1, None), slice(1, None)), (slice(None, -1), slice(None, -1)))):
        both = fg[sl_a] & fg[sl_b]
        assert np.all(np.abs(d[sl_a] - d[sl_b])[both] <= step + 1e-12)
    assert np.all(d[b.boundary] == 0)


def test_feet_are_nearest_boundary_cells(rng):
    b = random_polyomino(rng, n=24)
    f = distance_transform(b, MetricKind.MAX_COORDINATE)
    for (x, y) in f.cells[::7]:
        feet = f.feet(x, y)
        d = np.maximum(np.abs(feet[:, 0] - x), np.abs(feet[:, 1] - y))
        assert d.min() == f.distance[y, x]
        assert d.max() <= f.distance[y, x] + f.feet_tolerance


@pytest.mark.parametrize("metric", sorted(METRICS))
def test_two_feet_rule_matches_oracle(metric, rng):
    for _ in range(6):
        b = random_polyomino(rng, n=14, k=3)
        mask = discrete_divider(b, METRICS[metric])
        ref = lattice_divider(b.foreground, metric)
        # the library adds strict local maxima and thin components on top
        assert np.all(mask[ref])
        extra = mask & ~ref
        f = distance_transform(b, METRICS[metric])
        for y, x in zip(*np.nonzero(extra)):
            d = f.distance
            nb = d[max(0, y - 1):y + 2, max(0, x - 1):x + 2]
            nb = np.where(b.foreground[max(0, y - 1):y + 2, max(0, x - 1):x + 2], nb, -np.inf)
            assert d[y, x] == 0 or (nb < d[y, x]).sum() == (nb > -np.inf).sum() - 1


def test_rectangle_examples():
    even = discrete_divider(Bitmap.rectangle(10, 4))
    assert even[1:-1, 1:-1].astype(int).tolist() == [
        [0] * 10,
        [0] + [1] * 8 + [0],
        [0] + [1] * 8 + [0],
        [0] * 10,
    ]
    odd = discrete_divider(Bitmap.rectangle(11, 5))[1:-1, 1:-1]
    assert odd[2, 1:-1].all() and odd[2].sum() == 11 - 2
    assert odd[1].sum() == 4 and odd[0].sum() == 0  # corner bisector cells
    assert centerline_widths(odd, 11, 5, pad=0) == {1}


@pytest.mark.parametrize("h", [3, 4, 5, 8, 13, 20])
def test_centerline_width_by_parity(h):
    w = 2 * h + 6
    mask = discrete_divider(Bitmap.rectangle(w, h))
    assert centerline_widths(mask, w, h) == {2 if h % 2 == 0 else 1}
    tall = discrete_divider(Bitmap.rectangle(h, w))
    assert centerline_widths(tall, h, w) == {2 if h % 2 == 0 else 1}


def test_thin_strips_are_their_own_divider():
    for h in (1, 2):
        mask = discrete_divider(Bitmap.rectangle(12, h))
        assert mask.sum() == 12 * h


def test_ridge_property_on_polyominoes(rng):
    good = total = 0
    for _ in range(25):
        b = random_polyomino(rng)
        f = distance_transform(b, MetricKind.MAX_COORDINATE)
        mask = discrete_divider(b, field=f)
        d = np.pad(np.where(b.foreground, f.distance, -np.inf), 1, constant_values=-np.inf)
        for y, x in zip(*np.nonzero(mask & ~b.boundary)):
            win = d[y:y + 3, x:x + 3]
            total += 1
            good += (win <= win[1, 1]).sum() - 1 >= 6
    assert total > 200 and good / total >= 0.95


def test_metric_sensitivity_on_l_shape():
    g = np.zeros((24, 24), bool)
    g[2:22, 2:9] = True
    g[15:22, 2:22] = True
    b = Bitmap(g)
    e = discrete_divider(b, MetricKind.EUCLIDEAN)
    m = discrete_divider(b, MetricKind.MAX_COORDINATE)
    assert (e ^ m).any()


def test_divider_is_connected_on_rectangles():
    from scipy.ndimage import label
    for w, h in [(10, 4), (11, 5), (30, 9), (17, 17), (40, 12)]:
        _, n = label(discrete_divider(Bitmap.rectangle(w, h)), structure=np.ones((3, 3)))
        assert n == 1


def test_boundary_geodesic_steps():
    cells = np.array([[0, 0], [1, 0], [2, 1], [3, 1], [9, 9]])
    g = boundary_geodesic(cells)
    assert g[0, 3] == 3 and np.isinf(g[0, 4])


def test_thinning_keeps_connectivity():
    from scipy.ndimage import label
    mask = discrete_divider(Bitmap.rectangle(20, 6))
    thin = thin_once(mask)
    assert thin.sum() < mask.sum() and np.all(mask[thin])
    _, n = label(thin, structure=np.ones((3, 3)))
    assert n == 1
    assert np.array_equal(discrete_divider(Bitmap.rectangle(20, 6), thin=True), thin)
