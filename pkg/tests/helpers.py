"""Random configurations and independent oracles shared by the tests."""

from __future__ import annotations

import random
from fractions import Fraction as Q

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from vatcarto.cartography import Presentation
from vatcarto.cuts import FocusError, SignChoice, order_focus
from vatcarto.region import PLBoundaryFn, Region

# Raster window for the flood-fill oracle.  Focus x values are k + 1/3 and
# focus y values multiples of 1/2; with these windows no cell centre or row
# centre can ever land exactly on a cut or a focus value.
ORACLE_Y = (-3, 8)


def random_region(rng: random.Random, width: int | None = None) -> Region:
    """Region over [0, W] with PL lower boundary in [-2, 0] and upper in [4, 6]."""
    w = width or rng.randint(4, 8)
    xs = sorted({0, w} | {rng.randint(1, w - 1) for _ in range(rng.randint(0, 3))})
    lower = PLBoundaryFn(xs, [rng.randint(-2, 0) for _ in xs])
    upper = PLBoundaryFn(xs, [rng.randint(4, 6) for _ in xs])
    return Region(0, w, lower, upper)


def random_focus_points(rng: random.Random, region: Region, n: int, share: float = 0.5):
    """n distinct points with x = k + 1/3 and y in {1, 3/2, ..., 3}."""
    w = int(region.x_max)
    lines = []
    pts = set()
    while len(pts) < n:
        if lines and rng.random() < share:
            x = rng.choice(lines)
        else:
            x = Q(rng.randint(0, w - 1)) + Q(1, 3)
            lines.append(x)
        pts.add((x, Q(rng.randint(2, 6), 2)))
    return sorted(pts)


def random_signs(rng: random.Random, n: int) -> SignChoice:
    return SignChoice(tuple(rng.choice((1, -1)) for _ in range(n)))


def random_presentation(rng: random.Random, n_max: int = 5, simple: bool = True) -> Presentation:
    while True:
        region = random_region(rng)
        n = rng.randint(0, n_max)
        pts = random_focus_points(rng, region, n)
        offset = rng.randint(-n, 0) if n else 0
        mult = None if simple else [rng.randint(1, 2) for _ in pts]
        try:
            focus = order_focus(pts, offset, region, mult)
        except FocusError:
            continue
        return Presentation(region, focus, random_signs(rng, n), rng.choice((1, -1)))


def random_rational(rng: random.Random, lo: int, hi: int, den: int = 12) -> Q:
    return Q(rng.randint(lo * den, hi * den), den)


def raster_components(region: Region, focus, eps, n: int = 400) -> int:
    """Connected components of B minus the cuts on an n x n cell raster.

    Cells are kept when their centre lies inside B.  Neighbouring cells are
    joined unless the segment between their centres crosses a cut; cuts are
    vertical, so only horizontal joins can be severed.
    """
    x0, x1 = float(region.x_min), float(region.x_max)
    y0, y1 = ORACLE_Y
    xc = x0 + (np.arange(n) + 0.5) * (x1 - x0) / n
    yc = y0 + (np.arange(n) + 0.5) * (y1 - y0) / n
    lo = np.interp(xc, [float(v) for v in region.lower.xs], [float(v) for v in region.lower.ys])
    hi = np.interp(xc, [float(v) for v in region.upper.xs], [float(v) for v in region.upper.ys])
    inside = (yc[None, :] > lo[:, None]) & (yc[None, :] < hi[:, None])  # [ix, iy]

    blocked = np.zeros((n - 1, n), dtype=bool)  # join between column ix and ix+1
    for (fx, fy), e in zip(focus.points, eps):
        fx = float(fx)
        col = np.searchsorted(xc, fx) - 1
        if 0 <= col < n - 1:
            blocked[col] |= (e * yc >= e * float(fy))

    idx = -np.ones((n, n), dtype=np.int64)
    idx[inside] = np.arange(int(inside.sum()))
    rows, cols = [], []
    h = inside[:-1, :] & inside[1:, :] & ~blocked
    rows.append(idx[:-1, :][h])
    cols.append(idx[1:, :][h])
    v = inside[:, :-1] & inside[:, 1:]
    rows.append(idx[:, :-1][v])
    cols.append(idx[:, 1:][v])
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    m = int(inside.sum())
    graph = coo_matrix((np.ones(len(r)), (r, c)), shape=(m, m))
    return connected_components(graph, directed=False)[0]


def segment_samples(focus):
    """One sample per open sub-segment of every focus line, plus points off the lines."""
    out = []
    for x in focus.xs():
        ys = sorted(p[1] for p in focus.points if p[0] == x)
        out += [(x, ys[0] - 1)] + [(x, (a + b) / 2) for a, b in zip(ys, ys[1:])] + [(x, ys[-1] + 1)]
    return out
