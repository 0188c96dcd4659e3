"""Half-maximum width measurement on sampled profiles."""
from __future__ import annotations

import numpy as np


def _crossing(x0, x1, y0, y1, level):
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0)


def half_max_regions(x, y, fraction=0.5):
    """Contiguous regions where ``y >= fraction * max(y)``.

    Returns a list of ``(left, right)`` edges, each located by linear
    interpolation between the bracketing samples. A region touching the end
    of the array is clipped to the last sample.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    level = fraction * y.max()
    above = y >= level
    edges = np.flatnonzero(np.diff(above.astype(np.int8)))
    starts = list(edges[~above[edges]] + 1)
    stops = list(edges[above[edges]])
    if above[0]:
        starts.insert(0, 0)
    if above[-1]:
        stops.append(len(y) - 1)
    regions = []
    for i0, i1 in zip(starts, stops):
        left = x[i0] if i0 == 0 else _crossing(x[i0 - 1], x[i0], y[i0 - 1], y[i0], level)
        right = x[i1] if i1 == len(y) - 1 else _crossing(x[i1], x[i1 + 1], y[i1], y[i1 + 1], level)
        regions.append((left, right))
    return regions


def fwhm(x, y):
    """Full width at half maximum of a single-lobed profile."""
    regions = half_max_regions(x, y)
    return regions[0][1] - regions[0][0] if len(regions) == 1 else float("nan")
