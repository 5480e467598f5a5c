"""Gaussian kernel density on a grid, for overlaying fitted and estimated populations."""
from __future__ import annotations

import csv
import logging

import numpy as np

from .exceptions import InputError

logger = logging.getLogger(__name__)

BANDWIDTH_FLOOR = 1e-9


def nrd0_bandwidth(samples) -> float:
    """Silverman's rule of thumb, ``0.9 * min(sd, IQR / 1.34) * n^(-1/5)``.

    Identical samples get ``BANDWIDTH_FLOOR`` (with a warning).
    """
    x = np.asarray(samples, float).ravel()
    if x.size < 2:
        raise InputError("need at least two samples")
    sd = x.std(ddof=1)
    if sd == 0:
        logger.warning("all samples are identical; using bandwidth floor %g", BANDWIDTH_FLOOR)
        return BANDWIDTH_FLOOR
    q75, q25 = np.quantile(x, [0.75, 0.25])
    lo = min(sd, (q75 - q25) / 1.34)
    if not lo > 0:
        lo = sd
    return max(0.9 * lo * x.size ** -0.2, BANDWIDTH_FLOOR)


def kde_grid(samples, grid=None, bandwidth=None, n_points: int = 512, cut: float = 4.0):
    """Density of ``samples`` on ``grid``.

    The default grid spans ``cut`` bandwidths beyond the sample range.
    Returns ``(grid, density)``.
    """
    x = np.asarray(samples, float).ravel()
    h = nrd0_bandwidth(x) if bandwidth is None else float(bandwidth)
    if not h > 0:
        raise InputError("bandwidth must be > 0")
    if grid is None:
        grid = np.linspace(x.min() - cut * h, x.max() + cut * h, n_points)
    grid = np.asarray(grid, float)
    dens = np.empty_like(grid)
    chunk = max(1, 2_000_000 // max(x.size, 1))
    norm = x.size * h * np.sqrt(2.0 * np.pi)
    for start in range(0, grid.size, chunk):
        z = (grid[start:start + chunk, None] - x[None, :]) / h
        dens[start:start + chunk] = np.exp(-0.5 * z * z).sum(axis=1) / norm
    return grid, dens


def kde_export(samples, path, grid=None, bandwidth=None, n_points: int = 512) -> None:
    """Write ``x,density`` rows to a CSV file."""
    g, d = kde_grid(samples, grid, bandwidth, n_points)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "density"])
        for a, b in zip(g, d):
            w.writerow([repr(float(a)), repr(float(b))])
