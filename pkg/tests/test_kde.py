import logging

import numpy as np
import pytest

from hiercompare.exceptions import InputError
from hiercompare.kde import BANDWIDTH_FLOOR, kde_export, kde_grid, nrd0_bandwidth

trapezoid = getattr(np, "trapezoid", None) or np.trapz


def test_nrd0_rule(rng):
    x = rng.normal(size=500)
    iqr = np.subtract(*np.quantile(x, [0.75, 0.25]))
    assert nrd0_bandwidth(x) == pytest.approx(0.9 * min(x.std(ddof=1), iqr / 1.34) * 500 ** -0.2)


def test_standard_normal_peak(rng):
    x = rng.normal(size=10_000)
    grid, dens = kde_grid(x, grid=np.array([0.0]))
    assert dens[0] == pytest.approx(1 / np.sqrt(2 * np.pi), rel=0.1)


def test_two_points_symmetric():
    grid, dens = kde_grid([-1.0, 1.0], grid=np.array([-1.0, 0.0, 1.0]))
    assert dens[0] == pytest.approx(dens[2], abs=1e-15)


def test_default_grid_integrates_to_one(rng):
    for x in (rng.normal(size=200), rng.standard_t(2, size=50), np.array([0.0, 0.001, 5.0])):
        grid, dens = kde_grid(x)
        assert np.all(dens >= 0)
        assert trapezoid(dens, grid) == pytest.approx(1.0, abs=0.03)


def test_identical_samples_warn(caplog):
    with caplog.at_level(logging.WARNING):
        assert nrd0_bandwidth([2.0, 2.0, 2.0]) == BANDWIDTH_FLOOR
    assert "identical" in caplog.text
    with pytest.raises(InputError):
        nrd0_bandwidth([1.0])


def test_export_csv(tmp_path, rng):
    path = tmp_path / "d.csv"
    kde_export(rng.normal(size=100), path, n_points=64)
    rows = path.read_text().splitlines()
    assert rows[0] == "x,density"
    assert len(rows) == 65
