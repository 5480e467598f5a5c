"""Friedman's three regression functions, discretized at the median into two classes."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from ..exceptions import DomainError
from .crossval import Dataset

THRESHOLD_SAMPLE = 10_000
_NOISE_GRID = {"F1": (0.5, 1.0, 2.0), "F2": (62.5, 125.0, 250.0), "F3": (0.05, 0.1, 0.2)}
_SIZES = (30, 100, 1000)
_RANDOM_FEATURES = (0, 20)


@dataclass(frozen=True)
class FriedmanSetting:
    function: str
    n: int
    noise: float
    random_features: int = 0
    threshold: Optional[float] = None

    def __post_init__(self):
        if self.function not in _NOISE_GRID:
            raise DomainError(f"unknown function {self.function!r}")
        if not self.noise > 0:
            raise DomainError("noise sd must be > 0")
        if self.n < 1 or self.random_features < 0:
            raise DomainError("n must be positive and random_features non-negative")

    @property
    def label(self) -> str:
        return f"{self.function}-n{self.n}-s{self.noise:g}-r{self.random_features}"


def friedman_grid():
    """The 54 settings: 3 functions x 3 noise levels x 3 sizes x {0, 20} random features."""
    return [
        FriedmanSetting(fn, n, noise, rf)
        for fn in ("F1", "F2", "F3")
        for noise, n, rf in itertools.product(_NOISE_GRID[fn], _SIZES, _RANDOM_FEATURES)
    ]


def _features(fn: str, size: int, rng) -> np.ndarray:
    if fn == "F1":
        return rng.random((size, 10))
    lo = np.array([0.0, 40 * np.pi, 0.0, 1.0])
    hi = np.array([100.0, 560 * np.pi, 1.0, 11.0])
    return lo + (hi - lo) * rng.random((size, 4))


def friedman_response(fn: str, X: np.ndarray) -> np.ndarray:
    """Noise-free response of function ``fn`` on the informative columns of ``X``."""
    if fn == "F1":
        x1, x2, x3, x4, x5 = X[:, :5].T
        return 10 * np.sin(np.pi * x1 * x2) + 20 * (x3 - 0.5) ** 2 + 10 * x4 + 5 * x5
    x1, x2, x3, x4 = X[:, :4].T
    inner = x2 * x3 - 1.0 / (x2 * x4)
    if fn == "F2":
        return np.sqrt(x1 ** 2 + inner ** 2)
    if fn == "F3":
        return np.arctan(inner / x1)
    raise DomainError(f"unknown function {fn!r}")


def _sample_y(fn, noise, size, rng):
    X = _features(fn, size, rng)
    return X, friedman_response(fn, X) + noise * rng.standard_normal(size)


def friedman_threshold(fn: str, noise: float, rng, size: int = THRESHOLD_SAMPLE) -> float:
    """Median of the noisy response over a fresh sample."""
    _, y = _sample_y(fn, noise, size, rng)
    return float(np.median(y))


def with_threshold(setting: FriedmanSetting, rng) -> FriedmanSetting:
    if setting.threshold is not None:
        return setting
    return replace(setting, threshold=friedman_threshold(setting.function, setting.noise, rng))


def friedman_generate(setting: FriedmanSetting, rng, size: Optional[int] = None) -> Dataset:
    """Draw ``size`` (default ``setting.n``) labeled instances.

    Random standard-normal features are appended after the original ones. A
    missing threshold is estimated first from its own fresh sample.
    """
    setting = with_threshold(setting, rng)
    size = setting.n if size is None else size
    X, y = _sample_y(setting.function, setting.noise, size, rng)
    if setting.random_features:
        X = np.hstack([X, rng.standard_normal((size, setting.random_features))])
    return Dataset(X, (y > setting.threshold).astype(int))
