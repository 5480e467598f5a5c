"""Populations from which per-data-set true differences are drawn."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..exceptions import DomainError, InputError
from ..special import cauchy_sample


@dataclass(frozen=True)
class DeltaPopulation:
    """``kind`` is ``"cauchy"``, ``"bimodal"`` or ``"explicit"``.

    Cauchy draws falling outside the open interval ``bounds`` are redrawn.
    """

    kind: str
    loc: float = 0.0
    scale: float = 1.0
    means: Tuple[float, float] = (0.0, 0.0)
    sd: float = 1.0
    weight: float = 0.5
    values: Tuple[float, ...] = ()
    bounds: Tuple[float, float] = (-1.0, 1.0)

    def __post_init__(self):
        if self.kind not in ("cauchy", "bimodal", "explicit"):
            raise DomainError(f"unknown population kind {self.kind!r}")
        if self.kind == "cauchy" and not self.scale > 0:
            raise DomainError("Cauchy scale must be > 0")
        if self.kind == "bimodal" and not (self.sd > 0 and 0.0 <= self.weight <= 1.0):
            raise DomainError("bimodal population needs sd > 0 and weight in [0, 1]")
        if self.kind == "explicit" and len(self.values) == 0:
            raise DomainError("explicit population needs values")
        if not self.bounds[0] < self.bounds[1]:
            raise DomainError("bounds must be increasing")

    @classmethod
    def cauchy(cls, loc, scale, bounds=(-1.0, 1.0)):
        return cls("cauchy", loc=loc, scale=scale, bounds=tuple(bounds))

    @classmethod
    def bimodal(cls, mu1=0.005, mu2=0.02, sd=0.001, weight=0.5):
        return cls("bimodal", means=(mu1, mu2), sd=sd, weight=weight)

    @classmethod
    def explicit(cls, values: Sequence[float]):
        return cls("explicit", values=tuple(float(v) for v in values))


def sample_deltas(pop: DeltaPopulation, q: int, rng) -> np.ndarray:
    """Draw ``q`` i.i.d. differences (explicit lists are returned in order)."""
    if q < 1:
        raise DomainError("q must be >= 1")
    if pop.kind == "explicit":
        if q > len(pop.values):
            raise InputError(f"explicit population has only {len(pop.values)} values")
        return np.array(pop.values[:q])
    if pop.kind == "bimodal":
        first = rng.random(q) < pop.weight
        centers = np.where(first, pop.means[0], pop.means[1])
        return centers + pop.sd * rng.standard_normal(q)
    lo, hi = pop.bounds
    out = cauchy_sample(pop.loc, pop.scale, rng, q)
    bad = ~((out > lo) & (out < hi))
    while bad.any():
        out[bad] = cauchy_sample(pop.loc, pop.scale, rng, int(bad.sum()))
        bad = ~((out > lo) & (out < hi))
    return out
