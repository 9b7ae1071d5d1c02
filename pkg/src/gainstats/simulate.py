"""Seeded synthetic cohorts with controllable initial-score/gain dependence.

Each record is built from a pair of correlated standard normals (a Gaussian
copula with correlation ``rho``). The first drives the initial score, the
second the gain; the final score is then ``final_from_gain(initial, gain)``
so that recomputing the gain returns exactly the sampled value (up to
rounding). Draws whose initial score falls outside [0, 1), whose gain
exceeds 1, or whose implied final score leaves [0, 1] are rejected and
redrawn.

Randomness comes from a NumPy ``Generator`` over the counter-based Philox
bit generator, keyed by ``CohortSpec.seed``. Nothing touches global state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, List, Union

import numpy as np

from .distributions import norm_cdf
from .errors import SpecError
from .gain_core import ScoreRecord

__all__ = [
    "Uniform",
    "Normal",
    "CohortSpec",
    "MAX_ATTEMPTS",
    "make_rng",
    "generate_cohort",
    "generate_cohorts",
]

MAX_ATTEMPTS = 1_000_000
_BATCH = 4096
_norm_cdf = np.vectorize(norm_cdf, otypes=[float])


@dataclass(frozen=True)
class Uniform:
    low: float
    high: float

    def validate(self, name):
        if not (math.isfinite(self.low) and math.isfinite(self.high)):
            raise SpecError(f"{name}: bounds must be finite")
        if self.low > self.high:
            raise SpecError(f"{name}: uniform({self.low}, {self.high}) has low > high")

    def transform(self, z):
        return self.low + (self.high - self.low) * _norm_cdf(z)


@dataclass(frozen=True)
class Normal:
    mean: float
    sd: float

    def validate(self, name):
        if not (math.isfinite(self.mean) and math.isfinite(self.sd)):
            raise SpecError(f"{name}: parameters must be finite")
        if self.sd < 0:
            raise SpecError(f"{name}: normal sd must be non-negative, got {self.sd}")

    def transform(self, z):
        return self.mean + self.sd * z


Distribution = Union[Uniform, Normal]


@dataclass(frozen=True)
class CohortSpec:
    """Recipe for one synthetic cohort.

    ``initial_dist`` is truncated to [0, 1) and ``gain_dist`` to
    (-inf, 1] by rejection. ``rho`` is the latent normal correlation
    between the two draws, not the correlation of the scores themselves.
    """

    n: int
    initial_dist: Distribution = field(default_factory=lambda: Normal(0.5, 0.15))
    gain_dist: Distribution = field(default_factory=lambda: Normal(0.5, 0.2))
    rho: float = 0.0
    seed: int = 0
    cohort: str = "A"

    def validate(self):
        if int(self.n) != self.n or self.n < 0:
            raise SpecError(f"n must be a non-negative integer, got {self.n!r}")
        if not -1.0 <= self.rho <= 1.0:
            raise SpecError(f"rho must lie in [-1, 1], got {self.rho!r}")
        if not self.cohort:
            raise SpecError("cohort label must be non-empty")
        self.initial_dist.validate("initial_dist")
        self.gain_dist.validate("gain_dist")
        d = self.initial_dist
        if isinstance(d, Uniform) and (d.low >= 1.0 or d.high < 0.0):
            raise SpecError(f"initial_dist {d} puts no mass on [0, 1)")
        if isinstance(d, Normal) and d.sd == 0 and not 0.0 <= d.mean < 1.0:
            raise SpecError(f"initial_dist {d} puts no mass on [0, 1)")
        g = self.gain_dist
        if (isinstance(g, Uniform) and g.low > 1.0) or (isinstance(g, Normal) and g.sd == 0 and g.mean > 1.0):
            raise SpecError(f"gain_dist {g} puts no mass on (-inf, 1]")


def make_rng(seed: int) -> np.random.Generator:
    """Philox-backed generator; independent streams via ``SeedSequence.spawn``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def generate_cohort(spec: CohortSpec) -> List[ScoreRecord]:
    """Draw ``spec.n`` records; identical specs give identical lists.

    Raises
    ------
    SpecError
        For invalid parameters, or when ``MAX_ATTEMPTS`` draws do not yield
        ``n`` acceptable records.
    """
    spec.validate()
    rng = make_rng(spec.seed)
    n = int(spec.n)
    rho = float(spec.rho)
    comp = math.sqrt(max(0.0, 1.0 - rho * rho))
    initials: List[float] = []
    gains: List[float] = []
    attempts = 0
    while len(initials) < n:
        if attempts >= MAX_ATTEMPTS:
            raise SpecError(
                f"only {len(initials)} of {n} records accepted after {MAX_ATTEMPTS} draws; "
                "distributions are (nearly) incompatible with the score bounds"
            )
        size = min(_BATCH, MAX_ATTEMPTS - attempts)
        z = rng.standard_normal((size, 2))
        z1 = z[:, 0]
        z2 = rho * z1 + comp * z[:, 1]
        x = spec.initial_dist.transform(z1)
        g = spec.gain_dist.transform(z2)
        y = x + g * (1.0 - x)
        ok = (x >= 0.0) & (x < 1.0) & (g <= 1.0) & (y >= 0.0) & (y <= 1.0)
        accepted = np.flatnonzero(ok)[: n - len(initials)]
        initials.extend(x[accepted].tolist())
        gains.extend(g[accepted].tolist())
        attempts += size
    return [
        ScoreRecord(
            student_id=f"{spec.cohort}{i + 1:04d}",
            cohort=spec.cohort,
            initial=xi,
            final=xi + gi * (1.0 - xi),
        )
        for i, (xi, gi) in enumerate(zip(initials, gains))
    ]


def generate_cohorts(specs: Iterable[CohortSpec]) -> List[ScoreRecord]:
    """Concatenate several cohorts; their labels must be distinct."""
    records: List[ScoreRecord] = []
    seen = set()
    for spec in specs:
        if spec.cohort in seen:
            raise SpecError(f"duplicate cohort label {spec.cohort!r}")
        seen.add(spec.cohort)
        records.extend(generate_cohort(spec))
    return records
