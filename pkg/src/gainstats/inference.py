"""Two-sample comparisons and low-degree least-squares fits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Tuple

import numpy as np

from .distributions import norm_cdf, t_ppf, t_two_sided_p
from .errors import DegenerateSample, EmptySample, RankDeficient

__all__ = [
    "TTestResult",
    "CohortComparison",
    "RegressionFit",
    "welch_t_test",
    "mean_diff_ci",
    "cohens_d",
    "probability_of_superiority",
    "compare_cohorts",
    "pearson_r2",
    "polyfit_r2",
]

RANK_TOL = 1e-12


class TTestResult(NamedTuple):
    t: float
    df: float
    p: float


@dataclass(frozen=True)
class CohortComparison:
    """Everything reported when comparing the gains of two cohorts.

    ``diff`` and the interval are ``mean_a - mean_b``; ``cohens_d`` is signed
    the other way round (positive when cohort b is ahead).
    """

    label_a: str
    label_b: str
    n_a: int
    n_b: int
    mean_a: float
    mean_b: float
    diff: float
    level: float
    ci_low: float
    ci_high: float
    t_stat: float
    df: float
    p_value: float
    cohens_d: float
    prob_superiority: float
    equal_var: bool = False


@dataclass(frozen=True)
class RegressionFit:
    degree: int
    coefficients: Tuple[float, ...]  # ascending powers
    r_squared: float

    def predict(self, x):
        return np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), self.coefficients)


def _sample(values, name) -> np.ndarray:
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size == 0:
        raise EmptySample(f"sample {name} is empty")
    if arr.size < 2:
        raise DegenerateSample(f"sample {name} needs at least two observations")
    return arr


def _t_parts(a, b, equal_var):
    a = _sample(a, "a")
    b = _sample(b, "b")
    na, nb = a.size, b.size
    va, vb = a.var(ddof=1), b.var(ddof=1)
    if va == 0.0 and vb == 0.0:
        raise DegenerateSample("both samples have zero variance")
    diff = a.mean() - b.mean()
    if equal_var:
        pooled = ((na - 1) * va + (nb - 1) * vb) / (na + nb - 2)
        se = math.sqrt(pooled * (1.0 / na + 1.0 / nb))
        df = float(na + nb - 2)
    else:
        qa, qb = va / na, vb / nb
        se = math.sqrt(qa + qb)
        df = (qa + qb) ** 2 / (qa**2 / (na - 1) + qb**2 / (nb - 1))
    return float(diff), se, float(df)


def welch_t_test(a: Sequence[float], b: Sequence[float], equal_var: bool = False) -> TTestResult:
    """Two-sample t-test for a difference in means.

    Unequal variances (Welch-Satterthwaite df) by default; ``equal_var=True``
    gives the classical pooled-variance test. The p-value is two-sided.
    """
    diff, se, df = _t_parts(a, b, equal_var)
    t = diff / se
    return TTestResult(t=t, df=df, p=t_two_sided_p(t, df))


def mean_diff_ci(
    a: Sequence[float], b: Sequence[float], level: float = 0.95, equal_var: bool = False
) -> Tuple[float, float]:
    """Confidence interval for ``mean(a) - mean(b)``."""
    if not 0.0 < level < 1.0:
        raise ValueError(f"confidence level must lie in (0, 1), got {level!r}")
    diff, se, df = _t_parts(a, b, equal_var)
    half = t_ppf(0.5 + level / 2.0, df) * se
    return diff - half, diff + half


def cohens_d(a: Sequence[float], b: Sequence[float]) -> float:
    """Standardized mean difference ``(mean_b - mean_a) / pooled_sd``."""
    a = _sample(a, "a")
    b = _sample(b, "b")
    na, nb = a.size, b.size
    pooled = ((na - 1) * a.var(ddof=1) + (nb - 1) * b.var(ddof=1)) / (na + nb - 2)
    if pooled == 0.0:
        raise DegenerateSample("pooled variance is zero")
    return float((b.mean() - a.mean()) / math.sqrt(pooled))


def probability_of_superiority(d: float) -> float:
    """Common-language effect size ``Phi(d / sqrt(2))``.

    Probability that a random member of the higher group outscores a random
    member of the lower one, assuming normal scores with a shared variance.
    For d = 0.37 this is about 0.603.
    """
    return norm_cdf(d / math.sqrt(2.0))


def compare_cohorts(
    a: Sequence[float],
    b: Sequence[float],
    level: float = 0.95,
    equal_var: bool = False,
    labels: Tuple[str, str] = ("a", "b"),
) -> CohortComparison:
    a = _sample(a, "a")
    b = _sample(b, "b")
    res = welch_t_test(a, b, equal_var=equal_var)
    lo, hi = mean_diff_ci(a, b, level=level, equal_var=equal_var)
    d = cohens_d(a, b)
    return CohortComparison(
        label_a=labels[0],
        label_b=labels[1],
        n_a=int(a.size),
        n_b=int(b.size),
        mean_a=float(a.mean()),
        mean_b=float(b.mean()),
        diff=float(a.mean() - b.mean()),
        level=level,
        ci_low=lo,
        ci_high=hi,
        t_stat=res.t,
        df=res.df,
        p_value=res.p,
        cohens_d=d,
        prob_superiority=probability_of_superiority(d),
        equal_var=equal_var,
    )


def _paired(x, y):
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size != y.size:
        raise ValueError(f"x and y differ in length ({x.size} vs {y.size})")
    if x.size == 0:
        raise EmptySample("no observations")
    return x, y


def pearson_r2(x: Sequence[float], y: Sequence[float]) -> float:
    """Squared Pearson correlation."""
    x, y = _paired(x, y)
    if x.size < 2:
        raise DegenerateSample("correlation needs at least two pairs")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx, syy = np.dot(dx, dx), np.dot(dy, dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateSample("correlation is undefined for a constant variable")
    r2 = np.dot(dx, dy) ** 2 / (sxx * syy)
    return float(min(1.0, r2))


def polyfit_r2(x: Sequence[float], y: Sequence[float], degree: int = 1) -> RegressionFit:
    """Least-squares polynomial of degree 1 or 2 and its r².

    Solved through the normal equations on a centred, scaled abscissa
    ``u = (x - mean) / scale``; the coefficients are then mapped back to
    powers of ``x``.

    Raises
    ------
    RankDeficient
        Fewer than ``degree + 2`` points, or too few distinct x values.
    DegenerateSample
        Constant ``y`` (r² undefined).
    """
    if degree not in (1, 2):
        raise ValueError("degree must be 1 or 2")
    x, y = _paired(x, y)
    if x.size < degree + 2:
        raise RankDeficient(f"degree {degree} fit needs at least {degree + 2} points, got {x.size}")
    dy = y - y.mean()
    sst = float(np.dot(dy, dy))
    if sst == 0.0:
        raise DegenerateSample("r² is undefined for constant y")

    centre = x.mean()
    scale = np.abs(x - centre).max()
    if scale == 0.0:
        raise RankDeficient("all x values are equal")
    u = (x - centre) / scale
    design = np.vander(u, degree + 1, increasing=True)
    normal = design.T @ design
    eig = np.linalg.eigvalsh(normal)
    if eig[0] <= RANK_TOL * eig[-1]:
        raise RankDeficient(f"too few distinct x values for a degree {degree} fit")
    beta_u = np.linalg.solve(normal, design.T @ y)

    # p(x) = sum_k beta_u[k] * ((x - centre) / scale)**k, expanded in powers of x.
    coef = np.zeros(degree + 1)
    shift = np.array([-centre / scale, 1.0 / scale])
    term = np.array([1.0])
    for k in range(degree + 1):
        coef[: term.size] += beta_u[k] * term
        term = np.polynomial.polynomial.polymul(term, shift)

    resid = y - design @ beta_u
    sse = float(np.dot(resid, resid))
    r2 = min(1.0, max(0.0, 1.0 - sse / sst))
    return RegressionFit(degree=degree, coefficients=tuple(float(c) for c in coef), r_squared=r2)
