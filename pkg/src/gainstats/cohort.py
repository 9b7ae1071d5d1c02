"""Per-cohort gain analytics.

Turns :class:`ScoreRecord` lists into :class:`GainRecord` lists carrying
gains, z-scores and the auxiliary change functions, then derives cohort
summaries: mean individual gain versus Hake's class gain, z-score tails,
the mean-split quadrant table and the very-high / low-gain group labels.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .descriptive import z_scores
from .errors import DegenerateSample, EmptySample
from .gain_core import (
    ScoreRecord,
    fractional_increase,
    hake_mean_gain,
    individual_gain,
    log_difference,
)

__all__ = [
    "GainRecord",
    "QuadrantCounts",
    "GainGroup",
    "group_by_cohort",
    "build_gain_records",
    "mean_individual_gain",
    "hake_vs_individual",
    "extreme_gain_counts",
    "quadrant_counts",
    "classify_gain",
    "classify_gain_groups",
]


@dataclass(frozen=True)
class GainRecord:
    """A score record plus every per-student statistic derived from it.

    ``None`` marks an undefined value: ``gain`` when the initial score is 1,
    ``increase`` when it is 0, ``log_diff`` when either score is 0. The
    z-scores are ``None`` when the record has no gain or when the reference
    population has no spread in that variable.
    """

    record: ScoreRecord
    gain: Optional[float]
    increase: Optional[float]
    log_diff: Optional[float]
    initial_z: Optional[float] = None
    gain_z: Optional[float] = None

    @property
    def student_id(self) -> str:
        return self.record.student_id

    @property
    def cohort(self) -> str:
        return self.record.cohort

    @property
    def initial(self) -> float:
        return self.record.initial

    @property
    def final(self) -> float:
        return self.record.final


@dataclass(frozen=True)
class QuadrantCounts:
    """Initial score vs gain, each split at its cohort mean (ties go above)."""

    below_below: int
    below_above: int
    above_below: int
    above_above: int

    @property
    def total(self) -> int:
        return self.below_below + self.below_above + self.above_below + self.above_above


class GainGroup(str, enum.Enum):
    VERY_HIGH = "VERY_HIGH"
    LOW_A = "LOW_A"
    LOW_B = "LOW_B"
    LOW_C = "LOW_C"
    NONE = "NONE"


def _safe(func, x, y):
    try:
        return func(x, y)
    except ValueError:
        return None


def _raw_record(rec) -> ScoreRecord:
    return rec.record if isinstance(rec, GainRecord) else rec


def group_by_cohort(records: Iterable) -> Dict[str, list]:
    """Group records by cohort label, preserving input order within groups."""
    groups: Dict[str, list] = {}
    for rec in records:
        groups.setdefault(rec.cohort, []).append(rec)
    return groups


def build_gain_records(records: Sequence[ScoreRecord], pooled_z: bool = False) -> List[GainRecord]:
    """Compute gains, auxiliary change values and z-scores for each record.

    Z-scores are standardized within each cohort unless ``pooled_z`` is set,
    in which case all records form one reference population. Records with
    an undefined gain are kept but excluded from the gain moments; they get
    ``gain_z = None``. If a cohort's initial scores are all equal the
    ``initial_z`` fields are ``None``.

    Raises
    ------
    DegenerateSample
        If a reference population has fewer than two defined gains or all
        of its gains are equal.
    """
    base = []
    for rec in records:
        rec = _raw_record(rec)
        base.append(
            GainRecord(
                record=rec,
                gain=_safe(individual_gain, rec.initial, rec.final),
                increase=_safe(fractional_increase, rec.initial, rec.final),
                log_diff=_safe(log_difference, rec.initial, rec.final),
            )
        )
    if not base:
        return []

    if pooled_z:
        populations = {"": list(range(len(base)))}
    else:
        populations = {}
        for i, g in enumerate(base):
            populations.setdefault(g.cohort, []).append(i)

    initial_z: Dict[int, Optional[float]] = {}
    gain_z: Dict[int, Optional[float]] = {}
    for label, idx in populations.items():
        where = f" in cohort {label!r}" if label else ""
        defined = [i for i in idx if base[i].gain is not None]
        gains = [base[i].gain for i in defined]
        try:
            gz = z_scores(gains)
        except (DegenerateSample, EmptySample) as exc:
            raise DegenerateSample(f"gain z-scores undefined{where}: {exc}") from None
        gain_z.update(zip(defined, (float(z) for z in gz)))
        # Initial z uses the same population as the gain moments.
        initials = [base[i].initial for i in defined]
        try:
            iz = [float(z) for z in z_scores(initials)]
        except DegenerateSample:
            iz = [None] * len(defined)
        initial_z.update(zip(defined, iz))

    return [
        GainRecord(
            record=g.record,
            gain=g.gain,
            increase=g.increase,
            log_diff=g.log_diff,
            initial_z=initial_z.get(i),
            gain_z=gain_z.get(i),
        )
        for i, g in enumerate(base)
    ]


def _defined_pairs(records) -> Tuple[np.ndarray, np.ndarray]:
    xs, gs = [], []
    for rec in records:
        rec = _raw_record(rec)
        if rec.initial < 1.0:
            xs.append(rec.initial)
            gs.append(individual_gain(rec.initial, rec.final))
    if not xs:
        raise EmptySample("no record with a defined gain")
    return np.array(xs), np.array(gs)


def mean_individual_gain(records) -> float:
    """Arithmetic mean of the per-student gains (undefined gains skipped)."""
    return float(_defined_pairs(records)[1].mean())


def hake_vs_individual(records) -> Tuple[float, float]:
    """Return ``(hake_gain, mean_individual_gain)`` for one group of records.

    Hake's gain is the gain of the mean scores; the other is the mean of
    the gains. The two coincide when every initial score is the same and
    generally differ otherwise: for (0.5 -> 0.6) and (0.8 -> 1.0) they are
    3/7 and 0.6. Records whose gain is undefined are left out of both.
    """
    raw = [r for r in map(_raw_record, records) if r.initial < 1.0]
    if not raw:
        raise EmptySample("no record with a defined gain")
    mean_initial = float(np.mean([r.initial for r in raw]))
    mean_final = float(np.mean([r.final for r in raw]))
    return hake_mean_gain(mean_initial, mean_final), mean_individual_gain(raw)


def extreme_gain_counts(records: Sequence[GainRecord], z_threshold: float = 1.0) -> Tuple[int, int]:
    """Count records with ``gain_z >= z_threshold`` and ``gain_z <= -z_threshold``."""
    if not z_threshold > 0:
        raise ValueError("z_threshold must be positive")
    zs = [r.gain_z for r in records if isinstance(r, GainRecord) and r.gain_z is not None]
    if not zs:
        raise DegenerateSample("no gain z-scores available")
    zs = np.array(zs)
    return int(np.sum(zs >= z_threshold)), int(np.sum(zs <= -z_threshold))


def _split_point(v: np.ndarray) -> float:
    # Summation rounding can push the mean of identical values above them.
    return float(v[0]) if np.all(v == v[0]) else float(v.mean())


def quadrant_counts(records) -> QuadrantCounts:
    """Cross-tabulate initial score and gain, each split at its mean.

    Only records with a defined gain take part. A value equal to its mean
    counts as above average.
    """
    xs, gs = _defined_pairs(records)
    hi_x = xs >= _split_point(xs)
    hi_g = gs >= _split_point(gs)
    return QuadrantCounts(
        below_below=int(np.sum(~hi_x & ~hi_g)),
        below_above=int(np.sum(~hi_x & hi_g)),
        above_below=int(np.sum(hi_x & ~hi_g)),
        above_above=int(np.sum(hi_x & hi_g)),
    )


def classify_gain(gain_z: float, initial_z: Optional[float]) -> GainGroup:
    """Label one student from their gain and initial-score z-scores.

    Very high gain is ``gain_z > 1``. Among ``gain_z < -1`` the low-gain
    groups are checked most specific first: A (initial_z > 2), then
    B (initial_z > 0), then C (initial_z < -1). Low gainers with
    ``-1 <= initial_z <= 0`` fit none of the three and get NONE.
    """
    if gain_z > 1.0:
        return GainGroup.VERY_HIGH
    if gain_z < -1.0 and initial_z is not None:
        if initial_z > 2.0:
            return GainGroup.LOW_A
        if initial_z > 0.0:
            return GainGroup.LOW_B
        if initial_z < -1.0:
            return GainGroup.LOW_C
    return GainGroup.NONE


def classify_gain_groups(records: Sequence[GainRecord]) -> List[GainGroup]:
    """Apply :func:`classify_gain` to each record; undefined gains get NONE."""
    labels = []
    for r in records:
        if not isinstance(r, GainRecord):
            raise TypeError("classify_gain_groups needs GainRecord inputs (see build_gain_records)")
        labels.append(GainGroup.NONE if r.gain_z is None else classify_gain(r.gain_z, r.initial_z))
    return labels
