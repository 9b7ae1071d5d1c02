"""Relative-change functions on unit-scaled test scores.

Scores live on [0, 1] (fraction of available marks). Every function here
accepts either Python floats or array-likes; scalars in give floats out,
arrays in give ``numpy.ndarray`` out. Undefined inputs raise rather than
returning ``nan`` so that bad records surface early.

Note on the change-function axioms: the gain ``(y - x) / (1 - x)`` is *not*
scale invariant (``gain(0.25, 0.375) == 1/6`` while ``gain(0.5, 0.75) == 0.5``)
but *is* continuous and strictly increasing in the final score. Folklore
sometimes states the reverse; :func:`scale_invariance_check` lets callers
confirm which property holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GainUndefined, IncreaseUndefined, LogUndefined, OutOfRange

__all__ = [
    "CHANGE_KINDS",
    "ScoreRecord",
    "check_unit",
    "individual_gain",
    "fractional_increase",
    "log_difference",
    "gain_from_increase",
    "final_from_gain",
    "hake_mean_gain",
    "change_combine",
    "scale_invariance_check",
]

CHANGE_KINDS = ("gain", "fractional_increase", "log_difference")

# Absolute slack when checking the unit interval; guards against values such
# as 0.1 * 3 / 0.3 that are mathematically 1 but land at 1 + 2**-52.
_UNIT_SLACK = 1e-12


@dataclass(frozen=True)
class ScoreRecord:
    """One student's unit-scaled initial and final scores."""

    student_id: str
    cohort: str
    initial: float
    final: float

    def __post_init__(self):
        if not self.student_id:
            raise ValueError("student_id must be non-empty")
        if not self.cohort:
            raise ValueError("cohort must be non-empty")
        check_unit(self.initial, "initial")
        check_unit(self.final, "final")


def _out(value, scalar):
    return float(value) if scalar else value


def _prep(*args):
    scalar = all(np.ndim(a) == 0 for a in args)
    arrays = [np.asarray(a, dtype=float) for a in args]
    return scalar, arrays


def check_unit(value, name="score"):
    """Raise :class:`OutOfRange` unless every entry of ``value`` lies in [0, 1]."""
    arr = np.asarray(value, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise OutOfRange(f"{name} must lie in [0, 1], got {value!r}")
    return value


def individual_gain(initial, final):
    """Fraction of the available headroom a student actually gained.

    Parameters
    ----------
    initial, final : float or array_like
        Unit-scaled initial- and final-test scores.

    Returns
    -------
    float or ndarray
        ``(final - initial) / (1 - initial)``. Always <= 1, with equality
        exactly when ``final == 1``. Negative values are kept as is.

    Raises
    ------
    GainUndefined
        If any initial score equals 1, whatever the final score.
    """
    scalar, (x, y) = _prep(initial, final)
    check_unit(x, "initial")
    check_unit(y, "final")
    if np.any(x == 1.0):
        raise GainUndefined("gain is undefined for an initial score of 1")
    return _out((y - x) / (1.0 - x), scalar)


def fractional_increase(initial, final):
    """Proportional change ``(final - initial) / initial``.

    Raises :class:`IncreaseUndefined` when an initial score is 0.
    """
    scalar, (x, y) = _prep(initial, final)
    check_unit(x, "initial")
    check_unit(y, "final")
    if np.any(x == 0.0):
        raise IncreaseUndefined("fractional increase is undefined for an initial score of 0")
    return _out((y - x) / x, scalar)


def log_difference(initial, final):
    """Natural log of ``final / initial``; additive along chains of tests."""
    scalar, (x, y) = _prep(initial, final)
    check_unit(x, "initial")
    check_unit(y, "final")
    if np.any(x == 0.0) or np.any(y == 0.0):
        raise LogUndefined("log difference is undefined when either score is 0")
    return _out(np.log(y / x), scalar)


def gain_from_increase(increase, initial):
    """Convert a fractional increase back into a gain.

    ``gain = increase * initial / (1 - initial)``. Because
    ``initial / (1 - initial)`` grows with the initial score, the same
    increase is worth less gain for weak starters than for strong ones.
    """
    scalar, (c, x) = _prep(increase, initial)
    check_unit(x, "initial")
    if np.any(x == 1.0):
        raise GainUndefined("gain is undefined for an initial score of 1")
    if np.any(x == 0.0):
        raise IncreaseUndefined("no fractional increase exists for an initial score of 0")
    return _out(c * x / (1.0 - x), scalar)


def final_from_gain(initial, gain):
    """Final score implied by an initial score and a gain.

    Inverse of :func:`individual_gain` in its second argument:
    ``final = gain + initial * (1 - gain)``.

    Raises
    ------
    OutOfRange
        If the implied final score leaves [0, 1]; this happens for gains
        more negative than ``-initial / (1 - initial)``.
    """
    scalar, (x, g) = _prep(initial, gain)
    check_unit(x, "initial")
    if np.any(x == 1.0):
        raise GainUndefined("gain is undefined for an initial score of 1")
    if np.any(g > 1.0):
        raise OutOfRange(f"gain cannot exceed 1, got {gain!r}")
    # Same value as g + x*(1 - g), but accurate as x approaches 1.
    y = x + g * (1.0 - x)
    if np.any(y < -_UNIT_SLACK) or np.any(y > 1.0 + _UNIT_SLACK):
        raise OutOfRange(f"implied final score {y!r} lies outside [0, 1]")
    return _out(np.clip(y, 0.0, 1.0), scalar)


def hake_mean_gain(mean_initial, mean_final):
    """Class-level gain computed from the two mean scores."""
    return individual_gain(mean_initial, mean_final)


def change_combine(a, b):
    """Compose two gains: ``a + b - a*b``.

    Chaining tests composes gains this way:
    ``change_combine(gain(x, y), gain(y, z)) == gain(x, z)``. 0 is the
    identity and 1 is absorbing.
    """
    scalar, (a, b) = _prep(a, b)
    if np.any(a > 1.0) or np.any(b > 1.0):
        raise OutOfRange("gains cannot exceed 1")
    # hi + lo*(1 - hi) keeps the identity, the absorbing element and
    # commutativity exact in floating point.
    hi, lo = np.maximum(a, b), np.minimum(a, b)
    return _out(hi + lo * (1.0 - hi), scalar)


_KIND_FUNCS = {
    "gain": individual_gain,
    "fractional_increase": fractional_increase,
    "log_difference": log_difference,
}


def scale_invariance_check(kind, x, y, lam, tol=1e-12):
    """Return True if ``C(lam*x, lam*y) == C(x, y)`` within ``tol``.

    ``kind`` is one of :data:`CHANGE_KINDS`. ``lam`` must be positive and
    keep both scaled scores inside [0, 1].
    """
    try:
        func = _KIND_FUNCS[kind]
    except KeyError:
        raise ValueError(f"unknown change kind {kind!r}; expected one of {CHANGE_KINDS}") from None
    if not lam > 0:
        raise ValueError("scale factor must be positive")
    if lam * max(x, y) > 1.0:
        raise OutOfRange("scaled scores must stay within [0, 1]")
    return math.isclose(func(lam * x, lam * y), func(x, y), rel_tol=0.0, abs_tol=tol)
