"""Symmetric fuzzy intervals, flexible bounds, and fuzzy cost goals.

A fuzzy interval is described here by a nested family of symmetric cuts
around a nominal value: the cut at confidence level 0 spans the full support
``[nominal - deviation, nominal + deviation]`` and shrinks to the nominal
point at level 1.  Read as a possibility distribution, the cut at level
``lam`` collects every value whose plausibility is at least ``lam``, so the
chance that the true value falls inside it is at least ``1 - lam``.

Flexible right-hand sides and cost goals are the one-sided counterpart: a
crisp threshold that may be exceeded by a graded slack, largest at level 0
and vanishing at level 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

__all__ = [
    "FuzzyInterval",
    "SoftBound",
    "FuzzyGoal",
    "joint_possibility",
]


def _check_level(lam: float) -> None:
    # NaN fails both comparisons and is rejected too.
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"confidence level must lie in [0, 1], got {lam!r}")


@dataclass(frozen=True)
class FuzzyInterval:
    """Symmetric fuzzy quantity ``nominal +- deviation`` with shape ``shape``.

    The half-width of the level-``lam`` cut is ``deviation * (1 - lam**shape)``.
    Small shapes concentrate plausibility near the nominal value; large shapes
    approach a plain interval where every support value is fully possible.
    """

    nominal: float
    deviation: float
    shape: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.nominal) and math.isfinite(self.deviation)
                and math.isfinite(self.shape)):
            raise ValueError("fuzzy interval parameters must be finite")
        if self.deviation < 0:
            raise ValueError(f"deviation must be nonnegative, got {self.deviation}")
        if self.shape <= 0:
            raise ValueError(f"shape must be positive, got {self.shape}")

    def alpha_at(self, lam: float) -> float:
        """Half-width of the cut at level ``lam``.

        Exactly ``deviation`` at level 0 and exactly 0 at level 1, strictly
        decreasing in between whenever ``deviation > 0``.
        """
        _check_level(lam)
        return self.deviation * (1.0 - lam ** self.shape)

    def lambda_cut(self, lam: float) -> tuple[float, float]:
        """Closed interval of values whose possibility is at least ``lam``."""
        half = self.alpha_at(lam)
        return (self.nominal - half, self.nominal + half)

    def membership(self, value: float) -> float:
        """Possibility degree of ``value``: 1 at the nominal, 0 outside the support.

        Inverts the cut family, so the endpoints of the level-``lam`` cut map
        back to ``lam``.  Support endpoints map to 0 for every shape (the
        limiting value).
        """
        dist = abs(value - self.nominal)
        if self.deviation == 0.0:
            return 1.0 if dist == 0.0 else 0.0
        if dist >= self.deviation:
            return 0.0
        ratio = (self.deviation - dist) / self.deviation
        return min(1.0, ratio ** (1.0 / self.shape))

    @property
    def support(self) -> tuple[float, float]:
        return (self.nominal - self.deviation, self.nominal + self.deviation)


@dataclass(frozen=True)
class SoftBound:
    """Flexible one-sided bound ``base`` with graded slack up to ``base + slack``.

    ``relaxed_rhs(level)`` is the largest threshold still acceptable to degree
    ``level``: the full ``base + slack`` at level 0, narrowing to the crisp
    ``base`` at level 1.  ``slack = 0`` encodes a crisp bound.  ``shape = 0``
    is also interpreted as crisp: the slack term is defined away entirely so
    no relaxation is ever granted.
    """

    base: float
    slack: float = 0.0
    shape: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.base) and math.isfinite(self.slack)
                and math.isfinite(self.shape)):
            raise ValueError("soft bound parameters must be finite")
        if self.slack < 0:
            raise ValueError(f"slack must be nonnegative, got {self.slack}")
        if self.shape < 0:
            raise ValueError(f"shape must be nonnegative, got {self.shape}")

    def relaxed_rhs(self, level: float) -> float:
        """Threshold granted at ``level``: ``base + slack * (1 - level**shape)``."""
        _check_level(level)
        if self.shape == 0.0:
            return self.base
        return self.base + self.slack * (1.0 - level ** self.shape)

    @property
    def is_crisp(self) -> bool:
        return self.slack == 0.0 or self.shape == 0.0


@dataclass(frozen=True)
class FuzzyGoal:
    """Graded cost target anchored at a reference optimum.

    ``rhs_at(level)`` is the largest cost acceptable to degree ``level``,
    ranging from ``nominal_optimum + tolerance`` at level 0 down to the
    reference optimum itself at level 1.  The anchor may be left unset until
    the reference problem has been solved.  ``shape = 0`` pins the cost to the
    reference optimum regardless of level.
    """

    nominal_optimum: float | None
    tolerance: float
    shape: float = 1.0

    def __post_init__(self) -> None:
        if self.tolerance < 0:
            raise ValueError(f"tolerance must be nonnegative, got {self.tolerance}")
        if self.shape < 0:
            raise ValueError(f"shape must be nonnegative, got {self.shape}")

    def relaxation(self, level: float) -> float:
        """Slack granted on top of the anchor at ``level``."""
        _check_level(level)
        if self.shape == 0.0:
            return 0.0
        return self.tolerance * (1.0 - level ** self.shape)

    def rhs_at(self, level: float) -> float:
        if self.nominal_optimum is None:
            raise ValueError("goal anchor is unset; solve the reference problem first")
        return self.nominal_optimum + self.relaxation(level)


def joint_possibility(row: Sequence[FuzzyInterval], scenario: Sequence[float]) -> float:
    """Possibility that ``scenario`` realizes the row of fuzzy coefficients.

    The joint degree is the minimum of the per-coefficient memberships, so it
    equals 1 only when every coordinate sits at full plausibility.
    """
    if len(row) != len(scenario):
        raise ValueError(
            f"scenario length {len(scenario)} does not match row length {len(row)}"
        )
    degree = 1.0
    for fi, value in zip(row, scenario):
        degree = min(degree, fi.membership(float(value)))
        if degree == 0.0:
            break
    return degree
