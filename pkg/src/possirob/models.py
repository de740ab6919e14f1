"""Uncertain problem data and the crisp systems derived from it.

An :class:`UncertainInstance` couples fuzzy-interval constraint rows with a
feasible set and a cost vector (crisp or itself fuzzy).  The builders in this
module translate it, for a fixed confidence level, into plain linear systems:

* the budgeted worst case of each row is replaced by its dual block, one
  scalar dual per row plus one per coefficient, which is exact for
  nonnegative decisions by strong duality;
* the level parameterizes how far coefficients may stray from their nominal
  values (wide cuts at level 0, nominal data at level 1), and on the relaxed
  variants how much right-hand-side and budget slack is granted.

All builders share one dualization routine and differ only in the right-hand
sides attached to the emitted blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .fuzzy import FuzzyGoal, FuzzyInterval, SoftBound, _check_level
from .linsys import LinearSystem

__all__ = [
    "UncertainRow",
    "UncertainObjective",
    "Box",
    "Polyhedron",
    "FeasibleSet",
    "UncertainInstance",
    "top_sum",
    "worst_case_lhs",
    "necessity_degree",
    "dualize_budgeted_row",
    "build_nominal",
    "build_robust",
    "build_light_robust",
    "build_nec",
    "build_soft_nec",
    "build_soft_nec_obj",
]


def _validate_protection(protection: int, n: int) -> None:
    # Fractional budgets would still dualize correctly but are not part of
    # the model; reject them up front.
    if isinstance(protection, bool) or not isinstance(protection, (int, np.integer)):
        raise ValueError(f"protection level must be an integer, got {protection!r}")
    if not 0 <= protection <= n:
        raise ValueError(f"protection level {protection} outside [0, {n}]")


def _as_intervals(a_hat: Sequence[float], a_bar: Sequence[float],
                  shape: float) -> tuple[FuzzyInterval, ...]:
    if len(a_hat) != len(a_bar):
        raise ValueError("nominal and deviation vectors differ in length")
    return tuple(FuzzyInterval(float(h), float(d), shape)
                 for h, d in zip(a_hat, a_bar))


@dataclass(frozen=True)
class UncertainRow:
    """One budgeted fuzzy constraint: coefficients, soft bound, protection level."""

    coefficients: tuple[FuzzyInterval, ...]
    rhs: SoftBound
    protection: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        _validate_protection(self.protection, len(self.coefficients))
        object.__setattr__(self, "protection", int(self.protection))

    @classmethod
    def from_arrays(cls, a_hat: Sequence[float], a_bar: Sequence[float],
                    b: float, protection: int, b_bar: float = 0.0,
                    shape: float = 1.0) -> "UncertainRow":
        return cls(_as_intervals(a_hat, a_bar, shape),
                   SoftBound(float(b), float(b_bar), shape), protection)

    @property
    def n(self) -> int:
        return len(self.coefficients)

    def nominal(self) -> np.ndarray:
        return np.array([fi.nominal for fi in self.coefficients])

    def half_widths(self, lam: float) -> np.ndarray:
        return np.array([fi.alpha_at(lam) for fi in self.coefficients])


@dataclass(frozen=True)
class UncertainObjective:
    """Fuzzy cost vector with its own protection budget, violation slack and goal."""

    coefficients: tuple[FuzzyInterval, ...]
    protection: int
    slack: SoftBound = SoftBound(0.0)
    goal: FuzzyGoal = FuzzyGoal(None, 0.0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        _validate_protection(self.protection, len(self.coefficients))
        object.__setattr__(self, "protection", int(self.protection))
        if self.slack.base != 0.0:
            raise ValueError("objective slack must be anchored at zero")

    @classmethod
    def from_arrays(cls, c_hat: Sequence[float], c_bar: Sequence[float],
                    protection: int, slack_bar: float = 0.0,
                    goal: FuzzyGoal | None = None,
                    shape: float = 1.0) -> "UncertainObjective":
        return cls(_as_intervals(c_hat, c_bar, shape), protection,
                   SoftBound(0.0, float(slack_bar), shape),
                   goal if goal is not None else FuzzyGoal(None, 0.0, shape))

    @property
    def n(self) -> int:
        return len(self.coefficients)

    def nominal(self) -> np.ndarray:
        return np.array([fi.nominal for fi in self.coefficients])

    def half_widths(self, lam: float) -> np.ndarray:
        return np.array([fi.alpha_at(lam) for fi in self.coefficients])

    @property
    def is_crisp(self) -> bool:
        return (all(fi.deviation == 0.0 for fi in self.coefficients)
                and self.slack.slack == 0.0)


@dataclass(frozen=True)
class Box:
    """Axis-aligned feasible box with nonnegative lower corner."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "lower", tuple(float(v) for v in self.lower))
        object.__setattr__(self, "upper", tuple(float(v) for v in self.upper))
        if len(self.lower) != len(self.upper):
            raise ValueError("box corners differ in length")
        for j, (lo, hi) in enumerate(zip(self.lower, self.upper)):
            if lo < 0:
                raise ValueError(f"box lower bound at index {j} is negative")
            if hi < lo:
                raise ValueError(f"box is empty at index {j}: [{lo}, {hi}]")

    @classmethod
    def unit(cls, n: int) -> "Box":
        return cls((0.0,) * n, (1.0,) * n)

    @property
    def n(self) -> int:
        return len(self.lower)


@dataclass(frozen=True)
class Polyhedron:
    """Feasible set ``{x >= 0 : rows @ x <= rhs}``; boundedness is the caller's duty."""

    n: int
    rows: tuple[tuple[float, ...], ...] = ()
    rhs: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        rows = tuple(tuple(float(v) for v in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "rhs", tuple(float(v) for v in self.rhs))
        if len(rows) != len(self.rhs):
            raise ValueError("polyhedron rows and right-hand sides differ in length")
        for i, row in enumerate(rows):
            if len(row) != self.n:
                raise ValueError(f"polyhedron row {i} has length {len(row)}, expected {self.n}")


FeasibleSet = Union[Box, Polyhedron]


@dataclass(frozen=True)
class UncertainInstance:
    """Full uncertain program: objective, budgeted fuzzy rows, feasible set."""

    objective: tuple[float, ...] | UncertainObjective
    rows: tuple[UncertainRow, ...]
    feasible_set: FeasibleSet

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))
        if not isinstance(self.objective, UncertainObjective):
            object.__setattr__(self, "objective",
                               tuple(float(v) for v in self.objective))
        n = self.feasible_set.n
        if len(self.cost_nominal()) != n:
            raise ValueError("objective length does not match the feasible set")
        for i, row in enumerate(self.rows):
            if row.n != n:
                raise ValueError(f"row {i} has {row.n} coefficients, expected {n}")

    @property
    def n(self) -> int:
        return self.feasible_set.n

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def has_uncertain_objective(self) -> bool:
        return isinstance(self.objective, UncertainObjective)

    def cost_nominal(self) -> np.ndarray:
        if isinstance(self.objective, UncertainObjective):
            return self.objective.nominal()
        return np.array(self.objective, dtype=float)


# -- direct worst-case evaluation --------------------------------------


def top_sum(values: np.ndarray, k: int) -> float:
    """Exact sum of the ``k`` largest entries (all of them when ``k`` exceeds the size)."""
    v = np.asarray(values, dtype=float)
    if k <= 0 or v.size == 0:
        return 0.0
    if k >= v.size:
        return math.fsum(v)
    idx = np.argpartition(v, v.size - k)[v.size - k:]
    idx.sort()
    return math.fsum(v[idx])


def worst_case_lhs(row: UncertainRow, x: Sequence[float], lam: float) -> float:
    """Largest left-hand side of ``row`` over level-``lam`` scenarios with at
    most ``protection`` deviating coefficients, for nonnegative ``x``."""
    xv = np.asarray(x, dtype=float)
    if xv.shape != (row.n,):
        raise ValueError(f"x has shape {xv.shape}, expected ({row.n},)")
    base = float(np.dot(row.nominal(), xv))
    return base + top_sum(row.half_widths(lam) * xv, row.protection)


def necessity_degree(row: UncertainRow, x: Sequence[float], tol: float = 1e-6) -> float:
    """Degree to which ``x`` is certainly protected on ``row``.

    Bisects for the smallest level whose worst case still fits under the crisp
    bound; the degree is one minus that level.  Returns 0 when even the
    nominal data violates the bound and 1 when the full-support worst case
    already fits.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    b = row.rhs.base
    if worst_case_lhs(row, x, 0.0) <= b:
        return 1.0
    if worst_case_lhs(row, x, 1.0) > b:
        return 0.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if worst_case_lhs(row, x, mid) <= b:
            hi = mid
        else:
            lo = mid
    return 1.0 - hi


# -- dualized blocks ----------------------------------------------------


def dualize_budgeted_row(system: LinearSystem, row: UncertainRow | UncertainObjective,
                         lam: float, x_indices: Sequence[int],
                         label: str) -> dict[int, float]:
    """Emit the dual variables bounding one budgeted worst case at level ``lam``.

    Adds one scalar dual plus one per coefficient with a positive cut width,
    together with the coupling constraints, and returns the left-hand-side
    terms of the protected row.  The caller attaches whichever right-hand side
    its model requires, so a single dualization serves every variant.
    """
    _check_level(lam)
    if len(x_indices) != row.n:
        raise ValueError("decision block does not match the row dimension")
    lhs: dict[int, float] = {}
    for j, fi in enumerate(row.coefficients):
        if fi.nominal != 0.0:
            lhs[x_indices[j]] = fi.nominal
    if row.protection == 0:
        return lhs
    widths = row.half_widths(lam)
    w = system.add_variable(f"w[{label}]")
    lhs[w] = float(row.protection)
    for j in range(row.n):
        if widths[j] <= 0.0:
            continue
        p = system.add_variable(f"p[{label},{j}]")
        lhs[p] = 1.0
        system.add_leq({x_indices[j]: widths[j], w: -1.0, p: -1.0}, 0.0)
    return lhs


def _add_decision_block(system: LinearSystem, instance: UncertainInstance) -> list[int]:
    fs = instance.feasible_set
    if isinstance(fs, Box):
        idx = [system.add_variable(f"x[{j}]", fs.lower[j], fs.upper[j])
               for j in range(fs.n)]
    else:
        idx = [system.add_variable(f"x[{j}]") for j in range(fs.n)]
        for row, rhs in zip(fs.rows, fs.rhs):
            system.add_leq({idx[j]: row[j] for j in range(fs.n)}, rhs)
    system.x_indices = idx
    return idx


def _cost_terms(instance: UncertainInstance, x_idx: Sequence[int]) -> dict[int, float]:
    c = instance.cost_nominal()
    return {x_idx[j]: float(c[j]) for j in range(instance.n) if c[j] != 0.0}


def _require_crisp_objective(instance: UncertainInstance, what: str) -> None:
    if instance.has_uncertain_objective:
        raise ValueError(f"{what} requires a crisp objective vector")


# -- model builders ------------------------------------------------------


def build_nominal(instance: UncertainInstance) -> LinearSystem:
    """Deterministic counterpart under nominal data: min c.x, Ahat x <= b, x in X."""
    system = LinearSystem()
    x_idx = _add_decision_block(system, instance)
    for i, row in enumerate(instance.rows):
        nom = row.nominal()
        system.add_leq({x_idx[j]: nom[j] for j in range(row.n) if nom[j] != 0.0},
                       row.rhs.base)
    system.set_objective(_cost_terms(instance, x_idx))
    return system


def build_robust(instance: UncertainInstance, lam: float = 0.0) -> LinearSystem:
    """Budget-protected counterpart at level ``lam`` (full supports at 0)."""
    _require_crisp_objective(instance, "the robust model")
    system = LinearSystem()
    x_idx = _add_decision_block(system, instance)
    for i, row in enumerate(instance.rows):
        lhs = dualize_budgeted_row(system, row, lam, x_idx, str(i))
        system.add_leq(lhs, row.rhs.base)
    system.set_objective(_cost_terms(instance, x_idx))
    return system


def build_light_robust(instance: UncertainInstance, c_hat: float, rho0: float,
                       norm: str = "max") -> LinearSystem:
    """Slack-minimizing counterpart: stay nominal-feasible, pay at most
    ``c_hat + rho0``, and minimize the norm of the per-row protection slack.

    ``norm`` picks the minimized aggregate: ``"max"`` bounds every slack by a
    single auxiliary variable, ``"sum"`` minimizes their total.  Feasible for
    any budget whenever the nominal problem is.
    """
    if norm not in ("max", "sum"):
        raise ValueError(f"norm must be 'max' or 'sum', got {norm!r}")
    if rho0 < 0:
        raise ValueError("cost tolerance must be nonnegative")
    _require_crisp_objective(instance, "the light robust model")
    system = LinearSystem()
    x_idx = _add_decision_block(system, instance)
    slack_idx = [system.add_variable(f"gamma[{i}]") for i in range(instance.m)]
    for i, row in enumerate(instance.rows):
        lhs = dualize_budgeted_row(system, row, 0.0, x_idx, str(i))
        lhs[slack_idx[i]] = -1.0
        system.add_leq(lhs, row.rhs.base)
        nom = row.nominal()
        system.add_leq({x_idx[j]: nom[j] for j in range(row.n) if nom[j] != 0.0},
                       row.rhs.base)
    system.add_leq(_cost_terms(instance, x_idx), c_hat + rho0)
    if norm == "max":
        t = system.add_variable("gamma_max")
        for g in slack_idx:
            system.add_leq({g: 1.0, t: -1.0}, 0.0)
        system.set_objective({t: 1.0})
    else:
        system.set_objective({g: 1.0 for g in slack_idx})
    return system


def build_nec(instance: UncertainInstance, lam: float, goal: FuzzyGoal) -> LinearSystem:
    """Feasibility system for strict protection at level ``lam`` under a hard
    cost budget ``goal.nominal_optimum + goal.tolerance``."""
    _require_crisp_objective(instance, "the strict necessity model")
    if goal.nominal_optimum is None:
        raise ValueError("goal anchor is unset; solve the nominal problem first")
    system = LinearSystem()
    x_idx = _add_decision_block(system, instance)
    for i, row in enumerate(instance.rows):
        lhs = dualize_budgeted_row(system, row, lam, x_idx, str(i))
        system.add_leq(lhs, row.rhs.base)
    system.add_leq(_cost_terms(instance, x_idx),
                   goal.nominal_optimum + goal.tolerance)
    return system


def _soft_row_blocks(system: LinearSystem, instance: UncertainInstance,
                     lam: float, x_idx: Sequence[int]) -> None:
    for i, row in enumerate(instance.rows):
        lhs = dualize_budgeted_row(system, row, lam, x_idx, str(i))
        system.add_leq(lhs, row.rhs.relaxed_rhs(1.0 - lam))


def _nominal_rows(system: LinearSystem, instance: UncertainInstance,
                  x_idx: Sequence[int]) -> None:
    for row in instance.rows:
        nom = row.nominal()
        system.add_leq({x_idx[j]: nom[j] for j in range(row.n) if nom[j] != 0.0},
                       row.rhs.base)


def build_soft_nec(instance: UncertainInstance, lam: float, goal: FuzzyGoal,
                   include_nominal: bool = False) -> LinearSystem:
    """Feasibility system for soft protection at level ``lam``.

    Right-hand sides and the cost budget are granted their graded slack at
    level ``1 - lam``, so lower levels (stronger protection) come with tighter
    budgets.  ``include_nominal`` additionally pins nominal feasibility.
    """
    _require_crisp_objective(instance, "the soft necessity model")
    _check_level(lam)
    system = LinearSystem()
    x_idx = _add_decision_block(system, instance)
    _soft_row_blocks(system, instance, lam, x_idx)
    system.add_leq(_cost_terms(instance, x_idx), goal.rhs_at(1.0 - lam))
    if include_nominal:
        _nominal_rows(system, instance, x_idx)
    return system


def build_soft_nec_obj(instance: UncertainInstance, lam: float, c_hat: float,
                       include_nominal: bool = False) -> LinearSystem:
    """Soft-protection feasibility system with a budgeted fuzzy objective.

    The objective is folded into one more budgeted row whose bound is the
    goal value plus its own violation slack; with a crisp cost vector and no
    slack this collapses back to the plain soft system's cost constraint.
    """
    obj = instance.objective
    if not isinstance(obj, UncertainObjective):
        raise ValueError("instance does not carry an uncertain objective")
    _check_level(lam)
    system = LinearSystem()
    x_idx = _add_decision_block(system, instance)
    lhs = dualize_budgeted_row(system, obj, lam, x_idx, "0")
    budget = (c_hat + obj.goal.relaxation(1.0 - lam)
              + obj.slack.relaxed_rhs(1.0 - lam))
    system.add_leq(lhs, budget)
    _soft_row_blocks(system, instance, lam, x_idx)
    if include_nominal:
        _nominal_rows(system, instance, x_idx)
    return system
