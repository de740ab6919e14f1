"""Dense two-phase simplex solver and pluggable LP backends.

The reference solver is self-contained and deterministic: given the same
system and configuration it performs the same pivots and returns the same
point.  Pricing uses the most-negative reduced cost and switches to Bland's
rule whenever the objective stalls, which prevents cycling on the highly
degenerate systems the model builders produce (many rows with zero right-hand
side).

Any external LP solver can be used instead by implementing the two-method
backend interface; a ``scipy.optimize.linprog`` adapter ships here.  Oracle
tests that pin exact pivot behaviour run against the reference backend only.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Protocol

import numpy as np

from .linsys import LinearSystem

__all__ = [
    "LpStatus",
    "LpResult",
    "SolverConfig",
    "IterationLimitError",
    "LpBackend",
    "SimplexBackend",
    "ScipyBackend",
    "solve",
    "check_feasible",
]


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True, eq=False)
class LpResult:
    status: LpStatus
    value: float | None = None
    point: np.ndarray | None = None

    @property
    def is_feasible(self) -> bool:
        return self.status in (LpStatus.OPTIMAL, LpStatus.FEASIBLE)


@dataclass(frozen=True)
class SolverConfig:
    """Numeric knobs for the LP engine.

    ``feasibility_tolerance`` is absolute on constraint residuals.  The
    anti-cycling identifier is informational; the reference solver always
    falls back to Bland's rule under degeneracy.
    """

    feasibility_tolerance: float = 1e-9
    max_iterations: int = 50_000
    anti_cycling: str = "bland"

    def __post_init__(self) -> None:
        if self.feasibility_tolerance <= 0:
            raise ValueError("feasibility tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("iteration budget must be at least 1")


DEFAULT_CONFIG = SolverConfig()


class IterationLimitError(RuntimeError):
    """Pivot budget exhausted before reaching a conclusive status."""


class LpBackend(Protocol):
    def solve(self, system: LinearSystem, config: SolverConfig) -> LpResult: ...

    def check_feasible(self, system: LinearSystem, config: SolverConfig) -> LpResult: ...


# -- reference implementation -----------------------------------------


# Consecutive non-improving pivots tolerated before switching to Bland pricing.
_STALL_LIMIT = 64
# Smallest pivot element the ratio test may select.  Dividing a row by a
# near-tolerance element multiplies round-off by its reciprocal, so this sits
# far above the feasibility tolerance.
_PIVOT_TOL = 1e-7


def _pivot(t: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    t[row] /= t[row, col]
    column = t[:, col].copy()
    column[row] = 0.0
    t -= np.outer(column, t[row])
    # Force the pivot column to an exact unit vector to stop round-off creep.
    t[:, col] = 0.0
    t[row, col] = 1.0
    basis[row] = col


def _iterate(t: np.ndarray, basis: np.ndarray, tol: float,
             budget: int, used: int) -> tuple[str, int]:
    """Run simplex pivots on tableau ``t`` until optimal or unbounded."""
    m = t.shape[0] - 1
    bland = False
    stall = 0
    last = t[-1, -1]
    while True:
        reduced = t[-1, :-1]
        if bland:
            candidates = np.flatnonzero(reduced < -tol)
            if candidates.size == 0:
                return "optimal", used
            col = int(candidates[0])
        else:
            col = int(np.argmin(reduced))
            if reduced[col] >= -tol:
                return "optimal", used
        column = t[:m, col]
        eligible = column > _PIVOT_TOL
        if not eligible.any():
            return "unbounded", used
        ratios = np.full(m, np.inf)
        ratios[eligible] = t[:m, -1][eligible] / column[eligible]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + 1e-9 * (1.0 + abs(best)))
        if ties.size > 1:
            if bland:
                # Smallest leaving variable index: the anti-cycling choice.
                row = int(ties[np.argmin(basis[ties])])
            else:
                # Largest pivot element among the near-ties for stability;
                # remaining ties resolve to the smallest variable index.
                pivots = column[ties]
                largest = pivots.max()
                stable = ties[pivots >= largest * (1.0 - 1e-9)]
                row = int(stable[np.argmin(basis[stable])])
        else:
            row = int(ties[0])
        _pivot(t, basis, row, col)
        used += 1
        if used >= budget:
            raise IterationLimitError(
                f"simplex exceeded the {budget}-pivot budget")
        current = t[-1, -1]
        if current > last + 1e-12 * (1.0 + abs(last)):
            stall = 0
        else:
            stall += 1
            # Once degeneracy forces Bland pricing, keep it for the rest of
            # the phase; alternating rules can loop.
            if stall >= _STALL_LIMIT:
                bland = True
        last = current


class SimplexBackend:
    """Reference dense two-phase simplex over the tableau."""

    def solve(self, system: LinearSystem, config: SolverConfig = DEFAULT_CONFIG) -> LpResult:
        return self._run(system, config, feasibility_only=False)

    def check_feasible(self, system: LinearSystem, config: SolverConfig = DEFAULT_CONFIG) -> LpResult:
        return self._run(system, config, feasibility_only=True)

    # The tableau holds [structural | slack | artificial | rhs] columns and
    # one objective row at the bottom.
    def _run(self, system: LinearSystem, config: SolverConfig,
             feasibility_only: bool) -> LpResult:
        tol = config.feasibility_tolerance
        k = system.n_variables
        lo, hi = system.bounds()

        a0, b0 = system.dense()
        rows = [a0] if a0.size else []
        rhs = [b0 - a0 @ lo] if a0.size else []
        bounded = np.flatnonzero(np.isfinite(hi))
        if bounded.size:
            ub_rows = np.zeros((bounded.size, k))
            ub_rows[np.arange(bounded.size), bounded] = 1.0
            rows.append(ub_rows)
            rhs.append(hi[bounded] - lo[bounded])
        if rows:
            a = np.vstack(rows)
            b = np.concatenate(rhs)
        else:
            a = np.zeros((0, k))
            b = np.zeros(0)
        m = a.shape[0]

        work = np.hstack([a, np.eye(m)])
        flipped = b < 0
        work[flipped] *= -1.0
        b = np.abs(b)
        art_rows = np.flatnonzero(flipped)
        n_art = art_rows.size
        base = k + m

        t = np.zeros((m + 1, base + n_art + 1))
        t[:m, :base] = work
        t[:m, -1] = b
        basis = np.arange(k, base)
        for pos, i in enumerate(art_rows):
            t[i, base + pos] = 1.0
            basis[i] = base + pos
        basis = basis.copy()

        used = 0
        if n_art:
            t[-1, base:base + n_art] = 1.0
            for i in art_rows:
                t[-1] -= t[i]
            status, used = _iterate(t, basis, tol, config.max_iterations, used)
            if status != "optimal":  # phase one is always bounded below by zero
                raise IterationLimitError("phase one terminated abnormally")
            phase_one = -t[-1, -1]
            if phase_one > 10.0 * tol * (1.0 + float(b.max(initial=0.0))):
                return LpResult(LpStatus.INFEASIBLE)
            used = self._drive_out(t, basis, base, tol, used, config.max_iterations)
            redundant = [i for i in range(t.shape[0] - 1) if basis[i] >= base]
            if redundant:
                t = np.delete(t, redundant, axis=0)
                basis = np.delete(basis, redundant)
            t = np.hstack([t[:, :base], t[:, -1:]])
            point = self._extract(t, basis, k, base, lo)
            if system.scaled_violation(point) > 10.0 * tol:
                return LpResult(LpStatus.INFEASIBLE)
        else:
            point = lo.copy()

        if feasibility_only or system.objective is None:
            return LpResult(LpStatus.FEASIBLE, point=point)

        c = np.zeros(t.shape[1])
        c[:k] = system.objective_vector()
        t[-1] = c
        for i in range(t.shape[0] - 1):
            coeff = t[-1, basis[i]]
            if coeff != 0.0:
                t[-1] -= coeff * t[i]
        status, used = _iterate(t, basis, tol, config.max_iterations, used)
        if status == "unbounded":
            return LpResult(LpStatus.UNBOUNDED)
        point = self._extract(t, basis, k, base, lo)
        return LpResult(LpStatus.OPTIMAL, value=system.objective_value(point), point=point)

    @staticmethod
    def _drive_out(t: np.ndarray, basis: np.ndarray, base: int, tol: float,
                   used: int, budget: int) -> int:
        """Pivot zero-level artificial variables out of the basis when possible."""
        m = t.shape[0] - 1
        for i in range(m):
            if basis[i] < base:
                continue
            row = np.abs(t[i, :base])
            candidates = np.flatnonzero(row > _PIVOT_TOL)
            if candidates.size:
                # Prefer the largest element; the swap is degenerate anyway.
                _pivot(t, basis, i, int(candidates[np.argmax(row[candidates])]))
                used += 1
                if used >= budget:
                    raise IterationLimitError(
                        f"simplex exceeded the {budget}-pivot budget")
        return used

    @staticmethod
    def _extract(t: np.ndarray, basis: np.ndarray, k: int, base: int,
                 lo: np.ndarray) -> np.ndarray:
        full = np.zeros(base)
        m = t.shape[0] - 1
        for i in range(m):
            if basis[i] < base:
                full[basis[i]] = max(t[i, -1], 0.0)
        return full[:k] + lo


# -- scipy adapter -----------------------------------------------------


class ScipyBackend:
    """Adapter over ``scipy.optimize.linprog`` (HiGHS)."""

    def __init__(self) -> None:
        from scipy.optimize import linprog

        self._linprog = linprog

    def _call(self, system: LinearSystem, c: np.ndarray) -> LpResult:
        a, b = system.dense()
        lo, hi = system.bounds()
        bounds = [(lo[j], None if np.isinf(hi[j]) else hi[j])
                  for j in range(system.n_variables)]
        res = self._linprog(
            c,
            A_ub=a if a.size else None,
            b_ub=b if a.size else None,
            bounds=bounds,
            method="highs",
        )
        if res.status == 2:
            return LpResult(LpStatus.INFEASIBLE)
        if res.status == 3:
            return LpResult(LpStatus.UNBOUNDED)
        if res.status != 0:
            raise RuntimeError(f"linprog failed: {res.message}")
        return LpResult(LpStatus.OPTIMAL, value=float(res.fun), point=np.asarray(res.x))

    def solve(self, system: LinearSystem, config: SolverConfig = DEFAULT_CONFIG) -> LpResult:
        if system.objective is None:
            return self.check_feasible(system, config)
        res = self._call(system, system.objective_vector())
        if res.status is LpStatus.OPTIMAL:
            return LpResult(LpStatus.OPTIMAL,
                            value=system.objective_value(res.point),
                            point=res.point)
        return res

    def check_feasible(self, system: LinearSystem, config: SolverConfig = DEFAULT_CONFIG) -> LpResult:
        res = self._call(system, np.zeros(system.n_variables))
        if res.status is LpStatus.OPTIMAL:
            return LpResult(LpStatus.FEASIBLE, point=res.point)
        return res


_DEFAULT_BACKEND = SimplexBackend()


def solve(system: LinearSystem, config: SolverConfig | None = None,
          backend: LpBackend | None = None) -> LpResult:
    """Minimize the system objective; plain feasibility when none is set."""
    return (backend or _DEFAULT_BACKEND).solve(system, config or DEFAULT_CONFIG)


def check_feasible(system: LinearSystem, config: SolverConfig | None = None,
                   backend: LpBackend | None = None) -> LpResult:
    """Phase-one feasibility test; returns a witness point when one exists."""
    return (backend or _DEFAULT_BACKEND).check_feasible(system, config or DEFAULT_CONFIG)
