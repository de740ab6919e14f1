"""LP engine contracts: statuses, witnesses, determinism, and an exhaustive
vertex-enumeration oracle on small systems."""

import itertools

import numpy as np
import pytest

from possirob import (IterationLimitError, LinearSystem, LpStatus, ScipyBackend,
                      SimplexBackend, SolverConfig, check_feasible, solve)


def tiny_lp():
    s = LinearSystem()
    x = s.add_variable("x", 0.0, 10.0)
    s.add_leq({x: -1.0}, -3.0)
    s.set_objective({x: 1.0})
    return s


class TestBasics:
    def test_minimum_against_lower_constraint(self):
        res = solve(tiny_lp())
        assert res.status is LpStatus.OPTIMAL
        assert res.value == pytest.approx(3.0, abs=1e-9)
        assert res.point[0] == pytest.approx(3.0, abs=1e-9)

    def test_contradictory_bounds_infeasible(self):
        s = LinearSystem()
        x = s.add_variable("x")
        s.add_leq({x: 1.0}, 1.0)
        s.add_leq({x: -1.0}, -2.0)
        assert solve(s).status is LpStatus.INFEASIBLE
        assert check_feasible(s).status is LpStatus.INFEASIBLE

    def test_empty_constraints_over_unit_box(self):
        s = LinearSystem()
        for j in range(4):
            s.add_variable(f"x{j}", 0.0, 1.0)
        res = check_feasible(s)
        assert res.status is LpStatus.FEASIBLE
        assert s.is_feasible(res.point, 1e-9)

    def test_unbounded_direction(self):
        s = LinearSystem()
        x = s.add_variable("x")
        s.set_objective({x: -1.0})
        assert solve(s).status is LpStatus.UNBOUNDED

    def test_feasibility_only_ignores_objective(self):
        res = check_feasible(tiny_lp())
        assert res.status is LpStatus.FEASIBLE
        assert res.value is None

    def test_iteration_budget_raises_not_lies(self):
        s = LinearSystem()
        xs = [s.add_variable(f"x{j}", 0.0, 1.0) for j in range(5)]
        for j in range(4):
            s.add_leq({xs[j]: 1.0, xs[j + 1]: -1.0}, 0.1)
        s.add_leq({xs[0]: -1.0, xs[4]: -1.0}, -0.5)
        s.set_objective({xs[j]: float(j - 2) for j in range(5)})
        with pytest.raises(IterationLimitError):
            solve(s, SolverConfig(max_iterations=1))

    def test_declared_variable_validation(self):
        s = LinearSystem()
        s.add_variable("x")
        with pytest.raises(ValueError):
            s.add_leq({3: 1.0}, 0.0)
        with pytest.raises(ValueError):
            s.set_objective({7: 1.0})


def random_system(rng: np.random.Generator) -> LinearSystem:
    """Box-bounded system so the feasible region, when nonempty, has vertices."""
    n = int(rng.integers(1, 4))
    s = LinearSystem()
    xs = [s.add_variable(f"x{j}", 0.0, float(rng.uniform(0.5, 2.0)))
          for j in range(n)]
    for _ in range(int(rng.integers(0, 7))):
        coeffs = {xs[j]: float(rng.uniform(-2.0, 2.0)) for j in range(n)}
        s.add_leq(coeffs, float(rng.uniform(-1.0, 3.0)))
    s.set_objective({xs[j]: float(rng.uniform(-2.0, 2.0)) for j in range(n)})
    return s


def vertex_oracle(system: LinearSystem, tol: float = 1e-9):
    """Enumerate candidate vertices from every n-subset of tight constraints.

    Valid for box-bounded systems: a nonempty region then has at least one
    vertex, and every vertex solves some square subsystem.
    """
    n = system.n_variables
    a, b = system.dense()
    lo, hi = system.bounds()
    rows = [a[i] for i in range(a.shape[0])] if a.size else []
    rhs = list(b)
    for j in range(n):
        e = np.zeros(n)
        e[j] = -1.0
        rows.append(e.copy())
        rhs.append(-lo[j])
        e = np.zeros(n)
        e[j] = 1.0
        rows.append(e)
        rhs.append(hi[j])
    rows_arr = np.array(rows)
    rhs_arr = np.array(rhs)
    c = system.objective_vector()
    best = None
    for subset in itertools.combinations(range(len(rows)), n):
        sub = rows_arr[list(subset)]
        if abs(np.linalg.det(sub)) < 1e-10:
            continue
        point = np.linalg.solve(sub, rhs_arr[list(subset)])
        if np.any(rows_arr @ point > rhs_arr + tol):
            continue
        value = float(c @ point)
        if best is None or value < best:
            best = value
    return ("infeasible", None) if best is None else ("optimal", best)


class TestVertexOracleAgreement:
    def test_statuses_and_values_match_on_200_random_systems(self):
        rng = np.random.default_rng(2024)
        for trial in range(200):
            system = random_system(rng)
            expected_status, expected_value = vertex_oracle(system)
            res = solve(system)
            assert res.status.value == expected_status, f"trial {trial}"
            if expected_status == "optimal":
                assert res.value == pytest.approx(expected_value, abs=1e-7), \
                    f"trial {trial}"


class TestWitnessValidity:
    def test_returned_points_reevaluate_feasible(self):
        rng = np.random.default_rng(7)
        tol = SolverConfig().feasibility_tolerance
        for _ in range(100):
            system = random_system(rng)
            res = solve(system)
            if res.point is not None:
                assert system.scaled_violation(res.point) <= 10.0 * tol
            res = check_feasible(system)
            if res.point is not None:
                assert system.scaled_violation(res.point) <= 10.0 * tol


class TestDeterminism:
    def test_identical_inputs_identical_outputs(self):
        rng = np.random.default_rng(99)
        for _ in range(20):
            seed_state = rng.bit_generator.state
            system_a = random_system(rng)
            rng.bit_generator.state = seed_state
            system_b = random_system(rng)
            ra, rb = solve(system_a), solve(system_b)
            assert ra.status == rb.status
            if ra.point is not None:
                assert ra.value == rb.value
                assert np.array_equal(ra.point, rb.point)


class TestScipyBackendParity:
    def test_statuses_and_values_agree(self):
        pytest.importorskip("scipy")
        rng = np.random.default_rng(31)
        reference = SimplexBackend()
        adapter = ScipyBackend()
        cfg = SolverConfig()
        for trial in range(100):
            system = random_system(rng)
            ra = reference.solve(system, cfg)
            rb = adapter.solve(system, cfg)
            assert ra.status == rb.status, f"trial {trial}"
            if ra.status is LpStatus.OPTIMAL:
                assert ra.value == pytest.approx(rb.value, abs=1e-7)
