"""Shared fixtures: the four-variable worked example and random generators."""

from __future__ import annotations

import itertools
import math
from pathlib import Path

import numpy as np
import pytest

from possirob import Box, UncertainInstance, UncertainRow

REPO_ROOT = Path(__file__).resolve().parent.parent
INSTANCE_DIR = REPO_ROOT / "instances"


@pytest.fixture(scope="session")
def toy4() -> UncertainInstance:
    """min -4x1-3x2-2x3-x4 with one budgeted row <0,7>x1+<1,5>x2+<2,4>x3+<3,2>x4 <= 6."""
    row = UncertainRow.from_arrays([0, 1, 2, 3], [7, 5, 4, 2], b=6.0, protection=2)
    return UncertainInstance(objective=(-4.0, -3.0, -2.0, -1.0), rows=(row,),
                             feasible_set=Box.unit(4))


@pytest.fixture(scope="session")
def toy4_soft() -> UncertainInstance:
    """Same instance with a two-unit violation slack on the right-hand side."""
    row = UncertainRow.from_arrays([0, 1, 2, 3], [7, 5, 4, 2], b=6.0, protection=2,
                                   b_bar=2.0)
    return UncertainInstance(objective=(-4.0, -3.0, -2.0, -1.0), rows=(row,),
                             feasible_set=Box.unit(4))


def random_row(rng: np.random.Generator, n: int, shape_choices=(0.5, 1.0, 2.0),
               gamma: int | None = None, b_bar: float = 0.0) -> UncertainRow:
    a_hat = rng.uniform(0.0, 10.0, size=n)
    a_bar = rng.uniform(0.0, 8.0, size=n)
    b = float(rng.uniform(0.3, 0.9) * a_hat.sum() + 1.0)
    protection = int(rng.integers(0, n + 1)) if gamma is None else gamma
    shape = float(rng.choice(shape_choices))
    return UncertainRow.from_arrays(a_hat, a_bar, b, protection, b_bar, shape)


def random_instance(rng: np.random.Generator, n: int, m: int,
                    with_slack: bool = False) -> UncertainInstance:
    """Small instance with a feasible nominal problem (the origin works)."""
    rows = []
    for _ in range(m):
        b_bar = float(rng.uniform(0.0, 2.0)) if with_slack else 0.0
        rows.append(random_row(rng, n, b_bar=b_bar))
    costs = tuple(float(v) for v in rng.uniform(-10.0, -1.0, size=n))
    return UncertainInstance(objective=costs, rows=tuple(rows),
                             feasible_set=Box.unit(n))


def brute_force_budgeted_max(weights: np.ndarray, k: int) -> float:
    """Reference for the budgeted worst case: enumerate every index subset of
    size at most ``k`` and take the largest exact sum."""
    best = 0.0
    indices = range(len(weights))
    for size in range(min(k, len(weights)) + 1):
        for subset in itertools.combinations(indices, size):
            value = math.fsum(weights[j] for j in subset)
            if value > best:
                best = value
    return best
