from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from certs.lp import FEASIBLE, INFEASIBLE, UNBOUNDED, LinearProgram, lp_solve


def solve_exact(columns, rows, rhs):
    """Unique solution of A_S x = b for the column subset S, or None."""
    m, k = len(rows), len(columns)
    a = [[Fraction(rows[i][j]) for j in columns] + [Fraction(rhs[i])] for i in range(m)]
    pivots = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, m) if a[i][c] != 0), None)
        if p is None:
            return None
        a[r], a[p] = a[p], a[r]
        a[r] = [v / a[r][c] for v in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                a[i] = [u - a[i][c] * v for u, v in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    if any(a[i][-1] != 0 for i in range(r, m)):
        return None
    return [a[i][-1] for i in range(k)]


def brute_force_feasible(rows, rhs, n):
    """Feasible iff some basic solution (independent column subset) is nonnegative."""
    for size in range(0, min(n, len(rows)) + 1):
        for columns in combinations(range(n), size):
            x = solve_exact(columns, rows, rhs)
            if x is not None and all(v >= 0 for v in x):
                return True
    return False


def test_single_variable():
    result = lp_solve(LinearProgram(["x"], [[1]], [1]))
    assert result.status == FEASIBLE
    assert result.assignment == {"x": 1}
    assert lp_solve(LinearProgram(["x"], [[1]], [-1])).status == INFEASIBLE


def test_two_by_two():
    result = lp_solve(LinearProgram(["x", "y"], [[1, 1], [1, -1]], [1, 0]))
    assert result.feasible
    assert result.values(["x", "y"]) == [Fraction(1, 2), Fraction(1, 2)]


def test_dimension_mismatch():
    with pytest.raises(ValueError, match="Dimension mismatch"):
        LinearProgram(["x", "y"], [[1, 1], [1]], [1, 0])
    with pytest.raises(ValueError, match="Dimension mismatch"):
        LinearProgram(["x"], [[1]], [1, 2])
    with pytest.raises(ValueError, match="Dimension mismatch"):
        LinearProgram(["x"], [[1]], [1], objective=[1, 1])


def test_minimize_and_unbounded():
    result = lp_solve(LinearProgram(["x", "y"], [[1, 1]], [1], objective=[1, 2]))
    assert result.objective_value == 1
    assert result.assignment == {"x": 1, "y": 0}
    assert lp_solve(LinearProgram(["x", "y"], [[1, -1]], [0], objective=[-1, 0])).status == UNBOUNDED


def test_redundant_rows():
    result = lp_solve(LinearProgram(["x", "y"], [[1, 1], [2, 2]], [1, 2]))
    assert result.feasible
    assert sum(result.values(["x", "y"])) == 1


def test_degenerate_problem_terminates():
    """A textbook cycling example for the largest-coefficient rule."""
    q = Fraction
    rows = [
        [1, 0, 0, q(1, 4), -8, -1, 9],
        [0, 1, 0, q(1, 2), -12, q(-1, 2), 3],
        [0, 0, 1, 0, 0, 1, 0],
    ]
    objective = [0, 0, 0, q(-3, 4), 20, q(-1, 2), 6]
    names = [f"x{i}" for i in range(1, 8)]
    result = lp_solve(LinearProgram(names, rows, [0, 0, 1], objective))
    assert result.feasible
    assert result.objective_value == q(-5, 4)


def test_random_programs_match_vertex_enumeration():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        n = int(rng.integers(1, 7))
        m = int(rng.integers(1, 4))
        rows = [[Fraction(int(v)) for v in rng.integers(-3, 4, n)] for _ in range(m)]
        rhs = [Fraction(int(v)) for v in rng.integers(-3, 4, m)]
        names = [f"v{j}" for j in range(n)]
        result = lp_solve(LinearProgram(names, rows, rhs))
        assert result.feasible == brute_force_feasible(rows, rhs, n)
        if result.feasible:
            x = result.values(names)
            assert all(v >= 0 for v in x)
            for row, b in zip(rows, rhs):
                assert sum(a * v for a, v in zip(row, x)) == b
