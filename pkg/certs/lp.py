from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LinearProgram:
    """Equality-form LP over nonnegative variables: rows . x = rhs, x >= 0.

    `objective` (optional) is minimized; without it any feasible vertex is returned.
    """

    variables: List[str]
    rows: List[List[Fraction]]
    rhs: List[Fraction]
    objective: Optional[List[Fraction]] = None

    def __post_init__(self):
        width = len(self.variables)
        if len(self.rows) != len(self.rhs):
            raise ValueError(
                f"Dimension mismatch: {len(self.rows)} rows but {len(self.rhs)} rhs entries."
            )
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(
                    f"Dimension mismatch: row {i} has {len(row)} entries, expected {width}."
                )
        if self.objective is not None and len(self.objective) != width:
            raise ValueError(
                f"Dimension mismatch: objective has {len(self.objective)} entries, "
                f"expected {width}."
            )
        self.rows = [[Fraction(x) for x in row] for row in self.rows]
        self.rhs = [Fraction(x) for x in self.rhs]
        if self.objective is not None:
            self.objective = [Fraction(x) for x in self.objective]


@dataclass(frozen=True)
class LPResult:
    status: str
    assignment: Optional[Dict[str, Fraction]] = None
    objective_value: Optional[Fraction] = None

    @property
    def feasible(self):
        return self.status == FEASIBLE

    def values(self, variables: Sequence[str]):
        return [self.assignment[v] for v in variables]


class _Tableau:
    def __init__(self, rows, rhs, basis):
        # each row holds the coefficients followed by the right hand side
        self.t = [list(r) + [b] for r, b in zip(rows, rhs)]
        self.basis = list(basis)

    def pivot(self, r, c):
        row = self.t[r]
        piv = row[c]
        self.t[r] = row = [x / piv for x in row]
        for i, other in enumerate(self.t):
            if i != r and other[c] != 0:
                factor = other[c]
                self.t[i] = [a - factor * b for a, b in zip(other, row)]
        self.basis[r] = c

    def reduced_costs(self, cost, allowed):
        out = {}
        for j in allowed:
            z = sum(
                (cost[self.basis[i]] * self.t[i][j] for i in range(len(self.t))),
                Fraction(0),
            )
            out[j] = cost[j] - z
        return out

    def objective(self, cost):
        return sum(
            (cost[self.basis[i]] * self.t[i][-1] for i in range(len(self.t))),
            Fraction(0),
        )

    def minimize(self, cost, allowed):
        """Primal simplex with Bland's rule; returns False when unbounded."""
        while True:
            reduced = self.reduced_costs(cost, allowed)
            entering = next((j for j in allowed if reduced[j] < 0), None)
            if entering is None:
                return True
            leaving = None
            best = None
            for i, row in enumerate(self.t):
                if row[entering] > 0:
                    ratio = row[-1] / row[entering]
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basis[i] < self.basis[leaving])
                    ):
                        best, leaving = ratio, i
            if leaving is None:
                return False
            self.pivot(leaving, entering)


def lp_solve(lp: LinearProgram) -> LPResult:
    n = len(lp.variables)
    m = len(lp.rows)
    rows = []
    rhs = []
    for row, b in zip(lp.rows, lp.rhs):
        if b < 0:
            row, b = [-x for x in row], -b
        rows.append(row)
        rhs.append(b)

    ### Phase one: artificial variables n..n+m-1 ###
    artificial = [[Fraction(int(i == k)) for k in range(m)] for i in range(m)]
    tableau = _Tableau(
        [r + a for r, a in zip(rows, artificial)], rhs, range(n, n + m)
    )
    phase_one_cost = [Fraction(0)] * n + [Fraction(1)] * m
    tableau.minimize(phase_one_cost, list(range(n + m)))
    if tableau.objective(phase_one_cost) > 0:
        return LPResult(INFEASIBLE)

    # drive remaining artificial variables out of the basis; drop redundant rows
    r = 0
    while r < len(tableau.t):
        if tableau.basis[r] >= n:
            column = next((j for j in range(n) if tableau.t[r][j] != 0), None)
            if column is None:
                del tableau.t[r]
                del tableau.basis[r]
                continue
            tableau.pivot(r, column)
        r += 1
    tableau.t = [row[:n] + [row[-1]] for row in tableau.t]

    ### Phase two ###
    objective_value = None
    if lp.objective is not None:
        if not tableau.minimize(lp.objective, list(range(n))):
            return LPResult(UNBOUNDED)
        objective_value = tableau.objective(lp.objective)

    solution = [Fraction(0)] * n
    for i, j in enumerate(tableau.basis):
        solution[j] = tableau.t[i][-1]
    assignment = dict(zip(lp.variables, solution))
    return LPResult(FEASIBLE, assignment, objective_value)
