"""Exact rational linear programming.

Two-phase primal simplex over `fractions.Fraction` with Bland's rule for
both entering and leaving choices, which rules out cycling even on the
degenerate systems that region constructions produce. Everything is
exact: an `optimal` outcome carries a witness point that satisfies every
constraint with equality-grade arithmetic, and the reported optimum is
the objective value at that witness.

Free variables are split (x = u - v), inequalities get slacks, and rows
that can not start from a slack basis get artificial variables that are
minimized away in phase 1. A `SimplexSolver` keeps its feasible phase-1
tableau so that many objectives over one constraint system only pay for
phase 2 each.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, InternalCheckError
from .rationals import ONE, ZERO, AffineFunc, Point

Constraint = tuple[AffineFunc, "Relation"]


class Relation(enum.Enum):
    """How a constraint function relates to zero: f(x) >= 0, <= 0 or == 0."""

    GE = ">=0"
    LE = "<=0"
    EQ = "==0"

    def holds(self, value: Fraction, strict: bool = False) -> bool:
        if self is Relation.GE:
            return value > 0 if strict else value >= 0
        if self is Relation.LE:
            return value < 0 if strict else value <= 0
        return value == 0


class Sense(enum.Enum):
    MINIMIZE = "min"
    MAXIMIZE = "max"


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LinearProgram:
    objective: AffineFunc
    sense: Sense
    constraints: tuple[Constraint, ...]

    def __post_init__(self) -> None:
        for func, _ in self.constraints:
            if func.arity != self.objective.arity:
                raise DimensionError("constraint arity differs from objective arity")


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    optimum: Fraction | None = None
    witness: Point | None = None

    @property
    def is_optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


def _pivot(rows: list[list[Fraction]], zrow: list[Fraction], r: int, e: int) -> None:
    """Make column e basic in row r, updating all rows and the cost row."""
    piv_row = rows[r]
    piv = piv_row[e]
    if piv != 1:
        inv = 1 / piv
        rows[r] = piv_row = [val * inv for val in piv_row]
    for i, row in enumerate(rows):
        if i == r:
            continue
        factor = row[e]
        if factor:
            rows[i] = [a - factor * b for a, b in zip(row, piv_row)]
    factor = zrow[e]
    if factor:
        zrow[:] = [a - factor * b for a, b in zip(zrow, piv_row)]


def _run_simplex(
    rows: list[list[Fraction]],
    basis: list[int],
    zrow: list[Fraction],
    banned: frozenset[int],
) -> LpStatus:
    """Minimize until reduced costs are nonnegative. Bland's rule throughout."""
    ncols = len(zrow) - 1
    while True:
        entering = -1
        for j in range(ncols):
            if j not in banned and zrow[j] < 0:
                entering = j
                break
        if entering < 0:
            return LpStatus.OPTIMAL
        leaving = -1
        best_ratio: Fraction | None = None
        for i, row in enumerate(rows):
            coeff = row[entering]
            if coeff > 0:
                ratio = row[-1] / coeff
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leaving])
                ):
                    best_ratio = ratio
                    leaving = i
        if leaving < 0:
            return LpStatus.UNBOUNDED
        _pivot(rows, zrow, leaving, entering)
        basis[leaving] = entering


def _reduced_cost_row(
    rows: list[list[Fraction]], basis: list[int], cost: list[Fraction]
) -> list[Fraction]:
    """Canonical cost row [reduced costs | -z] for the given basis."""
    zrow = cost + [ZERO]
    for r, row in enumerate(rows):
        cb = cost[basis[r]]
        if cb:
            zrow = [a - cb * b for a, b in zip(zrow, row)]
    return zrow


class SimplexSolver:
    """Feasibility and repeated optimization over one constraint system.

    Construction runs phase 1. `optimize` copies the feasible tableau and
    runs phase 2, so solving many objectives over the same polyhedron
    (pruning, classification, audits) does not repeat the feasibility work.
    """

    def __init__(self, constraints: Sequence[Constraint], arity: int) -> None:
        self.arity = arity
        self.constraints = tuple(constraints)
        for func, _ in self.constraints:
            if func.arity != arity:
                raise DimensionError("constraint arity differs from system arity")

        nstruct = 2 * arity  # x_i = u_i - v_i
        n_ineq = sum(1 for _, rel in self.constraints if rel is not Relation.EQ)
        ncols = nstruct + n_ineq  # artificials appended below
        rows: list[list[Fraction]] = []
        basis: list[int] = []
        needs_artificial: list[int] = []
        slack_idx = nstruct
        for func, rel in self.constraints:
            row = [ZERO] * ncols
            for i, c in enumerate(func.coeffs):
                if c:
                    row[i] = c
                    row[arity + i] = -c
            rhs = -func.bias
            slack_col = -1
            if rel is not Relation.EQ:
                slack_col = slack_idx
                row[slack_col] = -ONE if rel is Relation.GE else ONE
                slack_idx += 1
            # orient the row so rhs >= 0 and, at rhs == 0, so the slack can
            # start basic (saves an artificial for every x_i >= 0 style row)
            if rhs < 0 or (rhs == 0 and slack_col >= 0 and row[slack_col] < 0):
                row = [-v for v in row]
                rhs = -rhs
            row.append(rhs)
            if slack_col >= 0 and row[slack_col] == 1:
                basis.append(slack_col)
            else:
                needs_artificial.append(len(rows))
                basis.append(-1)  # patched below
            rows.append(row)

        art_cols = []
        total_cols = ncols + len(needs_artificial)
        for row in rows:
            rhs = row.pop()
            row.extend([ZERO] * len(needs_artificial))
            row.append(rhs)
        for k, r in enumerate(needs_artificial):
            col = ncols + k
            rows[r][col] = ONE
            basis[r] = col
            art_cols.append(col)

        self._ncols = total_cols
        self._banned = frozenset(art_cols)
        self.feasible = True
        if art_cols:
            cost = [ZERO] * total_cols
            for col in art_cols:
                cost[col] = ONE
            zrow = _reduced_cost_row(rows, basis, cost)
            status = _run_simplex(rows, basis, zrow, frozenset())
            if status is not LpStatus.OPTIMAL or -zrow[-1] != 0:
                self.feasible = False
            else:
                self._evict_artificials(rows, basis, art_cols)
        self._rows = rows
        self._basis = basis

    def _evict_artificials(
        self, rows: list[list[Fraction]], basis: list[int], art_cols: list[int]
    ) -> None:
        """Pivot zero-valued artificials out of the basis; drop dependent rows."""
        art = set(art_cols)
        r = 0
        while r < len(rows):
            if basis[r] in art:
                row = rows[r]
                entering = next(
                    (j for j in range(self._ncols) if j not in art and row[j] != 0),
                    -1,
                )
                if entering < 0:
                    del rows[r]
                    del basis[r]
                    continue
                dummy = [ZERO] * (self._ncols + 1)
                _pivot(rows, dummy, r, entering)
                basis[r] = entering
            r += 1

    def witness(self) -> Point | None:
        """A feasible point, or None when the system is infeasible."""
        if not self.feasible:
            return None
        return self._point_from(self._rows, self._basis)

    def _point_from(self, rows: list[list[Fraction]], basis: list[int]) -> Point:
        values = {col: rows[r][-1] for r, col in enumerate(basis)}
        return tuple(
            values.get(i, ZERO) - values.get(self.arity + i, ZERO)
            for i in range(self.arity)
        )

    def optimize(self, objective: AffineFunc, sense: Sense) -> LpOutcome:
        if objective.arity != self.arity:
            raise DimensionError("objective arity differs from system arity")
        if not self.feasible:
            return LpOutcome(LpStatus.INFEASIBLE)
        rows = [row[:] for row in self._rows]
        basis = self._basis[:]
        cost = [ZERO] * self._ncols
        flip = sense is Sense.MAXIMIZE
        for i, c in enumerate(objective.coeffs):
            cc = -c if flip else c
            cost[i] = cc
            cost[self.arity + i] = -cc
        zrow = _reduced_cost_row(rows, basis, cost)
        status = _run_simplex(rows, basis, zrow, self._banned)
        if status is LpStatus.UNBOUNDED:
            return LpOutcome(LpStatus.UNBOUNDED)
        witness = self._point_from(rows, basis)
        optimum = objective(witness)
        tableau_val = -zrow[-1] + (objective.bias if not flip else -objective.bias)
        if flip:
            tableau_val = -tableau_val
        if optimum != tableau_val:
            raise InternalCheckError(
                f"objective at witness ({optimum}) disagrees with tableau ({tableau_val})"
            )
        self._verify(witness)
        return LpOutcome(LpStatus.OPTIMAL, optimum, witness)

    def _verify(self, point: Point) -> None:
        for func, rel in self.constraints:
            if not rel.holds(func(point)):
                raise InternalCheckError(
                    f"witness {point} violates constraint {func} {rel.value}"
                )


def solve(lp: LinearProgram) -> LpOutcome:
    """Classify and solve: exact optimum with witness, infeasible, or unbounded."""
    solver = SimplexSolver(lp.constraints, lp.objective.arity)
    if not solver.feasible:
        return LpOutcome(LpStatus.INFEASIBLE)
    return solver.optimize(lp.objective, lp.sense)


def is_feasible(constraints: Sequence[Constraint], arity: int | None = None) -> bool:
    """True iff the constraint system has a rational solution."""
    if arity is None:
        if not constraints:
            return True
        arity = constraints[0][0].arity
    solver = SimplexSolver(constraints, arity)
    if solver.feasible:
        solver._verify(solver.witness())
    return solver.feasible
