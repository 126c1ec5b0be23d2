"""Standard-form linear programs: a dense two-phase simplex and a brute-force oracle.

Both routines solve::

    minimize  c @ y   subject to  A @ y = b,  y >= 0
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import matcore
from .errors import IterationLimit, ScaleGuardError, SingularError
from .matcore import DEFAULT_TOL

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

ORACLE_MAX_VARS = 12
ORACLE_MAX_ROWS = 8


@dataclass(frozen=True)
class LinearProgram:
    objective: np.ndarray
    constraint_matrix: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        A = matcore.as_matrix(self.constraint_matrix, "constraint_matrix")
        c = matcore.as_vector(self.objective, "objective")
        b = matcore.as_vector(self.rhs, "rhs")
        if c.shape[0] != A.shape[1] or b.shape[0] != A.shape[0]:
            raise ValueError(
                f"inconsistent shapes: A {A.shape}, objective {c.shape}, rhs {b.shape}")
        object.__setattr__(self, "constraint_matrix", matcore.frozen(A))
        object.__setattr__(self, "objective", matcore.frozen(c))
        object.__setattr__(self, "rhs", matcore.frozen(b))

    @property
    def shape(self) -> tuple[int, int]:
        return self.constraint_matrix.shape

    def to_json(self) -> dict:
        return {"objective": matcore.as_list(self.objective),
                "constraint_matrix": matcore.matrix_to_json(self.constraint_matrix),
                "rhs": matcore.as_list(self.rhs)}

    @classmethod
    def from_json(cls, obj: dict) -> "LinearProgram":
        return cls(matcore.vector_from_json(obj["objective"]),
                   matcore.matrix_from_json(obj["constraint_matrix"]),
                   matcore.vector_from_json(obj["rhs"]))


@dataclass(frozen=True)
class LpOutcome:
    status: str
    solution: np.ndarray | None = None
    objective_value: float | None = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL

    def to_json(self) -> dict:
        return {"status": self.status,
                "solution": None if self.solution is None else matcore.as_list(self.solution),
                "objective_value": self.objective_value,
                "iterations": self.iterations}


class _Tableau:
    """Dense tableau ``[B^-1 A | B^-1 b]`` with an explicit basis list."""

    def __init__(self, body: np.ndarray, basis: list[int], piv_tol: float, limit: int):
        self.T = body
        self.basis = basis
        self.piv_tol = piv_tol
        self.limit = limit
        self.iterations = 0

    def pivot(self, row: int, col: int) -> None:
        T = self.T
        T[row] /= T[row, col]
        others = np.arange(T.shape[0]) != row
        T[others] -= np.outer(T[others, col], T[row])
        T[others, col] = 0.0
        rhs = T[:, -1]
        rhs[(rhs < 0) & (rhs > -self.piv_tol)] = 0.0
        self.basis[row] = col

    def run(self, cost: np.ndarray, rc_tol: float) -> bool:
        """Bland-rule simplex on the first ``len(cost)`` columns.

        Returns False when the objective is unbounded below.
        """
        ncols = cost.shape[0]
        while True:
            T = self.T
            reduced = cost - cost[self.basis] @ T[:, :ncols]
            reduced[self.basis] = 0.0
            entering = np.flatnonzero(reduced < -rc_tol)
            if entering.size == 0:
                return True
            col = int(entering[0])
            column = T[:, col]
            rows = np.flatnonzero(column > self.piv_tol)
            if rows.size == 0:
                return False
            ratios = T[rows, -1] / column[rows]
            best = ratios.min()
            ties = rows[ratios <= best + 1e-12 * (1.0 + abs(best))]
            row = int(min(ties, key=lambda i: self.basis[i]))
            if self.iterations >= self.limit:
                raise IterationLimit(f"simplex exceeded {self.limit} pivots")
            self.pivot(row, col)
            self.iterations += 1


def solve_lp(prog: LinearProgram, tol: float = DEFAULT_TOL,
             feas_tol: float = DEFAULT_TOL) -> LpOutcome:
    """Two-phase dense-tableau simplex with Bland's anti-cycling rule.

    Phase 1 minimises the sum of one artificial per row; an optimum above
    ``feas_tol * (1 + max|b|)`` means the program is infeasible.  Artificials
    left in the basis at level zero are pivoted out, or their rows dropped as
    redundant, before Phase 2 runs on the true objective.

    Raises
    ------
    IterationLimit
        After ``50 * (m + v)`` pivots in total.
    """
    if tol <= 0 or feas_tol <= 0:
        raise ValueError("tolerances must be positive")
    A = np.array(prog.constraint_matrix, dtype=float, copy=True)
    b = np.array(prog.rhs, dtype=float, copy=True)
    c = np.array(prog.objective, dtype=float)
    m, v = A.shape
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    scale = max(1.0, float(np.max(np.abs(A))))
    piv_tol = tol * scale
    body = np.hstack([A, np.eye(m), b[:, None]])
    tab = _Tableau(body, list(range(v, v + m)), piv_tol, 50 * (m + v))

    phase1 = np.concatenate([np.zeros(v), np.ones(m)])
    tab.run(phase1, tol)
    infeasibility = float(phase1[tab.basis] @ tab.T[:, -1])
    if infeasibility > feas_tol * (1.0 + float(np.max(b, initial=0.0))):
        return LpOutcome(INFEASIBLE, iterations=tab.iterations)

    keep = []
    for row in range(m):
        if tab.basis[row] < v:
            keep.append(row)
            continue
        cand = np.flatnonzero(np.abs(tab.T[row, :v]) > piv_tol)
        if cand.size:
            tab.pivot(row, int(cand[0]))
            keep.append(row)
    tab.T = np.hstack([tab.T[keep, :v], tab.T[keep, -1:]])
    tab.basis = [tab.basis[r] for r in keep]

    rc_tol = tol * max(1.0, float(np.max(np.abs(c), initial=0.0)))
    if not tab.run(c, rc_tol):
        return LpOutcome(UNBOUNDED, iterations=tab.iterations)
    y = np.zeros(v)
    y[tab.basis] = np.maximum(tab.T[:, -1], 0.0)
    return LpOutcome(OPTIMAL, y, float(c @ y), tab.iterations)


def _independent_rows(A: np.ndarray, b: np.ndarray, tol: float):
    """Row-reduce ``[A | b]``; None if inconsistent, else an equivalent full-row-rank system."""
    R, pivots = matcore.rref(np.hstack([A, b[:, None]]), tol)
    v = A.shape[1]
    if v in pivots:
        return None
    r = len(pivots)
    return R[:r, :v], R[:r, v]


def _basic_feasible_points(A: np.ndarray, b: np.ndarray, tol: float):
    """Yield every basic feasible solution of ``A y = b, y >= 0`` (full row rank A)."""
    r, v = A.shape
    if r == 0:
        yield np.zeros(v)
        return
    for cols in itertools.combinations(range(v), r):
        try:
            x = matcore.solve_linear(A[:, cols], b, tol)
        except SingularError:
            continue
        if np.all(x >= -tol * (1.0 + float(np.max(np.abs(x))))):
            y = np.zeros(v)
            y[list(cols)] = np.maximum(x, 0.0)
            yield y


def lp_oracle_enumerate(prog: LinearProgram, tol: float = DEFAULT_TOL) -> LpOutcome:
    """Solve by enumerating every basis; an independent check on `solve_lp`.

    Infeasible when no basic feasible point exists.  Unbounded when feasible
    and some vertex ``w`` of ``{A w = 0, sum(w) = 1, w >= 0}`` (a normalised
    extreme ray) has ``c @ w < 0``.  Otherwise the cheapest basic feasible
    point is optimal.
    """
    m, v = prog.shape
    if v > ORACLE_MAX_VARS or m > ORACLE_MAX_ROWS:
        raise ScaleGuardError(
            f"oracle limited to v <= {ORACLE_MAX_VARS}, m <= {ORACLE_MAX_ROWS}; got v={v}, m={m}")
    A = np.array(prog.constraint_matrix)
    c = np.array(prog.objective)
    reduced = _independent_rows(A, np.array(prog.rhs), tol)
    if reduced is None:
        return LpOutcome(INFEASIBLE)
    best = None
    for y in _basic_feasible_points(*reduced, tol):
        if best is None or c @ y < c @ best:
            best = y
    if best is None:
        return LpOutcome(INFEASIBLE)

    ray_sys = _independent_rows(np.vstack([A, np.ones((1, v))]),
                                np.concatenate([np.zeros(m), [1.0]]), tol)
    if ray_sys is not None:
        c_scale = max(1.0, float(np.max(np.abs(c))))
        for w in _basic_feasible_points(*ray_sys, tol):
            if c @ w < -tol * c_scale:
                return LpOutcome(UNBOUNDED)
    return LpOutcome(OPTIMAL, best, float(c @ best))
