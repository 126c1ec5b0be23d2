"""Exhaustive ℓ0 and LP-based ℓ1 recovery over a finite synthesis matrix."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import matcore
from .errors import InfeasibleError, NoSolution, NotFound
from .lp import LinearProgram, solve_lp
from .matcore import DEFAULT_TOL

ZERO_THRESHOLD = 1e-8
PROBE_EPS = 1e-7
TIE_TOL = 1e-6

YES, NO, NOT_CHECKED = "yes", "no", "not_checked"


@dataclass(frozen=True)
class SparseSolution:
    coefficients: np.ndarray
    support: tuple[int, ...]
    l0: int
    l1: float
    residual: float
    unique: str = NOT_CHECKED
    competitor: np.ndarray | None = None

    def to_json(self) -> dict:
        return {
            "coefficients": matcore.as_list(self.coefficients),
            "support": list(self.support),
            "l0": self.l0,
            "l1": self.l1,
            "residual": self.residual,
            "unique": self.unique,
            "competitor": None if self.competitor is None
            else matcore.as_list(self.competitor),
        }


def _summarise(T: np.ndarray, x: np.ndarray, d: np.ndarray, unique: str,
               competitor: np.ndarray | None, zero_tol: float) -> SparseSolution:
    supp = matcore.support(d, zero_tol)
    return SparseSolution(
        coefficients=d,
        support=supp,
        l0=len(supp),
        l1=matcore.norm(d, "l1"),
        residual=matcore.norm(T @ d - x, "linf"),
        unique=unique,
        competitor=competitor,
    )


def _check_target(T, x):
    T = matcore.as_matrix(T, "T")
    x = matcore.as_vector(x, "x")
    if x.shape[0] != T.shape[0]:
        raise ValueError(f"x has length {x.shape[0]}, expected {T.shape[0]}")
    return T, x


def solve_on_support(T, M: Sequence[int], x, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Coefficients supported on `M` that synthesise `x`.

    Free directions of the restricted system are set to zero, so the result is
    the unique solution whenever the columns in `M` are independent.

    Raises
    ------
    NoSolution
        If ``x`` is not in the span of the columns indexed by `M`.
    """
    T, x = _check_target(T, x)
    M = list(M)
    if any(not 0 <= i < T.shape[1] for i in M) or len(set(M)) != len(M):
        raise ValueError(f"bad support {M} for {T.shape[1]} columns")
    d = np.zeros(T.shape[1])
    if not M:
        if matcore.norm(x, "linf") <= tol:
            return d
        raise NoSolution("empty support cannot reach a nonzero target")
    sol = matcore.particular_solution(T[:, M], x, tol)
    if sol is None:
        raise NoSolution(f"target outside span of columns {M}")
    d[M] = sol
    return d


def solve_l0(T, x, max_k: int | None = None, tol: float = DEFAULT_TOL,
             zero_tol: float = ZERO_THRESHOLD) -> SparseSolution:
    """Sparsest representation by scanning supports of growing size.

    Supports are visited by cardinality, lexicographically within one.  Once
    the optimum at size ``s`` is found, the rest of the size-``s`` supports
    are scanned for another representation, which yields ``unique="no"``
    with that representation as competitor.
    """
    T, x = _check_target(T, x)
    count = T.shape[1]
    max_k = count if max_k is None else max_k
    if not 0 <= max_k <= count:
        raise ValueError(f"max_k must lie in [0, {count}]")
    for s in range(max_k + 1):
        supports = itertools.combinations(range(count), s)
        for M in supports:
            try:
                c = solve_on_support(T, M, x, tol)
            except NoSolution:
                continue
            competitor = _l0_competitor(T, M, x, c, supports, tol, zero_tol)
            return _summarise(T, x, c, NO if competitor is not None else YES,
                              competitor, zero_tol)
    raise NotFound(f"no support of size <= {max_k} reproduces x")


def _l0_competitor(T, M, x, c, remaining, tol, zero_tol):
    # Columns on M are independent: otherwise the free-variables-zero solution
    # would be sparser and found at a smaller cardinality.
    for other in remaining:
        try:
            d = solve_on_support(T, other, x, tol)
        except NoSolution:
            continue
        if matcore.norm(d - c, "linf") > zero_tol:
            return d
    return None


def _l1_program(T: np.ndarray, x: np.ndarray, weights: np.ndarray) -> LinearProgram:
    return LinearProgram(weights, np.hstack([T, -T]), x)


def solve_l1(T, x, tol: float = DEFAULT_TOL, zero_tol: float = ZERO_THRESHOLD,
             check_unique: bool = True) -> SparseSolution:
    """Basis pursuit: minimise ``||d||_1`` subject to ``T d = x``.

    Uses the split ``d = u - v`` with ``u, v >= 0``.  Uniqueness is probed by
    re-solving with the cost of one split coordinate raised by ``PROBE_EPS``,
    once per coordinate.  Any probe landing on a different point whose plain
    ℓ1 norm ties the optimum (within ``TIE_TOL``) proves non-uniqueness.  If
    every probe returns the same point, that point minimises each coordinate
    over the optimal face and is therefore the only optimum.

    Raises
    ------
    InfeasibleError
        If ``x`` lies outside the column span of ``T``.
    """
    T, x = _check_target(T, x)
    n = T.shape[1]
    base = np.ones(2 * n)
    out = solve_lp(_l1_program(T, x, base), tol)
    if not out.optimal:
        raise InfeasibleError(f"basis pursuit LP is {out.status}")
    d = out.solution[:n] - out.solution[n:]
    best = matcore.norm(d, "l1")
    if not check_unique:
        return _summarise(T, x, d, NOT_CHECKED, None, zero_tol)

    for j in range(2 * n):
        w = base.copy()
        w[j] += PROBE_EPS
        probe = solve_lp(_l1_program(T, x, w), tol)
        if not probe.optimal:
            continue
        alt = probe.solution[:n] - probe.solution[n:]
        if (abs(matcore.norm(alt, "l1") - best) <= TIE_TOL
                and matcore.norm(alt - d, "linf") > TIE_TOL):
            return _summarise(T, x, d, NO, alt, zero_tol)
    return _summarise(T, x, d, YES, None, zero_tol)
