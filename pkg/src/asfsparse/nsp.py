"""Null space property of order k: exact certification by linear programming.

For a support ``M`` the tight constant is

    max { ||d_M||_1 : T d = 0, ||d||_1 <= 1 },

computed as the best of one LP per sign pattern on ``M``.  The property of
order ``k`` holds when every ``|M| = k`` gives a constant strictly below 1/2.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import matcore
from .errors import NotInKernel, ScaleGuardError
from .lp import LinearProgram, solve_lp
from .matcore import DEFAULT_TOL

STRICT_MARGIN = 1e-9
MAX_SIGN_SUPPORT = 20
MAX_SUPPORTS = 2_000_000


@dataclass(frozen=True)
class NspReport:
    order: int
    holds: bool
    worst_ratio: float
    worst_support: tuple[int, ...]
    witness: np.ndarray | None

    @property
    def strictness_margin(self) -> float:
        return 0.5 - self.worst_ratio

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "holds": self.holds,
            "worst_ratio": self.worst_ratio,
            "worst_support": list(self.worst_support),
            "witness": None if self.witness is None else matcore.as_list(self.witness),
            "strictness_margin": self.strictness_margin,
        }


def null_space_basis(T, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Columns spanning ``ker T``; zero columns when `T` is injective."""
    return matcore.null_space(T, tol)


def restrict(d, M: Sequence[int]) -> np.ndarray:
    """``d_M``: keep the entries indexed by `M`, zero elsewhere."""
    d = matcore.as_vector(d)
    out = np.zeros_like(d)
    idx = list(M)
    out[idx] = d[idx]
    return out


def complement(count: int, M: Sequence[int]) -> tuple[int, ...]:
    inside = set(M)
    return tuple(i for i in range(count) if i not in inside)


def nsp_support_ratio(T, M: Sequence[int], tol: float = DEFAULT_TOL,
                      kernel: np.ndarray | None = None) -> tuple[float, np.ndarray]:
    """Largest ``||d_M||_1 / ||d||_1`` over nonzero ``d`` in ``ker T``.

    Returns the ratio and a maximiser scaled to unit ℓ1 norm (the zero vector
    when the kernel is trivial or misses `M` entirely).  `kernel` may pass a
    precomputed null space basis to skip the trivial-kernel test.
    """
    T = matcore.as_matrix(T, "T")
    dim, n = T.shape
    M = tuple(M)
    if not M or any(not 0 <= i < n for i in M) or len(set(M)) != len(M):
        raise ValueError(f"bad support {M} for {n} columns")
    if len(M) > MAX_SIGN_SUPPORT:
        raise ScaleGuardError(f"|M| = {len(M)} exceeds sign enumeration bound {MAX_SIGN_SUPPORT}")
    if kernel is None:
        kernel = null_space_basis(T, tol)
    if kernel.shape[1] == 0:
        return 0.0, np.zeros(n)

    # variables (u, v, slack): T u - T v = 0, sum(u + v) + slack = 1
    A = np.zeros((dim + 1, 2 * n + 1))
    A[:dim, :n] = T
    A[:dim, n:2 * n] = -T
    A[dim, :] = 1.0
    rhs = np.zeros(dim + 1)
    rhs[dim] = 1.0

    best, best_d = 0.0, np.zeros(n)
    # sigma and -sigma give the same optimum; fix the first sign
    for tail in itertools.product((1.0, -1.0), repeat=len(M) - 1):
        sigma = (1.0,) + tail
        cost = np.zeros(2 * n + 1)
        for i, s in zip(M, sigma):
            cost[i] = -s
            cost[n + i] = s
        out = solve_lp(LinearProgram(cost, A, rhs), tol)
        value = -out.objective_value
        if value > best:
            best = value
            best_d = out.solution[:n] - out.solution[n:2 * n]
    size = matcore.norm(best_d, "l1")
    if size <= tol:
        return 0.0, np.zeros(n)
    best_d = best_d / size
    return matcore.norm(best_d[list(M)], "l1"), best_d


def nsp_check(T, k: int, tol: float = DEFAULT_TOL) -> NspReport:
    """Decide the null space property of order `k`.

    Only supports of size exactly ``k`` are examined; ``||d_M||_1`` grows
    with ``M`` so smaller supports cannot be worse.  Ties keep the
    lexicographically first support.
    """
    T = matcore.as_matrix(T, "T")
    n = T.shape[1]
    if not 1 <= k <= n:
        raise ValueError(f"order k must lie in [1, {n}]")
    if math.comb(n, k) > MAX_SUPPORTS:
        raise ScaleGuardError(f"C({n}, {k}) supports exceed {MAX_SUPPORTS}")
    kernel = null_space_basis(T, tol)
    worst, worst_M, witness = -1.0, tuple(range(k)), None
    if kernel.shape[1] == 0:
        worst = 0.0
    else:
        for M in itertools.combinations(range(n), k):
            ratio, d = nsp_support_ratio(T, M, tol, kernel=kernel)
            if ratio > worst:
                worst, worst_M = ratio, M
                witness = d if matcore.norm(d, "l1") > 0 else None
    return NspReport(order=k, holds=worst < 0.5 - STRICT_MARGIN, worst_ratio=worst,
                     worst_support=worst_M, witness=witness)


def counterexample_from_witness(T, M: Sequence[int], d, tol: float = DEFAULT_TOL):
    """Split a kernel vector into two representations of one target.

    With ``c = d_M`` and ``x = T c`` the vector ``-d_{M^c}`` also synthesises
    `x`.  When ``||d_M||_1 >= ||d||_1 / 2`` it is no longer in ℓ1 than `c`,
    so `c` cannot be the unique basis pursuit solution.

    Returns
    -------
    c, x, competitor : ndarray
    """
    T = matcore.as_matrix(T, "T")
    d = matcore.as_vector(d, "d")
    if d.shape[0] != T.shape[1]:
        raise ValueError("d length must equal the number of columns")
    size = matcore.norm(d, "linf")
    if size == 0.0:
        raise NotInKernel("d is the zero vector")
    if matcore.norm(T @ d, "linf") > tol * max(1.0, size) * max(1.0, float(np.max(np.abs(T)))):
        raise NotInKernel("T d is not zero within tolerance")
    c = restrict(d, M)
    competitor = -restrict(d, complement(T.shape[1], M)) + 0.0
    return c, T @ c, competitor
