import itertools

import numpy as np
import pytest

from asfsparse import frames
from asfsparse.errors import NoSolution
from asfsparse.solvers import solve_on_support


@pytest.fixture
def mb():
    return frames.mercedes_benz()


@pytest.fixture
def mb_pair():
    return frames.from_hilbert_frame(frames.mercedes_benz())


def random_lp(rng, m, v):
    """Random standard-form LP that is feasible, infeasible or unbounded with fair odds."""
    A = rng.standard_normal((m, v))
    if rng.random() < 0.5:
        y0 = rng.uniform(0, 1, v) * (rng.random(v) < 0.6)
        b = A @ y0
    else:
        b = rng.standard_normal(m)
    c = rng.standard_normal(v) if rng.random() < 0.5 else rng.uniform(0, 1, v)
    return c, A, b


def kernel_vertex_ratio(T, M):
    """Exact sup of ||d_M||_1 / ||d||_1 over ker T without any LP.

    ||d_M||_1 is convex, so its max over the polytope {d in ker T, ||d||_1 <= 1}
    sits at a vertex; vertices are kernel vectors that vanish on at least
    nullity - 1 coordinates.  Each such zero set is tried directly.
    """
    T = np.asarray(T, float)
    n = T.shape[1]
    rank = np.linalg.matrix_rank(T)
    r = n - rank
    if r == 0:
        return 0.0
    best = 0.0
    for Z in itertools.combinations(range(n), r - 1):
        E = np.zeros((len(Z), n))
        E[range(len(Z)), list(Z)] = 1.0
        A = np.vstack([T, E]) if Z else T
        _, s, vt = np.linalg.svd(A)
        nullity = n - int(np.sum(s > 1e-10))
        if nullity != 1:
            continue
        z = vt[-1]
        best = max(best, np.abs(z[list(M)]).sum() / np.abs(z).sum())
    return best


def min_l1_over_supports(T, x, tol=1e-9):
    """Smallest ℓ1 norm among on-support solutions over every support."""
    n = T.shape[1]
    best = np.inf
    for s in range(n + 1):
        for M in itertools.combinations(range(n), s):
            try:
                d = solve_on_support(T, M, x, tol)
            except NoSolution:
                continue
            best = min(best, np.abs(d).sum())
    return best


def brute_l0(T, x, tol=1e-9):
    """(sparsest size, list of distinct solutions at that size) by full scan."""
    n = T.shape[1]
    for s in range(n + 1):
        sols = []
        for M in itertools.combinations(range(n), s):
            cols = T[:, list(M)]
            if s == 0:
                if np.abs(x).max(initial=0) <= tol:
                    sols.append(np.zeros(n))
                continue
            coef, *_ = np.linalg.lstsq(cols, x, rcond=None)
            if np.abs(cols @ coef - x).max() <= 1e-8 and np.all(np.abs(coef) > 1e-8):
                d = np.zeros(n)
                d[list(M)] = coef
                sols.append(d)
        if sols:
            return s, sols
    return None, []


def l1_optimal_vertices(T, x, tol=1e-9, tie=1e-7):
    """Distinct basic solutions of minimum ℓ1 norm (the vertices of the optimal face)."""
    n = T.shape[1]
    cands = []
    for s in range(n + 1):
        for M in itertools.combinations(range(n), s):
            try:
                cands.append(solve_on_support(T, M, x, tol))
            except NoSolution:
                continue
    best = min(np.abs(d).sum() for d in cands)
    verts = []
    for d in cands:
        if np.abs(d).sum() <= best + tie and all(np.abs(d - w).max() > 1e-7 for w in verts):
            verts.append(d)
    return best, verts
