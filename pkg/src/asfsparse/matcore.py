"""Dense real linear algebra: elimination-based solves, ranks and norms.

Matrices are 2-D float64 numpy arrays and vectors are 1-D float64 arrays.
Every routine here is deterministic and pivot-count based; nothing relies on
an SVD or any iterative factorisation.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Sequence

import numpy as np

from .errors import SingularError

DEFAULT_TOL = 1e-9


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Return `a` as a finite 2-D float64 array (copying only if needed)."""
    m = np.asarray(a, dtype=float)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def as_vector(v, name: str = "vector") -> np.ndarray:
    x = np.asarray(v, dtype=float).reshape(-1)
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} has non-finite entries")
    return x


def frozen(a: np.ndarray) -> np.ndarray:
    """Copy `a` into a read-only array."""
    out = np.array(a, dtype=float, copy=True)
    out.setflags(write=False)
    return out


def _scale(a: np.ndarray) -> float:
    s = float(np.max(np.abs(a))) if a.size else 0.0
    return s if s > 0.0 else 1.0


def solve_linear(A, b, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Solve the square system ``A x = b`` by Gaussian elimination.

    Partial pivoting is used; a pivot whose magnitude is at most
    ``tol * max|A|`` makes the system singular.

    Raises
    ------
    SingularError
        If a pivot falls below the scaled tolerance.
    """
    A = as_matrix(A, "A")
    b = as_vector(b, "b")
    n = A.shape[0]
    if A.shape != (n, n) or b.shape[0] != n:
        raise ValueError(f"shape mismatch: A {A.shape}, b {b.shape}")
    M = np.hstack([A, b[:, None]])
    piv_tol = tol * _scale(A)
    for col in range(n):
        p = col + int(np.argmax(np.abs(M[col:, col])))
        if abs(M[p, col]) <= piv_tol:
            raise SingularError(f"pivot {M[p, col]:.3e} in column {col} below {piv_tol:.3e}")
        if p != col:
            M[[col, p]] = M[[p, col]]
        M[col + 1:] -= np.outer(M[col + 1:, col] / M[col, col], M[col])
    x = np.zeros(n)
    for i in range(n - 1, -1, -1):
        x[i] = (M[i, n] - M[i, i + 1:n] @ x[i + 1:]) / M[i, i]
    return x


def rank_tol(A, tol: float = DEFAULT_TOL) -> int:
    """Numerical rank by complete-pivoting row reduction.

    Counts pivots larger than ``tol`` times the largest entry of `A` (the
    first pivot candidate under complete pivoting).
    """
    M = np.array(as_matrix(A, "A"), dtype=float, copy=True)
    rows, cols = M.shape
    ref = float(np.max(np.abs(M)))
    if ref == 0.0:
        return 0
    thresh = tol * ref
    rank = 0
    for r in range(min(rows, cols)):
        sub = np.abs(M[r:, r:])
        i, j = np.unravel_index(int(np.argmax(sub)), sub.shape)
        if sub[i, j] <= thresh:
            break
        i += r
        j += r
        M[[r, i]] = M[[i, r]]
        M[:, [r, j]] = M[:, [j, r]]
        M[r + 1:] -= np.outer(M[r + 1:, r] / M[r, r], M[r])
        rank += 1
    return rank


def rref(A, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form with column-wise partial pivoting.

    Returns the reduced matrix and the list of pivot columns. Entries with
    magnitude below ``tol * max|A|`` are treated as zero when choosing pivots.
    """
    M = np.array(as_matrix(A, "A"), dtype=float, copy=True)
    rows, cols = M.shape
    thresh = tol * _scale(M)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(M[r:, c])))
        if abs(M[p, c]) <= thresh:
            M[r:, c] = 0.0
            continue
        if p != r:
            M[[r, p]] = M[[p, r]]
        M[r] /= M[r, c]
        others = np.arange(rows) != r
        M[others] -= np.outer(M[others, c], M[r])
        M[others, c] = 0.0
        pivots.append(c)
        r += 1
    return M, pivots


def null_space(A, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Basis of ``{d : A d = 0}`` read off the RREF; shape ``(cols, nullity)``."""
    R, pivots = rref(A, tol)
    cols = R.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)))
    for k, f in enumerate(free):
        basis[f, k] = 1.0
        for row, p in enumerate(pivots):
            basis[p, k] = -R[row, f]
    return basis


def particular_solution(A, b, tol: float = DEFAULT_TOL) -> np.ndarray | None:
    """A solution of ``A x = b`` with free variables set to zero, or None.

    The system is declared inconsistent when the residual of the candidate
    exceeds ``tol * (1 + max|b|)`` after scaling by the size of `A`.
    """
    A = as_matrix(A, "A")
    b = as_vector(b, "b")
    R, pivots = rref(np.hstack([A, b[:, None]]), tol)
    if A.shape[1] in pivots:
        return None
    x = np.zeros(A.shape[1])
    for row, p in enumerate(pivots):
        x[p] = R[row, -1]
    resid = float(np.max(np.abs(A @ x - b))) if b.size else 0.0
    if resid > tol * _scale(A) * (1.0 + float(np.max(np.abs(b), initial=0.0))):
        return None
    return x


def norm(v, which: str = "l1", tau: float = 0.0) -> float:
    """ℓ0 (entries with ``|v_i| > tau``), ℓ1 or ℓ∞ norm of a vector."""
    v = as_vector(v)
    if which == "l0":
        if tau < 0:
            raise ValueError("tau must be nonnegative")
        return float(np.count_nonzero(np.abs(v) > tau))
    if which == "l1":
        return float(np.sum(np.abs(v)))
    if which == "linf":
        return float(np.max(np.abs(v), initial=0.0))
    raise ValueError(f"unknown norm {which!r}")


def support(v, tau: float) -> tuple[int, ...]:
    return tuple(int(i) for i in np.flatnonzero(np.abs(as_vector(v)) > tau))


# -- serialisation ---------------------------------------------------------

def matrix_to_json(A) -> dict:
    A = as_matrix(A)
    return {"rows": int(A.shape[0]), "cols": int(A.shape[1]),
            "data": [float(x) for x in A.reshape(-1)]}


def matrix_from_json(obj) -> np.ndarray:
    """Accept ``{"rows", "cols", "data"}`` or a list of rows."""
    if isinstance(obj, dict):
        try:
            rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed matrix object: {exc}") from None
        if len(data) != rows * cols:
            raise ValueError(f"matrix data has {len(data)} entries, expected {rows * cols}")
        return as_matrix(np.asarray(data, dtype=float).reshape(rows, cols))
    if isinstance(obj, list) and obj and all(isinstance(r, list) for r in obj):
        if len({len(r) for r in obj}) != 1:
            raise ValueError("ragged matrix rows")
        return as_matrix(obj)
    raise ValueError("expected a matrix object or a list of rows")


def vector_from_json(obj: Sequence[float]) -> np.ndarray:
    if not isinstance(obj, list):
        raise ValueError("vector must be a JSON array of numbers")
    return as_vector(obj)


def matrix_from_csv(text: str) -> np.ndarray:
    rows: list[list[float]] = []
    for line in csv.reader(io.StringIO(text)):
        cells = [c.strip() for c in line if c.strip()]
        if cells:
            rows.append([float(c) for c in cells])
    if not rows:
        raise ValueError("empty CSV matrix")
    if len({len(r) for r in rows}) != 1:
        raise ValueError("ragged CSV rows")
    return as_matrix(rows)


def parse_numbers(text: str) -> np.ndarray:
    """Parse a vector given as a JSON array or comma-separated numbers."""
    text = text.strip()
    if text.startswith("["):
        return vector_from_json(json.loads(text))
    return as_vector([float(t) for t in text.split(",") if t.strip()])


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def as_list(v: Iterable[float]) -> list[float]:
    return [float(x) for x in v]
