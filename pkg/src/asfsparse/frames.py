"""Finite 1-approximate Schauder frame pairs and their coherence certificates.

A pair is stored as an analysis matrix (row ``n`` is the functional ``f_n``)
and a synthesis matrix (column ``m`` is the vector ``tau_m``).  The cross-Gram
matrix ``G[n, m] = f_n(tau_m)`` drives every recovery certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import matcore
from .errors import GenerationFailed, NotAFrameError
from .matcore import DEFAULT_TOL

GENERATION_RETRIES = 16
KINDS = ("hilbert_normalized", "asf_unit_diagonal", "asf_perturbed")
PERTURBATION = 0.2


@dataclass(frozen=True)
class FramePair:
    analysis: np.ndarray
    synthesis: np.ndarray

    def __post_init__(self):
        a = matcore.as_matrix(self.analysis, "analysis")
        s = matcore.as_matrix(self.synthesis, "synthesis")
        if a.shape != (s.shape[1], s.shape[0]):
            raise ValueError(
                f"analysis {a.shape} must be the shape of transposed synthesis {s.shape}")
        object.__setattr__(self, "analysis", matcore.frozen(a))
        object.__setattr__(self, "synthesis", matcore.frozen(s))

    @property
    def dim(self) -> int:
        return self.synthesis.shape[0]

    @property
    def count(self) -> int:
        return self.synthesis.shape[1]

    def frame_operator(self) -> np.ndarray:
        """``S x = sum_n f_n(x) tau_n`` as a ``dim x dim`` matrix."""
        return self.synthesis @ self.analysis

    def analyze(self, x) -> np.ndarray:
        return self.analysis @ matcore.as_vector(x)

    def synthesize(self, d) -> np.ndarray:
        return self.synthesis @ matcore.as_vector(d)

    def permuted(self, perm) -> "FramePair":
        perm = np.asarray(perm)
        return FramePair(self.analysis[perm, :], self.synthesis[:, perm])

    def to_json(self) -> dict:
        return {"dim": self.dim, "count": self.count,
                "analysis": matcore.matrix_to_json(self.analysis),
                "synthesis": matcore.matrix_to_json(self.synthesis)}

    @classmethod
    def from_json(cls, obj: dict) -> "FramePair":
        try:
            pair = cls(matcore.matrix_from_json(obj["analysis"]),
                       matcore.matrix_from_json(obj["synthesis"]))
        except KeyError as exc:
            raise ValueError(f"frame pair is missing {exc}") from None
        if "dim" in obj and int(obj["dim"]) != pair.dim:
            raise ValueError("declared dim disagrees with synthesis rows")
        if "count" in obj and int(obj["count"]) != pair.count:
            raise ValueError("declared count disagrees with synthesis columns")
        return pair


@dataclass(frozen=True)
class CoherenceCertificate:
    """Cross-Gram diagnostics for a frame pair.

    ``max_certified_sparsity`` is None when the threshold is infinite, i.e.
    every sparsity level is certified.
    """

    mu: float
    diag_min: float
    threshold: float
    max_certified_sparsity: int | None
    diag_condition_holds: bool
    frame_operator_invertible: bool

    def certifies(self, k: int) -> bool:
        return self.max_certified_sparsity is None or k <= self.max_certified_sparsity

    def to_json(self) -> dict:
        inf = math.isinf(self.threshold)
        return {
            "mu": self.mu,
            "diag_min": self.diag_min,
            "threshold": "inf" if inf else self.threshold,
            "max_certified_sparsity": "inf" if self.max_certified_sparsity is None
            else self.max_certified_sparsity,
            "diag_condition_holds": self.diag_condition_holds,
            "frame_operator_invertible": self.frame_operator_invertible,
        }


def cross_gram(p: FramePair) -> np.ndarray:
    return p.analysis @ p.synthesis


def coherence(G) -> float:
    """Largest off-diagonal magnitude of a square matrix (0 for 1x1)."""
    G = matcore.as_matrix(G, "G")
    if G.shape[0] != G.shape[1]:
        raise ValueError("coherence needs a square matrix")
    if G.shape[0] < 2:
        return 0.0
    off = np.abs(G).copy()
    np.fill_diagonal(off, 0.0)
    return float(off.max())


def sparsity_threshold(mu: float) -> float:
    if mu < 0:
        raise ValueError("mu must be nonnegative")
    return math.inf if mu == 0 else 0.5 * (1.0 + 1.0 / mu)


def max_certified_sparsity(threshold: float, tol: float = DEFAULT_TOL) -> int | None:
    """Largest integer strictly below `threshold`; a tie within tol backs off."""
    if math.isinf(threshold):
        return None
    nearest = round(threshold)
    if abs(threshold - nearest) <= tol:
        return int(nearest) - 1
    return int(math.ceil(threshold)) - 1


def certify(p: FramePair, tol: float = DEFAULT_TOL) -> CoherenceCertificate:
    if tol <= 0:
        raise ValueError("tol must be positive")
    G = cross_gram(p)
    mu = coherence(G)
    # Gram dust below tol must not yield thresholds near 1/tol.
    threshold = sparsity_threshold(0.0 if mu <= tol else mu)
    diag_min = float(np.min(np.abs(np.diag(G))))
    return CoherenceCertificate(
        mu=mu,
        diag_min=diag_min,
        threshold=threshold,
        max_certified_sparsity=max_certified_sparsity(threshold, tol),
        diag_condition_holds=diag_min >= 1.0 - tol,
        frame_operator_invertible=matcore.rank_tol(p.frame_operator(), tol) == p.dim,
    )


def from_hilbert_frame(T, tol: float = DEFAULT_TOL) -> FramePair:
    """Lift a spanning set of R^dim to the pair ``f_j = <., tau_j>``."""
    T = matcore.as_matrix(T, "T")
    if matcore.rank_tol(T, tol) != T.shape[0]:
        raise NotAFrameError(f"columns of a {T.shape[0]}x{T.shape[1]} matrix do not span")
    return FramePair(T.T, T)


def mercedes_benz() -> np.ndarray:
    """Three unit vectors at 120 degrees in the plane, as columns."""
    r = math.sqrt(3.0) / 2.0
    return np.array([[1.0, -0.5, -0.5],
                     [0.0, r, -r]])


def random_pair(dim: int, count: int, kind: str = "hilbert_normalized",
                seed: int = 0, tol: float = DEFAULT_TOL) -> FramePair:
    """Draw a frame pair deterministically from `seed`.

    ``hilbert_normalized`` draws Gaussian columns scaled to unit norm and uses
    the transpose as analysis.  ``asf_unit_diagonal`` draws both matrices
    independently and rescales each analysis row so ``f_n(tau_n) = 1``;
    such pairs almost always have coherence above 1.  ``asf_perturbed`` adds
    Gaussian noise of size ``PERTURBATION`` to the transpose of unit-norm
    columns before the same row rescaling, which gives non-symmetric
    cross-Gram matrices with useful coherence.
    Draws whose frame operator is not invertible are discarded, up to
    ``GENERATION_RETRIES`` attempts.
    """
    if not count >= dim >= 1:
        raise ValueError("need count >= dim >= 1")
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    rng = np.random.default_rng(seed)
    for _ in range(GENERATION_RETRIES):
        T = rng.standard_normal((dim, count))
        if kind == "asf_unit_diagonal":
            F = rng.standard_normal((count, dim))
        else:
            T /= np.linalg.norm(T, axis=0)
            F = T.T.copy()
            if kind == "asf_perturbed":
                F += PERTURBATION * rng.standard_normal((count, dim))
        if kind != "hilbert_normalized":
            diag = np.einsum("nd,dn->n", F, T)
            if np.any(np.abs(diag) <= tol):
                continue
            F /= diag[:, None]
        pair = FramePair(F, T)
        if matcore.rank_tol(pair.frame_operator(), tol) == dim:
            return pair
    raise GenerationFailed(
        f"no invertible {kind} pair ({dim}x{count}) after {GENERATION_RETRIES} draws")
