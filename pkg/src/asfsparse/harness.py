"""Mechanical checks of the sparsity theorems on concrete frame instances.

Every report is a plain dataclass with a ``to_json`` method; JSON reports
carry ``"schema_version": 1``.  Reports depend only on their inputs and the
seed: trial ``i`` draws from ``default_rng(seed ^ i)``.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from . import frames, matcore, solvers
from .errors import HypothesisError, NotNormalized
from .frames import CoherenceCertificate, FramePair
from .matcore import DEFAULT_TOL
from .nsp import NspReport, counterexample_from_witness, nsp_check, null_space_basis

SCHEMA_VERSION = 1
RECOVERY_TOL = 1e-6
COMPETITOR_SLACK = 1e-8
NORMALIZED_TOL = 1e-9
EQUALITY_TOL = 1e-12
DEFAULT_TRIALS = 100

THEOREM_HOLDS = "theorem_holds"
COUNTEREXAMPLE = "counterexample_found"


def instance_id(*arrays) -> str:
    h = hashlib.sha256()
    for a in arrays:
        a = np.ascontiguousarray(a, dtype=float)
        h.update(repr(a.shape).encode())
        h.update(a.tobytes())
    return h.hexdigest()[:16]


def plant(rng: np.random.Generator, count: int, size: int, signs=None) -> np.ndarray:
    """Random coefficients of magnitude in [0.1, 1] on a random support of `size`."""
    c = np.zeros(count)
    idx = np.sort(rng.choice(count, size=size, replace=False))
    mags = rng.uniform(0.1, 1.0, size)
    if signs is None:
        signs = rng.choice([-1.0, 1.0], size=size)
    c[idx] = mags * np.asarray(signs, dtype=float)
    return c


@dataclass(frozen=True)
class TrialRecord:
    support: tuple[int, ...]
    coefficients: np.ndarray
    l1_recovered: bool
    l0_recovered: bool
    l1_unique: bool
    l0_unique: bool
    max_coefficient_error: float

    @property
    def ok(self) -> bool:
        return self.l1_recovered and self.l0_recovered and self.l1_unique and self.l0_unique

    def to_json(self) -> dict:
        return {"support": list(self.support),
                "coefficients": matcore.as_list(self.coefficients),
                "l1_recovered": self.l1_recovered,
                "l0_recovered": self.l0_recovered,
                "l1_unique": self.l1_unique,
                "l0_unique": self.l0_unique,
                "max_coefficient_error": self.max_coefficient_error}


@dataclass(frozen=True)
class RecoveryReport:
    instance_id: str
    certificate: CoherenceCertificate
    trials: tuple[TrialRecord, ...]
    seed: int

    @property
    def verdict(self) -> str:
        return THEOREM_HOLDS if all(t.ok for t in self.trials) else COUNTEREXAMPLE

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION,
                "kind": "theorem_m",
                "instance_id": self.instance_id,
                "seed": self.seed,
                "certificate": self.certificate.to_json(),
                "verdict": self.verdict,
                "trials": [t.to_json() for t in self.trials]}


def run_trial(T: np.ndarray, c: np.ndarray, tol: float = DEFAULT_TOL) -> TrialRecord:
    """Synthesise ``x = T c`` and try to get `c` back with both solvers."""
    x = T @ c
    k = int(np.count_nonzero(c))
    l1 = solvers.solve_l1(T, x, tol)
    l0 = solvers.solve_l0(T, x, max_k=k, tol=tol)
    e1 = matcore.norm(l1.coefficients - c, "linf")
    e0 = matcore.norm(l0.coefficients - c, "linf")
    return TrialRecord(
        support=matcore.support(c, 0.0),
        coefficients=c,
        l1_recovered=e1 <= RECOVERY_TOL,
        l0_recovered=e0 <= RECOVERY_TOL,
        l1_unique=l1.unique == solvers.YES,
        l0_unique=l0.unique == solvers.YES,
        max_coefficient_error=max(e1, e0),
    )


def verify_theorem_m(p: FramePair, trials: int = DEFAULT_TRIALS, seed: int = 42,
                     tol: float = DEFAULT_TOL) -> RecoveryReport:
    """Plant certified-sparse vectors and check unique ℓ1 and ℓ0 recovery.

    Each trial uses the largest certified sparsity, or a size in 1..3 when
    every sparsity is certified.

    Raises
    ------
    HypothesisError
        If some ``|f_n(tau_n)| < 1`` or the frame operator is singular.
    """
    cert = frames.certify(p, tol)
    if not cert.diag_condition_holds:
        raise HypothesisError(f"min |f_n(tau_n)| = {cert.diag_min:.6g} < 1")
    if not cert.frame_operator_invertible:
        raise HypothesisError("frame operator is not invertible")
    T = np.array(p.synthesis)
    records = []
    for i in range(trials):
        rng = np.random.default_rng(seed ^ i)
        if cert.max_certified_sparsity is None:
            size = int(rng.integers(1, 4))
        else:
            size = cert.max_certified_sparsity
        c = plant(rng, p.count, min(size, p.count))
        records.append(run_trial(T, c, tol))
    return RecoveryReport(instance_id(p.analysis, p.synthesis), cert, tuple(records), seed)


@dataclass(frozen=True)
class IffReport:
    """NSP verdict next to an exhaustive sign-and-support recovery scan."""

    instance_id: str
    nsp: NspReport
    plants: int
    recovery_failures: int
    first_failure: np.ndarray | None
    counterexample: dict | None
    seed: int

    @property
    def recovery_holds(self) -> bool:
        return self.recovery_failures == 0

    @property
    def agrees(self) -> bool:
        return self.nsp.holds == self.recovery_holds

    @property
    def counterexample_valid(self) -> bool:
        return self.counterexample is None or (
            self.counterexample["competitor_feasible"]
            and self.counterexample["competitor_l1"]
            <= self.counterexample["c_l1"] + COMPETITOR_SLACK)

    @property
    def verdict(self) -> str:
        return THEOREM_HOLDS if self.agrees and self.counterexample_valid else COUNTEREXAMPLE

    def to_json(self) -> dict:
        cx = None
        if self.counterexample is not None:
            cx = {key: matcore.as_list(val) if isinstance(val, np.ndarray) else val
                  for key, val in self.counterexample.items()}
        return {"schema_version": SCHEMA_VERSION,
                "kind": "iff",
                "instance_id": self.instance_id,
                "seed": self.seed,
                "nsp": self.nsp.to_json(),
                "plants": self.plants,
                "recovery_failures": self.recovery_failures,
                "recovery_holds": self.recovery_holds,
                "first_failure": None if self.first_failure is None
                else matcore.as_list(self.first_failure),
                "counterexample": cx,
                "agrees": self.agrees,
                "verdict": self.verdict}


def _recovers_uniquely(T, c, tol) -> bool:
    sol = solvers.solve_l1(T, T @ c, tol, check_unique=False)
    if matcore.norm(sol.coefficients - c, "linf") > RECOVERY_TOL:
        return False
    return solvers.solve_l1(T, T @ c, tol).unique == solvers.YES


def verify_iff(T, k: int, seed: int = 42, tol: float = DEFAULT_TOL) -> IffReport:
    """Check that NSP of order `k` matches unique ℓ1 recovery of k-sparse vectors.

    Unique recovery of ``c`` depends only on its support and sign pattern, so
    every support of size 1..k is planted with every sign pattern (at least
    three draws per support, cycling through patterns) and random magnitudes.
    When the property fails, the worst witness is also split into the
    counterexample pair ``c = d_M`` and ``-d_{M^c}``.
    """
    T = matcore.as_matrix(T, "T")
    n = T.shape[1]
    report = nsp_check(T, k, tol)
    rng = np.random.default_rng(seed)
    plants = failures = 0
    first_failure = None
    for size in range(1, k + 1):
        patterns = list(itertools.product((1.0, -1.0), repeat=size))
        draws = max(3, len(patterns))
        for M in itertools.combinations(range(n), size):
            for j in range(draws):
                c = np.zeros(n)
                c[list(M)] = rng.uniform(0.1, 1.0, size) * np.array(patterns[j % len(patterns)])
                plants += 1
                if not _recovers_uniquely(T, c, tol):
                    failures += 1
                    if first_failure is None:
                        first_failure = c

    counterexample = None
    if not report.holds and report.witness is not None:
        M = report.worst_support
        c, x, comp = counterexample_from_witness(T, M, report.witness, tol)
        scale = max(1.0, float(np.max(np.abs(T))))
        sol = solvers.solve_l1(T, x, tol)
        counterexample = {
            "support": list(M),
            "c": c,
            "x": x,
            "competitor": comp,
            "c_l1": matcore.norm(c, "l1"),
            "competitor_l1": matcore.norm(comp, "l1"),
            "competitor_feasible": matcore.norm(T @ comp - x, "linf") <= tol * scale * (
                1.0 + matcore.norm(x, "linf")),
            "l1_recovers_c_uniquely": bool(
                matcore.norm(sol.coefficients - c, "linf") <= RECOVERY_TOL
                and sol.unique == solvers.YES),
        }
    return IffReport(instance_id(T), report, plants, failures, first_failure,
                     counterexample, seed)


@dataclass(frozen=True)
class TdpReport:
    """Inequality chain behind the coherence-implies-NSP step.

    For every probed kernel vector ``d`` the bound
    ``(1 + 1/mu) |d_n| <= ||d||_1`` must hold for each index ``n``;
    ``min_slack`` is the smallest ``||d||_1 - (1 + 1/mu) |d_n|`` seen, with
    vectors scaled to unit ℓ1 norm.
    """

    instance_id: str
    certificate: CoherenceCertificate
    order: int
    nsp: NspReport | None
    min_slack: float
    vectors_checked: int

    @property
    def verdict(self) -> str:
        ok = self.min_slack >= -1e-9 and (self.nsp is None or self.nsp.holds)
        return THEOREM_HOLDS if ok else COUNTEREXAMPLE

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION,
                "kind": "tdp",
                "instance_id": self.instance_id,
                "certificate": self.certificate.to_json(),
                "order": self.order,
                "nsp": None if self.nsp is None else self.nsp.to_json(),
                "min_slack": self.min_slack,
                "vectors_checked": self.vectors_checked,
                "verdict": self.verdict}


def inequality_s_slack(mu: float, d) -> float:
    """Smallest ``||d||_1 - (1 + 1/mu) |d_n|`` over `n` (``mu = 0`` means infinite factor)."""
    d = matcore.as_vector(d)
    total = matcore.norm(d, "l1")
    peak = matcore.norm(d, "linf")
    if mu == 0.0:
        return 0.0 if peak == 0.0 else -math.inf
    return total - (1.0 + 1.0 / mu) * peak


def verify_tdp(p: FramePair, seed: int = 42, samples: int = 20,
               tol: float = DEFAULT_TOL) -> TdpReport:
    """Check the coherence bound on kernel vectors, then NSP at the certified order."""
    cert = frames.certify(p, tol)
    if not cert.diag_condition_holds:
        raise HypothesisError(f"min |f_n(tau_n)| = {cert.diag_min:.6g} < 1")
    T = np.array(p.synthesis)
    mu = 0.0 if math.isinf(cert.threshold) else cert.mu
    kernel = null_space_basis(T, tol)
    rng = np.random.default_rng(seed)
    vectors = [kernel[:, j] for j in range(kernel.shape[1])]
    if kernel.shape[1]:
        vectors += [kernel @ rng.standard_normal(kernel.shape[1]) for _ in range(samples)]
    slack = math.inf
    for d in vectors:
        d = d / matcore.norm(d, "l1")
        slack = min(slack, inequality_s_slack(mu, d))
    order = cert.max_certified_sparsity
    if order is None:
        order = min(p.count, 3)
    report = None
    if order >= 1:
        report = nsp_check(T, order, tol)
        if report.witness is not None:
            slack = min(slack, inequality_s_slack(mu, report.witness))
            vectors.append(report.witness)
    if not vectors:
        slack = 0.0
    return TdpReport(instance_id(p.analysis, p.synthesis), cert, order, report,
                     float(slack), len(vectors))


@dataclass(frozen=True)
class CorollaryReport:
    classical: dict
    functional: CoherenceCertificate
    recovery: RecoveryReport

    @property
    def certificates_equal(self) -> bool:
        f = self.functional
        c = self.classical
        if abs(c["mu"] - f.mu) > EQUALITY_TOL or abs(c["diag_min"] - f.diag_min) > EQUALITY_TOL:
            return False
        if math.isinf(c["threshold"]) or math.isinf(f.threshold):
            return math.isinf(c["threshold"]) and math.isinf(f.threshold)
        return abs(c["threshold"] - f.threshold) <= EQUALITY_TOL

    @property
    def verdict(self) -> str:
        if self.certificates_equal and self.recovery.verdict == THEOREM_HOLDS:
            return THEOREM_HOLDS
        return COUNTEREXAMPLE

    def to_json(self) -> dict:
        classical = dict(self.classical)
        if math.isinf(classical["threshold"]):
            classical["threshold"] = "inf"
        return {"schema_version": SCHEMA_VERSION,
                "kind": "corollary",
                "classical": classical,
                "functional": self.functional.to_json(),
                "certificates_equal": self.certificates_equal,
                "recovery": self.recovery.to_json(),
                "verdict": self.verdict}


def classical_quantities(T, tol: float = DEFAULT_TOL) -> dict:
    """Gram quantities of a Hilbert frame from pairwise inner products."""
    T = matcore.as_matrix(T, "T")
    n = T.shape[1]
    cols = [T[:, j] for j in range(n)]
    mu = 0.0
    for j in range(n):
        for k in range(j + 1, n):
            mu = max(mu, abs(float(np.dot(cols[j], cols[k]))))
    diag_min = min(float(np.dot(c, c)) for c in cols)
    return {"mu": mu, "diag_min": diag_min,
            "threshold": frames.sparsity_threshold(0.0 if mu <= tol else mu)}


def verify_corollary(T, trials: int = DEFAULT_TRIALS, seed: int = 42,
                     tol: float = DEFAULT_TOL) -> CorollaryReport:
    """The classical normalized-frame theorem through the Hilbert lift.

    Raises
    ------
    NotNormalized
        If some column norm differs from 1 by more than ``NORMALIZED_TOL``.
    """
    T = matcore.as_matrix(T, "T")
    norms = np.linalg.norm(T, axis=0)
    bad = np.flatnonzero(np.abs(norms - 1.0) > NORMALIZED_TOL)
    if bad.size:
        raise NotNormalized(f"columns {bad.tolist()} are not unit norm")
    p = frames.from_hilbert_frame(T, tol)
    classical = classical_quantities(T, tol)
    return CorollaryReport(classical, frames.certify(p, tol),
                           verify_theorem_m(p, trials, seed, tol))


def report_json(report) -> str:
    """Canonical JSON text for any report; byte-identical across reruns."""
    return json.dumps(report.to_json(), indent=2, allow_nan=False) + "\n"
