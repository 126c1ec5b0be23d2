"""Acceptance gate: one printed PASS/FAIL line per criterion.

Run ``pytest tests/test_acceptance.py -v`` to see the lines; they bypass
output capture so they also show up in a full ``pytest -v`` run.
"""

import json
import math
import time

import numpy as np
import pytest

from asfsparse import frames, harness, lp, solvers
from asfsparse.cli import main
from asfsparse.nsp import nsp_check

from conftest import min_l1_over_supports, random_lp


@pytest.fixture
def report(capsys):
    def emit(number, name, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number} {'PASS' if ok else 'FAIL'} {name}: {detail}")
        return ok
    return emit


def test_1_mercedes_benz_fixture(report):
    start = time.perf_counter()
    T = frames.mercedes_benz()
    cert = frames.certify(frames.from_hilbert_frame(T))
    one, two = nsp_check(T, 1), nsp_check(T, 2)
    elapsed = time.perf_counter() - start
    w = two.witness
    checks = {
        "mu": abs(cert.mu - 0.5) <= 1e-12,
        "threshold": abs(cert.threshold - 1.5) <= 1e-12,
        "k": cert.max_certified_sparsity == 1,
        "order1": one.holds and abs(one.worst_ratio - 1 / 3) <= 1e-8,
        "order2": (not two.holds) and abs(two.worst_ratio - 2 / 3) <= 1e-8,
        "witness": w is not None and np.allclose(w / w[0], [1, 1, 1], atol=1e-8),
        "runtime": elapsed < 1.0,
    }
    ok = all(checks.values())
    report(1, "Mercedes-Benz fixture", ok,
           f"mu={cert.mu:.15g} threshold={cert.threshold:.15g} "
           f"k={cert.max_certified_sparsity} r1={one.worst_ratio:.10f} "
           f"r2={two.worst_ratio:.10f} {elapsed:.3f}s failed={[k for k, v in checks.items() if not v]}")
    assert ok


def _theorem_m_pairs():
    rng = np.random.default_rng(2024)
    pairs = []
    for kind, n in (("hilbert_normalized", 24), ("asf_unit_diagonal", 24), ("asf_perturbed", 24)):
        for i in range(n):
            dim = int(rng.integers(3, 7))
            count = int(rng.integers(dim + 1, 11))
            pairs.append((kind, frames.random_pair(dim, count, kind, seed=1000 * len(pairs) + i)))
    return pairs


def test_2_theorem_m_suite(report):
    start = time.perf_counter()
    pairs = _theorem_m_pairs()
    planted = failures = nonvacuous = 0
    per_kind = {}
    for kind, p in pairs:
        cert = frames.certify(p)
        k = cert.max_certified_sparsity
        nonvacuous += k is None or k >= 1
        per_kind.setdefault(kind, [0, 0])
        per_kind[kind][0] += 1
        per_kind[kind][1] += k is None or k >= 1
        # largest certified size through the harness
        rep = harness.verify_theorem_m(p, trials=6, seed=planted)
        trials = list(rep.trials)
        # every smaller size, including the zero vector
        top = 3 if k is None else k
        T = np.array(p.synthesis)
        rng = np.random.default_rng(planted)
        for size in range(0, top):
            for _ in range(2):
                trials.append(harness.run_trial(T, harness.plant(rng, p.count, size)))
        for t in trials:
            planted += 1
            bad = not t.ok or t.max_coefficient_error > 1e-6
            failures += bad
    elapsed = time.perf_counter() - start
    counts = {kind: len([1 for kk, _ in pairs if kk == kind]) for kind in per_kind}
    ok = (failures == 0 and counts["hilbert_normalized"] >= 20
          and counts["asf_unit_diagonal"] >= 20 and elapsed < 60)
    summary = " ".join(f"{kind}={n}({nv} nonvacuous)" for kind, (n, nv) in per_kind.items())
    report(2, "Theorem M suite", ok,
           f"{summary} planted={planted} counterexamples={failures} {elapsed:.1f}s")
    assert ok


def test_3_theorem_iff_suite(report):
    start = time.perf_counter()
    rng = np.random.default_rng(77)
    cases = disagreements = bad_cx = nsp_failures = 0
    for i in range(36):
        dim = int(rng.integers(2, 6))
        count = int(rng.integers(dim, 9))
        T = rng.standard_normal((dim, count))
        for k in (1, 2):
            if k > count:
                continue
            rep = harness.verify_iff(T, k, seed=i)
            cases += 1
            disagreements += not rep.agrees
            if not rep.nsp.holds:
                nsp_failures += 1
                cx = rep.counterexample
                comp, c, x = (np.asarray(cx[key]) for key in ("competitor", "c", "x"))
                feasible = np.abs(T @ comp - x).max() <= 1e-8 * (1 + np.abs(x).max())
                smaller = np.abs(comp).sum() <= np.abs(c).sum() + 1e-8
                sparse = np.count_nonzero(c) <= k
                bad_cx += not (feasible and smaller and sparse and rep.counterexample_valid)
    elapsed = time.perf_counter() - start
    ok = cases >= 60 and disagreements == 0 and bad_cx == 0 and elapsed < 120
    report(3, "Theorem IFF suite", ok,
           f"cases={cases} nsp_failures={nsp_failures} disagreements={disagreements} "
           f"invalid_counterexamples={bad_cx} {elapsed:.1f}s")
    assert ok


def test_4_lp_oracle_equivalence(report):
    start = time.perf_counter()
    rng = np.random.default_rng(11)
    n = status_mismatch = value_mismatch = 0
    statuses = {}
    for _ in range(300):
        m = int(rng.integers(1, 7))
        v = int(rng.integers(1, 11))
        c, A, b = random_lp(rng, m, v)
        prog = lp.LinearProgram(c, A, b)
        got, want = lp.solve_lp(prog), lp.lp_oracle_enumerate(prog)
        n += 1
        statuses[want.status] = statuses.get(want.status, 0) + 1
        if got.status != want.status:
            status_mismatch += 1
        elif got.optimal and abs(got.objective_value - want.objective_value) > 1e-7:
            value_mismatch += 1
    elapsed = time.perf_counter() - start
    ok = n >= 200 and status_mismatch == 0 and value_mismatch == 0 and elapsed < 30
    report(4, "LP oracle equivalence", ok,
           f"instances={n} statuses={dict(sorted(statuses.items()))} "
           f"status_mismatch={status_mismatch} value_mismatch={value_mismatch} {elapsed:.1f}s")
    assert ok


def test_5_l1_optimality_oracle(report):
    start = time.perf_counter()
    rng = np.random.default_rng(5)
    n = worse = 0
    worst_gap = -math.inf
    for i in range(60):
        dim = int(rng.integers(2, 6))
        count = int(rng.integers(dim, 9))
        if i % 3 == 0:
            T = rng.integers(-2, 3, (dim, count)).astype(float)
            x = T @ rng.integers(-1, 2, count).astype(float)
        else:
            T = rng.standard_normal((dim, count))
            x = rng.standard_normal(dim)
        best = min_l1_over_supports(T, x)
        if not math.isfinite(best):
            continue
        sol = solvers.solve_l1(T, x, check_unique=False)
        n += 1
        gap = sol.l1 - best
        worst_gap = max(worst_gap, gap)
        worse += gap > 1e-6
    elapsed = time.perf_counter() - start
    ok = n >= 50 and worse == 0 and elapsed < 30
    report(5, "l1 optimality oracle", ok,
           f"instances={n} worse_than_oracle={worse} max_gap={worst_gap:.2e} {elapsed:.1f}s")
    assert ok


def test_6_corollary_equivalence(report):
    Ts = [frames.mercedes_benz(), np.eye(3)]
    rng = np.random.default_rng(6)
    for i in range(25):
        dim = int(rng.integers(2, 7))
        count = int(rng.integers(dim, 11))
        Ts.append(frames.random_pair(dim, count, seed=600 + i).synthesis)
    worst = 0.0
    unequal = bad_verdict = 0
    for T in Ts:
        rep = harness.verify_corollary(T, trials=5, seed=1)
        f, c = rep.functional, rep.classical
        diffs = [abs(f.mu - c["mu"]), abs(f.diag_min - c["diag_min"])]
        if math.isinf(f.threshold) or math.isinf(c["threshold"]):
            diffs.append(0.0 if f.threshold == c["threshold"] else math.inf)
        else:
            diffs.append(abs(f.threshold - c["threshold"]))
        worst = max(worst, *diffs)
        unequal += max(diffs) > 1e-12
        bad_verdict += rep.verdict != harness.THEOREM_HOLDS
    ok = unequal == 0 and bad_verdict == 0
    report(6, "Corollary equivalence", ok,
           f"frames={len(Ts)} max_difference={worst:.2e} unequal={unequal} "
           f"bad_verdicts={bad_verdict}")
    assert ok


def test_7_determinism(report, tmp_path, capsys):
    mb = tmp_path / "mb.json"
    mb.write_text(json.dumps(frames.from_hilbert_frame(frames.mercedes_benz()).to_json()))
    commands = [
        ["gen", "--dim", "3", "--count", "6", "--kind", "asf_perturbed", "--seed", "3"],
        ["certify", "--input", str(mb)],
        ["solve-l0", "--input", str(mb), "--x", "0.3,0.7"],
        ["solve-l1", "--input", str(mb), "--x", "0.3,0.7"],
        ["nsp", "--input", str(mb), "--k", "2"],
        ["verify", "--input", str(mb), "--theorem", "m", "--trials", "20", "--seed", "9"],
        ["verify", "--input", str(mb), "--theorem", "iff", "--k", "2", "--seed", "9"],
        ["verify", "--input", str(mb), "--theorem", "tdp", "--seed", "9"],
        ["verify", "--input", str(mb), "--theorem", "corollary", "--trials", "10"],
        ["demo", "--trials", "5"],
    ]
    differing = []
    for argv in commands:
        blobs = []
        for run in range(2):
            dest = tmp_path / f"{argv[0]}-{run}.json"
            main(argv + ["--output", str(dest)])
            blobs.append(dest.read_bytes())
        json.loads(blobs[0])
        if blobs[0] != blobs[1] or not blobs[0]:
            differing.append(" ".join(argv[:1] + argv[-2:]))
    capsys.readouterr()
    ok = not differing
    report(7, "Determinism", ok, f"commands={len(commands)} differing={differing}")
    assert ok
