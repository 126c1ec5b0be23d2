"""Command-line front end.

Exit codes: 0 positive verdict, 1 negative verdict (NSP fails, recovery not
unique, counterexample), 2 usage or parse error, 3 hypothesis refusal.
Results go to ``--output`` (default stdout); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import frames, harness, matcore, nsp, solvers
from .errors import (AsfSparseError, HypothesisError, InfeasibleError, NotAFrameError,
                     NotFound)
from .frames import FramePair


EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_REFUSED = 0, 1, 2, 3
COMMANDS = ("gen", "certify", "solve-l0", "solve-l1", "nsp", "verify", "demo")
THEOREMS = ("m", "iff", "tdp", "corollary")


class UsageError(Exception):
    pass


def _diag(msg: str) -> None:
    print(f"asfsparse: {msg}", file=sys.stderr)


@dataclass
class CliConfig:
    command: str
    input_path: str | None = None
    output_path: str | None = None
    seed: int = 42
    tol: float = 1e-9
    k: int | None = None
    trials: int | None = None
    format: str = "json"
    x: str | None = None
    max_k: int | None = None
    theorem: str = "m"
    dim: int | None = None
    count: int | None = None
    kind: str = "hilbert_normalized"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asfsparse",
        description="Certify sparse recovery for finite 1-approximate Schauder frames.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, needs_input=True):
        p = sub.add_parser(name, help=help_text)
        if needs_input:
            p.add_argument("--input", dest="input_path",
                           help="frame pair / matrix JSON or CSV (default: stdin)")
        p.add_argument("--output", dest="output_path", help="write the result here")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--tol", type=float, default=1e-9)
        return p

    g = add("gen", "generate a random frame pair", needs_input=False)
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--count", type=int, required=True)
    g.add_argument("--kind", choices=frames.KINDS, default="hilbert_normalized")

    add("certify", "coherence certificate")
    for name in ("solve-l0", "solve-l1"):
        p = add(name, f"{name[-2:]} recovery of a target vector")
        p.add_argument("--x", help="target as JSON array or comma list (or 'x' in the input)")
        if name == "solve-l0":
            p.add_argument("--max-k", dest="max_k", type=int)
    p = add("nsp", "null space property of order k")
    p.add_argument("--k", type=int, required=True)
    p = add("verify", "check a theorem on the input instance")
    p.add_argument("--theorem", choices=THEOREMS, default="m")
    p.add_argument("--k", type=int)
    p.add_argument("--trials", type=int)
    p = add("demo", "built-in Mercedes-Benz and identity walkthroughs", needs_input=False)
    p.add_argument("--trials", type=int)
    return parser


def _read_input(path: str | None):
    """Return (frame pair or None, synthesis matrix, target or None)."""
    text = Path(path).read_text() if path else sys.stdin.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        return None, matcore.matrix_from_csv(text), None
    x = None
    if isinstance(obj, dict) and "frame" in obj:
        if "x" in obj:
            x = matcore.vector_from_json(obj["x"])
        obj = obj["frame"]
    if isinstance(obj, dict) and "synthesis" in obj:
        pair = FramePair.from_json(obj)
        return pair, np.array(pair.synthesis), x
    return None, matcore.matrix_from_json(obj), x


def _as_pair(pair, T, tol):
    return pair if pair is not None else frames.from_hilbert_frame(T, tol)


def _text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for key, val in obj.items():
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.append(_text(val, indent + 1))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{pad}{key}: [{len(val)} records]")
        else:
            lines.append(f"{pad}{key}: {val}")
    return "\n".join(lines)


def _emit(cfg: CliConfig, payload: dict) -> None:
    if cfg.format == "json":
        out = json.dumps(payload, indent=2, allow_nan=False) + "\n"
    else:
        out = _text(payload) + "\n"
    if cfg.output_path:
        Path(cfg.output_path).write_text(out)
    else:
        sys.stdout.write(out)


def _validate(cfg: CliConfig) -> None:
    if cfg.tol <= 0:
        raise UsageError("--tol must be positive")
    if cfg.command == "gen":
        if cfg.dim is None or cfg.count is None or not cfg.count >= cfg.dim >= 1:
            raise UsageError("gen needs --count >= --dim >= 1")
    if cfg.command == "nsp" and (cfg.k is None or cfg.k < 1):
        raise UsageError("nsp needs --k >= 1")
    if cfg.command == "verify":
        if cfg.theorem == "iff" and (cfg.k is None or cfg.k < 1):
            raise UsageError("verify --theorem iff needs --k >= 1")
        if cfg.trials is not None and cfg.trials < 0:
            raise UsageError("--trials must be nonnegative")


def _target(cfg: CliConfig, x_from_input):
    if cfg.x is not None:
        return matcore.parse_numbers(cfg.x)
    if x_from_input is None:
        raise UsageError(f"{cfg.command} needs --x or an input of the form "
                         '{"frame": ..., "x": [...]}')
    return x_from_input


def _solution_code(sol: solvers.SparseSolution) -> int:
    return EXIT_OK if sol.unique == solvers.YES else EXIT_NEGATIVE


def _verdict_code(verdict: str) -> int:
    return EXIT_OK if verdict == harness.THEOREM_HOLDS else EXIT_NEGATIVE


def _demo(cfg: CliConfig) -> dict:
    T = frames.mercedes_benz()
    mb = frames.from_hilbert_frame(T, cfg.tol)
    eye = frames.from_hilbert_frame(np.eye(3), cfg.tol)
    trials = 20 if cfg.trials is None else cfg.trials
    return {
        "schema_version": harness.SCHEMA_VERSION,
        "kind": "demo",
        "mercedes_benz": {
            "frame": mb.to_json(),
            "certificate": frames.certify(mb, cfg.tol).to_json(),
            "nsp_order_1": nsp.nsp_check(T, 1, cfg.tol).to_json(),
            "nsp_order_2": nsp.nsp_check(T, 2, cfg.tol).to_json(),
            "l1_of_tau1": solvers.solve_l1(T, T[:, 0], cfg.tol).to_json(),
            "l0_of_tau2_plus_tau3": solvers.solve_l0(T, T[:, 1] + T[:, 2], tol=cfg.tol).to_json(),
            "theorem_m": harness.verify_theorem_m(mb, trials, cfg.seed, cfg.tol).to_json(),
            "iff_order_2": harness.verify_iff(T, 2, cfg.seed, cfg.tol).to_json(),
        },
        "identity": {
            "certificate": frames.certify(eye, cfg.tol).to_json(),
            "nsp_order_3": nsp.nsp_check(np.eye(3), 3, cfg.tol).to_json(),
            "theorem_m": harness.verify_theorem_m(eye, trials, cfg.seed, cfg.tol).to_json(),
        },
    }


def run(cfg: CliConfig) -> int:
    """Execute one command and return its exit code."""
    try:
        _validate(cfg)
        if cfg.command == "gen":
            pair = frames.random_pair(cfg.dim, cfg.count, cfg.kind, cfg.seed, cfg.tol)
            _emit(cfg, pair.to_json())
            return EXIT_OK
        if cfg.command == "demo":
            _emit(cfg, _demo(cfg))
            return EXIT_OK

        pair, T, x_in = _read_input(cfg.input_path)
        if cfg.command == "certify":
            cert = frames.certify(_as_pair(pair, T, cfg.tol), cfg.tol)
            _emit(cfg, cert.to_json())
            ok = cert.diag_condition_holds and cert.frame_operator_invertible
            return EXIT_OK if ok else EXIT_NEGATIVE
        if cfg.command == "solve-l0":
            sol = solvers.solve_l0(T, _target(cfg, x_in), cfg.max_k, cfg.tol)
            _emit(cfg, sol.to_json())
            return _solution_code(sol)
        if cfg.command == "solve-l1":
            sol = solvers.solve_l1(T, _target(cfg, x_in), cfg.tol)
            _emit(cfg, sol.to_json())
            return _solution_code(sol)
        if cfg.command == "nsp":
            if cfg.k > T.shape[1]:
                raise UsageError(f"--k exceeds the {T.shape[1]} frame elements")
            report = nsp.nsp_check(T, cfg.k, cfg.tol)
            _emit(cfg, report.to_json())
            return EXIT_OK if report.holds else EXIT_NEGATIVE
        if cfg.command == "verify":
            trials = harness.DEFAULT_TRIALS if cfg.trials is None else cfg.trials
            if cfg.theorem == "m":
                report = harness.verify_theorem_m(_as_pair(pair, T, cfg.tol), trials,
                                                  cfg.seed, cfg.tol)
            elif cfg.theorem == "tdp":
                report = harness.verify_tdp(_as_pair(pair, T, cfg.tol), cfg.seed, tol=cfg.tol)
            elif cfg.theorem == "iff":
                if cfg.k > T.shape[1]:
                    raise UsageError(f"--k exceeds the {T.shape[1]} frame elements")
                report = harness.verify_iff(T, cfg.k, cfg.seed, cfg.tol)
            else:
                if pair is not None and not np.array_equal(pair.analysis, pair.synthesis.T):
                    raise HypothesisError("corollary needs a Hilbert frame (analysis = synthesis^T)")
                report = harness.verify_corollary(T, trials, cfg.seed, cfg.tol)
            _emit(cfg, report.to_json())
            return _verdict_code(report.verdict)
        raise UsageError(f"unknown command {cfg.command!r}")
    except (UsageError, ValueError, OSError) as exc:
        _diag(str(exc))
        return EXIT_USAGE
    except (HypothesisError, NotAFrameError) as exc:
        _diag(f"refused: {exc}")
        return EXIT_REFUSED
    except NotFound as exc:
        _diag(str(exc))
        return EXIT_NEGATIVE
    except InfeasibleError as exc:
        _diag(f"bad input: {exc}")
        return EXIT_USAGE
    except AsfSparseError as exc:
        _diag(f"{type(exc).__name__}: {exc}")
        return EXIT_USAGE


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    cfg = CliConfig(**{k: v for k, v in vars(ns).items()
                       if k in CliConfig.__dataclass_fields__})
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
