"""Command-line surface: solve / check / converge / mlf / bounds.

Exit codes: 0 success, 1 usage or configuration error, 2 mathematical check
failed beyond tolerance. Output files are written atomically
(temp-then-rename) so interrupted runs never leave partial CSV/JSON behind.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import galerkin, inequality, mlf, norms
from .core import ModalPath, make_uniform_grid, sample

DEFAULT_SEED = 20250527
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK_FAILED = 2

CHECK_SUITES = ("caputo_energy", "rl_energy", "lemma32", "product_rule")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the exit-code contract
    # reserves 2 for mathematical failures, so route usage errors to 1.
    def error(self, message):
        raise UsageError(message)


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError("config document must be a JSON object")
    return cfg


def _build_parser() -> _Parser:
    p = _Parser(prog="fracgalerkin", description=__doc__)
    sub = p.add_subparsers(dest="command")

    def common(sp):
        sp.add_argument("--config", help="path to a JSON configuration document")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--tol", type=float, default=None,
                        help="tolerance override (converge: order floor)")

    sp = sub.add_parser("solve", help="solve a heat problem and write CSV + energy JSON")
    common(sp)
    sp = sub.add_parser("check", help="run an inequality suite on a random corpus")
    common(sp)
    sp.add_argument("--suite", default="caputo_energy")
    sp.add_argument("--cases", type=int, default=20)
    sp.add_argument("--n", type=int, default=513)
    sp.add_argument("--alpha", type=float, default=0.5)
    sp = sub.add_parser("converge", help="measure the modal-solver convergence order")
    common(sp)
    sp.add_argument("--levels", type=int, default=4)
    sp.add_argument("--alpha", type=float, default=0.5)
    sp.add_argument("--lam", type=float, default=1.0)
    sp = sub.add_parser("mlf", help="evaluate the Mittag-Leffler function")
    common(sp)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--beta", type=float, default=1.0)
    sp.add_argument("--z", type=float, required=True)
    sp = sub.add_parser("bounds", help="evaluate a J^alpha boundedness report")
    common(sp)
    sp.add_argument("--alpha", type=float, default=0.5)
    sp.add_argument("--p", type=float, default=1.0)
    sp.add_argument("--regime", default=None)
    sp.add_argument("--n", type=int, default=1025)
    return p


def run_solve(args) -> int:
    if not args.config:
        raise UsageError("solve requires --config")
    problem = galerkin.problem_from_config(_load_config(args.config))
    sol = galerkin.solve(problem)
    out = args.out or "."
    _atomic_write(os.path.join(out, "solution.csv"), sol.to_csv())
    _atomic_write(os.path.join(out, "energy_report.json"), sol.energy.to_json() + "\n")
    print(sol.energy.to_json())
    return EXIT_OK if sol.energy.all_satisfied else EXIT_CHECK_FAILED


def _random_modal_path(rng, grid, max_modes=4, degree=5, zero_start=False) -> ModalPath:
    t = grid.nodes / grid.horizon
    m = int(rng.integers(1, max_modes + 1))
    u = np.zeros((grid.n, m))
    for j in range(m):
        c0 = rng.normal()
        cs = rng.normal(size=degree)
        cc = rng.normal(size=degree)
        u[:, j] = c0 + sum(cs[k] * np.sin((k + 1) * np.pi * t)
                           + cc[k] * np.cos((k + 1) * np.pi * t) for k in range(degree))
    if zero_start:
        u = u - u[0]
    return ModalPath(grid, u)


def run_check(args) -> int:
    if args.suite not in CHECK_SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {CHECK_SUITES}")
    rng = np.random.default_rng(args.seed)
    grid = make_uniform_grid(1.0, args.n)
    a = args.alpha
    cases = []
    for _ in range(args.cases):
        if args.suite == "caputo_energy":
            u = _random_modal_path(rng, grid)
            gp = inequality.caputo_energy_gap(u, a, check_tol=args.tol)
        elif args.suite == "rl_energy":
            u = _random_modal_path(rng, grid, zero_start=True)
            gp = inequality.rl_energy_gap(u, a, check_tol=args.tol)
        elif args.suite == "lemma32":
            u = _random_modal_path(rng, grid, max_modes=2, degree=3)
            gp = inequality.lemma32_residual(u, a, check_tol=args.tol)
        else:
            f1 = _random_modal_path(rng, grid, max_modes=1, degree=3)
            f2 = _random_modal_path(rng, grid, max_modes=1, degree=3)
            gp = inequality.product_rule_residual(f1, f2, a, check_tol=args.tol)
        cases.append(gp.summary())
    summary = {
        "suite": args.suite, "alpha": a, "n": args.n, "seed": args.seed,
        "violations": int(sum(not c["satisfied"] for c in cases)),
        "cases": cases,
    }
    text = json.dumps(summary, indent=2, sort_keys=True)
    if args.out:
        _atomic_write(os.path.join(args.out, f"check_{args.suite}.json"), text + "\n")
    print(text)
    return EXIT_OK if summary["violations"] == 0 else EXIT_CHECK_FAILED


def run_converge(args) -> int:
    if args.levels < 2:
        raise UsageError("need at least 2 refinement levels")
    ns = [256 * 2**k + 1 for k in range(args.levels)]
    rows = galerkin.convergence_study(args.alpha, args.lam, 1.0, 1.0, ns)
    lines = ["n,h,error,order"]
    for r in rows:
        lines.append(f"{r['n']},{r['h']!r},{r['error']!r},{r['order']!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        _atomic_write(os.path.join(args.out, "convergence.csv"), text)
    print(text, end="")
    floor = 1.0 if args.tol is None else args.tol
    orders = [r["order"] for r in rows[1:]]
    ok = all(o >= floor or math.isinf(o) for o in orders)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def run_mlf(args) -> int:
    params = mlf.MLParams(alpha=args.alpha, beta_ml=args.beta)
    value = mlf.mittag_leffler(params, args.z)
    print(json.dumps({"alpha": args.alpha, "beta": args.beta, "z": args.z,
                      "value": value}, indent=2, sort_keys=True))
    return EXIT_OK


def run_bounds(args) -> int:
    grid = make_uniform_grid(1.0, args.n)
    f = sample(lambda t: math.sin(2.0 * math.pi * t), grid)
    report = norms.jalpha_bound_report(f, args.alpha, args.p, regime=args.regime)
    print(report.to_json())
    return EXIT_OK if report.satisfied else EXIT_CHECK_FAILED


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("no command given; see --help")
        handler = {
            "solve": run_solve, "check": run_check, "converge": run_converge,
            "mlf": run_mlf, "bounds": run_bounds,
        }[args.command]
        return handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
