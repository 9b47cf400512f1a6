"""``whp`` command-line interface.

Data goes to stdout (or ``--out``), diagnostics to stderr. Exit codes:
0 success, 1 computational failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import suites
from .channel import as_schmidt, canonical_dims
from .errors import ConvergenceError
from .optimize import find_crossover, maximize_product_pnorm, nu_single
from .schur import schur_test, s_hat_function, t_component
from .spectrum import analytic_spectrum

COMMANDS = ("nu", "spectrum", "verify", "schur-test", "sweep", "crossover", "lemma-test")
RANDOMIZED = {"verify", "schur-test", "sweep", "lemma-test"}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    d: int | None = None
    d1: int | None = None
    d2: int | None = None
    p: float | None = None
    p_min: float | None = None
    p_max: float | None = None
    steps: int | None = None
    p_lo: float | None = None
    p_hi: float | None = None
    tol: float = 1e-6
    lam: list[float] | None = None
    seed: int = 0
    restarts: int = 6
    pairs: int = 500
    samples: int = 1000
    function: str = "t3"
    k: int = 2
    direction: str | None = None
    format: str = "json"
    out: str | None = None
    extra: dict = field(default_factory=dict)


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj) + "\n"


def _default_seed() -> int:
    env = os.environ.get("WHP_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"WHP_SEED must be an integer, got {env!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="whp", description="Maximal p-norms of Werner-Holevo channels.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, randomized=False):
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", default=None, help="write data to FILE instead of stdout")
        if randomized:
            sp.add_argument("--seed", type=int, default=None, help="default: $WHP_SEED or 0")

    sp = sub.add_parser("nu", help="single-channel maximal p-norm")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    common(sp)

    sp = sub.add_parser("spectrum", help="analytic eigenvalue classes of the product output")
    sp.add_argument("--d1", type=int, required=True)
    sp.add_argument("--d2", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", required=True, help="comma-separated Schmidt vector")
    common(sp)

    for name, help_ in (("verify", "maximize the product p-norm and report the multiplicativity gap"),
                        ("sweep", "entangled vs vertex values over a p-grid")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--d1", type=int, required=True)
        sp.add_argument("--d2", type=int, required=True)
        if name == "verify":
            sp.add_argument("--p", type=float, default=None)
        sp.add_argument("--p-min", type=float, default=None)
        sp.add_argument("--p-max", type=float, default=None)
        sp.add_argument("--steps", type=int, default=None)
        sp.add_argument("--restarts", type=int, default=6)
        common(sp, randomized=True)

    sp = sub.add_parser("crossover", help="exponent where entangled inputs overtake product inputs")
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--p-lo", type=float, default=4.0)
    sp.add_argument("--p-hi", type=float, default=6.0)
    sp.add_argument("--tol", type=float, default=1e-6)
    common(sp)

    sp = sub.add_parser("schur-test", help="Schur-convexity/concavity check on random majorization pairs")
    sp.add_argument("--function", choices=("t1", "t2", "t3", "s_hat", "sum_squares"), default="t3")
    sp.add_argument("--d1", type=int, default=None)
    sp.add_argument("--d2", type=int, default=None)
    sp.add_argument("--d", type=int, default=None, help="simplex dimension for sum_squares")
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--direction", choices=("convex", "concave"), default=None)
    sp.add_argument("--pairs", type=int, default=500)
    common(sp, randomized=True)

    sp = sub.add_parser("lemma-test", help="sign checks of df/ds_m on random node sets")
    sp.add_argument("--samples", type=int, default=1000)
    common(sp, randomized=True)
    return parser


def parse_config(argv=None) -> RunConfig:
    """Parse and validate; every failure here is a usage error."""
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(command=ns.command, format=ns.format, out=ns.out)
    for key in ("d", "d1", "d2", "p", "p_min", "p_max", "steps", "p_lo", "p_hi", "tol",
                "restarts", "pairs", "samples", "function", "k", "direction"):
        if hasattr(ns, key) and getattr(ns, key) is not None:
            setattr(cfg, key, getattr(ns, key))
    if cfg.command in RANDOMIZED:
        cfg.seed = ns.seed if ns.seed is not None else _default_seed()

    def need(cond, msg):
        if not cond:
            raise UsageError(msg)

    def dims_ok(*ds):
        for d in ds:
            need(d is not None and d >= 2, f"dimensions must be integers >= 2, got {d}")

    def p_ok(p):
        need(p is not None and p >= 1.0, f"p must be >= 1, got {p}")

    c = cfg.command
    if c == "nu":
        dims_ok(cfg.d)
        p_ok(cfg.p)
    elif c == "spectrum":
        dims_ok(cfg.d1, cfg.d2)
        try:
            lam = [float(v) for v in ns.lam.split(",")]
        except ValueError:
            raise UsageError(f"cannot parse --lambda {ns.lam!r}")
        need(len(lam) == min(cfg.d1, cfg.d2), f"--lambda needs {min(cfg.d1, cfg.d2)} entries, got {len(lam)}")
        try:
            as_schmidt(lam, tol=1e-9)
        except ValueError as exc:
            raise UsageError(str(exc))
        cfg.lam = lam
    elif c in ("verify", "sweep"):
        dims_ok(cfg.d1, cfg.d2)
        need(cfg.restarts >= 1, "--restarts must be >= 1")
        if c == "verify" and cfg.p is not None:
            p_ok(cfg.p)
        else:
            need(None not in (cfg.p_min, cfg.p_max, cfg.steps), "give --p or all of --p-min, --p-max, --steps")
            p_ok(cfg.p_min)
            need(cfg.p_max >= cfg.p_min, "--p-max must be >= --p-min")
            need(cfg.steps >= 1, "--steps must be >= 1")
    elif c == "crossover":
        need(cfg.d is not None and cfg.d >= 3, "crossover needs --d >= 3")
        need(1.0 <= cfg.p_lo < cfg.p_hi, "need 1 <= --p-lo < --p-hi")
        need(cfg.tol > 0, "--tol must be positive")
    elif c == "schur-test":
        need(cfg.pairs >= 1, "--pairs must be >= 1")
        if cfg.function == "sum_squares":
            dims_ok(cfg.d)
        else:
            dims_ok(cfg.d1, cfg.d2)
            p_ok(cfg.p)
            if cfg.function == "s_hat":
                need(2 <= cfg.k <= min(cfg.d1, cfg.d2), f"--k must lie in 2..{min(cfg.d1, cfg.d2)}")
    elif c == "lemma-test":
        need(cfg.samples >= 4, "--samples must be >= 4")
    return cfg


def _p_grid(cfg: RunConfig) -> list[float]:
    if cfg.p is not None:
        return [cfg.p]
    if cfg.steps == 1:
        return [cfg.p_min]
    return [float(v) for v in np.linspace(cfg.p_min, cfg.p_max, cfg.steps)]


def execute(cfg: RunConfig) -> str:
    c = cfg.command
    if c == "nu":
        value = nu_single(cfg.d, cfg.p)
        if cfg.format == "csv":
            return _csv(["d", "p", "nu"], [[cfg.d, cfg.p, value]])
        return _json({"d": cfg.d, "p": cfg.p, "nu": value})

    if c == "spectrum":
        classes = analytic_spectrum(cfg.lam, cfg.d1, cfg.d2)
        if cfg.format == "csv":
            return _csv(["index", "eigenvalue"], enumerate(classes.flatten().tolist()))
        return _json({"lambda": cfg.lam, **classes.to_dict()})

    if c in ("verify", "sweep"):
        d1, d2 = canonical_dims(cfg.d1, cfg.d2)
        rows = []
        for p in _p_grid(cfg):
            res = maximize_product_pnorm(d1, d2, p, restarts=cfg.restarts, seed=cfg.seed)
            product = (nu_single(d1, p) * nu_single(d2, p)) ** p
            rows.append((p, res, res.best_value - product))
        if c == "sweep":
            if cfg.format == "csv":
                return _csv(["p", "d1", "d2", "entangled_value", "vertex_value", "gap"],
                            [[p, d1, d2, r.best_value, r.vertex_value, r.gap] for p, r, _ in rows])
            return _json({"seed": cfg.seed, "rows": [
                {"p": p, "d1": d1, "d2": d2, "entangled_value": r.best_value,
                 "vertex_value": r.vertex_value, "gap": r.gap} for p, r, _ in rows]})
        if cfg.format == "csv":
            return _csv(["d1", "d2", "p", "best_value", "vertex_value", "gap", "converged"],
                        [[d1, d2, p, r.best_value, r.vertex_value, r.gap, r.converged] for p, r, _ in rows])
        results = []
        for p, r, mgap in rows:
            d = r.to_dict()
            d["multiplicativity_gap"] = mgap
            d["nu_product"] = nu_single(d1, p) * nu_single(d2, p)
            results.append(d)
        return _json({"seed": cfg.seed, "results": results})

    if c == "crossover":
        p_star = find_crossover(cfg.d, cfg.p_lo, cfg.p_hi, cfg.tol)
        if cfg.format == "csv":
            return _csv(["d", "p_lo", "p_hi", "tol", "p_star"], [[cfg.d, cfg.p_lo, cfg.p_hi, cfg.tol, p_star]])
        return _json({"d": cfg.d, "p_lo": cfg.p_lo, "p_hi": cfg.p_hi, "tol": cfg.tol, "p_star": p_star})

    if c == "schur-test":
        if cfg.function == "sum_squares":
            def fn(lam):
                return float(np.sum(np.asarray(lam) ** 2))
            d, dims, p, direction = cfg.d, cfg.d, None, cfg.direction or "convex"
        elif cfg.function == "s_hat":
            d1, d2 = canonical_dims(cfg.d1, cfg.d2)
            fn, d, dims, p = s_hat_function(cfg.k), d1, [d1, d2], None
            direction = cfg.direction or "concave"
        else:
            d1, d2 = canonical_dims(cfg.d1, cfg.d2)
            fn, d, dims, p = t_component(d1, d2, cfg.p, cfg.function), d1, [d1, d2], cfg.p
            direction = cfg.direction or "convex"
        name = cfg.function if cfg.function != "s_hat" else f"s_hat_{cfg.k}"
        report = schur_test(fn, d, cfg.pairs, cfg.seed, direction, name=name, dims=dims, p=p)
        if cfg.format == "csv":
            return _csv(["function", "direction", "dims", "p", "pairs", "violations", "worst_margin", "seed"],
                        [[report.function, report.direction, json.dumps(report.dims), report.p,
                          report.pairs, report.violations, report.worst_margin, report.seed]])
        return _json(report.to_dict())

    if c == "lemma-test":
        report = suites.divided_difference_suite(probes=cfg.samples, seed=cfg.seed)
        if cfg.format == "csv":
            return _csv(list(report), [list(report.values())])
        return _json(report)

    raise UsageError(f"unknown command {c!r}")


def write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".whp-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(cfg: RunConfig) -> int:
    if cfg.command in RANDOMIZED:
        print(f"seed={cfg.seed}", file=sys.stderr)
    try:
        text = execute(cfg)
    except (ConvergenceError, ArithmeticError) as exc:
        print(f"whp: computation failed: {exc}", file=sys.stderr)
        return 1
    except UsageError as exc:
        print(f"whp: {exc}", file=sys.stderr)
        return 2
    write_output(text, cfg.out)
    return 0


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"whp: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse
        return int(exc.code) if exc.code is not None else 0
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
