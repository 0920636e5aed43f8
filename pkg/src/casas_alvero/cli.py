"""Command-line entry point.

Every run writes its outputs plus ``manifest.json`` into ``--out``.  Exit
codes: 0 all checks passed, 1 a check or verdict failed, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Callable, Optional

from . import __version__
from ._accel import default_workers
from .analysis import ca_check
from .explorer import DISTRIBUTIONS, SampleConfig, SearchConfig, ca_search, schoenberg_experiment
from .goncharov import (
    LEVINSON_METHODS,
    NodeSequence,
    bound_classical,
    bound_tight,
    goncharov_expand,
    goncharov_integral,
    goncharov_levinson,
    goncharov_recurrence,
)
from .identities import IDENTITY_IDS
from .numeric import (
    DomainError,
    ExactnessError,
    InvariantViolation,
    NumericError,
    ScalarParseError,
    Tolerance,
    approx_eq,
    as_scalar,
    is_exact,
    parse_scalar,
    render,
    to_float,
)
from .poly import Poly, eval_poly
from .serialize import (
    ReportWriteError,
    RunManifest,
    SchemaError,
    file_digest,
    load_nodes_json,
    load_poly_json,
    now_iso,
    write_report,
)
from .sweeps import sweep

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CONSTRUCTIONS = ("recurrence", "integral", "levinson", "expand")
USAGE_ERRORS = (FileNotFoundError, IsADirectoryError, SchemaError, ScalarParseError, DomainError, ExactnessError, ReportWriteError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _nonneg_float(text: str) -> float:
    x = float(text)
    if not (math.isfinite(x) and x >= 0):
        raise argparse.ArgumentTypeError(f"expected a finite non-negative number, got {text!r}")
    return x


def _positive_int(text: str) -> int:
    k = int(text)
    if k < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return k


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--tol-abs", type=_nonneg_float, default=1e-10, help="absolute tolerance (default 1e-10)")
    g.add_argument("--tol-rel", type=_nonneg_float, default=1e-10, help="relative tolerance (default 1e-10)")
    mode = g.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="arith", action="store_const", const="exact", help="force exact arithmetic")
    mode.add_argument("--float", dest="arith", action="store_const", const="float", help="force floating arithmetic")
    g.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    g.add_argument("--out", default="out", help="output directory (default ./out)")
    g.add_argument("--threads", type=_positive_int, default=None, help="worker processes (default from environment)")
    p.set_defaults(arith=None)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="casas-alvero", description="Abel-Goncharov polynomials, root-moment identities and root-sharing analysis.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("goncharov", parents=[common], help="construct G_n by every method and compare")
    p.add_argument("--nodes", required=True, help="node JSON file")
    p.add_argument("--method", choices=CONSTRUCTIONS + ("all",), default="all")
    p.add_argument("--levinson", choices=LEVINSON_METHODS, default="det_binomial", help="Levinson value evaluation")

    p = sub.add_parser("verify", parents=[common], help="randomised identity sweep")
    p.add_argument("--identity", required=True, choices=IDENTITY_IDS + ("all",))
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--max-degree", type=_positive_int, default=10)

    p = sub.add_parser("check", parents=[common], help="root-sharing analysis of a polynomial file")
    p.add_argument("--poly", required=True, help="polynomial JSON file")

    p = sub.add_parser("bounds", parents=[common], help="|G_n(z)| against both upper bounds")
    p.add_argument("--nodes", required=True, help="node JSON file")
    p.add_argument("--z", required=True, help="evaluation point, e.g. 3/2 or '(1, -0.5)'")

    p = sub.add_parser("schoenberg", parents=[common], help="random survey of the quadratic root gap")
    p.add_argument("--degree", type=int, nargs="+", required=True)
    p.add_argument("--trials", type=_positive_int, default=1000)
    p.add_argument("--distribution", choices=DISTRIBUTIONS, default="uniform-unit-disk")

    p = sub.add_parser("search", parents=[common], help="multistart search for root-sharing polynomials")
    p.add_argument("--degree", type=int, nargs="+", required=True)
    p.add_argument("--restarts", type=_positive_int, default=100)
    defaults = SearchConfig(4)
    p.add_argument("--max-iterations", type=_positive_int, default=defaults.max_iterations)
    p.add_argument("--restart-cycles", type=_positive_int, default=defaults.restart_cycles)
    p.add_argument("--polish-iterations", type=int, default=defaults.polish_iterations)

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", default=None, help="write into this directory instead of the recorded one")
    return parser


# -- helpers ----------------------------------------------------------------------

class _Run:
    """Per-invocation context: tolerance, output directory, written files."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.tol = Tolerance(args.tol_abs, args.tol_rel)
        self.out = Path(args.out)
        self.workers = args.threads if args.threads is not None else default_workers()
        self.outputs: list[str] = []
        self.inputs: dict[str, str] = {}

    def write(self, name: str, report, fmt: Optional[str] = None) -> Path:
        path = self.out / name
        path.parent.mkdir(parents=True, exist_ok=True)
        write_report(report, path, fmt)
        self.outputs.append(name)
        return path

    def read_input(self, path: str, loader: Callable):
        obj = loader(path)
        self.inputs[path] = file_digest(path)
        return obj


def _apply_mode(values: list, arith: Optional[str]) -> list:
    if arith == "float":
        return [to_float(v) for v in values]
    if arith == "exact" and not all(is_exact(v) for v in values):
        raise ExactnessError("--exact needs exact input values")
    return values


def _agree(a: Poly, b: Poly, tol: Tolerance) -> bool:
    if a.is_exact and b.is_exact:
        return a == b
    n = max(len(a.coeffs), len(b.coeffs))
    pad = lambda p: list(p.to_float().coeffs) + [to_float(0)] * (n - len(p.coeffs))
    return all(approx_eq(x, y, tol) for x, y in zip(pad(a), pad(b)))


# -- subcommands ------------------------------------------------------------------

def cmd_goncharov(run: _Run) -> int:
    a = run.args
    ns = run.read_input(a.nodes, load_nodes_json)
    ns = NodeSequence(_apply_mode(list(ns.nodes), a.arith))
    methods = CONSTRUCTIONS if a.method == "all" else (a.method,)
    built: dict[str, Poly] = {}
    skipped: dict[str, str] = {}
    for m in methods:
        if m == "expand" and not ns[0].is_zero():
            if a.method == "expand":
                raise DomainError("the expansion construction needs z_0 = 0")
            skipped[m] = "needs z_0 = 0"
            continue
        if m == "recurrence":
            built[m] = goncharov_recurrence(ns)
        elif m == "integral":
            built[m] = goncharov_integral(ns)
        elif m == "levinson":
            built[m] = goncharov_levinson(ns, a.levinson)
        else:
            built[m] = goncharov_expand(ns, a.levinson)
    ref_name = next(iter(built))
    ref = built[ref_name]
    agreement = {m: _agree(ref, p, run.tol) for m, p in built.items()}
    ok = all(agreement.values())
    run.write("goncharov.json", {
        "nodes": ns,
        "degree": ns.n,
        "exact": all(is_exact(z) for z in ns.nodes),
        "reference": ref_name,
        "polynomials": built,
        "agreement": agreement,
        "skipped": skipped,
        "all_agree": ok,
    })
    for m, p in built.items():
        print(f"{m:>10}: {'agrees' if agreement[m] else 'DISAGREES'}  G = {' + '.join(f'({render(c)})z^{k}' for k, c in enumerate(p.coeffs))}")
    for m, why in skipped.items():
        print(f"{m:>10}: skipped ({why})")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(run: _Run) -> int:
    a = run.args
    ids = IDENTITY_IDS if a.identity == "all" else (a.identity,)
    exact = a.arith == "exact"
    summary = {}
    failed_total = 0
    for ident in ids:
        rows = sweep(ident, a.trials, seed=a.seed, exact=exact, tol=run.tol, max_degree=a.max_degree, workers=run.workers)
        failed = sum(not r.passed for r in rows)
        failed_total += failed
        rel = [r.residual / r.scale for r in rows if r.scale > 0]
        summary[ident] = {
            "trials": a.trials,
            "rows": len(rows),
            "failed": failed,
            "max_residual": max((r.residual for r in rows), default=0.0),
            "max_relative_residual": max(rel, default=0.0),
        }
        header = ("identity_id", "degree", "seed", "residual", "scale", "passed", "trial", "params")
        run.write(f"verify_{ident}.csv", [{k: getattr(r, k) for k in header} for r in rows], "csv")
        print(f"{ident}: {len(rows)} checks, {failed} failed, max residual {summary[ident]['max_residual']:.3e}")
    run.write("verify_summary.json", {"exact": exact, "tolerance": run.tol, "identities": summary})
    return EXIT_OK if failed_total == 0 else EXIT_FAIL


def cmd_check(run: _Run) -> int:
    a = run.args
    f = run.read_input(a.poly, load_poly_json)
    if f.degree < 1:
        raise DomainError("root-sharing analysis needs degree >= 1")
    f = Poly(_apply_mode(list(f.coeffs), a.arith))
    mode = "exact" if f.is_exact else "numeric"
    rep = ca_check(f, mode=mode)
    run.write("check.json", {"poly": f, "report": rep})
    print(f"degree {rep.degree}  verdict {rep.verdict}  method {rep.method}")
    print(f"{'order':>5} {'#roots':>7} {'#shared':>8}  shared values")
    for r in rep.records:
        shared = ", ".join(render(as_scalar(x)) for x in r.shared)
        print(f"{r.order:>5} {len(r.derivative_roots):>7} {r.shared_count:>8}  {shared}")
    return EXIT_FAIL if rep.verdict == "CA_candidate" else EXIT_OK


def cmd_bounds(run: _Run) -> int:
    a = run.args
    ns = run.read_input(a.nodes, load_nodes_json)
    z = parse_scalar(a.z)
    vals = _apply_mode(list(ns.nodes) + [z], a.arith)
    if not all(is_exact(v) for v in vals):
        vals = [to_float(v) for v in vals]
    ns, z = NodeSequence(vals[:-1]), vals[-1]
    g = abs(eval_poly(goncharov_recurrence(ns), z))
    tight, classical = bound_tight(ns, z), bound_classical(ns, z)

    def le(x, y):
        return x <= y + run.tol.absolute + run.tol.relative * abs(y)

    ordered = le(g, tight) and le(tight, classical)
    run.write("bounds.json", {
        "nodes": ns, "z": z, "abs_G": float(g), "bound_tight": tight, "bound_classical": classical,
        "ordered": ordered, "tight_strictly_sharper": tight < classical,
    })
    print(f"|G_n(z)| = {float(g):.17g}\n   tight = {tight:.17g}\nclassical = {classical:.17g}\nordered: {ordered}")
    return EXIT_OK if ordered else EXIT_FAIL


def cmd_schoenberg(run: _Run) -> int:
    a = run.args
    rows, summaries = [], []
    bad = False
    for n in a.degree:
        s = schoenberg_experiment(SampleConfig(n, a.trials, a.seed, a.distribution), workers=run.workers)
        rows += s.rows
        summaries.append(s.to_dict())
        bad |= s.violation_count > 0 or not s.equality_all_collinear
        print(
            f"degree {n}: min gap {s.min_gap:.3e} (trial {s.min_gap_trial}), violations {s.violation_count}, "
            f"equality cases {s.equality_count} ({s.equality_collinear_count} collinear)"
        )
    run.write("schoenberg.csv", rows, "csv")
    run.write("schoenberg_summary.json", {"degrees": summaries})
    return EXIT_FAIL if bad else EXIT_OK


def cmd_search(run: _Run) -> int:
    a = run.args
    summaries = []
    any_candidate = False
    for n in a.degree:
        cfg = SearchConfig(
            n, restarts=a.restarts, max_iterations=a.max_iterations, restart_cycles=a.restart_cycles,
            polish_iterations=a.polish_iterations, objective_tolerance=1e-10, seed=a.seed,
        )
        res = ca_search(cfg, workers=run.workers)
        cols = ("restart", "seed", "objective", "dispersion", "classification", "iterations", "cycles", "converged", "confirmed")
        run.write(f"search_degree{n}.csv", [{k: getattr(r, k) for k in cols} for r in res.trace], "csv")
        for b in res.candidates:
            run.write(f"findings/degree{n}_restart{b['restart']}.json", b)
        counts = res.counts()
        any_candidate |= counts["candidate"] > 0
        summaries.append({
            "degree": n, "config": cfg, "counts": counts, "best_objective": res.best_objective,
            "argmin_roots": res.argmin_roots, "dispersion": res.dispersion, "classification": res.classification,
            "confirmed_candidates": sum(bool(r.confirmed) for r in res.trace if r.classification == "candidate"),
        })
        print(f"degree {n}: {counts}  best objective {res.best_objective:.3e}")
    run.write("search_summary.json", {"degrees": summaries})
    return EXIT_FAIL if any_candidate else EXIT_OK


COMMANDS: dict[str, Callable[[_Run], int]] = {
    "goncharov": cmd_goncharov,
    "verify": cmd_verify,
    "check": cmd_check,
    "bounds": cmd_bounds,
    "schoenberg": cmd_schoenberg,
    "search": cmd_search,
}


def _replay(args: argparse.Namespace) -> int:
    man = RunManifest.load(args.manifest)
    argv = list(man.argv)
    if args.out is not None:
        argv += ["--out", args.out]
    return main(argv)


def _config_echo(args: argparse.Namespace) -> dict:
    return {k: v for k, v in sorted(vars(args).items())}


def main(argv: Optional[list] = None) -> int:
    """Parse ``argv`` and dispatch; returns the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        if args.command == "replay":
            return _replay(args)
        run = _Run(args)
        run.out.mkdir(parents=True, exist_ok=True)
        manifest = RunManifest(
            command=args.command, argv=argv, config=_config_echo(args), version=__version__,
            seeds=[args.seed], input_digests={}, outputs=[], started=now_iso(),
        )
        code = COMMANDS[args.command](run)
        manifest.input_digests = run.inputs
        manifest.outputs = run.outputs
        manifest.finished = now_iso()
        manifest.exit_code = code
        manifest.write(run.out)
        return code
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvariantViolation, NumericError) as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


parse_and_dispatch = main


def entry() -> None:
    sys.exit(main())
