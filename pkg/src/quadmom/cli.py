"""Command-line front end: curves, runs, verification suites, rate tables.

Four subcommands:

    curves    polynomial values over a mu grid -> CSV (figure data)
    run       iterate a method on a problem -> per-step CSV
    verify    named verification suites -> JSON report array
    chebnum   worst-case rates and first-order asymptotics -> table/CSV

Every output is byte-deterministic: floats are written with 17 significant
digits, lines end with "\\n", rows are assembled in a canonical order, and
nothing depends on wall clock, locale, or thread scheduling. Exit codes:
0 all checks pass, 1 a mathematical property was violated, 2 usage or I/O
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

import numpy as np

from .chebnumbers import asymptotic_cheb, cheb_number_closed
from .errors import DegenerateError, DomainError, IoError, QuadmomError
from .params import accel_params
from .polynomials import METHODS, Method, as_method, eval_closed
from .problems import SpectrumKind, SpectrumSpec, gen_spectrum, load_matrix
from .verification import SUITE_NAMES, run_all, run_suite

__all__ = ["main"]


def _fmt(x: float) -> str:
    """Fixed 17-significant-digit decimal form; round-trips any float64."""
    x = float(x)
    if x == 0.0:
        return "0"  # fold away the sign of -0.0
    return format(x, ".17g")


def _json_text(obj, indent: int = 0) -> str:
    """Canonical JSON: insertion-ordered keys, floats via _fmt, 2-space indent."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [
            f"{inner}{json.dumps(str(k))}: {_json_text(v, indent + 1)}"
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        parts = [f"{inner}{_json_text(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj)
    return json.dumps(str(obj))


def _write_text(out: Optional[str], text: str) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {out!r}: {exc}") from exc


def _parse_methods(value: str) -> List[Method]:
    if value.strip().lower() == "all":
        return list(METHODS)
    picked = [as_method(part.strip()) for part in value.split(",") if part.strip()]
    if not picked:
        raise DomainError(f"no methods in {value!r}")
    return picked


def _parse_k_range(value: str) -> List[int]:
    """'K' or 'A:B' (inclusive); the range must be nonempty."""
    try:
        if ":" in value:
            lo_s, hi_s = value.split(":", 1)
            lo, hi = int(lo_s), int(hi_s)
        else:
            lo = hi = int(value)
    except ValueError:
        raise DomainError(f"bad k range {value!r}: use K or A:B") from None
    if hi < lo:
        raise DomainError(f"empty k range {value!r}")
    return list(range(lo, hi + 1))


def _parse_rho_list(value: str) -> List[float]:
    try:
        rhos = [float(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise DomainError(f"bad rho list {value!r}") from None
    if not rhos:
        raise DomainError(f"no rho values in {value!r}")
    return rhos


def _load_problem(args: argparse.Namespace):
    if args.matrix is not None:
        return load_matrix(args.matrix, y_path=args.y)
    spec = SpectrumSpec(
        kind=SpectrumKind.UNIFORM, dimension=50, seed=args.seed, top=1.0
    )
    return gen_spectrum(spec)


def _resolve_rho(value: str, problem) -> float:
    """A literal value, or 'auto': the exact edge 1 - min positive eig / beta."""
    if value.strip().lower() != "auto":
        try:
            return float(value)
        except ValueError:
            raise DomainError(f"--rho must be a number or 'auto', got {value!r}") from None
    eigs = problem.hessian_eigenvalues
    positive = eigs[eigs > 0.0]
    if positive.size == 0:
        raise DegenerateError("cannot infer rho: the Hessian has no positive eigenvalue")
    return 1.0 - float(positive.min()) / problem.beta


# ---------------------------------------------------------------------------
# subcommands


def cmd_curves(args: argparse.Namespace) -> int:
    methods = _parse_methods(args.method)
    if args.grid < 2:
        raise DomainError(f"--grid must be >= 2, got {args.grid}")
    if args.k < 0:
        raise DomainError(f"--k must be >= 0, got {args.k}")
    try:
        lo_s, hi_s = args.mu_range.split(":", 1)
        lo, hi = float(lo_s), float(hi_s)
    except ValueError:
        raise DomainError(f"bad --mu-range {args.mu_range!r}: use LO:HI") from None
    if not (0.0 <= lo < hi <= 1.0):
        raise DomainError(f"--mu-range must satisfy 0 <= LO < HI <= 1, got {args.mu_range!r}")
    params = accel_params(args.rho)
    mus = np.linspace(lo, hi, args.grid)
    ks = np.asarray([args.k], dtype=np.int64)
    values = {m: eval_closed(m, mus, ks, params)[0] for m in methods}

    lines = ["mu,method,k,rho,value"]
    boundary_emitted = False
    boundary_line = f"# boundary mu=rho at {_fmt(params.rho)}"
    if mus[0] > params.rho:
        lines.append(boundary_line)
        boundary_emitted = True
    for j, mu in enumerate(mus):
        if not boundary_emitted and mu > params.rho:
            lines.append(boundary_line)
            boundary_emitted = True
        for m in methods:
            lines.append(
                f"{_fmt(mu)},{m.value},{args.k},{_fmt(params.rho)},{_fmt(values[m][j])}"
            )
    if not boundary_emitted:
        lines.append(boundary_line)
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    # iterating is cheap; import here keeps `--help` and `curves` snappy
    from .optimizers import run as run_method

    method = as_method(args.method)
    if args.k < 0:
        raise DomainError(f"--k must be >= 0, got {args.k}")
    problem = _load_problem(args)
    rho = _resolve_rho(args.rho, problem)
    params = accel_params(rho, beta=problem.beta)
    traj = run_method(method, params, problem, args.k)

    mus = problem.mu_values(params.beta)
    ks = np.arange(args.k + 1, dtype=np.int64)
    predicted = eval_closed(method, mus, ks, params)  # (k+1, d)
    xi0 = traj.components[0]
    scale = np.maximum(np.abs(xi0), 1e-300)
    contraction = np.abs(traj.components) / scale[None, :]
    errors = np.abs(traj.components - predicted * xi0[None, :]) / scale[None, :]

    lines = ["k,excess_risk,worst_component_mu,max_component_error"]
    for k in range(args.k + 1):
        row = contraction[k]
        best = row.max()
        # ties toward the largest mu: the slowest direction is the verdict
        worst_mu = mus[row >= best].max()
        lines.append(
            f"{k},{_fmt(traj.excess_risks[k])},{_fmt(worst_mu)},{_fmt(errors[k].max())}"
        )
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    suite = args.suite_flag if args.suite_flag is not None else args.suite
    if args.suite_flag is not None and args.suite != "all" and args.suite != args.suite_flag:
        raise DomainError(
            f"conflicting suites: positional {args.suite!r} vs --suite {args.suite_flag!r}"
        )
    if suite == "all":
        reports = run_all(grid_n=args.grid, k_max=args.k)
    else:
        reports = [run_suite(suite, grid_n=args.grid, k_max=args.k)]
    payload = [rep.to_json_dict() for rep in reports]
    _write_text(args.out, _json_text(payload) + "\n")
    if args.out is not None:
        summary = "".join(
            f"{rep.theorem_id}: {'pass' if rep.passed else 'FAIL'}\n" for rep in reports
        )
        sys.stdout.write(summary)
    return 0 if all(rep.passed for rep in reports) else 1


def cmd_chebnum(args: argparse.Namespace) -> int:
    methods = _parse_methods(args.method)
    ks = _parse_k_range(args.k)
    rhos = _parse_rho_list(args.rho)
    if min(ks) < 1:
        raise DomainError("chebnum needs k >= 1")
    lines = ["rho,k,method,cheb_number,asymptotic_1st_order"]
    for rho in rhos:
        params = accel_params(rho)
        eps = 1.0 - rho
        for k in ks:
            for m in methods:
                value = cheb_number_closed(m, k, params).value
                # the expansion's stated domain is 0 < eps < 0.1; outside it
                # the column is nan rather than a truncation out of range
                asym = asymptotic_cheb(m, k, eps) if 0.0 < eps < 0.1 else float("nan")
                lines.append(f"{_fmt(rho)},{k},{m.value},{_fmt(value)},{_fmt(asym)}")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out is not None:
        _write_text(args.out, text)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadmom",
        description="Momentum methods on quadratics: polynomial curves, runs, "
        "verification suites, and worst-case rate tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument(
            "--threads",
            type=int,
            default=1,
            help="parallelism cap (accepted for compatibility; evaluation "
            "is deterministic and currently single-threaded)",
        )

    p_curves = sub.add_parser("curves", help="polynomial values over a mu grid (CSV)")
    p_curves.add_argument("--rho", type=float, required=True)
    p_curves.add_argument("--k", type=int, required=True)
    p_curves.add_argument("--method", default="all", help="comma list or 'all'")
    p_curves.add_argument("--grid", type=int, default=1001, help="number of mu points")
    p_curves.add_argument("--mu-range", default="0:1", help="LO:HI inside [0,1]")
    common(p_curves)
    p_curves.set_defaults(fn=cmd_curves)

    p_run = sub.add_parser("run", help="iterate a method on a problem (CSV)")
    p_run.add_argument("--method", required=True)
    p_run.add_argument("--rho", required=True, help="a number, or 'auto'")
    p_run.add_argument("--k", type=int, required=True, help="iteration count")
    p_run.add_argument("--matrix", default=None, help="Matrix Market file for the Hessian")
    p_run.add_argument("--y", default=None, help="companion vector file (with --matrix)")
    p_run.add_argument("--seed", type=int, default=0, help="seed for the synthetic problem")
    common(p_run)
    p_run.set_defaults(fn=cmd_run)

    p_verify = sub.add_parser("verify", help="run verification suites (JSON)")
    p_verify.add_argument(
        "suite",
        nargs="?",
        default="all",
        choices=(*SUITE_NAMES, "all"),
        help="suite name (default: all)",
    )
    p_verify.add_argument(
        "--suite",
        dest="suite_flag",
        default=None,
        choices=(*SUITE_NAMES, "all"),
        help="alias for the positional suite name",
    )
    p_verify.add_argument("--grid", type=int, default=None, help="override grid size")
    p_verify.add_argument("--k", type=int, default=None, help="override max k")
    common(p_verify)
    p_verify.set_defaults(fn=cmd_verify)

    p_cheb = sub.add_parser("chebnum", help="worst-case rates table")
    p_cheb.add_argument("--rho", required=True, help="comma list of rho values")
    p_cheb.add_argument("--k", required=True, help="K or A:B (inclusive)")
    p_cheb.add_argument("--method", default="all", help="comma list or 'all'")
    common(p_cheb)
    p_cheb.set_defaults(fn=cmd_chebnum)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error(f"--threads must be >= 1, got {args.threads}")
    try:
        return args.fn(args)
    except QuadmomError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
