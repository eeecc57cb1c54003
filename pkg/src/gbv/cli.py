"""Command line driver: grid sweeps over the library quantities.

Each subcommand runs a parameter grid, collects one report with frozen
columns (wall_ms last), and writes CSV or JSON to --out or stdout.  The
driver owns the sieve tables and the worker pool; identical configurations
produce identical numeric output for any worker count.

Exit codes: 0 success, 2 bad configuration, 3 capacity exceeded, 4 I/O or
cache format trouble.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time

import numpy as np

from .bv_error import classical_bv_sum, weighted_gaussian_bv_sum
from .characters import characters_mod, character_context
from .density import density_report, fi_compare
from .errors import CacheFormatError, CapacityError, ValidationError
from .identities import pv_max_ratio, verify_vaughan
from .large_sieve import (
    bilinear_pair,
    bmvt_lhs,
    char_form_lhs,
    delta_bound_for_spec,
    delta_tilde,
    random_unit_disk_sequence,
    sigma_quantity,
)
from .moduli import box_extremes, box_range, parse_spec_string, q_range
from .parallel import WorkerPool
from .report import ExperimentReport, read_csv_report, write_report
from .sieve import build_sieve, load_cache, save_cache, verify_cache

DEFAULT_SEED = 0x42D


def parse_grid(text: str) -> list[float]:
    """Comma list '2,4,8' or geometric range 'start:stop:count'."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(f"bad grid {text!r}; expected start:stop:count")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise ValidationError(f"bad grid {text!r}") from None
        if start <= 0 or stop <= 0 or count < 1:
            raise ValidationError(f"geometric grid needs positive endpoints: {text!r}")
        return [float(v) for v in np.geomspace(start, stop, count)]
    try:
        return [float(v) for v in text.split(",") if v != ""]
    except ValueError:
        raise ValidationError(f"bad grid {text!r}") from None


def int_grid(text: str) -> list[int]:
    return [int(round(v)) for v in parse_grid(text)]


def _cache_path(limit: int, option: str) -> str:
    if option != "auto":
        return option
    base = os.environ.get(
        "GBV_CACHE_DIR", os.path.join(os.path.expanduser("~"), ".cache", "gbv")
    )
    return os.path.join(base, f"spf_{limit}.gbvspf")


def acquire_tables(limit: int, cache_option: str | None):
    limit = max(int(limit), 2)
    if cache_option is None:
        return build_sieve(limit)
    path = _cache_path(limit, cache_option)
    if os.path.exists(path):
        tables = load_cache(path)
        if tables.limit < limit:
            raise CapacityError(
                f"cache {path} covers only {tables.limit} < required {limit}"
            )
        return tables
    tables = build_sieve(limit)
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    save_cache(tables, path)
    return tables


def _ms(t0: float) -> float:
    return (time.perf_counter() - t0) * 1000.0


# ---------------------------------------------------------------------------
# subcommand runners: (args, tables, pool) -> ExperimentReport


def _max_modulus(spec, qgrid) -> int:
    return max(box_extremes(spec, Q)[1] for Q in qgrid)


def run_ls_ratio(args, tables, pool) -> ExperimentReport:
    spec = parse_spec_string(args.spec)
    rep = ExperimentReport(
        "ls-ratio",
        ["subcommand", "Q", "N", "trial", "seed", "sigma_sum", "delta_bound",
         "norm_sq", "ratio", "wall_ms"],
    )
    for qi, Q in enumerate(args.Q):
        for ni, N in enumerate(args.N):
            for trial in range(args.trials):
                seq = random_unit_disk_sequence(N, [args.seed, qi, ni, trial])
                t0 = time.perf_counter()
                sigma = sigma_quantity(spec, Q, seq, tables, pool)
                wall = _ms(t0)
                delta = delta_bound_for_spec(spec, Q, N)
                rep.add_row(
                    subcommand="ls-ratio", Q=Q, N=N, trial=trial, seed=args.seed,
                    sigma_sum=sigma, delta_bound=delta, norm_sq=seq.norm_sq,
                    ratio=sigma / (delta * seq.norm_sq), wall_ms=wall,
                )
    return rep


def run_char_ls(args, tables, pool) -> ExperimentReport:
    spec = parse_spec_string(args.spec)
    rep = ExperimentReport(
        "char-ls",
        ["subcommand", "Q", "N", "trial", "seed", "char_sum", "delta_bound",
         "norm_sq", "ratio", "used_tuples", "skipped_tuples", "wall_ms"],
    )
    for qi, Q in enumerate(args.Q):
        for ni, N in enumerate(args.N):
            for trial in range(args.trials):
                seq = random_unit_disk_sequence(N, [args.seed, qi, ni, trial])
                t0 = time.perf_counter()
                res = char_form_lhs(spec, Q, seq, tables, pool)
                wall = _ms(t0)
                delta = delta_bound_for_spec(spec, Q, N)
                rep.add_row(
                    subcommand="char-ls", Q=Q, N=N, trial=trial, seed=args.seed,
                    char_sum=res.value, delta_bound=delta, norm_sq=seq.norm_sq,
                    ratio=res.value / (delta * seq.norm_sq),
                    used_tuples=res.used_tuples, skipped_tuples=res.skipped_tuples,
                    wall_ms=wall,
                )
    return rep


def run_bilinear(args, tables, pool) -> ExperimentReport:
    spec = parse_spec_string(args.spec)
    m_grid = args.M if args.M is not None else args.N
    rep = ExperimentReport(
        "bilinear",
        ["subcommand", "Q", "M", "N", "trial", "seed", "lhs", "rhs", "ratio",
         "used_tuples", "skipped_tuples", "wall_ms"],
    )
    for qi, Q in enumerate(args.Q):
        for mi, M in enumerate(m_grid):
            for ni, N in enumerate(args.N):
                for trial in range(args.trials):
                    a_seq = random_unit_disk_sequence(M, [args.seed, qi, mi, ni, trial, 0])
                    b_seq = random_unit_disk_sequence(N, [args.seed, qi, mi, ni, trial, 1])
                    t0 = time.perf_counter()
                    res = bilinear_pair(spec, Q, a_seq, b_seq, tables, pool)
                    wall = _ms(t0)
                    rep.add_row(
                        subcommand="bilinear", Q=Q, M=M, N=N, trial=trial,
                        seed=args.seed, lhs=res.lhs, rhs=res.rhs,
                        ratio=res.lhs / res.rhs if res.rhs else None,
                        used_tuples=res.used_tuples,
                        skipped_tuples=res.skipped_tuples, wall_ms=wall,
                    )
    return rep


def run_bmvt(args, tables, pool) -> ExperimentReport:
    spec = parse_spec_string(args.spec)
    rep = ExperimentReport(
        "bmvt",
        ["subcommand", "Q", "x", "lhs", "lhs_over_box", "bound", "branch",
         "in_range", "boundary", "ratio", "used_tuples", "skipped_tuples", "wall_ms"],
    )
    for Q in args.Q:
        for x in args.x:
            t0 = time.perf_counter()
            res = bmvt_lhs(spec, Q, x, tables, pool)
            wall = _ms(t0)
            dt = delta_tilde(spec, Q, x)
            rep.add_row(
                subcommand="bmvt", Q=Q, x=x, lhs=res.value,
                lhs_over_box=res.value / Q ** float(spec.ell),
                bound=dt.value, branch=dt.branch if dt.in_range else "out-of-range",
                in_range=dt.in_range, boundary=dt.boundary,
                ratio=(res.value / dt.value) if dt.value else None,
                used_tuples=res.used_tuples, skipped_tuples=res.skipped_tuples,
                wall_ms=wall,
            )
    return rep


def run_bv_classical(args, tables, pool) -> ExperimentReport:
    rep = ExperimentReport(
        "bv-classical",
        ["subcommand", "Q", "x", "coprime_only", "sum", "normalized", "wall_ms"],
    )
    for Q in args.Q:
        for x in args.x:
            t0 = time.perf_counter()
            total = classical_bv_sum(Q, x, tables, args.coprime_only, pool)
            wall = _ms(t0)
            rep.add_row(
                subcommand="bv-classical", Q=Q, x=x, coprime_only=args.coprime_only,
                sum=total, normalized=total * math.log(x) ** 2 / x, wall_ms=wall,
            )
    return rep


def run_bv_gaussian(args, tables, pool) -> ExperimentReport:
    spec = parse_spec_string(args.spec)
    rep = ExperimentReport(
        "bv-gaussian",
        ["subcommand", "Q", "x", "epsilon", "range_empty", "sum", "sum_over_x",
         "contributing_tuples", "skipped_tuples", "distinct_moduli", "wall_ms"],
    )
    for x in args.x:
        if args.Q is not None:
            q_list = [(Q, None, None) for Q in args.Q]
        else:
            rng = q_range(spec, x, args.epsilon)
            q_list = [(rng.midpoint, args.epsilon, rng.empty)]
        for Q, eps, empty in q_list:
            t0 = time.perf_counter()
            res = weighted_gaussian_bv_sum(spec, Q, x, tables, pool)
            wall = _ms(t0)
            rep.add_row(
                subcommand="bv-gaussian", Q=Q, x=x, epsilon=eps, range_empty=empty,
                sum=res.value, sum_over_x=res.value / x,
                contributing_tuples=res.contributing_tuples,
                skipped_tuples=res.skipped_tuples,
                distinct_moduli=res.distinct_moduli, wall_ms=wall,
            )
    return rep


def run_density(args, tables, pool) -> ExperimentReport:
    spec = parse_spec_string(args.spec)
    rep = ExperimentReport(
        "density",
        ["subcommand", "Q", "raw_sum", "sta_sum", "normalized", "condition_holds",
         "wall_ms"],
    )
    for Q in args.Q:
        t0 = time.perf_counter()
        res = density_report(spec, Q, tables, pool)
        wall = _ms(t0)
        rep.add_row(
            subcommand="density", Q=Q, raw_sum=res.raw_sum, sta_sum=res.sta_sum,
            normalized=res.normalized, condition_holds=res.condition_holds,
            wall_ms=wall,
        )
    return rep


def run_fi_compare(args, tables, pool) -> ExperimentReport:
    rep = ExperimentReport(
        "fi-compare",
        ["subcommand", "x", "lam_sum", "main_term", "ratio", "abs_ratio_err",
         "c_value", "c_tail", "wall_ms"],
    )
    for x in args.x:
        t0 = time.perf_counter()
        res = fi_compare(x, tables)
        wall = _ms(t0)
        rep.add_row(
            subcommand="fi-compare", x=x, lam_sum=res.lam_sum,
            main_term=res.main_term, ratio=res.ratio,
            abs_ratio_err=abs(res.ratio - 1.0), c_value=res.c_value,
            c_tail=res.c_tail, wall_ms=wall,
        )
    return rep


def run_identities(args, tables, pool) -> ExperimentReport:
    rep = ExperimentReport(
        "identities",
        ["subcommand", "check", "x", "U", "q", "seed", "value", "wall_ms"],
    )
    for xi, x in enumerate(args.x):
        x = int(x)
        U = args.U if args.U is not None else max(1, math.floor(x ** (1.0 / 3.0)))
        seq = random_unit_disk_sequence(x, [args.seed, xi])
        values = seq.values

        t0 = time.perf_counter()
        residual = verify_vaughan(lambda n: values[n - 1], x, U, tables)
        wall = _ms(t0)
        rep.add_row(
            subcommand="identities", check="vaughan", x=float(x), U=U,
            q=None, seed=args.seed, value=residual, wall_ms=wall,
        )
    for q in args.Q:
        q = int(q)
        t0 = time.perf_counter()
        ctx = character_context(q, tables)
        ratios = [
            pv_max_ratio(chi) for chi in characters_mod(ctx) if not chi.is_principal
        ]
        wall = _ms(t0)
        rep.add_row(
            subcommand="identities", check="pv", x=None, U=None, q=q,
            seed=args.seed, value=max(ratios) if ratios else None, wall_ms=wall,
        )
    return rep


_RUNNERS = {
    "ls-ratio": run_ls_ratio,
    "char-ls": run_char_ls,
    "bilinear": run_bilinear,
    "bmvt": run_bmvt,
    "bv-classical": run_bv_classical,
    "bv-gaussian": run_bv_gaussian,
    "density": run_density,
    "fi-compare": run_fi_compare,
    "identities": run_identities,
}


def _required_limit(args) -> int:
    cmd = args.command
    need = 3
    if cmd in ("ls-ratio", "char-ls", "bilinear", "bmvt", "bv-gaussian"):
        spec = parse_spec_string(args.spec)
        qgrid = args.Q
        if qgrid is None and cmd == "bv-gaussian":
            qgrid = [q_range(spec, x, args.epsilon).midpoint for x in args.x]
        need = max(need, _max_modulus(spec, qgrid))
    if cmd == "density":
        spec = parse_spec_string(args.spec)
        need = max(need, max(2 * box_range(Q)[1] ** 2 for Q in args.Q))
    if cmd in ("bmvt", "bv-classical", "bv-gaussian", "identities"):
        need = max(need, max(int(math.floor(x)) for x in args.x))
    if cmd == "fi-compare":
        need = max(need, max(int(math.floor(x)) for x in args.x), 10**6)
    if cmd == "identities":
        need = max(need, max(int(q) for q in args.Q))
    return need


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gbv",
        description="Numerical experiments with error sums over Gaussian-prime "
        "polynomial moduli.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    common.add_argument("--cache", nargs="?", const="auto", default=None,
                        help="sieve cache file, or 'auto' for the cache dir")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--figures", help="also render a PNG to this path")

    def add(name, *, spec=False, Q=None, x=None, N=False):
        p = sub.add_parser(name, parents=[common])
        if spec:
            p.add_argument("--spec", required=True,
                           help="polynomial spec, e.g. 'k=1 ell=2 pairs=1:2'")
        if Q is not None:
            p.add_argument("--Q", type=parse_grid, required=(Q == "required"),
                           default=None)
        if x is not None:
            p.add_argument("--x", type=parse_grid, required=(x == "required"),
                           default=None)
        if N:
            p.add_argument("--N", type=int_grid, required=True)
            p.add_argument("--trials", type=int, default=1)
        return p

    add("ls-ratio", spec=True, Q="required", N=True)
    add("char-ls", spec=True, Q="required", N=True)
    bil = add("bilinear", spec=True, Q="required", N=True)
    bil.add_argument("--M", type=int_grid, default=None)
    add("bmvt", spec=True, Q="required", x="required")
    bvc = add("bv-classical", Q="required", x="required")
    bvc.add_argument("--coprime-only", action="store_true")
    bvg = add("bv-gaussian", spec=True, Q="optional", x="required")
    bvg.add_argument("--epsilon", type=float, default=None)
    add("density", spec=True, Q="required")
    add("fi-compare", x="required")
    ident = add("identities", x="optional")
    ident.add_argument("--Q", type=parse_grid, default=[5, 13, 15, 65, 85])
    ident.add_argument("--U", type=int, default=None)

    cache = sub.add_parser("cache")
    cache_sub = cache.add_subparsers(dest="cache_action", required=True)
    cb = cache_sub.add_parser("build")
    cb.add_argument("--limit", type=int, required=True)
    cb.add_argument("--path", default="auto")
    cv = cache_sub.add_parser("verify")
    cv.add_argument("--path", required=True)

    reportp = sub.add_parser("report")
    reportp.add_argument("--input", required=True, help="CSV produced by a sweep")
    reportp.add_argument("--figures", required=True, help="PNG output path")

    return parser


def _run(args) -> int:
    if args.command == "cache":
        if args.cache_action == "build":
            tables = build_sieve(args.limit)
            path = _cache_path(args.limit, args.path)
            parent = os.path.dirname(path)
            if parent:
                os.makedirs(parent, exist_ok=True)
            save_cache(tables, path)
            print(f"wrote {path} (limit {tables.limit})")
        else:
            limit = verify_cache(args.path)
            print(f"ok {args.path} (limit {limit})")
        return 0

    if args.command == "report":
        rep = read_csv_report(args.input)
        from .figures import render_report

        render_report(rep, args.figures)
        print(f"wrote {args.figures}")
        return 0

    if args.command == "bv-gaussian" and args.Q is None and args.epsilon is None:
        raise ValidationError("bv-gaussian needs --Q or --epsilon")
    if args.command == "identities" and args.x is None:
        args.x = [1000.0]

    tables = acquire_tables(_required_limit(args), args.cache)
    with WorkerPool(tables, args.workers) as pool:
        rep = _RUNNERS[args.command](args, tables, pool)
    text = write_report(rep, args.out, args.format)
    if not args.out:
        sys.stdout.write(text)
    if getattr(args, "figures", None):
        from .figures import render_report

        render_report(rep, args.figures)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 3
    except (CacheFormatError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
