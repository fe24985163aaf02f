"""Command-line front end.

    quadtables generate --kernel log --m 2 --n 3..128 --out-dir tables
    quadtables verify tables/log_16_2 [--tolerance-digits 28]
    quadtables selftest

Exit codes: 0 success, 1 verification or selftest failure, 2 stabilization
or resource-limit failure, 3 usage errors.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import multiprocessing
import sys
from dataclasses import dataclass
from decimal import Decimal, localcontext
from pathlib import Path

from .moments import (KernelSpec, cosine_kernel, cosine_moment,
                      cosine_moment_hypergeometric, log_kernel)
from .numerics import (PrecisionPolicy, ResourceLimitError, StabilizationError,
                       context, format_significant, pi_agm_decimal, pi_decimal)
from .orthopoly import generic_low_degree_check
from .rulegen import (RuleCache, _mu0_decimal, default_policy, generate_rule,
                      generate_rule_with_report, moment_residuals)
from .tableio import (TableParseError, parse_filename, parse_table,
                      render_table, table_filename, write_table)

DEFAULT_CEILING = 128


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class JobSpec:
    kernel: KernelSpec
    n_values: tuple
    policy: PrecisionPolicy
    out_dir: str
    jobs: int = 1


def _parse_n_range(text: str) -> tuple:
    if ".." in text:
        lo_s, _, hi_s = text.partition("..")
        try:
            lo, hi = int(lo_s), int(hi_s)
        except ValueError:
            raise UsageError(f"bad --n range {text!r}; use N or LO..HI") from None
        if lo > hi:
            raise UsageError(f"empty --n range {text!r}")
        return tuple(range(lo, hi + 1))
    try:
        return (int(text),)
    except ValueError:
        raise UsageError(f"bad --n value {text!r}; use N or LO..HI") from None


def _kernel_from_args(args) -> KernelSpec:
    if args.kernel == "cosine":
        if args.m is not None:
            raise UsageError("--m only applies to the log kernel")
        return cosine_kernel()
    m = 1 if args.m is None else args.m
    if m < 1:
        raise UsageError(f"--m must be >= 1, got {m}")
    if m > 3 and not args.allow_large_m:
        raise UsageError(
            f"--m {m} is outside the tabulated range 1..3; pass "
            f"--allow-large-m to generate it anyway")
    return log_kernel(m)


def build_job(args) -> JobSpec:
    kernel = _kernel_from_args(args)
    n_values = _parse_n_range(args.n)
    if any(n < 1 for n in n_values):
        raise UsageError("--n values must be >= 1")
    if max(n_values) > args.ceiling:
        raise ResourceLimitError(
            f"n={max(n_values)} exceeds the ceiling of {args.ceiling}; "
            f"raise --ceiling if you mean it")
    if args.digits < 1:
        raise UsageError(f"--digits must be >= 1, got {args.digits}")
    try:
        policy = default_policy(kernel, output_digits=args.digits,
                                initial_digits=args.working_digits)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    jobs = args.jobs
    if jobs < 1:
        raise UsageError(f"--jobs must be >= 1, got {jobs}")
    return JobSpec(kernel=kernel, n_values=n_values, policy=policy,
                   out_dir=args.out_dir, jobs=jobs)


_SHARED_CACHE: RuleCache | None = None


def _generate_one(kernel: KernelSpec, n: int, policy: PrecisionPolicy,
                  out_dir: str) -> tuple:
    cache = _SHARED_CACHE if _SHARED_CACHE is not None else RuleCache()
    rule, report = generate_rule_with_report(kernel, n, policy, cache)
    written = write_table(rule, out_dir)
    return (n, written.path.name, report.working_digits, report.escalations)


def cmd_generate(args) -> int:
    global _SHARED_CACHE
    job = build_job(args)
    n_high = max(job.n_values)
    cache = RuleCache(min_degree=n_high + 1)
    # warm the first two precision rungs so every rule (and every worker,
    # via fork) shares one table per precision instead of rebuilding
    escalation = job.policy.escalation_sequence()
    for p in (next(escalation), next(escalation)):
        cache.table(job.kernel, n_high + 1, p)
    _SHARED_CACHE = cache
    results = []
    try:
        if job.jobs == 1 or len(job.n_values) == 1:
            for n in job.n_values:
                results.append(_generate_one(job.kernel, n, job.policy,
                                             job.out_dir))
        else:
            ctx = multiprocessing.get_context("fork")
            with concurrent.futures.ProcessPoolExecutor(
                    max_workers=job.jobs, mp_context=ctx) as pool:
                futures = [pool.submit(_generate_one, job.kernel, n,
                                       job.policy, job.out_dir)
                           for n in job.n_values]
                results = [f.result() for f in futures]
    finally:
        _SHARED_CACHE = None
    for n, name, working, escalations in sorted(results):
        print(f"{name} n={n} working_digits={working} "
              f"escalations={escalations}")
    return 0


def _verify_one(path: Path, tolerance_digits: int) -> str | None:
    """None if the table checks out, else the failure reason."""
    try:
        kernel, n = parse_filename(path.name)
        text = path.read_text()
        rule = parse_table(text, kernel, n)
    except (OSError, TableParseError) as exc:
        return str(exc)
    if render_table(rule) != text:
        return "file is not byte-identical to its canonical rendering"
    d = max(40, tolerance_digits + 12)
    residuals = moment_residuals(rule, check_digits=d)
    with localcontext(context(d)):
        scale = max(Decimal(1), _mu0_decimal(kernel, d))
        bound = scale * Decimal(10) ** -tolerance_digits
    worst = max(residuals)
    if worst > bound:
        k = residuals.index(worst)
        return (f"moment {k} residual {format_significant(worst, 3)} exceeds "
                f"{format_significant(bound, 3)}")
    return None


def _expand_table_paths(raw_paths) -> list[Path]:
    out = []
    for raw in raw_paths:
        p = Path(raw)
        if p.is_dir():
            entries = [q for q in sorted(p.iterdir()) if q.is_file()]
            named = []
            for q in entries:
                try:
                    parse_filename(q.name)
                except TableParseError:
                    continue
                named.append(q)
            if not named:
                raise UsageError(f"no table files under {p}")
            out.extend(named)
        else:
            out.append(p)
    if not out:
        raise UsageError("nothing to verify")
    return out


def cmd_verify(args) -> int:
    if args.tolerance_digits < 1:
        raise UsageError(
            f"--tolerance-digits must be >= 1, got {args.tolerance_digits}")
    paths = _expand_table_paths(args.paths)
    failures = 0
    for path in paths:
        reason = _verify_one(path, args.tolerance_digits)
        if reason is None:
            print(f"PASS {path}")
        else:
            failures += 1
            print(f"FAIL {path}: {reason}")
    print(f"checked {len(paths)} tables, {failures} failures")
    return 1 if failures else 0


def _selftest_checks():
    def pi_routes():
        a = format_significant(pi_decimal(140), 120)
        b = format_significant(pi_agm_decimal(140), 120)
        assert a == b, "Machin and AGM pi disagree"

    def closed_forms():
        for m in range(1, 6):
            generic_low_degree_check(m)

    def cosine_moment_routes():
        for k in range(0, 26, 2):
            a = format_significant(cosine_moment(k, 60), 50)
            b = format_significant(cosine_moment_hypergeometric(k, 60), 50)
            assert a == b, f"cosine moment {k} routes disagree"

    def log_rule():
        rule = generate_rule(log_kernel(1), 4)
        bound = Decimal(10) ** -(rule.working_digits - 10)
        worst = max(moment_residuals(rule))
        assert worst < bound, f"residual {worst} exceeds {bound}"

    def cosine_rule():
        rule = generate_rule(cosine_kernel(), 5)
        for i in range(rule.n):
            assert rule.nodes[i] == -rule.nodes[rule.n - 1 - i], "asymmetric nodes"
            assert rule.weights[i] == rule.weights[rule.n - 1 - i], \
                "asymmetric weights"
        bound = Decimal(10) ** -(rule.working_digits - 10)
        worst = max(moment_residuals(rule))
        assert worst < bound, f"residual {worst} exceeds {bound}"

    def roundtrip():
        for kernel, n in ((log_kernel(2), 7), (cosine_kernel(), 6)):
            rule = generate_rule(kernel, n)
            text = render_table(rule)
            again = parse_table(text, kernel, n)
            assert render_table(again) == text, "roundtrip changed bytes"

    return [("pi-cross-route", pi_routes),
            ("log-closed-forms", closed_forms),
            ("cosine-moment-cross-route", cosine_moment_routes),
            ("log-rule-residuals", log_rule),
            ("cosine-rule-symmetry", cosine_rule),
            ("table-roundtrip", roundtrip)]


def cmd_selftest(args) -> int:
    failures = 0
    for name, fn in _selftest_checks():
        try:
            fn()
        except AssertionError as exc:
            failures += 1
            print(f"FAIL {name}: {exc}")
        else:
            print(f"ok {name}")
    print(f"selftest: {failures} failures")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadtables",
        description="Gaussian quadrature tables for the (-log x)^m and "
                    "cos(pi x/2) weight functions")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="compute rules and write table files")
    gen.add_argument("--kernel", choices=("log", "cosine"), required=True)
    gen.add_argument("--m", type=int, default=None,
                     help="power of the log factor (log kernel only, default 1)")
    gen.add_argument("--allow-large-m", action="store_true",
                     help="permit --m beyond 3")
    gen.add_argument("--n", default="3..128",
                     help="rule size N or range LO..HI (default 3..128)")
    gen.add_argument("--digits", type=int, default=30,
                     help="significant digits written per value (default 30)")
    gen.add_argument("--working-digits", type=int, default=None,
                     help="starting working precision (default 270 for log, "
                          "650 for cosine)")
    gen.add_argument("--out-dir", default="tables")
    gen.add_argument("--jobs", type=int, default=1,
                     help="parallel worker processes")
    gen.add_argument("--ceiling", type=int, default=DEFAULT_CEILING,
                     help=f"largest permitted N (default {DEFAULT_CEILING})")
    gen.set_defaults(func=cmd_generate)

    ver = sub.add_parser("verify", help="recheck table files")
    ver.add_argument("paths", nargs="+",
                     help="table files or directories of them")
    ver.add_argument("--tolerance-digits", type=int, default=28,
                     help="digits the moment residuals must honor (default 28)")
    ver.set_defaults(func=cmd_verify)

    self_p = sub.add_parser("selftest", help="run the built-in cross-checks")
    self_p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 3
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (StabilizationError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
