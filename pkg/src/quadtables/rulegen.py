"""Quadrature rules from recurrence tables.

Nodes are the roots of p_N.  They are located once in float64 by walking
the interlacing ladder (the roots of p_k separate those of p_{k+1}, so
each degree hands the next one guaranteed sign-change brackets), then
polished one at a time with bracketed Newton iteration in decimal
arithmetic, doubling the working precision each rung until the target is
reached.  Evaluation always goes through the three-term recurrence, which
is stable on the support interval, never through monomial coefficients.

Weights use the normalized leading-coefficient form

    w_i = -(k_{N+1}/k_N) / (q_{N+1}(x_i) q_N'(x_i)),   k_n = 1/sqrt(<p_n,p_n>),

evaluated literally; any non-positive weight aborts the attempt so the
stabilization loop can escalate instead of shipping a wrong table.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from math import ceil, log2

import numpy as np

from .moments import COSINE, KernelSpec, cosine_moment, log_moment
from .numerics import (BigNum, PrecisionLossError, PrecisionPolicy,
                       StabilizationReport, context, stabilized_with_report)
from .orthopoly import RecurrenceTable, build_recurrence

LOG_DEFAULT_DIGITS = 270
COSINE_DEFAULT_DIGITS = 650


@dataclass(frozen=True)
class QuadratureRule:
    kernel: KernelSpec
    n: int
    nodes: tuple
    weights: tuple
    output_digits: int
    working_digits: int

    def __post_init__(self):
        if len(self.nodes) != self.n or len(self.weights) != self.n:
            raise ValueError(
                f"expected {self.n} nodes and weights, got {len(self.nodes)} "
                f"and {len(self.weights)}")
        lo, hi = self.kernel.interval
        if not all(lo < x < hi for x in self.nodes):
            raise ValueError("nodes must lie strictly inside the interval")
        if any(not self.nodes[i] < self.nodes[i + 1] for i in range(self.n - 1)):
            raise ValueError("nodes must be strictly increasing")
        if any(not w > 0 for w in self.weights):
            raise ValueError("weights must all be positive")
        check_digits = self.working_digits + 10
        with localcontext(context(check_digits)):
            total = Decimal(0)
            for w in self.weights:
                total += w.value if isinstance(w, BigNum) else BigNum(
                    w, check_digits).value
            mu0 = _mu0_decimal(self.kernel, check_digits)
            err = abs(total - mu0)
            bound = mu0 * Decimal(10) ** -(self.working_digits - 10)
        if err > bound:
            raise ValueError(
                f"weights sum to mu_0 + {err}, outside the working tolerance "
                f"{bound}")


def _mu0_decimal(kernel: KernelSpec, digits: int) -> Decimal:
    if kernel.kind == COSINE:
        return cosine_moment(0, digits).value
    f = log_moment(0, kernel.m)
    return context(digits).divide(Decimal(f.numerator), Decimal(f.denominator))


def _eval_float(a, b, k, x):
    # p_k and p_k' at x in float64, via the recurrence; vectorized over x.
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    dp_prev = np.zeros_like(x)
    dp = np.zeros_like(x)
    for i in range(k):
        xa = x - a[i]
        p, p_prev, dp, dp_prev = (xa * p - b[i] * p_prev, p,
                                  p + xa * dp - b[i] * dp_prev, dp)
    return p, dp


def _float_root_ascent(a, b, lo, hi, n_from, n_to, roots_by_degree):
    """Extend the per-degree float64 root lists from degree n_from (done)
    up to n_to, bisecting then Newton-correcting inside the brackets that
    the previous degree's roots provide."""
    prev = roots_by_degree[n_from] if n_from >= 1 else np.empty(0)
    for k in range(n_from + 1, n_to + 1):
        edges = np.concatenate(([lo], prev, [hi]))
        lo_k = edges[:-1].copy()
        hi_k = edges[1:].copy()
        f_lo, _ = _eval_float(a, b, k, lo_k)
        for _ in range(30):
            mid = 0.5 * (lo_k + hi_k)
            f_mid, _ = _eval_float(a, b, k, mid)
            same = np.sign(f_mid) == np.sign(f_lo)
            lo_k = np.where(same, mid, lo_k)
            f_lo = np.where(same, f_mid, f_lo)
            hi_k = np.where(same, hi_k, mid)
        x = 0.5 * (lo_k + hi_k)
        for _ in range(6):
            p, dp = _eval_float(a, b, k, x)
            step = np.where(dp != 0, p / np.where(dp != 0, dp, 1.0), 0.0)
            x = np.clip(x - step, lo_k, hi_k)
        roots_by_degree.append(x)
        prev = x
    return roots_by_degree


def _eval_recurrence_decimal(a, b, k, x, zero, one):
    p_prev = zero
    p = one
    dp_prev = zero
    dp = zero
    for i in range(k):
        xa = x - a[i]
        p, p_prev, dp, dp_prev = (xa * p - b[i] * p_prev, p,
                                  p + xa * dp - b[i] * dp_prev, dp)
    return p, dp


def _newton_plain(a, b, n, x, rung, steps):
    # fixed-count Newton refinement; each step roughly doubles the correct
    # digits, so 3 steps are plenty to saturate one precision rung
    zero = Decimal(0)
    one = Decimal(1)
    with localcontext(context(rung)):
        x = +x
        for _ in range(steps):
            pv, dpv = _eval_recurrence_decimal(a, b, n, x, zero, one)
            if dpv == 0:
                raise PrecisionLossError(
                    f"p_{n}' vanished at a Newton iterate; precision fault")
            if pv == 0:
                return x
            x = x - pv / dpv
    return x


def _newton_final(a, b, n, x, lo, hi, rung, tol, cap):
    """Full-precision endgame: plain Newton until the step drops below tol,
    then one extra step.  The interlacing bracket (lo, hi) is never shrunk,
    only used as a recovery boundary: an iterate that escapes it is pulled
    back to the midpoint, which cannot happen once the quadratic regime has
    been reached."""
    zero = Decimal(0)
    one = Decimal(1)
    with localcontext(context(rung)):
        x = +x
        if not lo < x < hi:
            x = (lo + hi) / 2
        extra = 0
        for _ in range(cap):
            pv, dpv = _eval_recurrence_decimal(a, b, n, x, zero, one)
            if dpv == 0:
                raise PrecisionLossError(
                    f"p_{n}' vanished at a Newton iterate; precision fault")
            if pv == 0:
                return x
            nxt = x - pv / dpv
            if not lo < nxt < hi:
                nxt = (lo + hi) / 2
            step = x - nxt
            x = nxt
            if extra:
                return x
            if step.copy_abs() <= tol:
                extra = 1
    raise PrecisionLossError(
        f"Newton did not meet tolerance within {cap} iterations at degree {n}")


def _polish_root(a, b, n, seed, bracket_lo, bracket_hi, digits):
    """Newton refinement, doubling the precision each rung; returns a
    Decimal whose error is far below one unit in the digits-th place.

    No rung updates the bracket from residual signs: near convergence the
    residual sits at the rung's rounding floor, so its sign says nothing,
    and folding that noise into a bracket would eventually push the root
    outside it.  Correctness rests on the interlacing seeds and is then
    certified downstream (monotonicity, weight positivity, stabilization)."""
    target = digits + 15
    rung = 40
    x = seed
    while rung < target:
        x = _newton_plain(a, b, n, x, rung, steps=3)
        rung *= 2
    # stopping scale: the original interlacing bracket width
    tol = (bracket_hi - bracket_lo).copy_abs().scaleb(-(digits - 5))
    cap = 4 * ceil(log2(target)) + 20
    return _newton_final(a, b, n, x, bracket_lo, bracket_hi, target, tol, cap)


def find_roots(table: RecurrenceTable, n: int, digits: int,
               cache: "RuleCache | None" = None) -> tuple:
    """All n roots of p_n as BigNums rounded to digits, strictly increasing.
    For the symmetric kernel only the non-negative half is polished; the
    rest are exact reflections."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if n - 1 > table.n_max:
        raise ValueError(f"table only reaches degree {table.n_max}, need {n - 1}")
    kernel = table.kernel
    lo_f, hi_f = (float(v) for v in kernel.interval)
    seeds_by_degree = cache.seed_state(kernel) if cache else [np.empty(0)]
    done = len(seeds_by_degree) - 1
    if done < n:
        a_f = [float(v) for v in table.a]
        b_f = [float(v) for v in table.b]
        _float_root_ascent(a_f, b_f, lo_f, hi_f, done, n, seeds_by_degree)
    seeds = seeds_by_degree[n]
    edges = np.concatenate(([lo_f], seeds, [hi_f]))
    mids = 0.5 * (edges[:-1] + edges[1:])
    a_d = [v.value for v in table.a]
    b_d = [v.value for v in table.b]
    first = (n + 1) // 2 if kernel.symmetric else 0
    polished = []
    for i in range(first, n):
        root = _polish_root(a_d, b_d, n, Decimal(float(seeds[i])),
                            Decimal(float(mids[i])), Decimal(float(mids[i + 1])),
                            digits)
        polished.append(BigNum(root, digits))
    if kernel.symmetric:
        mirrored = [-r for r in reversed(polished)]
        middle = [BigNum(0, digits)] if n % 2 else []
        roots = tuple(mirrored + middle + polished)
    else:
        roots = tuple(polished)
    interval_lo, interval_hi = kernel.interval
    if not all(interval_lo < r < interval_hi for r in roots):
        raise PrecisionLossError("a polished root left the support interval")
    if any(not roots[i] < roots[i + 1] for i in range(n - 1)):
        raise PrecisionLossError("polished roots are not strictly increasing")
    return roots


def compute_weights(table: RecurrenceTable, n: int, roots: tuple,
                    digits: int) -> tuple:
    """Weights for the given roots of p_n, by the normalized
    leading-coefficient formula, each rounded to digits."""
    if n > table.n_max:
        raise ValueError(f"weights at degree {n} need the table to reach "
                         f"degree {n}, got {table.n_max}")
    if len(roots) != n:
        raise ValueError(f"expected {n} roots, got {len(roots)}")
    a_d = [v.value for v in table.a]
    b_d = [v.value for v in table.b]
    work = digits + 15
    zero = Decimal(0)
    one = Decimal(1)
    symmetric = table.kernel.symmetric and all(
        roots[i] == -roots[n - 1 - i] for i in range(n))
    first = n // 2 if symmetric else 0
    out: list = [None] * n
    with localcontext(context(work)):
        inv_n = 1 / table.norms[n].value.sqrt()
        inv_n1 = 1 / table.norms[n + 1].value.sqrt()
        lead_ratio = inv_n1 / inv_n
        for i in range(first, n):
            x = roots[i].value if isinstance(roots[i], BigNum) else Decimal(roots[i])
            # one recurrence pass to degree n+1 carries p_{n+1} and, one
            # step behind, p_n' at the same point
            p_prev, p = zero, one
            dp_prev, dp = zero, zero
            for k in range(n + 1):
                xa = x - a_d[k]
                p, p_prev, dp, dp_prev = (xa * p - b_d[k] * p_prev, p,
                                          p + xa * dp - b_d[k] * dp_prev, dp)
            p_next, dp = p, dp_prev
            if p_next == 0 or dp == 0:
                raise PrecisionLossError(
                    f"degenerate evaluation at node {i}; precision fault")
            w = -lead_ratio / ((inv_n1 * p_next) * (inv_n * dp))
            if not w > 0:
                raise PrecisionLossError(
                    f"weight {i} came out non-positive; the rule is invalid "
                    f"at this working precision")
            out[i] = BigNum(w, digits)
            if symmetric and i != n - 1 - i:
                out[n - 1 - i] = out[i]
    return tuple(out)


class RuleCache:
    """Shares recurrence tables (per kernel and precision) and float64 seed
    ladders (per kernel) across rule generations.  min_degree forces tables
    to be built at least that deep, so a range of N reuses one table."""

    def __init__(self, min_degree: int = 0):
        self.min_degree = min_degree
        self._tables: dict = {}
        self._seeds: dict = {}

    def table(self, kernel: KernelSpec, n_max: int, digits: int) -> RecurrenceTable:
        key = (kernel, digits)
        cached = self._tables.get(key)
        if cached is not None and cached.n_max >= n_max:
            return cached
        depth = max(n_max, self.min_degree)
        built = build_recurrence(kernel, depth, digits)
        self._tables[key] = built
        return built

    def seed_state(self, kernel: KernelSpec) -> list:
        return self._seeds.setdefault(kernel, [np.empty(0)])


def default_policy(kernel: KernelSpec, output_digits: int = 30,
                   initial_digits: int | None = None) -> PrecisionPolicy:
    if initial_digits is None:
        base = COSINE_DEFAULT_DIGITS if kernel.kind == COSINE else LOG_DEFAULT_DIGITS
        initial_digits = max(base, output_digits + 40)
    return PrecisionPolicy(initial_digits=initial_digits,
                           output_digits=output_digits)


def generate_rule_with_report(kernel: KernelSpec, n: int,
                              policy: PrecisionPolicy | None = None,
                              cache: RuleCache | None = None
                              ) -> tuple[QuadratureRule, StabilizationReport]:
    """Nodes and weights for the n-point rule, certified by recomputing at
    an escalated precision until the rendered digits agree."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if policy is None:
        policy = default_policy(kernel)
    if cache is None:
        cache = RuleCache()

    def compute(p: int):
        table = cache.table(kernel, n + 1, p)
        roots = find_roots(table, n, p, cache)
        weights = compute_weights(table, n, roots, p)
        return roots + weights

    report = stabilized_with_report(compute, policy)
    rule = QuadratureRule(kernel=kernel, n=n,
                          nodes=report.values[:n],
                          weights=report.values[n:],
                          output_digits=policy.output_digits,
                          working_digits=report.working_digits)
    return rule, report


def generate_rule(kernel: KernelSpec, n: int,
                  policy: PrecisionPolicy | None = None,
                  cache: RuleCache | None = None) -> QuadratureRule:
    rule, _ = generate_rule_with_report(kernel, n, policy, cache)
    return rule


def apply_rule(rule: QuadratureRule, f) -> BigNum:
    """Sum w_i f(x_i) at the rule's working precision."""
    total = BigNum(0, rule.working_digits)
    for x, w in zip(rule.nodes, rule.weights):
        total = total + w * f(x)
    return total


def moment_residuals(rule: QuadratureRule,
                     check_digits: int | None = None) -> list:
    """|sum_i w_i x_i^k - mu_k| for k = 0..2n-1.  An n-point rule is exact
    on polynomials through degree 2n-1, so every residual should sit at the
    rounding floor of the rule's stored digits."""
    d = check_digits if check_digits is not None else rule.working_digits + 10
    kernel = rule.kernel
    out = []
    with localcontext(context(d)):
        xs = [x.value if isinstance(x, BigNum) else BigNum(x, d).value
              for x in rule.nodes]
        ws = [w.value if isinstance(w, BigNum) else BigNum(w, d).value
              for w in rule.weights]
        powers = [Decimal(1)] * rule.n
        for k in range(2 * rule.n):
            total = Decimal(0)
            for w, p in zip(ws, powers):
                total += w * p
            if kernel.kind == COSINE:
                mu = Decimal(0) if k % 2 else cosine_moment(k, d).value
            else:
                f = log_moment(k, kernel.m)
                mu = context(d).divide(Decimal(f.numerator),
                                       Decimal(f.denominator))
            out.append(abs(total - mu))
            powers = [p * x for p, x in zip(powers, xs)]
    return out
