"""Arbitrary-precision scalar substrate.

Exact rationals, decimal floating-point values tagged with their working
precision, pi to any precision, and the stabilization loop that certifies
output digits by recomputing at an escalated precision and comparing the
rendered results.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from decimal import Context, Decimal, ROUND_HALF_EVEN, localcontext
from fractions import Fraction
from typing import Callable, Iterator, Sequence

Rational = Fraction

DEFAULT_MAX_DIGITS = 4000
DEFAULT_OUTPUT_DIGITS = 30

_EMAX = 10 ** 6
_EMIN = -(10 ** 6)


class PrecisionLossError(ArithmeticError):
    """A computation produced a value that is impossible in exact arithmetic
    (non-positive norm, non-positive weight, vanishing derivative), which can
    only come from rounding error at the current working precision."""


class StabilizationError(ArithmeticError):
    """Escalation reached max_digits without two consecutive precisions
    agreeing on the rendered output."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class ResourceLimitError(RuntimeError):
    """A requested precision or problem size exceeds the configured ceiling."""


@functools.lru_cache(maxsize=None)
def context(digits: int) -> Context:
    if digits < 1:
        raise ValueError(f"context precision must be >= 1, got {digits}")
    return Context(prec=digits, rounding=ROUND_HALF_EVEN, Emax=_EMAX, Emin=_EMIN)


def _to_decimal(value) -> Decimal:
    if isinstance(value, BigNum):
        return value.value
    if isinstance(value, Decimal):
        return value
    if isinstance(value, int):
        return Decimal(value)
    if isinstance(value, float):
        return Decimal(value)
    if isinstance(value, str):
        return Decimal(value)
    raise TypeError(f"cannot interpret {type(value).__name__} as a decimal value")


class BigNum:
    """A decimal floating-point number that knows its own working precision.

    The stored value is rounded (half to even) to `precision` significant
    digits on construction.  Binary operations run at the larger of the two
    operand precisions; exact operands (int, Fraction) adopt the other
    operand's precision.
    """

    __slots__ = ("value", "precision")

    def __init__(self, value, precision: int):
        if precision < 1:
            raise ValueError(f"precision must be >= 1, got {precision}")
        ctx = context(precision)
        if isinstance(value, Fraction):
            d = ctx.divide(Decimal(value.numerator), Decimal(value.denominator))
        else:
            d = ctx.plus(_to_decimal(value))
        object.__setattr__(self, "value", d)
        object.__setattr__(self, "precision", precision)

    def __setattr__(self, name, val):
        raise AttributeError("BigNum is immutable")

    def _coerce(self, other) -> "BigNum | None":
        if isinstance(other, BigNum):
            return other
        if isinstance(other, (int, Fraction, Decimal)):
            return BigNum(other, self.precision)
        return None

    def _binop(self, other, op: str):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        p = max(self.precision, rhs.precision)
        return BigNum(getattr(context(p), op)(self.value, rhs.value), p)

    def _rbinop(self, other, op: str):
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        p = max(self.precision, lhs.precision)
        return BigNum(getattr(context(p), op)(lhs.value, self.value), p)

    def __add__(self, other):
        return self._binop(other, "add")

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, "subtract")

    def __rsub__(self, other):
        return self._rbinop(other, "subtract")

    def __mul__(self, other):
        return self._binop(other, "multiply")

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, "divide")

    def __rtruediv__(self, other):
        return self._rbinop(other, "divide")

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        return BigNum(context(self.precision).power(self.value, Decimal(exponent)),
                      self.precision)

    def __neg__(self):
        return BigNum(context(self.precision).minus(self.value), self.precision)

    def __abs__(self):
        return BigNum(context(self.precision).abs(self.value), self.precision)

    def sqrt(self) -> "BigNum":
        return BigNum(context(self.precision).sqrt(self.value), self.precision)

    def exp(self) -> "BigNum":
        return BigNum(context(self.precision).exp(self.value), self.precision)

    def to_fraction(self) -> Fraction:
        return Fraction(self.value)

    @staticmethod
    def _exact(other) -> Fraction | None:
        if isinstance(other, BigNum):
            return Fraction(other.value)
        if isinstance(other, (int, Fraction)):
            return Fraction(other)
        if isinstance(other, Decimal):
            return Fraction(other)
        return None

    def __eq__(self, other):
        rhs = self._exact(other)
        if rhs is None:
            return NotImplemented
        return Fraction(self.value) == rhs

    def __lt__(self, other):
        rhs = self._exact(other)
        if rhs is None:
            return NotImplemented
        return Fraction(self.value) < rhs

    def __le__(self, other):
        rhs = self._exact(other)
        if rhs is None:
            return NotImplemented
        return Fraction(self.value) <= rhs

    def __gt__(self, other):
        rhs = self._exact(other)
        if rhs is None:
            return NotImplemented
        return Fraction(self.value) > rhs

    def __ge__(self, other):
        rhs = self._exact(other)
        if rhs is None:
            return NotImplemented
        return Fraction(self.value) >= rhs

    def __hash__(self):
        return hash(self.value)

    def __bool__(self):
        return bool(self.value)

    def __float__(self):
        return float(self.value)

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"BigNum('{self.value}', precision={self.precision})"


def format_significant(value, digits: int) -> str:
    """Render a value in normalized scientific notation with exactly `digits`
    significant digits: d.dd...de[+-]XX, lowercase e, exponent at least two
    digits.  Zero renders with a + exponent and no sign."""
    if digits < 1:
        raise ValueError(f"need at least 1 significant digit, got {digits}")
    d = context(digits).plus(_to_decimal(value))
    if not d:
        mantissa = "0" if digits == 1 else "0." + "0" * (digits - 1)
        return f"{mantissa}e+00"
    sign, coeff, _ = d.as_tuple()
    body = "".join(map(str, coeff)).ljust(digits, "0")
    mantissa = body if digits == 1 else f"{body[0]}.{body[1:]}"
    adj = d.adjusted()
    return f"{'-' if sign else ''}{mantissa}e{'+' if adj >= 0 else '-'}{abs(adj):02d}"


def _arctan_reciprocal(k: int, work: int) -> Decimal:
    # arctan(1/k) for integer k >= 2.  Alternating Taylor series; truncation
    # error is below the first dropped term.
    with localcontext(context(work + 8)):
        kk = Decimal(k * k)
        term = Decimal(1) / Decimal(k)
        total = term
        cutoff = Decimal(1).scaleb(-(work + 6))
        n = 0
        while term >= cutoff:
            term /= kk
            n += 1
            t = term / (2 * n + 1)
            total = total - t if n & 1 else total + t
        return total


@functools.lru_cache(maxsize=64)
def pi_decimal(digits: int) -> Decimal:
    """Machin's formula: pi = 16 arctan(1/5) - 4 arctan(1/239)."""
    if digits < 1:
        raise ValueError(f"pi needs at least 1 digit, got {digits}")
    work = digits + 12
    with localcontext(context(work)):
        v = 16 * _arctan_reciprocal(5, work) - 4 * _arctan_reciprocal(239, work)
    return context(digits).plus(v)


@functools.lru_cache(maxsize=64)
def pi_agm_decimal(digits: int) -> Decimal:
    """Gauss-Legendre iteration, algorithmically independent of the Machin
    route.  Used to cross-check pi_decimal."""
    if digits < 1:
        raise ValueError(f"pi needs at least 1 digit, got {digits}")
    work = digits + 14
    with localcontext(context(work)):
        one = Decimal(1)
        a = one
        b = one / Decimal(2).sqrt()
        t = Decimal(1) / 4
        p = 1
        for _ in range(int(math.log2(work)) + 3):
            an = (a + b) / 2
            b = (a * b).sqrt()
            t -= p * (a - an) ** 2
            a = an
            p <<= 1
        v = (a + b) ** 2 / (4 * t)
    return context(digits).plus(v)


def pi_to_precision(digits: int, max_digits: int = DEFAULT_MAX_DIGITS) -> BigNum:
    if digits < 1:
        raise ValueError(f"pi needs at least 1 digit, got {digits}")
    if digits > max_digits:
        raise ResourceLimitError(
            f"pi to {digits} digits exceeds the {max_digits}-digit ceiling")
    return BigNum(pi_decimal(digits), digits)


@dataclass(frozen=True)
class PrecisionPolicy:
    """Working-precision schedule for the stabilization loop."""

    initial_digits: int
    growth_factor: Fraction = Fraction(3, 2)
    max_digits: int = DEFAULT_MAX_DIGITS
    output_digits: int = DEFAULT_OUTPUT_DIGITS

    def __post_init__(self):
        if self.output_digits < 1:
            raise ValueError("output_digits must be >= 1")
        if self.initial_digits < self.output_digits + 20:
            raise ValueError(
                f"initial_digits must be at least output_digits + 20 "
                f"({self.output_digits + 20}), got {self.initial_digits}")
        if self.growth_factor <= 1:
            raise ValueError(f"growth_factor must exceed 1, got {self.growth_factor}")
        if self.max_digits <= self.initial_digits:
            raise ValueError(
                f"max_digits ({self.max_digits}) must exceed initial_digits "
                f"({self.initial_digits}) to leave room for escalation")

    def escalation_sequence(self) -> Iterator[int]:
        p = self.initial_digits
        yield p
        while p < self.max_digits:
            p = min(math.ceil(p * self.growth_factor), self.max_digits)
            yield p


@dataclass(frozen=True)
class StabilizationReport:
    values: tuple
    working_digits: int
    escalations: int
    rendered: tuple[str, ...]


def stabilized_with_report(compute: Callable[[int], Sequence],
                           policy: PrecisionPolicy) -> StabilizationReport:
    """Run compute(P) at increasing precisions until two consecutive runs
    render identically at policy.output_digits.  Returns the higher-precision
    run of the agreeing pair."""
    prev_render: tuple[str, ...] | None = None
    escalations = -1
    mismatch_at: int | None = None
    for p in policy.escalation_sequence():
        escalations += 1
        try:
            values = tuple(compute(p))
        except PrecisionLossError:
            prev_render = None
            continue
        rendered = tuple(format_significant(v, policy.output_digits) for v in values)
        if prev_render is not None:
            if rendered == prev_render:
                return StabilizationReport(values=values, working_digits=p,
                                           escalations=escalations - 1,
                                           rendered=rendered)
            mismatch_at = next(
                (i for i, (r, q) in enumerate(zip(rendered, prev_render)) if r != q),
                min(len(rendered), len(prev_render)))
        prev_render = rendered
    raise StabilizationError(
        f"no two consecutive precisions up to {policy.max_digits} digits agreed "
        f"on {policy.output_digits} rendered digits"
        + (f" (first disagreement at element {mismatch_at})"
           if mismatch_at is not None else ""),
        index=mismatch_at)


def stabilized(compute: Callable[[int], Sequence], policy: PrecisionPolicy) -> tuple:
    return stabilized_with_report(compute, policy).values
