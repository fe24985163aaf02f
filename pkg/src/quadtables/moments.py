"""Weight-function kernels and their power moments.

Two kernels: (-log x)^m on (0, 1], whose moments are exact rationals
m! / (n+1)^(m+1), and cos(pi x / 2) on [-1, 1], whose even moments are
finite alternating sums with severe cancellation (the terms grow like
2 (2m)! (2/pi)^(2k+1) while the sum is O(1)), so they are evaluated with
enough guard digits to absorb the full cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

from .numerics import BigNum, Rational, context, pi_decimal

LOG = "log"
COSINE = "cosine"


@dataclass(frozen=True)
class KernelSpec:
    kind: str
    m: int | None = None

    def __post_init__(self):
        if self.kind == LOG:
            if self.m is None or self.m < 1:
                raise ValueError(f"log kernel needs a power m >= 1, got {self.m}")
        elif self.kind == COSINE:
            if self.m is not None:
                raise ValueError("cosine kernel takes no power parameter")
        else:
            raise ValueError(f"unknown kernel kind {self.kind!r}")

    @property
    def interval(self) -> tuple[Rational, Rational]:
        if self.kind == LOG:
            return (Fraction(0), Fraction(1))
        return (Fraction(-1), Fraction(1))

    @property
    def symmetric(self) -> bool:
        return self.kind == COSINE

    @property
    def exact_moments(self) -> bool:
        return self.kind == LOG

    def __str__(self):
        return f"log^{self.m}" if self.kind == LOG else "cosine"


def log_kernel(m: int) -> KernelSpec:
    return KernelSpec(LOG, m)


def cosine_kernel() -> KernelSpec:
    return KernelSpec(COSINE)


@dataclass(frozen=True)
class MomentSequence:
    """Moments mu_0 .. mu_K of a kernel, exact rationals for the log kernel
    and BigNums for the cosine kernel (odd ones exactly zero)."""

    kernel: KernelSpec
    values: tuple

    @property
    def highest(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, k: int):
        if not 0 <= k <= self.highest:
            raise IndexError(
                f"moment index {k} outside the computed range 0..{self.highest}")
        return self.values[k]

    def __len__(self):
        return len(self.values)


def log_moment(n: int, m: int) -> Rational:
    """Integral of x^n (-log x)^m over (0, 1]: m! / (n+1)^(m+1), exactly."""
    if n < 0:
        raise ValueError(f"moment order must be >= 0, got {n}")
    if m < 1:
        raise ValueError(f"log power must be >= 1, got {m}")
    return Fraction(math.factorial(m), (n + 1) ** (m + 1))


def cos_power_integral(m: int, digits: int) -> BigNum:
    """Integral of x^m cos x over [0, pi/2], by repeated partial integration:

        sum_{k=0..floor(m/2)} (-1)^k m!/(m-2k)! (pi/2)^(m-2k)  +  boundary term

    For even m the k = m/2 term of the sum already carries the x = 0
    boundary contribution; for odd m the antiderivative ends in a
    (-1)^((m-1)/2) m! cos x term whose value at 0 must be subtracted.
    """
    if m < 0:
        raise ValueError(f"power must be >= 0, got {m}")
    fm = math.factorial(m)
    half = m // 2
    guard = len(str(fm)) + math.ceil(0.2 * m) + 10
    work = digits + guard
    with localcontext(context(work)):
        u = pi_decimal(work) / 2
        uu = u * u
        power = u if m & 1 else Decimal(1)
        total = Decimal(0)
        for k in range(half, -1, -1):
            c = fm // math.factorial(m - 2 * k)
            total += -c * power if k & 1 else c * power
            power *= uu
        if m & 1:
            total += fm if half & 1 else -fm
    return BigNum(total, digits)


def _cosine_even_moment_decimal(two_m: int, digits: int) -> Decimal:
    m = two_m // 2
    f = math.factorial(two_m)
    guard = len(str(2 * f)) + 10
    work = digits + guard
    with localcontext(context(work)):
        u = 2 / pi_decimal(work)
        uu = u * u
        total = Decimal(0)
        for k in range(m, -1, -1):
            c = 2 * f // math.factorial(two_m - 2 * k)
            total = total * uu + (-c if k & 1 else c)
        total *= u
    return total


def cosine_moment(k: int, digits: int) -> BigNum:
    """Integral of x^k cos(pi x / 2) over [-1, 1] for even k.  Odd moments
    vanish by symmetry and must be short-circuited by the caller."""
    if k < 0:
        raise ValueError(f"moment order must be >= 0, got {k}")
    if k & 1:
        raise ValueError(
            f"odd cosine moment {k} is exactly zero; use the zero short-circuit "
            f"instead of computing it")
    return BigNum(_cosine_even_moment_decimal(k, digits), digits)


def cosine_moment_hypergeometric(k: int, digits: int) -> BigNum:
    """Same moment through the terminating series

        mu_{2m} = (4/pi) 3F0(1/2 - m, -m, 1; ; -16/pi^2)
                = (4/pi) sum_{j=0..m} (1/2-m)_j (-m)_j (-16/pi^2)^j

    (the (1)_j / j! factors cancel).  Independent route used to cross-check
    the partial-integration sum."""
    if k < 0 or k & 1:
        raise ValueError(f"hypergeometric form is defined for even k >= 0, got {k}")
    m = k // 2
    guard = 2 * len(str(math.factorial(m))) + math.ceil(1.21 * m) + 10
    work = digits + guard
    with localcontext(context(work)):
        z = -16 / (pi_decimal(work) ** 2)
        term = Decimal(1)
        total = term
        for j in range(m):
            # (1/2 - m + j) = (2(j - m) + 1)/2, (-m + j) integer
            term = term * (2 * (j - m) + 1) * (j - m) * z / 2
            total += term
        total *= 4 / pi_decimal(work)
    return BigNum(total, digits)


def moment_sequence(kernel: KernelSpec, highest: int,
                    digits: int | None = None) -> MomentSequence:
    """Moments mu_0..mu_highest.  Log kernels are exact and ignore digits;
    the cosine kernel requires digits and fills odd slots with exact zeros."""
    if highest < 0:
        raise ValueError(f"highest moment must be >= 0, got {highest}")
    if kernel.kind == LOG:
        values = tuple(log_moment(n, kernel.m) for n in range(highest + 1))
    else:
        if digits is None:
            raise ValueError("cosine moments need a working precision")
        zero = BigNum(0, digits)
        values = tuple(
            cosine_moment(n, digits) if n % 2 == 0 else zero
            for n in range(highest + 1))
    return MomentSequence(kernel=kernel, values=values)
