"""Reading and writing quadrature tables as text.

One node-weight pair per line, both values in normalized scientific
notation with a fixed number of significant digits, a blank line after
every five pairs (but not after the last block), and a trailing newline.
Symmetric rules list only their non-negative nodes; the mirrored half is
reconstructed on parsing.  File names encode the rule: log_{N}_{m} for
the (-log x)^m kernel and cosine_{N} for the cosine kernel.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path

from .moments import KernelSpec, cosine_kernel, log_kernel
from .numerics import BigNum, format_significant
from .rulegen import QuadratureRule


class TableParseError(ValueError):
    pass


@dataclass(frozen=True)
class TableFile:
    path: Path
    rule: QuadratureRule


def table_filename(kernel: KernelSpec, n: int) -> str:
    if kernel.symmetric:
        return f"cosine_{n}"
    return f"log_{n}_{kernel.m}"


_LOG_NAME = re.compile(r"^log_(\d+)_(\d+)$")
_COSINE_NAME = re.compile(r"^cosine_(\d+)$")


def parse_filename(name: str) -> tuple[KernelSpec, int]:
    m = _LOG_NAME.match(name)
    if m:
        return log_kernel(int(m.group(2))), int(m.group(1))
    m = _COSINE_NAME.match(name)
    if m:
        return cosine_kernel(), int(m.group(1))
    raise TableParseError(f"unrecognized table name {name!r}")


def _listed_range(rule: QuadratureRule) -> range:
    # symmetric rules list only x_i >= 0, which is the upper half of the
    # ascending node list (the middle node is zero when n is odd)
    start = rule.n // 2 if rule.kernel.symmetric else 0
    return range(start, rule.n)


def render_table(rule: QuadratureRule) -> str:
    d = rule.output_digits
    idx = _listed_range(rule)
    out = []
    for count, i in enumerate(idx, 1):
        out.append(f"{format_significant(rule.nodes[i], d)} "
                   f"{format_significant(rule.weights[i], d)}")
        if count % 5 == 0 and count < len(idx):
            out.append("")
    return "\n".join(out) + "\n"


def _value_pattern(digits: int) -> re.Pattern:
    if digits == 1:
        return re.compile(r"^-?\de[+-]\d{2,}$")
    return re.compile(rf"^-?\d\.\d{{{digits - 1}}}e[+-]\d{{2,}}$")


def parse_table(text: str, kernel: KernelSpec, n: int,
                output_digits: int = 30) -> QuadratureRule:
    """Strict inverse of render_table: wrong counts, malformed values,
    misplaced blank lines or broken monotonicity all raise."""
    if n < 1:
        raise TableParseError(f"need n >= 1, got {n}")
    if not text.endswith("\n"):
        raise TableParseError("table must end with a newline")
    expected = (n + 1) // 2 if kernel.symmetric else n
    pattern = _value_pattern(output_digits)
    pairs: list[tuple[Decimal, Decimal]] = []
    expect_blank = False
    for ln_no, raw in enumerate(text[:-1].split("\n"), 1):
        if expect_blank:
            if raw != "":
                raise TableParseError(
                    f"line {ln_no}: expected a blank line after 5 pairs")
            expect_blank = False
            continue
        if raw == "":
            raise TableParseError(f"line {ln_no}: unexpected blank line")
        parts = raw.split(" ")
        if len(parts) != 2:
            raise TableParseError(
                f"line {ln_no}: expected 'node weight', got {raw!r}")
        values = []
        for token in parts:
            if not pattern.match(token):
                raise TableParseError(
                    f"line {ln_no}: {token!r} is not a normalized "
                    f"{output_digits}-digit value")
            v = Decimal(token)
            if v and token.lstrip("-")[0] == "0":
                raise TableParseError(
                    f"line {ln_no}: {token!r} has a denormalized mantissa")
            values.append(v)
        pairs.append((values[0], values[1]))
        if len(pairs) > expected:
            raise TableParseError(f"more than {expected} pairs")
        if len(pairs) % 5 == 0 and len(pairs) < expected:
            expect_blank = True
    if len(pairs) != expected:
        raise TableParseError(f"expected {expected} pairs, found {len(pairs)}")
    if kernel.symmetric:
        if n % 2:
            if pairs[0][0] != 0:
                raise TableParseError(
                    "odd symmetric rule must list the zero node first")
            positive = pairs[1:]
        else:
            positive = pairs
        if any(x <= 0 for x, _ in positive):
            raise TableParseError(
                "symmetric rule must list strictly positive nodes after "
                "the center")
        # copy_negate is context-free; a bare unary minus would round the
        # mirrored node at the ambient context's precision
        full = [(x.copy_negate(), w) for x, w in reversed(positive)] \
            + (pairs[:1] if n % 2 else []) + positive
    else:
        full = pairs
    nodes = tuple(BigNum(x, output_digits) for x, _ in full)
    weights = tuple(BigNum(w, output_digits) for _, w in full)
    try:
        return QuadratureRule(kernel=kernel, n=n, nodes=nodes, weights=weights,
                              output_digits=output_digits,
                              working_digits=output_digits)
    except ValueError as exc:
        raise TableParseError(f"parsed values are not a valid rule: {exc}") from exc


def write_table(rule: QuadratureRule, directory) -> TableFile:
    """Atomic write: render to a temp file in the target directory, then
    move it into place, so readers never see a partial table."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / table_filename(rule.kernel, rule.n)
    tmp = directory / f".{path.name}.tmp{os.getpid()}"
    tmp.write_text(render_table(rule))
    os.replace(tmp, path)
    return TableFile(path=path, rule=rule)


def read_table(path) -> TableFile:
    path = Path(path)
    kernel, n = parse_filename(path.name)
    rule = parse_table(path.read_text(), kernel, n)
    return TableFile(path=path, rule=rule)
