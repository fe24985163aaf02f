"""Gaussian quadrature rules for the (-log x)^m weight on (0, 1) and the
cos(pi x / 2) weight on (-1, 1), computed to a requested number of
stabilized decimal digits and written as plain-text tables."""

from .numerics import (BigNum, PrecisionLossError, PrecisionPolicy, Rational,
                       ResourceLimitError, StabilizationError,
                       StabilizationReport, context, format_significant,
                       pi_agm_decimal, pi_decimal, pi_to_precision,
                       stabilized, stabilized_with_report)
from .moments import (KernelSpec, MomentSequence, cos_power_integral,
                      cosine_kernel, cosine_moment,
                      cosine_moment_hypergeometric, log_kernel, log_moment,
                      moment_sequence)
from .orthopoly import (MonicPolynomial, NormalizedPolynomial, Polynomial,
                        RecurrenceTable, build_recurrence,
                        generic_low_degree_check, inner_product, normalize,
                        polynomial_from_recurrence)
from .rulegen import (QuadratureRule, RuleCache, apply_rule, default_policy,
                      find_roots, compute_weights, generate_rule,
                      generate_rule_with_report, moment_residuals)
from .tableio import (TableFile, TableParseError, parse_filename, parse_table,
                      read_table, render_table, table_filename, write_table)

__all__ = [
    "BigNum", "KernelSpec", "MomentSequence", "MonicPolynomial",
    "NormalizedPolynomial", "Polynomial", "PrecisionLossError",
    "PrecisionPolicy", "QuadratureRule", "Rational", "RecurrenceTable",
    "ResourceLimitError", "RuleCache", "StabilizationError",
    "StabilizationReport", "TableFile", "TableParseError", "apply_rule",
    "build_recurrence", "compute_weights", "context", "cos_power_integral",
    "cosine_kernel", "cosine_moment", "cosine_moment_hypergeometric",
    "default_policy", "find_roots", "format_significant", "generate_rule",
    "generate_rule_with_report", "generic_low_degree_check", "inner_product",
    "log_kernel", "log_moment", "moment_sequence", "moment_residuals",
    "normalize", "parse_filename", "parse_table", "pi_agm_decimal",
    "pi_decimal", "pi_to_precision", "polynomial_from_recurrence",
    "read_table", "render_table", "stabilized", "stabilized_with_report",
    "table_filename", "write_table",
]

__version__ = "0.1.0"
