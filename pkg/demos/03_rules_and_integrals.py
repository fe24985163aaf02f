"""Generate quadrature rules and put them to work.

Builds rules of increasing size for the plain log weight, integrates e^x
against (-log x) on (0, 1), and watches the error fall until it hits the
rule's working precision.  The exact value is the series
sum_j 1/(j! (j+1)^2).
"""

import math
from decimal import Decimal
from fractions import Fraction

from quadtables import (PrecisionPolicy, RuleCache, apply_rule, cosine_kernel,
                        generate_rule, log_kernel, moment_residuals)

cache = RuleCache(min_degree=17)

exact = sum(Fraction(1, math.factorial(j) * (j + 1) ** 2) for j in range(60))

# a light policy keeps this demo quick; the default (270 digits) is meant
# for the full N = 3..128 production range
policy = PrecisionPolicy(initial_digits=80, max_digits=600)

print("integral of e^x (-log x) dx over (0, 1):")
print(f"  series value  {Decimal(exact.numerator) / Decimal(exact.denominator):.40f}...")
for n in (2, 4, 8, 16):
    rule = generate_rule(log_kernel(1), n, policy=policy, cache=cache)
    got = apply_rule(rule, lambda x: x.exp())
    err = abs(Fraction(got.value) - exact)
    print(f"  n={n:<3} -> {str(got)[:42]}...  error {float(err):.1e}")

print()
print("every n-point rule reproduces the first 2n moments; the residuals")
print("sit at the rounding floor of the working precision:")
rule = generate_rule(log_kernel(2), 12, policy=policy, cache=cache)
worst = max(moment_residuals(rule))
print(f"  log^2, n=12, working {rule.working_digits} digits: "
      f"max residual {worst:.1e}")

rule = generate_rule(cosine_kernel(), 9, policy=policy, cache=cache)
worst = max(moment_residuals(rule))
print(f"  cosine, n=9, working {rule.working_digits} digits: "
      f"max residual {worst:.1e}")

print()
print("cosine rules come out symmetric by construction:")
print(f"  nodes   {[str(x)[:12] for x in rule.nodes]}")
print(f"  weights {[str(w)[:12] for w in rule.weights]}")
