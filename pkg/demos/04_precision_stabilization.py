"""How output digits get certified.

A rule is computed at some working precision, recomputed at that precision
grown by 3/2, and accepted only when both runs render identically at the
requested output digits.  The report says which precision was accepted and
how many extra escalations were needed (none, when the starting precision
is adequate).
"""

from quadtables import (PrecisionPolicy, RuleCache, generate_rule_with_report,
                        log_kernel, render_table)

cache = RuleCache(min_degree=25)
kernel = log_kernel(3)

for initial in (60, 120):
    policy = PrecisionPolicy(initial_digits=initial, max_digits=2000)
    rule, report = generate_rule_with_report(kernel, 24, policy=policy,
                                             cache=cache)
    print(f"start at {initial} digits:")
    print(f"  accepted working precision {report.working_digits}, "
          f"escalations beyond the first pair: {report.escalations}")
    print(f"  first node  {rule.nodes[0]}")
    print()

# the rendered table is identical whichever adequate precision produced it
a = generate_rule_with_report(
    kernel, 24, PrecisionPolicy(initial_digits=60, max_digits=2000),
    cache=cache)[0]
b = generate_rule_with_report(
    kernel, 24, PrecisionPolicy(initial_digits=200, max_digits=2000),
    cache=cache)[0]
print("renders agree across starting precisions:",
      render_table(a) == render_table(b))

print()
print("the certified digits ride along with every value:")
x = a.nodes[0]
print(f"  type {type(x).__name__}, precision {x.precision}, value {x}")
print(f"  (x * 2).precision = {(x * 2).precision}")
