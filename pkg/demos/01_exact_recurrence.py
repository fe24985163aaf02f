"""Exact construction of the orthogonal polynomials for (-log x)^m.

The moments of this weight are rationals, so for small degrees the whole
three-term recurrence can be carried in exact arithmetic.  This script
prints the first few monic polynomials for m = 1, 2, 3 and checks the
closed forms that hold for every m.
"""

from fractions import Fraction

from quadtables import (build_recurrence, generic_low_degree_check,
                        log_kernel, log_moment, polynomial_from_recurrence)


def pretty(poly):
    terms = []
    for power in range(poly.degree, -1, -1):
        c = poly.coefficients[power]
        if not c:
            continue
        if power == 0:
            terms.append(f"{c}")
        elif power == 1:
            terms.append("x" if c == 1 else f"{c} x")
        else:
            terms.append(f"x^{power}" if c == 1 else f"{c} x^{power}")
    return " + ".join(terms).replace("+ -", "- ")


print("moments are m!/(n+1)^(m+1), exactly:")
for m in (1, 2, 3):
    row = ", ".join(str(log_moment(n, m)) for n in range(5))
    print(f"  m={m}: {row}")

print()
for m in (1, 2, 3):
    table = build_recurrence(log_kernel(m), 3)
    print(f"weight (-log x)^{m}:")
    print(f"  recurrence a = {[str(v) for v in table.a]}")
    print(f"  recurrence b = {[str(v) for v in table.b]}")
    for n in (1, 2, 3):
        print(f"  p_{n} = {pretty(polynomial_from_recurrence(table, n))}")
    print()

# p_1 and p_2 have closed forms valid for every power m; the helper
# verifies them against the recurrence before handing them back
print("generic closed forms, spot-checked through m = 6:")
for m in range(1, 7):
    p1, p2 = generic_low_degree_check(m)
    assert p1.coefficients[0] == -Fraction(1, 2 ** (m + 1))
    print(f"  m={m}: p_2 = {pretty(p2)}")
