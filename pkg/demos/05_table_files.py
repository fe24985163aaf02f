"""The on-disk table format, end to end.

Files are named log_N_m or cosine_N.  Each line holds one "node weight"
pair in normalized scientific notation with 30 significant digits, a blank
line follows every block of five pairs, and symmetric rules list only the
non-negative nodes.  Parsing is strict: anything that would not re-render
byte-identically is rejected.
"""

import tempfile
from pathlib import Path

from quadtables import (PrecisionPolicy, RuleCache, TableParseError,
                        cosine_kernel, generate_rule, log_kernel, parse_table,
                        read_table, render_table, write_table)
from quadtables.cli import main

cache = RuleCache(min_degree=14)
policy = PrecisionPolicy(initial_digits=80, max_digits=600)

workdir = Path(tempfile.mkdtemp(prefix="quadtables_demo_"))

rule = generate_rule(cosine_kernel(), 7, policy=policy, cache=cache)
written = write_table(rule, workdir)
print(f"wrote {written.path.name}:")
print(written.path.read_text())

back = read_table(written.path)
print(f"read back n={back.rule.n}, nodes reconstructed over the full "
      f"interval: {len(back.rule.nodes)} of them")
print()

write_table(generate_rule(log_kernel(1), 13, policy=policy, cache=cache),
            workdir)
print("verifying through the command-line entry point:")
rc = main(["verify", str(workdir)])
print(f"exit code {rc}")
print()

text = render_table(rule)
broken = text.replace("e-01", "e-1", 1)
try:
    parse_table(broken, cosine_kernel(), 7)
except TableParseError as exc:
    print(f"a clipped exponent is refused: {exc}")
