"""Seeded stress runs checked against brute-force enumeration.

The summary does not depend on the worker count.
"""

import json

from rainbow_factor import Params
from rainbow_factor.fuzz import run_fuzz

for r, n in [(2, 2), (2, 4), (2, 6), (3, 3), (3, 4)]:
    s = run_fuzz(Params(r, n), 300, master_seed=2026)
    d = s.to_dict()
    print(f"r={r} n={n}: {d['successes']} found, {d['expected_negative']} verified absent, "
          f"oracle checked {d['oracle_checked']} / disagreed {d['oracle_disagreements']}, "
          f"methods {d['methods']}")

a = run_fuzz(Params(2, 7), 200, master_seed=5, workers=1).to_dict()
b = run_fuzz(Params(2, 7), 200, master_seed=5, workers=3).to_dict()
print("\n1 worker == 3 workers:", a == b)
print(json.dumps(a, indent=1))
