"""Grow a rainbow matching one edge at a time and inspect why each step works.

The matching below is maximal: no edge between the two free vertices has an
unused color.  A plain 3-path swap fails, so the solver rotates first.
"""

from rainbow_factor import Matching, Params, analyze_pair, augment_once, check_counting
from rainbow_factor.gen import gen_random_greedy
from rainbow_factor.solver import run_graph_solver

coloring = gen_random_greedy(Params(2, 5), 16, "least_color")
matching = Matching(coloring.params, ((1, 3), (2, 7), (4, 9), (6, 8)))
print("start:", matching.edges, "free:", matching.unmatched())

tr = analyze_pair(coloring, matching, 0, 5)
print(f"\npair (s, t) = (0, 5): p = {tr.p}, q = {tr.q}, k = {tr.k}")
print(f"candidate paths: {len(tr.candidate_paths)} (= 2n-1-p = {2 * tr.n - 1 - tr.p})")
for path in tr.candidate_paths:
    tag = "symmetric" if path.symmetric else ("augmenting" if path.augmenting else "")
    print(f"  {path.vertices} colors {path.first_color}/{path.middle_color}/{path.third_color} {tag}")
print("rotation colors L:", tr.L)
for rot in tr.rotations:
    print(f"  rotate on color {rot.color}: add {rot.e_t}, drop {rot.e_i}, new free vertex {rot.t_i}, "
          f"augments: {rot.augments}")
report = check_counting(tr)
print("verdict:", report.verdict.value, "| inequality holds:", report.inequality_holds)

res = augment_once(coloring, matching)
print("\naugmented via", res.via, "->", res.new_matching.edges)

big = gen_random_greedy(Params(2, 40), 3)
run = run_graph_solver(big, trace=True)
print(f"\nK_80: greedy gave {run.greedy_size} edges, then {dict(run.augmentations)}; "
      f"{len(run.traces)} traces, all clean: "
      f"{not any(check_counting(t).contradicts_theorem for t in run.traces)}")
