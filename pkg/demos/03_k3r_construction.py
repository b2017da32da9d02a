"""The n = 3 case for any r: three disjoint r-sets with three colors.

When every triple through the two same-colored anchors is blocked, the
solver falls back to a fixed relabeling of the vertices.
"""

from rainbow_factor import Params, solve_k3r
from rainbow_factor.gen import gen_fixture, gen_random_greedy

for r in (3, 4, 5):
    coloring = gen_random_greedy(Params(r, 3), seed=r)
    factor, cert = solve_k3r(coloring)
    print(f"K_{3 * r}^({r}) random: mode={cert.mode}, tried {len(cert.tried)} splits, "
          f"factor {factor.edges}")

for r in (2, 3, 4):
    coloring = gen_fixture("k3r_blocked", Params(r, 3))
    factor, cert = solve_k3r(coloring)
    print(f"\nK_{3 * r}^({r}) blocked: anchors {cert.m1} {cert.m2}, all {len(cert.tried)} splits blocked")
    print(f"  labels x = {cert.labels}")
    print(f"  fallback factor {factor.edges}, colors {[coloring.color(e) for e in factor.edges]}")
