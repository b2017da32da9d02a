"""Build a few proper colorings and look at how they are stored.

Edges of K_{rn}^{(r)} are r-subsets of range(r*n), indexed by colex rank.
A coloring is just one color id per rank.
"""

from rainbow_factor import (
    Params,
    edge_table,
    gen_backtrack_factorization,
    gen_fixture,
    gen_random_greedy,
    gen_round_robin,
    oracle_enumerate,
    verify_proper,
)

params = Params(2, 3)
print("K_6 edges in colex order:")
print(edge_table(params).tolist())

rr = gen_round_robin(3)
print("\nround robin on K_6, 5 colors, each color class a perfect matching:")
for color, edges in sorted(rr.color_classes().items()):
    print(f"  color {color}: {edges}")

greedy = gen_random_greedy(Params(2, 6), seed=7)
print(f"\ngreedy coloring of K_12 uses {greedy.color_count} colors "
      f"(at least 11 are needed); proper: {verify_proper(greedy).ok}")

k9 = gen_backtrack_factorization(Params(3, 3))
res = oracle_enumerate(k9)
print(f"\nK_9^(3) factorization: {k9.color_count} colors, "
      f"{res.total_factors} 1-factors, {res.rainbow_factors} of them rainbow")

k4 = gen_fixture("k4_no_rainbow_2k2")
res = oracle_enumerate(k4)
print(f"\nK_4 factorization {k4.colors.tolist()}: "
      f"{res.rainbow_factors} of {res.total_factors} perfect matchings are rainbow")
