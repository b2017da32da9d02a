"""Generators of proper colorings.

* :func:`gen_round_robin` - circle-method 1-factorization of ``K_{2n}``.
* :func:`gen_backtrack_factorization` - exact-cover search for a
  1-factorization of a small ``K_{rn}^{(r)}``.
* :func:`gen_random_greedy` - seeded greedy colorings that are proper but
  usually far from 1-factorizations.
* :func:`gen_fixture` - named hand-built colorings.

Every generator checks its own output with :func:`verify_proper` before
returning it.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Literal

import numpy as np

from .core import (
    CapacityError,
    Params,
    ProperColoring,
    TheoremContradiction,
    ValidationError,
    edge_table,
    factor_table,
    rank_edge,
    verify_proper,
)
from .rng import SplitMix64

GenKind = Literal["round_robin", "backtrack_factorization", "random_greedy", "fixture"]
Strategy = Literal["least_color", "random_feasible"]

#: largest edge count gen_backtrack_factorization accepts (C(12, 4))
DEFAULT_FACTORIZATION_CAP = 495

FIXTURES = ("k4_no_rainbow_2k2", "k4_factorization", "all_distinct", "k3r_blocked")


@dataclass(frozen=True)
class GenSpec:
    kind: GenKind
    params: Params
    seed: int | None = None
    strategy: Strategy = "least_color"
    fixture_name: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("round_robin", "backtrack_factorization", "random_greedy", "fixture"):
            raise ValidationError("unknown generator kind", self.kind)
        if self.kind == "round_robin" and self.params.r != 2:
            raise ValidationError("round_robin requires r = 2", self.params.r)
        if self.kind == "random_greedy" and self.seed is None:
            raise ValidationError("random_greedy requires a seed")
        if self.kind == "fixture" and self.fixture_name is None:
            raise ValidationError("fixture requires a fixture name")

    def build(self) -> ProperColoring:
        if self.kind == "round_robin":
            return gen_round_robin(self.params.n)
        if self.kind == "backtrack_factorization":
            return gen_backtrack_factorization(self.params)
        if self.kind == "random_greedy":
            return gen_random_greedy(self.params, self.seed, self.strategy)
        return gen_fixture(self.fixture_name, self.params)


def _checked(coloring: ProperColoring) -> ProperColoring:
    verdict = verify_proper(coloring)
    if not verdict.ok:
        raise AssertionError(f"generator emitted an improper coloring: {verdict.witness}")
    return coloring


def gen_round_robin(n: int) -> ProperColoring:
    """Circle method on ``K_{2n}`` with pivot vertex ``2n - 1``.

    Round ``i`` pairs ``{i, 2n-1}`` and ``{(i+j) % m, (i-j) % m}`` for
    ``j = 1 .. n-1``, where ``m = 2n - 1``.  Closed form: an edge ``{u, v}``
    below the pivot gets color ``(u + v) / 2 mod m``; ``{u, pivot}`` gets ``u``.
    """
    if n < 1:
        raise ValidationError("n must be >= 1", n)
    params = Params(2, n)
    m = 2 * n - 1
    table = edge_table(params)
    u, v = table[:, 0], table[:, 1]
    half = (m + 1) // 2  # inverse of 2 modulo the odd m
    colors = np.where(v == m, u, ((u + v) * half) % m)
    return _checked(ProperColoring(params, colors))


def _exact_cover(columns: dict[int, set[int]], rows: dict[int, list[int]]) -> list[int] | None:
    """Algorithm X on set-based columns; branches on the column with fewest rows."""

    def select(row: int) -> list[set[int]]:
        removed = []
        for j in rows[row]:
            for i in columns[j]:
                for k in rows[i]:
                    if k != j:
                        columns[k].remove(i)
            removed.append(columns.pop(j))
        return removed

    def deselect(row: int, removed: list[set[int]]) -> None:
        for j in reversed(rows[row]):
            columns[j] = removed.pop()
            for i in columns[j]:
                for k in rows[i]:
                    if k != j:
                        columns[k].add(i)

    chosen: list[int] = []

    def search() -> bool:
        if not columns:
            return True
        col = min(columns, key=lambda c: (len(columns[c]), c))
        for row in sorted(columns[col]):
            chosen.append(row)
            removed = select(row)
            if search():
                return True
            deselect(row, removed)
            chosen.pop()
        return False

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * len(columns) + 100))
    try:
        return list(chosen) if search() else None
    finally:
        sys.setrecursionlimit(limit)


def gen_backtrack_factorization(
    params: Params, cap: int = DEFAULT_FACTORIZATION_CAP
) -> ProperColoring:
    """A 1-factorization of ``K_{rn}^{(r)}`` found by exact-cover search.

    Columns are edges, rows are 1-factors; the search always branches on the
    edge lying in the fewest still-compatible factors (ties: lowest rank).
    Color ``c`` is the ``c``-th factor chosen.
    """
    if params.n < 2:
        raise ValidationError("backtrack factorization needs n >= 2", params.n)
    if params.edge_count > cap:
        raise CapacityError(
            f"K_{params.vertex_count}^({params.r}) has {params.edge_count} edges, "
            f"above the factorization cap of {cap}"
        )
    table = factor_table(params)
    rows = {fi: [int(e) for e in row] for fi, row in enumerate(table)}
    columns: dict[int, set[int]] = {e: set() for e in range(params.edge_count)}
    for fi, row in rows.items():
        for e in row:
            columns[e].add(fi)
    chosen = _exact_cover(columns, rows)
    if chosen is None:
        raise TheoremContradiction(
            "no 1-factorization found", {"r": params.r, "n": params.n}
        )
    colors = np.empty(params.edge_count, dtype=np.int64)
    for color, fi in enumerate(chosen):
        colors[rows[fi]] = color
    return _checked(ProperColoring(params, colors))


def _lowest_zero_bit(x: int) -> int:
    return (~x & (x + 1)).bit_length() - 1


def _nth_set_bit(x: int, k: int) -> int:
    for _ in range(k):
        x &= x - 1
    return (x & -x).bit_length() - 1


def gen_random_greedy(
    params: Params,
    seed: int,
    strategy: Strategy = "least_color",
    shuffle: bool = True,
) -> ProperColoring:
    """Greedy proper coloring over a seeded shuffle of the edges.

    ``least_color`` gives each edge the smallest color free at all of its
    vertices.  ``random_feasible`` picks uniformly among the already used
    colors that are free at the edge plus one fresh color.  Neither samples
    uniformly from all proper colorings.
    """
    if strategy not in ("least_color", "random_feasible"):
        raise ValidationError("unknown greedy strategy", strategy)
    rng = SplitMix64(seed)
    table = edge_table(params)
    E = params.edge_count
    order = rng.permutation(E) if shuffle else np.arange(E)
    busy = [0] * params.vertex_count
    colors = [0] * E
    order_list = order.tolist()
    if params.r == 2:
        us = table[:, 0].tolist()
        vs = table[:, 1].tolist()
        if strategy == "least_color":
            for e in order_list:
                u, v = us[e], vs[e]
                c = _lowest_zero_bit(busy[u] | busy[v])
                colors[e] = c
                bit = 1 << c
                busy[u] |= bit
                busy[v] |= bit
            return _checked(ProperColoring(params, colors))
    rows = table.tolist()
    used = 0
    for e in order_list:
        verts = rows[e]
        forbidden = 0
        for v in verts:
            forbidden |= busy[v]
        if strategy == "least_color":
            c = _lowest_zero_bit(forbidden)
        else:
            feasible = ~forbidden & ((1 << used) - 1)
            k = feasible.bit_count()
            pick = rng.below(k + 1)
            c = used if pick == k else _nth_set_bit(feasible, pick)
        used = max(used, c + 1)
        colors[e] = c
        bit = 1 << c
        for v in verts:
            busy[v] |= bit
    return _checked(ProperColoring(params, colors))


def gen_fixture(name: str, params: Params | None = None) -> ProperColoring:
    """Named colorings.

    ``k4_no_rainbow_2k2``: ``K_4`` colored by its three perfect matchings,
    the only way (up to renaming) to avoid a rainbow pair of disjoint edges.
    ``k4_factorization``: the 1-factorization of ``K_4``; the same coloring.
    ``all_distinct``: every edge its own color (``color = rank``); needs ``params``.
    ``k3r_blocked``: a coloring of ``K_{3r}^{(r)}`` (``params.n == 3``) in which
    ``m1 = {0..r-1}`` and ``m2 = {r..2r-1}`` share color 0 and every split of
    the other ``2r`` vertices around either of them is a two-edge color
    class, so no triple through ``m1`` or ``m2`` is rainbow.
    """
    key = name.replace("-", "_")
    if key in ("k4_no_rainbow_2k2", "k4_factorization"):
        k4 = Params(2, 2)
        colors = np.empty(k4.edge_count, dtype=np.int64)
        for color, pair in enumerate(
            [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]
        ):
            for edge in pair:
                colors[rank_edge(edge, k4)] = color
        return _checked(ProperColoring(k4, colors))
    if key == "all_distinct":
        if params is None:
            raise ValidationError("all_distinct fixture needs params")
        return _checked(ProperColoring(params, np.arange(params.edge_count)))
    if key == "k3r_blocked":
        if params is None or params.n != 3:
            raise ValidationError("k3r_blocked fixture needs params with n = 3")
        return _checked(_k3r_blocked(params.r))
    raise ValidationError("unknown fixture", name)


def relabel(coloring: ProperColoring, seed: int) -> ProperColoring:
    """Apply a seeded vertex permutation and color renaming.

    Isomorphic to the input, so properness and the 1-factorization property
    carry over.
    """
    params = coloring.params
    rng = SplitMix64(seed)
    perm = rng.permutation(params.vertex_count)
    table = edge_table(params)
    images = np.sort(perm[table], axis=1)
    binom = np.array(
        [[comb(v, i + 1) for i in range(params.r)] for v in range(params.vertex_count)],
        dtype=np.int64,
    )
    new_ranks = binom[images, np.arange(params.r)].sum(axis=1)
    _, dense = np.unique(coloring.colors, return_inverse=True)
    color_perm = rng.permutation(int(dense.max()) + 1)
    colors = np.empty(params.edge_count, dtype=np.int64)
    colors[new_ranks] = color_perm[dense.reshape(-1)]
    return _checked(ProperColoring(params, colors))


def _k3r_blocked(r: int) -> ProperColoring:
    params = Params(r, 3)
    N = params.vertex_count
    m1 = tuple(range(r))
    m2 = tuple(range(r, 2 * r))
    colors = np.full(params.edge_count, -1, dtype=np.int64)
    colors[rank_edge(m1, params)] = colors[rank_edge(m2, params)] = 0
    fresh = 1
    for anchor, other in ((m1, m2), (m2, m1)):
        rest = [v for v in range(N) if v not in anchor]
        first, tail = rest[0], rest[1:]
        for partners in combinations(tail, r - 1):
            a = (first, *partners)
            b = tuple(v for v in tail if v not in partners)
            if other in (a, b):
                continue
            colors[rank_edge(a, params)] = colors[rank_edge(b, params)] = fresh
            fresh += 1
    for e in np.flatnonzero(colors < 0):
        colors[e] = fresh
        fresh += 1
    return ProperColoring(params, colors)
