"""Rainbow 1-factor search.

Dispatch in :func:`solve`:

* ``r = 2, n >= 5``: greedy maximal rainbow matching, then repeated
  :func:`augment_once` until the matching is perfect;
* ``r = 2, n in {3, 4}``: exhaustive search;
* ``n = 3``: :func:`solve_k3r`, the explicit construction for ``K_{3r}^{(r)}``;
* ``r > 2, n > 3``: randomized two-edge local search, exhaustive below 13
  vertices;
* ``n <= 2``: exhaustive search (no existence guarantee there).

Every factor handed back is re-verified as a rainbow 1-factor first.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Literal, Sequence

import numpy as np

from .core import (
    FACTOR_TABLE_MAX_VERTICES,
    CapacityError,
    Edge,
    Matching,
    OneFactor,
    ProperColoring,
    TheoremContradiction,
    UnsupportedError,
    ValidationError,
    edge_table,
    factor_table,
    graph_color_matrix,
    is_rainbow,
    rank_edge,
    require_proper,
    verify_one_factor,
)
from .rng import SplitMix64
from .trace import AugmentationTrace, analyze_pair

log = logging.getLogger(__name__)

#: exhaustive fallback after a failed augmentation is attempted up to K_16
EXHAUSTIVE_FALLBACK_MAX_N = 8
#: generic local search falls back to exhaustive search up to this many vertices
GENERIC_EXHAUSTIVE_MAX_VERTICES = 12


def _certify(edges: Sequence[Edge], coloring: ProperColoring) -> OneFactor:
    if not verify_one_factor(coloring.params, edges) or not is_rainbow(edges, coloring):
        raise TheoremContradiction(
            "solver produced an invalid factor",
            {"edges": [list(e) for e in edges]},
        )
    return OneFactor(coloring.params, tuple(edges))


# -- greedy ------------------------------------------------------------------


def greedy_rainbow_matching(
    coloring: ProperColoring, edge_order: Sequence[int] | None = None
) -> Matching:
    """Maximal rainbow matching built by scanning edges (ranks) in ``edge_order``.

    Defaults to colex order.
    """
    params = coloring.params
    rows = edge_table(params).tolist()
    colors = coloring.colors.tolist()
    order = range(params.edge_count) if edge_order is None else edge_order
    covered = [False] * params.vertex_count
    used = set()
    chosen = []
    for e in order:
        c = colors[e]
        if c in used:
            continue
        verts = rows[e]
        if any(covered[v] for v in verts):
            continue
        used.add(c)
        for v in verts:
            covered[v] = True
        chosen.append(tuple(verts))
    return Matching(params, tuple(chosen))


# -- exhaustive --------------------------------------------------------------


def exhaustive_search(
    coloring: ProperColoring, max_vertices: int = 16
) -> OneFactor | None:
    """First rainbow 1-factor by depth-first search on the lowest uncovered vertex.

    Branches are cut as soon as a color repeats.  ``None`` means no rainbow
    1-factor exists.
    """
    params = coloring.params
    if params.vertex_count > max_vertices:
        raise CapacityError(
            f"exhaustive search capped at {max_vertices} vertices, got {params.vertex_count}"
        )
    r = params.r
    colors = coloring.colors.tolist()
    binom = [[comb(v, i + 1) for i in range(r)] for v in range(params.vertex_count)]
    used: set[int] = set()
    chosen: list[Edge] = []

    def rec(rest: tuple[int, ...]) -> bool:
        if not rest:
            return True
        v, tail = rest[0], rest[1:]
        for partners in combinations(tail, r - 1):
            edge = (v, *partners)
            c = colors[sum(binom[u][i] for i, u in enumerate(edge))]
            if c in used:
                continue
            used.add(c)
            chosen.append(edge)
            if rec(tuple(u for u in tail if u not in partners)):
                return True
            chosen.pop()
            used.discard(c)
        return False

    if rec(tuple(range(params.vertex_count))):
        return _certify(chosen, coloring)
    return None


@dataclass(frozen=True)
class OracleResult:
    total_factors: int
    rainbow_factors: int
    witness: OneFactor | None


def oracle_enumerate(coloring: ProperColoring) -> OracleResult:
    """Count all 1-factors and the rainbow ones (at most 12 vertices).

    The witness is the first rainbow factor in enumeration order (recursion on
    the lowest uncovered vertex, partners in increasing order).
    """
    params = coloring.params
    if params.vertex_count > FACTOR_TABLE_MAX_VERTICES:
        raise CapacityError(
            f"oracle enumeration is capped at {FACTOR_TABLE_MAX_VERTICES} vertices"
        )
    table = factor_table(params)
    cols = np.sort(coloring.colors[table], axis=1)
    rainbow = np.all(cols[:, 1:] != cols[:, :-1], axis=1)
    hits = np.flatnonzero(rainbow)
    witness = None
    if len(hits):
        rows = edge_table(params)
        edges = tuple(tuple(int(v) for v in rows[e]) for e in table[hits[0]])
        witness = OneFactor(params, edges)
    return OracleResult(len(table), len(hits), witness)


# -- augmentation (r = 2) ----------------------------------------------------


class _GraphState:
    """Mutable matching state over a dense color matrix.

    Colors are remapped to ``0 .. l-1``; index ``l`` is a sentinel stored on
    the diagonal and permanently marked used.
    """

    def __init__(self, coloring: ProperColoring, colmat: np.ndarray | None = None):
        self.coloring = coloring
        self.params = coloring.params
        N = self.params.vertex_count
        if colmat is None:
            colmat = graph_color_matrix(coloring)
        palette, dense = np.unique(colmat[colmat >= 0], return_inverse=True)
        self.ncolors = len(palette)
        mat = np.full((N, N), self.ncolors, dtype=np.int64)
        mat[colmat >= 0] = dense.reshape(-1)
        self.colmat = mat
        self.raw_colmat = colmat
        self.mate = np.full(N, -1, dtype=np.int64)
        self.used = np.zeros(self.ncolors + 1, dtype=bool)
        self.used[self.ncolors] = True
        self.owner = np.full(self.ncolors + 1, -1, dtype=np.int64)

    def load(self, matching: Matching) -> None:
        self.mate[:] = -1
        self.used[: self.ncolors] = False
        self.owner[:] = -1
        for a, b in matching.edges:
            self._link(a, b)

    def _link(self, a: int, b: int) -> None:
        c = self.colmat[a, b]
        self.mate[a] = b
        self.mate[b] = a
        self.used[c] = True
        self.owner[c] = a

    def _unlink(self, a: int, b: int) -> None:
        c = self.colmat[a, b]
        self.mate[a] = -1
        self.mate[b] = -1
        self.used[c] = False
        self.owner[c] = -1

    def matching(self) -> Matching:
        edges = [
            (int(v), int(m)) for v, m in enumerate(self.mate) if m > v
        ]
        return Matching(self.params, tuple(edges))

    def size(self) -> int:
        return int(np.count_nonzero(self.mate >= 0)) // 2

    def unmatched(self) -> np.ndarray:
        return np.flatnonzero(self.mate < 0)

    def extend(self) -> bool:
        """Add the colex-first disjoint edge of unused color, if any."""
        free = self.unmatched()
        if len(free) < 2:
            return False
        sub = self.colmat[np.ix_(free, free)]
        ok = np.triu(~self.used[sub], k=1)
        if not ok.any():
            return False
        # colex order on pairs (u < v): by v, then u
        iu, iv = np.nonzero(ok)
        j = np.lexsort((iu, iv))[0]
        self._link(int(free[iu[j]]), int(free[iv[j]]))
        return True

    def maximize(self) -> int:
        added = 0
        while self.extend():
            added += 1
        return added

    def find_swap(self, s: int, t: int) -> tuple[int, int] | None:
        """Matching edge ``ab`` with ``M - ab + sa + bt`` rainbow (first ``a``)."""
        row = self.colmat[s]
        cand = np.flatnonzero(~self.used[row] & (self.mate >= 0))
        if len(cand) == 0:
            return None
        b = self.mate[cand]
        third = self.colmat[b, t]
        ok = np.flatnonzero(~self.used[third] & (third != row[cand]))
        if len(ok) == 0:
            return None
        return int(cand[ok[0]]), int(b[ok[0]])

    def apply_swap(self, s: int, t: int, a: int, b: int) -> None:
        self._unlink(a, b)
        self._link(s, a)
        self._link(b, t)

    def rotation_colors(self, s: int, t: int) -> list[tuple[int, int]]:
        """``(color, z)`` for the rotation set, in increasing color order."""
        row = self.colmat[t]
        fresh = np.flatnonzero(~self.used[row])
        excluded = set()
        base = self.colmat[s, t]
        if self.used[base]:
            w1 = int(self.owner[base])
            for w in (w1, int(self.mate[w1])):
                if not self.used[row[w]]:
                    excluded.add(int(row[w]))
        pairs = [(int(row[z]), int(z)) for z in fresh if int(row[z]) not in excluded]
        pairs.sort()
        return pairs

    def try_rotations(self, s: int, t: int) -> bool:
        for i, z in self.rotation_colors(s, t):
            t_i = int(self.mate[z])
            if t_i < 0:
                self._link(t, z)
                return True
            self._unlink(z, t_i)
            self._link(t, z)
            if not self.used[self.colmat[s, t_i]]:
                self._link(s, t_i)
                return True
            found = self.find_swap(s, t_i)
            if found is not None:
                self.apply_swap(s, t_i, *found)
                return True
            self._unlink(t, z)
            self._link(z, t_i)
        return False

    def augment(self, traces: list[AugmentationTrace] | None = None) -> str | None:
        """Grow the matching by one edge; returns how, or ``None`` if stuck."""
        if self.extend():
            return "extension"
        free = [int(v) for v in self.unmatched()]
        base = self.matching() if traces is not None else None
        for s in free:
            for t in free:
                if s == t:
                    continue
                if traces is not None:
                    traces.append(
                        analyze_pair(self.coloring, base, s, t, colmat=self.raw_colmat)
                    )
                found = self.find_swap(s, t)
                if found is not None:
                    self.apply_swap(s, t, *found)
                    return "swap"
                if self.try_rotations(s, t):
                    return "rotation"
        return None


@dataclass
class AugmentResult:
    outcome: Literal["augmented", "exhausted"]
    new_matching: Matching | None
    via: str | None = None
    traces: list[AugmentationTrace] = field(default_factory=list)


def augment_once(
    coloring: ProperColoring,
    matching: Matching,
    trace: bool = False,
    check: bool = True,
) -> AugmentResult:
    """Try to turn the rainbow matching into one with one more edge.

    Order: extension by a disjoint edge of unused color; then, for each
    ordered pair of unmatched vertices, swaps along candidate 3-paths and the
    same swaps after each rotation.
    """
    params = coloring.params
    if params.r != 2:
        raise UnsupportedError("augmentation works on graphs (r = 2)", params.r)
    if check:
        require_proper(coloring)
    if not matching.is_rainbow(coloring):
        raise ValidationError("matching is not rainbow")
    if len(matching) >= params.n:
        raise ValidationError("matching is already perfect")
    state = _GraphState(coloring)
    state.load(matching)
    traces: list[AugmentationTrace] | None = [] if trace else None
    via = state.augment(traces)
    if via is None:
        return AugmentResult("exhausted", None, None, traces or [])
    new = state.matching()
    if len(new) != len(matching) + 1 or not new.is_rainbow(coloring):
        raise TheoremContradiction("augmentation produced an invalid matching")
    return AugmentResult("augmented", new, via, traces or [])


@dataclass
class GraphRun:
    """Statistics of one :func:`run_graph_solver` call."""

    factor: OneFactor
    method: str
    greedy_size: int = 0
    augmentations: Counter = field(default_factory=Counter)
    exhausted: int = 0
    exhaustive_fallbacks: int = 0
    traces: list[AugmentationTrace] = field(default_factory=list)


def run_graph_solver(
    coloring: ProperColoring,
    trace: bool = False,
    check: bool = True,
    edge_order: Sequence[int] | None = None,
) -> GraphRun:
    params = coloring.params
    if params.r != 2:
        raise UnsupportedError("graph solver needs r = 2", params.r)
    if params.n < 3:
        raise UnsupportedError(
            "rainbow 1-factors are only guaranteed for n >= 3; use oracle_enumerate",
            params.n,
        )
    if check:
        require_proper(coloring)
    if params.n <= 4:
        factor = exhaustive_search(coloring)
        if factor is None:
            raise TheoremContradiction(
                f"no rainbow 1-factor in a proper coloring of K_{2 * params.n}",
                {"r": 2, "n": params.n, "colors": coloring.colors.tolist()},
            )
        return GraphRun(factor, "exhaustive")

    greedy = greedy_rainbow_matching(coloring, edge_order)
    state = _GraphState(coloring)
    state.load(greedy)
    run = GraphRun(factor=None, method="augment", greedy_size=len(greedy))  # type: ignore[arg-type]
    while state.size() < params.n:
        traces: list[AugmentationTrace] | None = [] if trace else None
        via = state.augment(traces)
        if traces:
            run.traces.extend(traces)
        if via is None:
            run.exhausted += 1
            report = _contradiction_report(coloring, state, trace_done=trace)
            log.error("augmentation exhausted at k=%d, n=%d", state.size(), params.n)
            if params.n > EXHAUSTIVE_FALLBACK_MAX_N:
                raise TheoremContradiction("augmentation exhausted below n", report)
            factor = exhaustive_search(coloring)
            run.exhaustive_fallbacks += 1
            if factor is None:
                raise TheoremContradiction("no rainbow 1-factor exists", report)
            run.factor = factor
            run.method = "exhaustive-fallback"
            return run
        run.augmentations[via] += 1
        state.maximize()
    run.factor = _certify(state.matching().edges, coloring)
    return run


def _contradiction_report(
    coloring: ProperColoring, state: _GraphState, trace_done: bool
) -> dict:
    matching = state.matching()
    traces: list[AugmentationTrace] = []
    if not trace_done:
        probe = _GraphState(coloring, state.raw_colmat)
        probe.load(matching)
        probe.augment(traces)
    return {
        "r": 2,
        "n": coloring.params.n,
        "colors": coloring.colors.tolist(),
        "matching": matching.to_list(),
        "traces": [t.to_dict() for t in traces],
    }


def solve_graph(coloring: ProperColoring, trace: bool = False) -> OneFactor:
    return run_graph_solver(coloring, trace=trace).factor


# -- K_{3r}^{(r)} --------------------------------------------------------------


@dataclass(frozen=True)
class K3rCertificate:
    mode: Literal["all_independent_distinct", "direct_triple", "fallback_triple"]
    m1: Edge | None
    m2: Edge | None
    tried: tuple[tuple[Edge, Edge], ...]
    factor: OneFactor
    labels: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "m1": list(self.m1) if self.m1 else None,
            "m2": list(self.m2) if self.m2 else None,
            "tried": [[list(a), list(b)] for a, b in self.tried],
            "labels": list(self.labels),
        }


def _splits(vertices: Sequence[int], r: int, avoid: Edge):
    """Unordered splits of ``2r`` vertices into two ``r``-sets, skipping ``avoid``."""
    first, rest = vertices[0], vertices[1:]
    for partners in combinations(rest, r - 1):
        a = (first, *partners)
        b = tuple(v for v in rest if v not in partners)
        if a == avoid or b == avoid:
            continue
        yield a, b


def solve_k3r(coloring: ProperColoring, check: bool = True) -> tuple[OneFactor, K3rCertificate]:
    """Rainbow 1-factor of a properly colored ``K_{3r}^{(r)}``.

    If no color is used twice, any 1-factor is rainbow.  Otherwise take two
    edges ``m1, m2`` of one color and look for a rainbow
    ``{m1, A, V - m1 - A}`` (then ``{m2, ...}``).  When every such triple is
    blocked, label ``m1 = x_1..x_r``, ``m2 = x_{r+1}..x_{2r}``, the rest
    ``x_{2r+1}..x_{3r}`` and return
    ``{x_{r+1..2r-1}, x_{2r+1}}, {x_1, x_{2r+2..3r}}, {x_{2..r}, x_{2r}}``.
    """
    params = coloring.params
    if params.n != 3:
        raise UnsupportedError("solve_k3r needs n = 3", params.n)
    if check:
        require_proper(coloring)
    r = params.r
    N = params.vertex_count
    colors = coloring.colors
    uniq, first_pos, counts = np.unique(colors, return_index=True, return_counts=True)
    repeated = first_pos[counts >= 2]
    rows = edge_table(params)

    def color(e: Edge) -> int:
        return int(colors[rank_edge(e, params)])

    if len(repeated) == 0:
        edges = [tuple(range(j * r, (j + 1) * r)) for j in range(3)]
        factor = _certify(edges, coloring)
        return factor, K3rCertificate("all_independent_distinct", None, None, (), factor)

    i1 = int(repeated.min())
    same = np.flatnonzero(colors == colors[i1])
    m1 = tuple(int(v) for v in rows[i1])
    m2 = tuple(int(v) for v in rows[int(same[same > i1][0])])
    tried: list[tuple[Edge, Edge]] = []
    for anchor, other in ((m1, m2), (m2, m1)):
        rest = [v for v in range(N) if v not in anchor]
        for a, b in _splits(rest, r, other):
            if len({color(anchor), color(a), color(b)}) == 3:
                factor = _certify([anchor, a, b], coloring)
                return factor, K3rCertificate(
                    "direct_triple", m1, m2, tuple(tried), factor
                )
            tried.append((a, b))

    x = list(m1) + list(m2) + [v for v in range(N) if v not in m1 and v not in m2]
    f1 = tuple(sorted(x[r : 2 * r - 1] + [x[2 * r]]))
    f2 = tuple(sorted([x[0]] + x[2 * r + 1 :]))
    f3 = tuple(sorted(x[1:r] + [x[2 * r - 1]]))
    edges = [f1, f2, f3]
    if not (verify_one_factor(params, edges) and is_rainbow(edges, coloring)):
        raise TheoremContradiction(
            "fallback triple is not a rainbow 1-factor",
            {
                "r": r,
                "n": 3,
                "m1": list(m1),
                "m2": list(m2),
                "triple": [list(e) for e in edges],
                "colors": colors.tolist(),
            },
        )
    factor = OneFactor(params, tuple(edges))
    return factor, K3rCertificate(
        "fallback_triple", m1, m2, tuple(tried), factor, tuple(x)
    )


# -- generic local search ------------------------------------------------------


def local_search(
    coloring: ProperColoring,
    seed: int = 0,
    restarts: int = 30,
    max_steps: int = 2000,
) -> OneFactor | None:
    """Randomized repair of color collisions by re-splitting two edges.

    Starts from a greedy rainbow matching over a shuffled edge order padded
    to a 1-factor.  Each step picks a colliding edge and another edge and
    re-partitions their ``2r`` vertices the best of all
    ``C(2r, r) / 2`` ways (sideways moves allowed).
    """
    params = coloring.params
    r, n = params.r, params.n
    colors = coloring.colors.tolist()
    binom = [[comb(v, i + 1) for i in range(r)] for v in range(params.vertex_count)]

    def col(e: Sequence[int]) -> int:
        return colors[sum(binom[v][i] for i, v in enumerate(sorted(e)))]

    rng = SplitMix64(seed)
    for _ in range(restarts):
        order = rng.permutation(params.edge_count).tolist()
        start = greedy_rainbow_matching(coloring, order)
        left = [v for v in range(params.vertex_count) if not start.covers(v)]
        rng.shuffle(left)
        edges = [list(e) for e in start.edges] + [
            left[j : j + r] for j in range(0, len(left), r)
        ]
        ecol = [col(e) for e in edges]
        count = Counter(ecol)
        for _ in range(max_steps):
            bad = [j for j in range(n) if count[ecol[j]] > 1]
            if not bad:
                factor = [tuple(sorted(e)) for e in edges]
                return _certify(factor, coloring)
            i = bad[rng.below(len(bad))]
            j = rng.below(n - 1)
            j += j >= i
            pool = sorted(edges[i] + edges[j])
            count[ecol[i]] -= 1
            count[ecol[j]] -= 1
            best: list = []
            best_cost = None
            for a, b in _splits(pool, r, ()):
                ca, cb = col(a), col(b)
                cost = (count[ca] > 0) + (count[cb] > 0) + (ca == cb)
                if best_cost is None or cost < best_cost:
                    best, best_cost = [(a, b, ca, cb)], cost
                elif cost == best_cost:
                    best.append((a, b, ca, cb))
            a, b, ca, cb = best[rng.below(len(best))]
            edges[i], edges[j] = list(a), list(b)
            ecol[i], ecol[j] = ca, cb
            count[ca] += 1
            count[cb] += 1
    return None


# -- top level -------------------------------------------------------------------


@dataclass
class Solution:
    factor: OneFactor | None
    method: str
    reason: str = ""
    verified_absent: bool = False
    certificate: K3rCertificate | None = None
    run: GraphRun | None = None

    @property
    def found(self) -> bool:
        return self.factor is not None


def solve(
    coloring: ProperColoring,
    trace: bool = False,
    seed: int | None = None,
    check: bool = True,
) -> Solution:
    """Find a rainbow 1-factor, or explain why none was returned.

    With a ``seed`` the graph solver starts from a greedy matching over a
    seeded edge shuffle instead of colex order, and local search uses it.
    """
    params = coloring.params
    if check:
        require_proper(coloring)
    r, n = params.r, params.n
    if n <= 2:
        factor = exhaustive_search(coloring)
        if factor is None:
            return Solution(
                None,
                "exhaustive",
                f"no rainbow 1-factor exists (n = {n} is outside the theorem's n >= 3)",
                verified_absent=True,
            )
        return Solution(factor, "exhaustive")
    if r == 2:
        order = None
        if seed is not None:
            order = SplitMix64(seed).permutation(params.edge_count).tolist()
        run = run_graph_solver(coloring, trace=trace, check=False, edge_order=order)
        return Solution(run.factor, run.method, run=run)
    if n == 3:
        factor, cert = solve_k3r(coloring, check=False)
        return Solution(factor, "k3r", certificate=cert)
    factor = local_search(coloring, seed=seed or 0)
    if factor is not None:
        return Solution(factor, "local_search")
    if params.vertex_count <= GENERIC_EXHAUSTIVE_MAX_VERTICES:
        factor = exhaustive_search(coloring)
        if factor is not None:
            return Solution(factor, "exhaustive-fallback")
        raise TheoremContradiction(
            "no rainbow 1-factor exists",
            {"r": r, "n": n, "colors": coloring.colors.tolist()},
        )
    return Solution(None, "local_search", "local search budget exhausted")
