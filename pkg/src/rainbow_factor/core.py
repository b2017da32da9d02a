"""Vertex/edge/coloring data model for complete uniform hypergraphs.

Vertices of ``K_{rn}^{(r)}`` are ``0 .. r*n - 1``.  Edges are sorted
``r``-tuples, addressed by their colexicographic rank
``sum(C(v_i, i + 1))``.  A coloring is a flat integer array indexed by that
rank.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

Edge = tuple[int, ...]

#: factor tables are materialized only up to this many vertices
FACTOR_TABLE_MAX_VERTICES = 12


class ValidationError(ValueError):
    """Malformed input: bad edge, wrong array length, violated precondition."""

    def __init__(self, reason: str, value: object = None) -> None:
        super().__init__(reason if value is None else f"{reason}: {value!r}")
        self.reason = reason
        self.value = value


class CapacityError(ValueError):
    """Instance is larger than an enumeration or search cap allows."""


class UnsupportedError(ValidationError):
    """Parameters fall outside the range an operation handles."""


class TheoremContradiction(RuntimeError):
    """An event the existence theorems rule out actually happened.

    ``report`` holds a JSON-serializable description of the instance and
    whatever traces were collected.
    """

    def __init__(self, message: str, report: dict | None = None) -> None:
        super().__init__(message)
        self.report = report or {}


@dataclass(frozen=True)
class Params:
    """Shape of ``K_{rn}^{(r)}``: uniformity ``r`` and factor size ``n``."""

    r: int
    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.r, (int, np.integer)) or self.r < 2:
            raise ValidationError("r must be an integer >= 2", self.r)
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValidationError("n must be an integer >= 1", self.n)
        object.__setattr__(self, "r", int(self.r))
        object.__setattr__(self, "n", int(self.n))

    @property
    def vertex_count(self) -> int:
        return self.r * self.n

    @property
    def edge_count(self) -> int:
        return comb(self.r * self.n, self.r)

    @property
    def degree(self) -> int:
        """Number of edges through one vertex, ``C(rn - 1, r - 1)``."""
        return comb(self.r * self.n - 1, self.r - 1)

    @property
    def full_mask(self) -> int:
        return (1 << self.vertex_count) - 1


def validate_edge(edge: Iterable[int], params: Params) -> Edge:
    """Return ``edge`` as a sorted tuple, or raise :class:`ValidationError`."""
    try:
        vs = tuple(sorted(int(v) for v in edge))
    except (TypeError, ValueError) as exc:
        raise ValidationError("edge must be a collection of integers", edge) from exc
    if len(vs) != params.r:
        raise ValidationError(f"edge must have exactly {params.r} vertices", vs)
    if len(set(vs)) != len(vs):
        raise ValidationError("edge has a repeated vertex", vs)
    if vs[0] < 0 or vs[-1] >= params.vertex_count:
        raise ValidationError(
            f"edge vertex outside 0..{params.vertex_count - 1}", vs
        )
    return vs


def edge_mask(edge: Iterable[int]) -> int:
    m = 0
    for v in edge:
        m |= 1 << v
    return m


def rank_edge(edge: Iterable[int], params: Params) -> int:
    vs = validate_edge(edge, params)
    return sum(comb(v, i + 1) for i, v in enumerate(vs))


def unrank_edge(index: int, params: Params) -> Edge:
    if not 0 <= index < params.edge_count:
        raise ValidationError(
            f"edge index outside 0..{params.edge_count - 1}", index
        )
    out = []
    rest = int(index)
    v = params.vertex_count - 1
    for i in range(params.r, 0, -1):
        while comb(v, i) > rest:
            v -= 1
        out.append(v)
        rest -= comb(v, i)
        v -= 1
    return tuple(reversed(out))


@lru_cache(maxsize=32)
def _edge_table(r: int, n: int) -> np.ndarray:
    N = r * n
    if r == 2:
        hi = np.repeat(np.arange(N, dtype=np.int64), np.arange(N, dtype=np.int64))
        starts = hi * (hi - 1) // 2
        lo = np.arange(len(hi), dtype=np.int64) - starts
        table = np.stack([lo, hi], axis=1)
    else:
        table = np.array(list(combinations(range(N), r)), dtype=np.int64)
        binom = np.array(
            [[comb(v, i + 1) for i in range(r)] for v in range(N)], dtype=np.int64
        )
        ranks = binom[table, np.arange(r)].sum(axis=1)
        table = table[np.argsort(ranks)]
    table.setflags(write=False)
    return table


def edge_table(params: Params) -> np.ndarray:
    """All edges as an ``(edge_count, r)`` array, row ``i`` = edge of rank ``i``."""
    return _edge_table(params.r, params.n)


@dataclass(frozen=True, eq=False)
class ProperColoring:
    """Total edge coloring of ``K_{rn}^{(r)}``; ``colors[rank]`` is a color id.

    Construction checks only the shape of the array.  Whether the coloring is
    actually proper is decided by :func:`verify_proper`.
    """

    params: Params
    colors: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.array(self.colors, dtype=np.int64, copy=True).reshape(-1)
        if len(arr) != self.params.edge_count:
            raise ValidationError(
                f"colors array has length {len(arr)}, expected "
                f"C({self.params.vertex_count},{self.params.r}) = {self.params.edge_count}"
            )
        if len(arr) and arr.min() < 0:
            raise ValidationError("color ids must be non-negative")
        arr.setflags(write=False)
        object.__setattr__(self, "colors", arr)

    @property
    def color_count(self) -> int:
        return len(np.unique(self.colors))

    def color(self, edge: Iterable[int]) -> int:
        return int(self.colors[rank_edge(edge, self.params)])

    def normalized(self) -> ProperColoring:
        """Same partition with ids remapped to ``0 .. color_count - 1`` (sorted)."""
        _, inv = np.unique(self.colors, return_inverse=True)
        return ProperColoring(self.params, inv.reshape(-1))

    def color_classes(self) -> dict[int, list[Edge]]:
        table = edge_table(self.params)
        classes: dict[int, list[Edge]] = {}
        for rank in np.argsort(self.colors, kind="stable"):
            classes.setdefault(int(self.colors[rank]), []).append(
                tuple(int(v) for v in table[rank])
            )
        return classes

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProperColoring):
            return NotImplemented
        return self.params == other.params and np.array_equal(
            self.colors, other.colors
        )

    def __hash__(self) -> int:
        return hash((self.params, self.colors.tobytes()))


@dataclass(frozen=True)
class ProperVerdict:
    ok: bool
    witness: tuple[Edge, Edge] | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_proper(coloring: ProperColoring) -> ProperVerdict:
    """Check that equally colored edges are pairwise vertex-disjoint.

    On failure the witness is the conflicting pair whose later edge has the
    smallest rank, i.e. the first conflict met when scanning edges in colex
    order.
    """
    params = coloring.params
    colors = np.asarray(coloring.colors)
    if len(colors) != params.edge_count:
        raise ValidationError("colors array length does not match params")
    table = edge_table(params)
    E, r = table.shape
    if E == 0:
        return ProperVerdict(True)
    # one (vertex, color) key per incidence; a repeat means two edges of one
    # color meet at that vertex
    _, dense = np.unique(colors, return_inverse=True)
    ncol = int(dense.max()) + 1
    keys = (table * ncol + dense.reshape(-1, 1)).reshape(-1)
    owners = np.repeat(np.arange(E), r)
    order = np.lexsort((owners, keys))
    sk = keys[order]
    dup = np.flatnonzero(sk[1:] == sk[:-1])
    if len(dup) == 0:
        return ProperVerdict(True)
    firsts = owners[order][dup]
    seconds = owners[order][dup + 1]
    j = int(np.lexsort((firsts, seconds))[0])
    a, b = int(firsts[j]), int(seconds[j])
    return ProperVerdict(False, (unrank_edge(a, params), unrank_edge(b, params)))


def require_proper(coloring: ProperColoring) -> None:
    verdict = verify_proper(coloring)
    if not verdict.ok:
        raise ValidationError("coloring is not proper", verdict.witness)


def verify_one_factor(params: Params, edges: Iterable[Iterable[int]]) -> bool:
    es = [validate_edge(e, params) for e in edges]
    if len(es) != params.n:
        return False
    mask = 0
    for e in es:
        m = edge_mask(e)
        if mask & m:
            return False
        mask |= m
    return mask == params.full_mask


def is_rainbow(edges: Iterable[Iterable[int]], coloring: ProperColoring) -> bool:
    seen = set()
    for e in edges:
        c = coloring.color(e)
        if c in seen:
            return False
        seen.add(c)
    return True


@dataclass(frozen=True)
class Matching:
    """Pairwise disjoint edges, kept sorted, with their vertex-occupancy mask."""

    params: Params
    edges: tuple[Edge, ...]
    mask: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        es = sorted(validate_edge(e, self.params) for e in self.edges)
        mask = 0
        for e in es:
            m = edge_mask(e)
            if mask & m:
                raise ValidationError("matching edges are not disjoint", e)
            mask |= m
        object.__setattr__(self, "edges", tuple(es))
        object.__setattr__(self, "mask", mask)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)

    def covers(self, v: int) -> bool:
        return bool(self.mask >> v & 1)

    def unmatched(self) -> list[int]:
        return [v for v in range(self.params.vertex_count) if not self.mask >> v & 1]

    def used_colors(self, coloring: ProperColoring) -> frozenset[int]:
        return frozenset(coloring.color(e) for e in self.edges)

    def missing_colors(self, coloring: ProperColoring) -> frozenset[int]:
        all_colors = {int(c) for c in np.unique(coloring.colors)}
        return frozenset(all_colors - self.used_colors(coloring))

    def is_rainbow(self, coloring: ProperColoring) -> bool:
        return is_rainbow(self.edges, coloring)

    def to_list(self) -> list[list[int]]:
        return [list(e) for e in self.edges]


class OneFactor(Matching):
    """A matching whose edges partition every vertex."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if len(self.edges) != self.params.n:
            raise ValidationError(
                f"a 1-factor needs exactly {self.params.n} edges", len(self.edges)
            )


def iter_one_factors(params: Params) -> Iterator[tuple[Edge, ...]]:
    """Every 1-factor, by recursion on the lowest uncovered vertex.

    Partners of that vertex are tried in increasing order, so factors come
    out in a fixed, reproducible order.
    """
    r = params.r

    def rec(rest: tuple[int, ...]) -> Iterator[tuple[Edge, ...]]:
        if not rest:
            yield ()
            return
        v, tail = rest[0], rest[1:]
        for partners in combinations(tail, r - 1):
            edge = (v, *partners)
            left = tuple(u for u in tail if u not in partners)
            for more in rec(left):
                yield (edge, *more)

    yield from rec(tuple(range(params.vertex_count)))


@lru_cache(maxsize=16)
def _factor_table(r: int, n: int) -> np.ndarray:
    params = Params(r, n)
    binom = [[comb(v, i + 1) for i in range(r)] for v in range(params.vertex_count)]
    rows = [
        [sum(binom[v][i] for i, v in enumerate(e)) for e in f]
        for f in iter_one_factors(params)
    ]
    table = np.array(rows, dtype=np.int64).reshape(len(rows), n)
    table.setflags(write=False)
    return table


def factor_table(params: Params) -> np.ndarray:
    """All 1-factors as rows of edge ranks, in :func:`iter_one_factors` order."""
    if params.vertex_count > FACTOR_TABLE_MAX_VERTICES:
        raise CapacityError(
            f"factor enumeration is capped at {FACTOR_TABLE_MAX_VERTICES} vertices, "
            f"got {params.vertex_count}"
        )
    return _factor_table(params.r, params.n)


def graph_color_matrix(coloring: ProperColoring) -> np.ndarray:
    """Symmetric ``(2n, 2n)`` color matrix of a graph coloring, ``-1`` on the diagonal."""
    params = coloring.params
    if params.r != 2:
        raise UnsupportedError("color matrix is only defined for r = 2", params.r)
    N = params.vertex_count
    table = edge_table(params)
    mat = np.full((N, N), -1, dtype=np.int64)
    mat[table[:, 0], table[:, 1]] = coloring.colors
    mat[table[:, 1], table[:, 0]] = coloring.colors
    return mat


def edges_from_ranks(ranks: Sequence[int], params: Params) -> list[Edge]:
    table = edge_table(params)
    return [tuple(int(v) for v in table[i]) for i in ranks]
