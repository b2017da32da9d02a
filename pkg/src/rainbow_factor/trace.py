"""Instrumentation of the counting argument behind the augmentation step.

For a maximal rainbow matching ``M`` of a properly colored ``K_{2n}`` and two
unmatched vertices ``s, t``, :func:`analyze_pair` inventories

* the colors at ``s`` split into those used by ``M`` (``C1``, size ``p``) and
  the rest (``C2``); likewise ``C1'``/``C2'`` (size ``q``) at ``t``;
* the candidate 3-paths ``s - a - b - t`` whose first edge has a color
  outside ``M`` and whose middle edge ``ab`` is in ``M``, and which of them
  are symmetric (first and third edge share a color);
* for every rotation color ``i`` the matching ``M_i`` obtained by trading the
  matching edge ``e_i = {z_i, t_i}`` for ``e_t = {t, z_i}``, with the same
  inventory from ``s`` to the new unmatched vertex ``t_i``.

:func:`check_counting` then tests the relations the argument relies on.
Colors are reported with the ids of the input coloring.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np

from .core import (
    Edge,
    Matching,
    ProperColoring,
    UnsupportedError,
    ValidationError,
    graph_color_matrix,
)


@dataclass(frozen=True)
class CandidatePath:
    vertices: tuple[int, int, int, int]
    first_color: int
    middle_color: int
    third_color: int
    symmetric: bool
    augmenting: bool

    @property
    def first_edge(self) -> Edge:
        s, a = self.vertices[0], self.vertices[1]
        return (min(s, a), max(s, a))

    @property
    def third_edge(self) -> Edge:
        b, t = self.vertices[2], self.vertices[3]
        return (min(b, t), max(b, t))


@dataclass(frozen=True)
class Rotation:
    color: int
    e_t: Edge
    e_i: Edge
    e_i_color: int
    z: int
    t_i: int
    first_edge_count: int
    candidate_paths: tuple[CandidatePath, ...]
    direct_edge_color: int
    direct_augments: bool

    @property
    def symmetric_paths(self) -> tuple[CandidatePath, ...]:
        return tuple(p for p in self.candidate_paths if p.symmetric)

    @property
    def augments(self) -> bool:
        return self.direct_augments or any(p.augmenting for p in self.candidate_paths)


@dataclass(frozen=True)
class AugmentationTrace:
    n: int
    s: int
    t: int
    k: int
    base_color: int
    matching_colors: tuple[int, ...]
    C1: tuple[int, ...]
    C2: tuple[int, ...]
    C1_t: tuple[int, ...]
    C2_t: tuple[int, ...]
    excluded: tuple[int, ...]
    L: tuple[int, ...]
    candidate_paths: tuple[CandidatePath, ...]
    rotations: tuple[Rotation, ...] = field(default=())

    @property
    def p(self) -> int:
        return len(self.C1)

    @property
    def q(self) -> int:
        return len(self.C1_t)

    @property
    def x(self) -> int:
        return 2 * self.n - self.p

    @property
    def y(self) -> int:
        return 2 * self.n - self.q

    @property
    def symmetric_paths(self) -> tuple[CandidatePath, ...]:
        return tuple(p for p in self.candidate_paths if p.symmetric)

    @property
    def direct_augments(self) -> bool:
        return any(p.augmenting for p in self.candidate_paths)

    @property
    def augments(self) -> bool:
        return self.direct_augments or any(rot.augments for rot in self.rotations)

    @property
    def inequality_holds(self) -> bool:
        return counting_inequality(self.n, self.p, self.q, self.k)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(
            p=self.p,
            q=self.q,
            x=self.x,
            y=self.y,
            inequality_holds=self.inequality_holds,
            candidate_count=len(self.candidate_paths),
            symmetric_count=len(self.symmetric_paths),
        )
        return d


def counting_inequality(n: int, p: int, q: int, k: int) -> bool:
    """``2n - p - 1 >= (2n - q - 3)(2n - p - k)``."""
    return 2 * n - p - 1 >= (2 * n - q - 3) * (2 * n - p - k)


def _mates(matching: Matching) -> dict[int, int]:
    mate = {}
    for a, b in matching.edges:
        mate[a] = b
        mate[b] = a
    return mate


def _paths(
    colmat: np.ndarray, mate: dict[int, int], used: set[int], s: int, end: int
) -> tuple[int, list[CandidatePath]]:
    """Fresh first edges at ``s`` and the candidate paths ``s-a-mate(a)-end``."""
    N = len(colmat)
    fresh_first = 0
    paths = []
    for a in range(N):
        if a == s:
            continue
        alpha = int(colmat[s, a])
        if alpha in used:
            continue
        fresh_first += 1
        if a not in mate:
            continue
        b = mate[a]
        third = int(colmat[b, end])
        paths.append(
            CandidatePath(
                vertices=(s, a, b, end),
                first_color=alpha,
                middle_color=int(colmat[a, b]),
                third_color=third,
                symmetric=third == alpha,
                augmenting=third not in used and third != alpha,
            )
        )
    return fresh_first, paths


def analyze_pair(
    coloring: ProperColoring,
    matching: Matching,
    s: int,
    t: int,
    colmat: np.ndarray | None = None,
) -> AugmentationTrace:
    """Full candidate/symmetric/rotation inventory for the unmatched pair ``(s, t)``.

    ``matching`` must be a maximal rainbow matching.  Pass ``colmat`` (from
    :func:`graph_color_matrix`) to skip rebuilding it.
    """
    params = coloring.params
    if params.r != 2:
        raise UnsupportedError("pair analysis is defined for graphs (r = 2)", params.r)
    if colmat is None:
        colmat = graph_color_matrix(coloring)
    N = params.vertex_count
    mate = _mates(matching)
    if s == t or s in mate or t in mate or not (0 <= s < N and 0 <= t < N):
        raise ValidationError("s and t must be distinct unmatched vertices", (s, t))
    used = {int(colmat[a, b]) for a, b in matching.edges}
    if len(used) != len(matching.edges):
        raise ValidationError("matching is not rainbow")
    free = [v for v in range(N) if v not in mate]
    for i, u in enumerate(free):
        for v in free[i + 1 :]:
            if int(colmat[u, v]) not in used:
                raise ValidationError("matching is not maximal", (u, v))

    at_s = {int(colmat[s, v]) for v in range(N) if v != s}
    at_t = {int(colmat[t, v]) for v in range(N) if v != t}
    base = int(colmat[s, t])
    _, base_paths = _paths(colmat, mate, used, s, t)

    excluded: set[int] = set()
    if base in used:
        w1 = next(a for a, b in matching.edges if int(colmat[a, b]) == base)
        for w in (w1, mate[w1]):
            if int(colmat[t, w]) not in used:
                excluded.add(int(colmat[t, w]))
    L = sorted((at_t - used) - excluded)

    by_color_t = {int(colmat[t, v]): v for v in range(N) if v != t}
    rotations = []
    for i in L:
        z = by_color_t[i]
        t_i = mate[z]  # maximality: an edge of fresh color at t ends at a matched vertex
        ce = int(colmat[z, t_i])
        mate_i = dict(mate)
        del mate_i[t_i]
        mate_i[z] = t
        mate_i[t] = z
        used_i = (used - {ce}) | {i}
        first_count, paths_i = _paths(colmat, mate_i, used_i, s, t_i)
        direct = int(colmat[s, t_i])
        rotations.append(
            Rotation(
                color=i,
                e_t=(min(t, z), max(t, z)),
                e_i=(min(z, t_i), max(z, t_i)),
                e_i_color=ce,
                z=z,
                t_i=t_i,
                first_edge_count=first_count,
                candidate_paths=tuple(paths_i),
                direct_edge_color=direct,
                direct_augments=direct not in used_i,
            )
        )

    return AugmentationTrace(
        n=params.n,
        s=s,
        t=t,
        k=len(matching.edges),
        base_color=base,
        matching_colors=tuple(sorted(used)),
        C1=tuple(sorted(at_s & used)),
        C2=tuple(sorted(at_s - used)),
        C1_t=tuple(sorted(at_t & used)),
        C2_t=tuple(sorted(at_t - used)),
        excluded=tuple(sorted(excluded)),
        L=tuple(L),
        candidate_paths=tuple(base_paths),
        rotations=tuple(rotations),
    )


class Verdict(str, Enum):
    AUGMENTABLE_GUARANTEED = "augmentable_guaranteed"
    INEQUALITY_VIOLATED_BY_PROOF = "inequality_violated_by_proof"
    INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class CountingReport:
    verdict: Verdict
    inequality_holds: bool
    violations: tuple[str, ...]
    in_scope: bool

    @property
    def contradicts_theorem(self) -> bool:
        """A structural violation, or the inequality holding where it cannot."""
        return self.verdict is Verdict.INCONSISTENT or (
            self.verdict is Verdict.INEQUALITY_VIOLATED_BY_PROOF and self.in_scope
        )


def check_counting(trace: AugmentationTrace) -> CountingReport:
    """Audit a trace against the relations the counting argument uses.

    ``augmentable_guaranteed``: the inequality that non-augmentability would
    force is false, so some rotation or swap must succeed.
    ``inequality_violated_by_proof``: the inequality holds; for ``k < n`` and
    ``n >= 5`` that is arithmetically impossible.
    ``inconsistent``: an inventory identity or the injectivity claim failed.
    """
    n, p, k = trace.n, trace.p, trace.k
    violations = []
    if len(trace.C1) + len(trace.C2) != 2 * n - 1:
        violations.append(f"|C1|+|C2| = {len(trace.C1) + len(trace.C2)} != 2n-1")
    if len(trace.candidate_paths) != 2 * n - 1 - p:
        violations.append(
            f"candidate paths {len(trace.candidate_paths)} != 2n-1-p = {2 * n - 1 - p}"
        )
    if trace.base_color not in trace.matching_colors:
        violations.append("base color not used by the matching")
    if not trace.direct_augments and len(trace.symmetric_paths) < 2 * n - p - k:
        violations.append(
            f"symmetric paths {len(trace.symmetric_paths)} < 2n-p-k = {2 * n - p - k}"
        )
    for rot in trace.rotations:
        if rot.e_i_color == trace.base_color:
            violations.append(f"rotation {rot.color} removes the base-colored edge")
        if abs(rot.first_edge_count - (2 * n - 1 - p)) > 1:
            violations.append(
                f"rotation {rot.color}: {rot.first_edge_count} fresh first edges, "
                f"not within 1 of 2n-1-p = {2 * n - 1 - p}"
            )

    # a path s-z-t-t_i in M_i has the same first and third edge as s-z-t_i-t
    # in M and counts once
    seen: dict[frozenset, int] = {}
    for path in list(trace.symmetric_paths) + [
        path for rot in trace.rotations for path in rot.symmetric_paths
    ]:
        seen.setdefault(frozenset((path.first_edge, path.third_edge)), path.first_color)
    first_colors = list(seen.values())
    if len(first_colors) != len(set(first_colors)):
        violations.append("two symmetric paths share a first-edge color")

    holds = trace.inequality_holds
    if violations:
        verdict = Verdict.INCONSISTENT
    elif holds:
        verdict = Verdict.INEQUALITY_VIOLATED_BY_PROOF
    else:
        verdict = Verdict.AUGMENTABLE_GUARANTEED
    return CountingReport(
        verdict=verdict,
        inequality_holds=holds,
        violations=tuple(violations),
        in_scope=k < n and n >= 5,
    )
