"""Seeded stress runs of the solver against the theorems and the oracle.

Instance ``i`` of a run uses the stream ``derive_seed(master_seed, i)``, and
worker ``w`` of ``W`` handles the contiguous block of indices assigned to it,
so the merged summary is the same for every worker count.
"""

from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

import numpy as np

from .core import (
    FACTOR_TABLE_MAX_VERTICES,
    CapacityError,
    Params,
    ProperColoring,
    TheoremContradiction,
)
from .gen import gen_backtrack_factorization, gen_random_greedy, gen_round_robin, relabel
from .rng import SplitMix64, derive_seed
from .solver import oracle_enumerate, solve
from .trace import check_counting

log = logging.getLogger(__name__)

Mode = Literal["greedy", "factorization", "mixed"]

_COUNTERS = (
    "instances",
    "successes",
    "expected_negative",
    "absent",
    "exhausted",
    "exhaustive_fallbacks",
    "oracle_checked",
    "oracle_disagreements",
    "traces",
    "trace_violations",
    "contradictions",
    "fallback_triples",
)


@dataclass
class FuzzSummary:
    r: int
    n: int
    iters: int
    master_seed: int
    mode: str
    counts: Counter = field(default_factory=Counter)
    methods: Counter = field(default_factory=Counter)
    augmentations: Counter = field(default_factory=Counter)
    generators: Counter = field(default_factory=Counter)
    failures: list[dict] = field(default_factory=list)
    trace_records: list[dict] = field(default_factory=list)

    def merge(self, other: FuzzSummary) -> None:
        self.counts.update(other.counts)
        self.methods.update(other.methods)
        self.augmentations.update(other.augmentations)
        self.generators.update(other.generators)
        self.failures.extend(other.failures)
        self.trace_records.extend(other.trace_records)

    @property
    def ok(self) -> bool:
        c = self.counts
        return (
            c["absent"] == 0
            and c["exhausted"] == 0
            and c["oracle_disagreements"] == 0
            and c["trace_violations"] == 0
            and c["contradictions"] == 0
        )

    @property
    def exit_code(self) -> int:
        if self.counts["contradictions"]:
            return 3
        return 0 if self.ok else 1

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "n": self.n,
            "iters": self.iters,
            "master_seed": self.master_seed,
            "mode": self.mode,
            **{k: self.counts[k] for k in _COUNTERS},
            "methods": dict(sorted(self.methods.items())),
            "augmentations": dict(sorted(self.augmentations.items())),
            "generators": dict(sorted(self.generators.items())),
            "ok": self.ok,
        }


@lru_cache(maxsize=16)
def _base_factorization(r: int, n: int) -> ProperColoring:
    if r == 2:
        return gen_round_robin(n)
    if n == 1:
        return ProperColoring(Params(r, 1), [0])
    return gen_backtrack_factorization(Params(r, n))


def make_instance(
    params: Params, index: int, master_seed: int, mode: Mode = "mixed"
) -> tuple[ProperColoring, str, int]:
    """The ``index``-th coloring of a run: ``(coloring, generator label, seed)``."""
    seed = derive_seed(master_seed, index)
    rng = SplitMix64(seed)
    factorable = params.r == 2 or params.vertex_count <= FACTOR_TABLE_MAX_VERTICES
    if mode == "factorization" and not factorable:
        raise CapacityError("factorization mode needs r = 2 or at most 12 vertices")
    kind = mode
    if mode == "mixed":
        kind = "factorization" if rng.below(2) else "greedy"
        if not factorable:
            kind = "greedy"
    if kind == "factorization":
        base = _base_factorization(params.r, params.n)
        return relabel(base, rng.next_u64()), "factorization", seed
    strategy = "random_feasible" if rng.below(2) else "least_color"
    return gen_random_greedy(params, rng.next_u64(), strategy), strategy, seed


def run_instance(
    params: Params,
    index: int,
    master_seed: int,
    mode: Mode = "mixed",
    trace: bool = True,
    keep_traces: bool = False,
) -> FuzzSummary:
    out = FuzzSummary(params.r, params.n, 1, master_seed, mode)
    c = out.counts
    coloring, label, seed = make_instance(params, index, master_seed, mode)
    out.generators[label] += 1
    c["instances"] += 1
    try:
        sol = solve(coloring, trace=trace, seed=seed, check=False)
    except TheoremContradiction as exc:
        c["contradictions"] += 1
        out.failures.append({"index": index, "error": str(exc), "report": exc.report})
        log.error("instance %d: %s", index, exc)
        return out
    out.methods[sol.method] += 1
    if sol.found:
        c["successes"] += 1
    elif sol.verified_absent and params.n <= 2:
        c["expected_negative"] += 1
    else:
        c["absent"] += 1
        out.failures.append({"index": index, "error": sol.reason})
    if sol.certificate is not None and sol.certificate.mode == "fallback_triple":
        c["fallback_triples"] += 1
    if sol.run is not None:
        c["exhausted"] += sol.run.exhausted
        c["exhaustive_fallbacks"] += sol.run.exhaustive_fallbacks
        out.augmentations.update(sol.run.augmentations)
        for tr in sol.run.traces:
            c["traces"] += 1
            report = check_counting(tr)
            if report.contradicts_theorem:
                c["trace_violations"] += 1
                out.failures.append(
                    {"index": index, "trace": tr.to_dict(), "violations": list(report.violations)}
                )
            if keep_traces:
                out.trace_records.append({"index": index, **tr.to_dict()})
    if params.vertex_count <= FACTOR_TABLE_MAX_VERTICES:
        c["oracle_checked"] += 1
        oracle = oracle_enumerate(coloring)
        if (oracle.rainbow_factors > 0) != sol.found:
            c["oracle_disagreements"] += 1
            out.failures.append(
                {"index": index, "error": "oracle disagreement", "rainbow_factors": oracle.rainbow_factors}
            )
    return out


def _run_block(args: tuple) -> FuzzSummary:
    r, n, lo, hi, master_seed, mode, trace, keep_traces = args
    params = Params(r, n)
    out = FuzzSummary(r, n, hi - lo, master_seed, mode)
    for i in range(lo, hi):
        out.merge(run_instance(params, i, master_seed, mode, trace, keep_traces))
    return out


def run_fuzz(
    params: Params,
    iters: int,
    master_seed: int,
    workers: int = 1,
    mode: Mode = "mixed",
    trace: bool = True,
    keep_traces: bool = False,
) -> FuzzSummary:
    """Run ``iters`` seeded instances; counts do not depend on ``workers``."""
    workers = max(1, min(workers, iters or 1))
    bounds = np.linspace(0, iters, workers + 1).astype(int)
    blocks = [
        (params.r, params.n, int(lo), int(hi), master_seed, mode, trace, keep_traces)
        for lo, hi in zip(bounds[:-1], bounds[1:])
    ]
    summary = FuzzSummary(params.r, params.n, iters, master_seed, mode)
    if workers == 1:
        parts = [_run_block(b) for b in blocks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_block, blocks))
    for part in parts:
        summary.merge(part)
    return summary
