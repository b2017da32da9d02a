"""Acceptance criteria; each test carries a ``criterion`` marker and shows up
as one PASS/FAIL line at the end of the pytest run."""

import json
import os
import time
from itertools import combinations, product

import pytest

from rainbow_factor.core import (
    Params,
    ProperColoring,
    edge_table,
    is_rainbow,
    verify_one_factor,
    verify_proper,
)
from rainbow_factor.fuzz import make_instance, run_fuzz
from rainbow_factor.gen import (
    gen_backtrack_factorization,
    gen_fixture,
    gen_random_greedy,
    gen_round_robin,
    relabel,
)
from rainbow_factor.cli import main
from rainbow_factor import formats
from rainbow_factor.solver import oracle_enumerate, run_graph_solver, solve, solve_k3r

WORKERS = max(1, min(4, os.cpu_count() or 1))
CORPUS = [(2, 3), (2, 4), (2, 5), (2, 6), (2, 8), (3, 3), (4, 3), (3, 4)]
PER_PARAM = 1250  # 8 * 1250 = 10,000
MASTER = 20261019


def _dump_failures(tmp_dir, name, summaries):
    path = tmp_dir / f"{name}.jsonl"
    rows = [f for s in summaries for f in s.failures]
    formats.write_jsonl(rows, path)
    return path


@pytest.fixture(scope="module")
def corpus():
    return {
        p: run_fuzz(Params(*p), PER_PARAM, MASTER, workers=WORKERS, keep_traces=True)
        for p in CORPUS
    }


@pytest.fixture(scope="module")
def graph_runs():
    return {
        n: run_fuzz(Params(2, n), 1000, MASTER + n, workers=WORKERS, keep_traces=True)
        for n in (5, 6, 7, 8)
    }


@pytest.mark.criterion("AC1 every corpus coloring has a verified rainbow 1-factor (>=10,000 instances)")
def test_ac1_existence(corpus):
    total = sum(s.counts["instances"] for s in corpus.values())
    found = sum(s.counts["successes"] for s in corpus.values())
    assert total >= 10_000
    gens = set().union(*(s.generators for s in corpus.values()))
    assert "factorization" in gens and {"least_color", "random_feasible"} & gens
    assert found == total, [s.failures[:3] for s in corpus.values() if s.failures]


@pytest.mark.criterion("AC2 solve agrees with the brute-force oracle for r*n <= 12")
def test_ac2_oracle(corpus):
    checked = 0
    for (r, n), s in corpus.items():
        if r * n <= 12:
            assert s.counts["oracle_checked"] == s.counts["instances"]
            checked += s.counts["oracle_checked"]
        assert s.counts["oracle_disagreements"] == 0, s.failures[:3]
    assert checked == 7 * PER_PARAM
    assert oracle_enumerate(gen_round_robin(3)).total_factors == 15
    assert oracle_enumerate(gen_round_robin(4)).total_factors == 105
    assert oracle_enumerate(gen_backtrack_factorization(Params(3, 3))).total_factors == 280


@pytest.mark.criterion("AC3 augmentation never exhausts for r=2, n in 5..8 (>=4,000 instances)")
def test_ac3_no_exhaustion(graph_runs, tmp_path_factory):
    total = sum(s.counts["instances"] for s in graph_runs.values())
    exhausted = sum(s.counts["exhausted"] for s in graph_runs.values())
    fallbacks = sum(s.counts["exhaustive_fallbacks"] for s in graph_runs.values())
    contradictions = sum(s.counts["contradictions"] for s in graph_runs.values())
    assert total >= 4000
    for s in graph_runs.values():
        assert s.methods == {"augment": s.counts["instances"]}
    if exhausted or fallbacks or contradictions:
        path = _dump_failures(tmp_path_factory.mktemp("ac3"), "exhausted", graph_runs.values())
        pytest.fail(f"exhausted={exhausted} fallbacks={fallbacks}; reports in {path}")


@pytest.mark.criterion("AC4 counting invariants hold on every recorded trace")
def test_ac4_trace_invariants(corpus, graph_runs):
    runs = list(graph_runs.values()) + [s for (r, n), s in corpus.items() if r == 2]
    traces = sum(s.counts["traces"] for s in runs)
    violations = sum(s.counts["trace_violations"] for s in runs)
    assert traces > 1000
    assert violations == 0, [f for s in runs for f in s.failures if "violations" in f][:3]
    for s in runs:
        for rec in s.trace_records:
            n, p, k = rec["n"], rec["p"], rec["k"]
            assert rec["candidate_count"] == 2 * n - 1 - p
            direct = any(path["augmenting"] for path in rec["candidate_paths"])
            if not direct:
                assert rec["symmetric_count"] >= 2 * n - p - k
            for rot in rec["rotations"]:
                assert abs(rot["first_edge_count"] - (2 * n - 1 - p)) <= 1


@pytest.mark.criterion("AC5 K_4 1-factorization has no rainbow 1-factor and solve exits 1")
def test_ac5_k4(tmp_path, capsys):
    coloring = gen_fixture("k4_factorization")
    assert oracle_enumerate(coloring).rainbow_factors == 0
    sol = solve(coloring)
    assert not sol.found and sol.verified_absent
    path = tmp_path / "k4.json"
    formats.write_coloring(coloring, path)
    assert main(["solve", str(path)]) == 1
    assert "verified absent" in capsys.readouterr().out


def _check_certificate(coloring, factor, cert):
    params = coloring.params
    assert verify_one_factor(params, factor.edges)
    assert is_rainbow(factor.edges, coloring)
    if cert.mode == "all_independent_distinct":
        assert coloring.color_count == params.edge_count
        return
    assert cert.m1 != cert.m2 and coloring.color(cert.m1) == coloring.color(cert.m2)
    assert not set(cert.m1) & set(cert.m2)
    if cert.mode == "direct_triple":
        assert cert.m1 in factor.edges or cert.m2 in factor.edges
    else:
        r, x = params.r, list(cert.labels)
        assert x[:r] == list(cert.m1) and x[r : 2 * r] == list(cert.m2)
        expected = {
            tuple(sorted(x[r : 2 * r - 1] + [x[2 * r]])),
            tuple(sorted([x[0]] + x[2 * r + 1 :])),
            tuple(sorted(x[1:r] + [x[2 * r - 1]])),
        }
        assert set(factor.edges) == expected


@pytest.mark.criterion("AC6 K_{3r}^{(r)} construction: >=1000 K_9^(3), >=200 K_12^(4), fallbacks verified")
def test_ac6_k3r():
    modes = {}
    for params, count in ((Params(3, 3), 1000), (Params(4, 3), 200)):
        for i in range(count):
            coloring, _, _ = make_instance(params, i, MASTER)
            factor, cert = solve_k3r(coloring)
            _check_certificate(coloring, factor, cert)
            modes[cert.mode] = modes.get(cert.mode, 0) + 1
        for seed in range(20):
            blocked = relabel(gen_fixture("k3r_blocked", params), seed)
            factor, cert = solve_k3r(blocked)
            _check_certificate(blocked, factor, cert)
            modes[cert.mode] = modes.get(cert.mode, 0) + 1
    assert modes.get("fallback_triple", 0) >= 1
    assert sum(modes.values()) == 1240


@pytest.mark.criterion("AC7 exactly one K_4 coloring with <=3 colors lacks a rainbow 2K_2")
def test_ac7_uniqueness():
    params = Params(2, 2)
    table = [tuple(e) for e in edge_table(params).tolist()]
    perfect = [(a, b) for a, b in combinations(table, 2) if not set(a) & set(b)]
    assert len(perfect) == 3
    patterns = set()
    for colors in product(range(3), repeat=6):
        coloring = ProperColoring(params, colors)
        if not verify_proper(coloring).ok:
            continue
        if any(coloring.color(a) != coloring.color(b) for a, b in perfect):
            continue
        classes = {}
        for e, c in zip(table, colors):
            classes.setdefault(c, set()).add(e)
        patterns.add(frozenset(frozenset(v) for v in classes.values()))
    assert len(patterns) == 1
    fixture = gen_fixture("k4_no_rainbow_2k2").color_classes()
    assert patterns == {frozenset(frozenset(v) for v in fixture.values())}


@pytest.mark.criterion("AC8 K_2000 greedy coloring + graph solver under 60 s, verified")
def test_ac8_performance():
    params = Params(2, 1000)
    t0 = time.perf_counter()
    coloring = gen_random_greedy(params, MASTER)
    run = run_graph_solver(coloring, check=False)
    elapsed = time.perf_counter() - t0
    assert verify_proper(coloring).ok
    assert verify_one_factor(params, run.factor.edges)
    assert is_rainbow(run.factor.edges, coloring)
    print(json.dumps({"seconds": round(elapsed, 2), "method": run.method}))
    assert elapsed < 60
