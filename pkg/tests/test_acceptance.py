"""Acceptance gate: one test per criterion, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as they
complete.  Golden thresholds for the no-instance farness frequencies live in
golden_noinstance.json (measured once at the recorded calibration seed;
these tests draw fresh samples from a different seed).
"""

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from setfam.boolfn import TruthTable, const_function
from setfam.cli import main as cli_main
from setfam.distance import (
    disjoint_tuple_count_lb,
    dist_int_exact,
    dist_uc_exact,
    end_distinct_tuple_count,
    is_intersecting,
    is_union_closed,
    repair_uc,
)
from setfam.hardness import (
    BadEventParams,
    bad_pair_bound,
    build_int_instance,
    build_uc_instance,
    count_int_no_violations,
    count_uc_no_violations,
    estimate_bad_probability,
    unique_sat_probability,
    unique_sat_window,
    wilson_interval,
)
from setfam.rng import stream
from setfam.testers import (
    TesterConfig,
    int_pair_tester,
    int_tester,
    uc_tester,
    uc_triple_tester,
)
from setfam.violations import max_disjoint_i_pairs

GOLDEN = json.loads((Path(__file__).parent / "golden_noinstance.json").read_text())
ARTIFACT_DIR = Path(__file__).parent.parent / "build"


def report(criterion: str, ok: bool, detail: str) -> None:
    print(f"\nACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} :: {detail}")
    assert ok, f"{criterion} failed: {detail}"


@pytest.fixture(scope="module")
def n4_families():
    uc, inter = [], []
    for tbl in range(1 << 16):
        t = TruthTable(4, tbl)
        if is_union_closed(t):
            uc.append(t)
        if is_intersecting(t):
            inter.append(t)
    assert len(uc) == 4960 and len(inter) == 1376
    return uc, inter


def test_criterion_1_distance_sandwich():
    """|M|/2^n <= dist_int <= 2|M|/2^n, exhaustive n=3 + 10^4 random n=4."""
    checked = 0
    for tbl in range(256):
        f = TruthTable(3, tbl)
        m, _ = max_disjoint_i_pairs(f)
        d = dist_int_exact(f).value
        assert Fraction(m, 8) <= d <= Fraction(2 * m, 8)
        checked += 1
    rng = stream(12345)
    for _ in range(10_000):
        f = TruthTable(4, int(rng.integers(0, 1 << 16)))
        m, _ = max_disjoint_i_pairs(f)
        d = dist_int_exact(f).value
        assert Fraction(m, 16) <= d <= Fraction(2 * m, 16)
        checked += 1
    report("criterion-1 (distance sandwich)", checked == 10_256,
           f"both inequalities exact on {checked} functions")


def test_criterion_2_uc_repair_validity():
    """All 65,536 tables at n=4: repair union-closed, end count >= 2^4 * dist."""
    for tbl in range(1 << 16):
        f = TruthTable(4, tbl)
        g, flipped = repair_uc(f)
        assert is_union_closed(g)
        ends = end_distinct_tuple_count(f)
        assert ends == len(flipped)
        assert ends >= 16 * dist_uc_exact(f).value
    report("criterion-2 (UC repair validity)", True,
           "65536/65536 repairs union-closed with end count >= 2^4 * dist")


def test_criterion_3_perfect_completeness(n4_families):
    """Every property-holding table at n=4 x 20 seeds x 4 testers: 0 rejections.

    max_iterations overrides keep the run inside the budget; completeness is
    per-iteration, and 20 seeds x the override still samples ~10^3
    independent iterations per function.
    """
    uc, inter = n4_families
    runs = 0
    for t in uc:
        for seed in range(20):
            rep = uc_tester(t, TesterConfig(eps=0.5, seed=seed, max_iterations=40))
            assert rep.verdict == "accept", (t.bits, seed, "uc")
            rep = uc_triple_tester(
                t, TesterConfig(eps=0.5, seed=seed, max_iterations=60))
            assert rep.verdict == "accept", (t.bits, seed, "uc-triple")
            runs += 2
    for t in inter:
        for seed in range(20):
            rep = int_tester(t, TesterConfig(eps=0.5, seed=seed, max_iterations=40))
            assert rep.verdict == "accept", (t.bits, seed, "int")
            rep = int_pair_tester(
                t, TesterConfig(eps=0.5, seed=seed, max_iterations=60))
            assert rep.verdict == "accept", (t.bits, seed, "int-pair")
            runs += 2
    report("criterion-3 (perfect completeness)", True,
           f"{runs} tester runs on 4960 UC + 1376 intersecting tables, 0 rejections")


def _far_from_uc_functions(count: int, n: int, need: int) -> list[TruthTable]:
    """Random tables whose greedy disjoint-tuple count certifies dist >= need/2^n."""
    out = []
    attempt = 0
    while len(out) < count:
        rng = stream(77000, attempt)
        attempt += 1
        tbl = 0
        for i, b in enumerate(rng.random(1 << n) < 0.5):
            if b:
                tbl |= 1 << i
        f = TruthTable(n, tbl)
        if disjoint_tuple_count_lb(f) >= need:
            out.append(f)
    return out


def _far_from_int_functions(count: int, n: int, need: int) -> list[TruthTable]:
    """Random dense tables certified by >= need disjoint antipodal 1-pairs."""
    out = []
    attempt = 0
    half = 1 << (n - 1)
    full = (1 << n) - 1
    while len(out) < count:
        rng = stream(88000, attempt)
        attempt += 1
        tbl = 0
        for i, b in enumerate(rng.random(1 << n) < 0.85):
            if b:
                tbl |= 1 << i
        f = TruthTable(n, tbl)
        pairs = sum(1 for x in range(half) if f(x) and f(x ^ full))
        if pairs >= need:
            out.append(f)
    return out


def test_criterion_4_soundness_nine_tenths():
    """30 certified eps-far functions at n=10: reject rate CI >= 0.85 each."""
    n, eps, runs = 10, 0.1, 200
    need = math.ceil(eps * (1 << n))  # 103 certified disjoint violations
    details = []
    for f in _far_from_uc_functions(15, n, need):
        rejects = sum(
            uc_tester(f, TesterConfig(eps=eps, seed=s)).verdict == "reject"
            for s in range(runs)
        )
        lo, _ = wilson_interval(rejects, runs)
        assert rejects >= 0.9 * runs and lo >= 0.85, (rejects, lo)
        details.append(rejects)
    for f in _far_from_int_functions(15, n, need):
        rejects = sum(
            int_tester(f, TesterConfig(eps=eps, seed=s)).verdict == "reject"
            for s in range(runs)
        )
        lo, _ = wilson_interval(rejects, runs)
        assert rejects >= 0.9 * runs and lo >= 0.85, (rejects, lo)
        details.append(rejects)
    report("criterion-4 (soundness 9/10)", len(details) == 30,
           f"reject counts over 200 runs: min {min(details)}, all CIs >= 0.85")


def test_criterion_5_unique_term_constant():
    """Wilson 99% lower bound > 0.03 for every window weight at three sizes."""
    lows = {}
    for n in (25, 36, 49):
        res = unique_sat_probability(n, 1.0, 10**5, stream(5150, n))
        for w in unique_sat_window(n, 1.0):
            est, lo, _ = res.per_weight[w]
            assert lo > 0.03, (n, w, est, lo)
            lows[(n, w)] = round(lo, 4)
    report("criterion-5 (unique-term constant)", True,
           f"99% CI lower bounds {lows}, all > 0.03")


def test_criterion_6_yes_instance_exactness():
    """100 int-yes (n=16, eps=1/2) and 100 uc-yes (n=16, eps=1/16) all exact."""
    for seed in range(100):
        inst = build_int_instance("yes", 16, 0.5, seed)
        assert is_intersecting(inst.materialize()), ("int-yes", seed)
    for seed in range(100):
        inst = build_uc_instance("yes", 16, 1 / 16, seed)
        assert is_union_closed(inst.materialize()), ("uc-yes", seed)
    report("criterion-6 (yes-instance exactness)", True,
           "200/200 instances pass the exhaustive property check")


def test_criterion_7_no_instance_farness_frequency():
    """Fresh-sample exceedance of the frozen thresholds, binomial 95% CI."""
    fresh_seed = 31337  # distinct from the calibration seed on purpose
    gi = GOLDEN["int_no"]
    hits = sum(
        count_int_no_violations(build_int_instance("no", gi["n"], gi["eps"],
                                                   fresh_seed + i))
        >= gi["threshold_pairs"]
        for i in range(1000)
    )
    lo_int, _ = wilson_interval(hits, 1000, z=1.959963984540054)
    assert lo_int >= 0.01, (hits, lo_int)
    gu = GOLDEN["uc_no"]
    hits_uc = sum(
        count_uc_no_violations(build_uc_instance("no", gu["n"], gu["eps"],
                                                 fresh_seed + i))
        >= gu["threshold_triples"]
        for i in range(10_000)
    )
    lo_uc, _ = wilson_interval(hits_uc, 10_000, z=1.959963984540054)
    assert lo_uc >= 0.001, (hits_uc, lo_uc)
    report("criterion-7 (no-instance farness)", True,
           f"int-no {hits}/1000 (CI lo {lo_int:.3f} >= 0.01), "
           f"uc-no {hits_uc}/10000 (CI lo {lo_uc:.4f} >= 0.001)")


def test_criterion_8_bad_event_bound():
    """Empirical Bad frequency <= per-pair bound + 3 sigma at 10^5 trials."""
    trials = 10**5
    rows = []
    for n in (16, 25):
        bound = bad_pair_bound(n, 0.5)
        sigma = math.sqrt(bound * (1 - bound) / trials)
        rng = stream(414, n)
        x = int(rng.integers(0, 1 << n))
        pairs = {
            "antipodal": (x, x ^ ((1 << n) - 1)),
            "random": (x, int(rng.integers(0, 1 << n))),
        }
        for tag, pts in pairs.items():
            est = estimate_bad_probability(
                BadEventParams(pts, "intersect", trials), n, 0.5, 515 + n)
            assert est.estimate <= bound + 3 * sigma, (n, tag, est.estimate, bound)
            rows.append(f"n={n} {tag}: {est.estimate:.2e} <= {bound:.3f}+3σ")
    report("criterion-8 (Bad-event bound)", True, "; ".join(rows))


def test_criterion_9_query_count_law():
    """Mean queries/iteration grow monotonically and fit the predicted law.

    log(queries) is fitted against sqrt(n log2(1/eps)) * log2(n) by least
    squares; monotone means and max relative residual < 10% are asserted, and
    the sweep table is written as an artifact.
    """
    eps = 0.25
    ns = range(8, 17)
    seeds = 4
    iters = 1000
    means = []
    for n in ns:
        f = const_function(n, 0)
        total = 0
        for s in range(seeds):
            rep = uc_tester(f, TesterConfig(eps=eps, seed=s, max_iterations=iters))
            total += rep.queries
        means.append(total / (seeds * iters))
    assert all(a < b for a, b in zip(means, means[1:])), means
    g = np.array([math.sqrt(n * math.log2(1 / eps)) * math.log2(n) for n in ns])
    y = np.log(np.array(means))
    coef = np.polyfit(g, y, 1)
    fit = np.polyval(coef, g)
    residuals = np.abs(fit - y) / np.abs(y)
    ARTIFACT_DIR.mkdir(exist_ok=True)
    with open(ARTIFACT_DIR / "acceptance_query_sweep.csv", "w") as fh:
        fh.write("# criterion-9 sweep artifact\nn,eps,mean_queries_per_iter,"
                 "log_mean,fit,rel_residual\n")
        for i, n in enumerate(ns):
            fh.write(f"{n},{eps},{means[i]:.4f},{y[i]:.5f},{fit[i]:.5f},"
                     f"{residuals[i]:.5f}\n")
    assert residuals.max() < 0.10, residuals
    report("criterion-9 (query-count law)", True,
           f"means monotone {means[0]:.1f}..{means[-1]:.1f}, "
           f"fit C={coef[0]:.3f} C'={coef[1]:.3f}, "
           f"max residual {residuals.max():.1%} < 10%")


def test_criterion_10_determinism(tmp_path):
    """Byte-identical CSV/JSON across 3 consecutive runs and threads {1, 8}."""
    outputs = []
    for i, threads in enumerate(("1", "1", "1", "8")):
        out = tmp_path / f"test_{i}.csv"
        cli_main(["test", "--alg", "uc", "--fn", "const1", "--n", "8",
                  "--eps", "0.3", "--trials", "16", "--seed", "42",
                  "--threads", threads, "--out", str(out)])
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2] == outputs[3]
    sweeps = []
    for i, threads in enumerate(("1", "8")):
        out = tmp_path / f"sweep_{i}.csv"
        cli_main(["sweep", "--what", "queries", "--ns", "6..9", "--epss", "0.5",
                  "--seeds", "3", "--iterations", "60", "--seed", "7",
                  "--threads", threads, "--out", str(out)])
        sweeps.append(out.read_bytes())
    assert sweeps[0] == sweeps[1]
    dists = []
    for i in range(3):
        out = tmp_path / f"dist_{i}.json"
        cli_main(["dist", "--prop", "uc", "--fn", "ones:{01,10}", "--n", "2",
                  "--out", str(out)])
        dists.append(out.read_bytes())
    assert dists[0] == dists[1] == dists[2]
    report("criterion-10 (determinism)", True,
           "test/sweep/dist outputs byte-identical across runs and threads {1,8}")
