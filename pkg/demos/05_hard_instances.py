"""Adversarial instances: sampling, structural verification, Bad events."""

from setfam.boolfn import format_bits
from setfam.distance import is_intersecting, is_union_closed
from setfam.hardness import (
    BadEventParams,
    bad_pair_bound,
    build_int_instance,
    build_uc_instance,
    count_int_no_violations,
    count_uc_no_violations,
    estimate_bad_probability,
    sample_talagrand,
    uc_no_r_tally,
    unique_sat_probability,
)
from setfam.rng import stream

print("== Talagrand random DNFs ==")
dnf = sample_talagrand(25, 1.0, stream(1))
print(f"n=25, eps=1: {dnf.num_terms} terms of <= {dnf.term_size} coordinates")
for coords in dnf.term_coordinate_lists():
    print("  term:", coords)
res = unique_sat_probability(25, 1.0, 50_000, stream(2))
w, (est, lo, hi) = next(iter(res.per_weight.items()))
print(f"P[exactly one term satisfied] at weight {w}: {est:.4f} "
      f"(99% CI [{lo:.4f}, {hi:.4f}]), comfortably above the 0.03 floor")

print("\n== intersectingness instances (arity n+2) ==")
yes = build_int_instance("yes", 16, 0.5, 7)
print(f"yes-kind: action coords {yes.action_coords} (a={yes.a})")
print("exhaustive check over 2^18 points: intersecting =",
      is_intersecting(yes.materialize()))
no = build_int_instance("no", 16, 0.5, 7)
pairs = count_int_no_violations(no)
print(f"no-kind: {pairs} constructed disjoint violating pairs "
      f"-> dist >= {pairs}/2^18 = {pairs / 2**18:.5f}")

print("\n== union-closedness instances (arity n) ==")
yes = build_uc_instance("yes", 16, 1 / 16, 3)
print("yes-kind union-closed =", is_union_closed(yes.materialize()))
for seed in range(6):
    no = build_uc_instance("no", 16, 1 / 16, seed)
    triples = count_uc_no_violations(no)
    good, bad = uc_no_r_tally(no)
    print(f"no-kind seed={seed}: {triples:>5} disjoint violating triples "
          f"(good r: {good}, bad r: {bad})"
          + ("  <- this draw is genuinely union-closed" if triples == 0 else ""))

print("\n== the Bad event that separates yes from no ==")
n, eps = 16, 0.5
x = 0b1010101010101010
params = BadEventParams((x, x ^ 0xFFFF), "intersect", 50_000)
est = estimate_bad_probability(params, n, eps, 9)
print(f"antipodal pair {format_bits(x, n)} / complement:")
print(f"  empirical Bad frequency {est.estimate:.2e} "
      f"(99% CI [{est.ci99[0]:.2e}, {est.ci99[1]:.2e}])")
print(f"  per-pair bound 2^(-n^(1/4)/(4 sqrt(eps))) = {bad_pair_bound(n, eps):.4f}")
