"""Exact distance oracles, repairs, and the matching sandwich."""

from fractions import Fraction

from setfam.boolfn import TruthTable, parse_bits
from setfam.distance import (
    disjoint_tuple_count_lb,
    dist_int_exact,
    dist_uc_exact,
    end_distinct_tuple_count,
    repair_uc,
)
from setfam.violations import max_disjoint_i_pairs

bits = parse_bits

print("== exact distances are rationals over 2^n ==")
const1 = TruthTable(2, 0b1111)
res = dist_int_exact(const1)
print("dist to intersecting of const-1 at n=2:", res.to_json_obj())

antichain = TruthTable.from_ones(2, [bits("01"), bits("10")])
print("dist to union-closed of {01,10}:", dist_uc_exact(antichain).to_json_obj())

print("\n== the sandwich |M|/2^n <= dist <= 2|M|/2^n ==")
from setfam.rng import stream

rng = stream(1)
for _ in range(5):
    f = TruthTable(4, int(rng.integers(0, 1 << 16)))
    m, _ = max_disjoint_i_pairs(f)
    d = dist_int_exact(f).value
    lo, hi = Fraction(m, 16), Fraction(2 * m, 16)
    print(f"ones={f.count_ones():>2}  |M|={m}  {lo} <= dist={d} <= {hi}  "
          f"ok={lo <= d <= hi}")

print("\n== closure repair: certifying, not optimal ==")
three = TruthTable.from_ones(3, [bits("100"), bits("010"), bits("001")])
g, flipped = repair_uc(three)
print("three singletons at n=3:")
print("  repair flips", sorted(flipped), f"({len(flipped)} points)")
print("  exact distance is", dist_uc_exact(three).to_json_obj()["value"],
      "-> the repair over-flips but certifies |ends| >= 2^n * dist")
print("  end-distinct violating tuples:", end_distinct_tuple_count(three))
print("  disjoint violating tuples (greedy lower bound):",
      disjoint_tuple_count_lb(three))
