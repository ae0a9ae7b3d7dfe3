"""Violation certificates: pairs, tuples, triples, and their combinatorics."""

import json

from setfam.boolfn import Band, TruthTable, parse_bits
from setfam.violations import (
    augment_tuple,
    is_i_violation,
    level_matching,
    locality,
    max_disjoint_i_pairs,
    min_violation_locality,
    witness_check_int,
    witness_check_uc,
)

bits = parse_bits

print("== union-closedness witnesses ==")
f = TruthTable.from_ones(2, [bits("01"), bits("10")])
t = witness_check_uc(f, bits("11"), Band(1, 2))
print("f with ones {01,10}: tuple ending at 11 ->", t)
print("as JSON:", json.dumps(t.to_json_obj()))

print("\n== tuple -> triple augmentation ==")
g = TruthTable.from_ones(3, [bits("001"), bits("010"), bits("100"), bits("011")])
tup = witness_check_uc(g, bits("111"), Band(1, 3))
prefixes, triple = augment_tuple(g, tup)
print("tuple members:", tup.members, "end:", tup.end)
print("prefix unions:", prefixes)
print("violating triple:", triple, " locality:", locality(triple))

print("\n== intersectingness witnesses ==")
h = TruthTable.from_ones(4, [bits("1100"), bits("0011")])
pair = witness_check_int(h, bits("1100"), Band(2, 2))
print("f with ones {1100,0011}: pair ->", pair)
print("is_i_violation re-check:", is_i_violation(h, pair.x, pair.y))

print("\n== maximum disjoint violating pairs ==")
const1 = TruthTable(2, 0b1111)
size, pairs = max_disjoint_i_pairs(const1)
print(f"const-1 at n=2: {size} disjoint pairs:", pairs)
print("note the self-loop at the empty set (no intersecting family contains it)")

print("\n== complementary-level matchings ==")
m = level_matching(6, 2)
print(f"levels 2 and 4 of the 6-cube: perfect matching of size {len(m)}; first pairs:",
      m[:4])

print("\n== locality floor of a function ==")
r = bits("0110")
two_point = TruthTable.from_ones(4, [r, r ^ 0b1111])
print("ones = {r, complement(r)} at n=4: min violating-triple locality =",
      min_violation_locality(two_point))
print("(the only violation is the antipodal pair unioning to 1^4)")
