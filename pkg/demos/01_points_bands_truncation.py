"""Points, middle-layer bands, and band truncations.

Points of {0,1}^n are plain ints; coordinate i of [n] is bit i-1, so the
bitstring "011" (coordinate 1 clear, coordinates 2 and 3 set) is the int 6
and indexes position 6 of a truth table.
"""

from setfam.boolfn import (
    Band,
    TruthTable,
    down_band_count,
    enumerate_down_band,
    format_bits,
    mid_band,
    parse_bits,
    truncate_int,
    truncate_uc,
)
from setfam.distance import is_intersecting, is_union_closed

print("== encoding ==")
x = parse_bits("011")
print(f'parse_bits("011") = {x}  (weight {x.bit_count()})')
print(f"format_bits(6, 3)  = {format_bits(6, 3)}")

print("\n== middle-layer bands ==")
for n, eps in [(100, 0.5), (100, 0.1), (20, 0.5), (4, 0.5)]:
    plain = mid_band(n, eps)
    wide = mid_band(n, eps, widened=True)
    print(f"n={n:>3} eps={eps}: band {plain}  widened {wide}")

print("\n== banded downsets ==")
x = parse_bits("1111111111")  # 1^10
band = Band(3, 5)
print(f"|downset of 1^10 in weights [3,5]| = {down_band_count(x, band)}"
      f"  (= C(10,3)+C(10,4)+C(10,5))")
small = sorted(enumerate_down_band(parse_bits("111"), Band(1, 2)))
print("downset of 111 in weights [1,2]:", [format_bits(y, 3) for y in small])

print("\n== truncation keeps the properties ==")
# a monotone function is union-closed; its truncation stays union-closed
mono = TruthTable.from_ones(8, [v for v in range(256) if v.bit_count() >= 5])
t = TruthTable.from_callable(truncate_uc(mono, 0.3))
print("monotone f: union-closed(trunc_uc(f)) =", is_union_closed(t))

# all satisfying rows share coordinate 1 -> intersecting; truncation preserves it
dictator_like = TruthTable.from_ones(8, [v for v in range(256) if v & 1])
t = TruthTable.from_callable(truncate_int(dictator_like, 0.3))
print("dictator-ish f: intersecting(trunc_int(f)) =", is_intersecting(t))

# truncations are lazy wrappers, so they work far beyond table sizes
from setfam.boolfn import const_function

g = truncate_uc(const_function(40, 1), 0.5)
print("const-1 on 40 bits, truncated:",
      f"g(0^40) = {g(0)},  g(1^40) = {g((1 << 40) - 1)} (lazy, nothing materialized)")
