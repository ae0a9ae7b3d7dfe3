"""The four testers in action: completeness, soundness, query accounting."""

from setfam.boolfn import TruthTable, dictator, parse_bits
from setfam.testers import (
    TesterConfig,
    int_pair_tester,
    int_tester,
    tau_success_rate,
    uc_tester,
    uc_triple_tester,
)

bits = parse_bits

print("== one-sidedness: property-holding functions are never rejected ==")
f = dictator(12, 1)  # monotone, hence union-closed; also intersecting
for seed in range(3):
    rep = uc_tester(f, TesterConfig(eps=0.25, seed=seed))
    print(f"uc_tester(dictator, seed={seed}): {rep.verdict}  "
          f"queries={rep.queries}  iterations={rep.iterations_run}")

print("\n== far functions get caught with a certificate ==")
far = TruthTable.from_ones(2, [bits("01"), bits("10")])  # dist_UC = 1/4
rep = uc_tester(far, TesterConfig(eps=0.2, seed=0))
print("uc_tester on {01,10}:", rep.verdict, "cert:", rep.certificate)
print("certificate re-verifies:", rep.certificate.holds_for(far))

rep = int_tester(far, TesterConfig(eps=0.2, seed=0))
print("int_tester on {01,10}:", rep.verdict, "cert:", rep.certificate)

print("\n== the 3-query and 2-query variants ==")
print("per-round success floor tau(n=12, eps=0.25):",
      f"{tau_success_rate(12, 0.25):.3e}",
      "-> default rounds would be ceil(100/tau); override for demos")
rep = uc_triple_tester(far, TesterConfig(eps=0.2, seed=1, max_iterations=2000))
print(f"uc_triple_tester on {{01,10}}: {rep.verdict} after {rep.iterations_run} "
      f"rounds, {rep.queries} queries (3 per round)")
rep = int_pair_tester(TruthTable(2, 0b1111), TesterConfig(eps=0.2, seed=1,
                                                          max_iterations=2000))
print(f"int_pair_tester on const-1: {rep.verdict} after {rep.iterations_run} "
      f"rounds, {rep.queries} queries (2 per round)")

print("\n== reports are deterministic given (f, config) ==")
a = uc_tester(far, TesterConfig(eps=0.2, seed=7)).to_json()
b = uc_tester(far, TesterConfig(eps=0.2, seed=7)).to_json()
print("identical JSON:", a == b)
print(a)
