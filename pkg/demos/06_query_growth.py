"""Measure the enumeration tester's query growth and fit the predicted law.

Mean queries per iteration is 1 + |banded downset of the sampled point|;
log of that is expected to track sqrt(n log2(1/eps)) * log2(n) up to affine
calibration.  Equivalent to `setfam sweep --what queries`.
"""

import math

import numpy as np

from setfam.boolfn import const_function
from setfam.testers import TesterConfig, uc_tester

EPS = 0.25
NS = range(8, 17)
SEEDS = 3
ITERS = 600

means = []
for n in NS:
    f = const_function(n, 0)  # query counts do not depend on the oracle
    total = 0
    for seed in range(SEEDS):
        rep = uc_tester(f, TesterConfig(eps=EPS, seed=seed, max_iterations=ITERS))
        total += rep.queries
    means.append(total / (SEEDS * ITERS))

g = np.array([math.sqrt(n * math.log2(1 / EPS)) * math.log2(n) for n in NS])
y = np.log(np.array(means))
slope, intercept = np.polyfit(g, y, 1)
fit = slope * g + intercept

print(f"eps = {EPS}; {SEEDS} seeds x {ITERS} iterations per n")
print(f"{'n':>3} {'mean q/iter':>12} {'log':>8} {'fit':>8} {'resid':>7}")
for i, n in enumerate(NS):
    resid = (fit[i] - y[i]) / y[i]
    print(f"{n:>3} {means[i]:>12.2f} {y[i]:>8.3f} {fit[i]:>8.3f} {resid:>6.1%}")
print(f"\nfitted: log(queries) ~ {slope:.3f} * sqrt(n log2(1/eps)) log2(n) "
      f"{intercept:+.3f}")
