"""The four query-bounded testing algorithms.

All four are one-sided and non-adaptive: a reject always carries a
certificate that re-verifies against the oracle, and the query set of an
iteration never depends on answers.

Randomness contract: a run derives one Philox stream from its seed and
consumes it in a fixed documented order: first one integer batch for the
iteration weight classes, then one float matrix whose row i is iteration i's
subset randomness (the 3-point and 2-point testers additionally consume, in
round order, two scalar weight draws and rows of two further float matrices).
Identical (f, config) therefore reproduces identical reports byte for byte,
and iterations stay independent given the batch, so parallel execution with
first-reject-wins merging agrees with the serial run.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .boolfn import (
    DEFAULT_ENUMERATION_CAP,
    Band,
    QueryCounter,
    ResourceCapError,
    mid_band,
    sample_band_weights,
)
from .rng import stream
from .violations import (
    IViolatingPair,
    TripleCertificate,
    witness_check_int,
    witness_check_uc,
)

__all__ = [
    "TesterConfig",
    "TesterReport",
    "uc_tester",
    "int_tester",
    "uc_triple_tester",
    "int_pair_tester",
    "tau_success_rate",
]

#: Computed round counts above this raise instead of looping for hours;
#: pass max_iterations explicitly to run a slice of that many rounds.
ROUNDS_CAP = 10**7


@dataclass(frozen=True)
class TesterConfig:
    """Error parameter and reproducibility knobs shared by all testers."""

    eps: float
    seed: int = 0
    max_iterations: int | None = None
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    tau_constant: float = 1.0  # Theta-constant in the 3-/2-query round count

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"eps must lie in (0,1), got {self.eps}")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")


@dataclass(frozen=True)
class TesterReport:
    """Outcome of one tester run; reject implies a re-verifiable certificate."""

    verdict: str  # "accept" | "reject"
    certificate: object | None
    queries: int
    iterations_run: int
    seed: int

    def to_json_obj(self) -> dict:
        return {
            "verdict": self.verdict,
            "certificate": None
            if self.certificate is None
            else self.certificate.to_json_obj(),
            "queries": self.queries,
            "iterations_run": self.iterations_run,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))


def _iterations(cfg: TesterConfig) -> int:
    if cfg.max_iterations is not None:
        return cfg.max_iterations
    return math.ceil(100.0 / cfg.eps)


def tau_success_rate(n: int, eps: float, c: float = 1.0) -> float:
    """Per-round success floor tau = eps * 2^(-c*sqrt(n log2(n/eps))*log2 n).

    The constant inside the exponent is only determined up to scaling; c
    calibrates it (default 1), and the CLI reports empirical per-round
    success so users can refit.
    """
    if n == 1:
        return eps
    expo = c * math.sqrt(n * math.log2(n / eps)) * math.log2(n)
    return eps * 2.0**-expo


def _tau_rounds(cfg: TesterConfig, n: int) -> int:
    if cfg.max_iterations is not None:
        return cfg.max_iterations
    rounds = math.ceil(100.0 / tau_success_rate(n, cfg.eps, cfg.tau_constant))
    if rounds > ROUNDS_CAP:
        raise ResourceCapError(
            f"{rounds} rounds exceeds the cap {ROUNDS_CAP}; set max_iterations"
        )
    return rounds


def _batch_band_points(
    n: int, band: Band, count: int, rng: np.random.Generator
) -> list[int]:
    """count uniform banded points; consumes one integer batch + one float matrix."""
    ws = sample_band_weights(n, band, rng, count)
    rows = rng.random((count, n))
    pts = []
    for i in range(count):
        j = int(ws[i])
        x = 0
        if j:
            for k in np.argsort(rows[i], kind="stable")[:j]:
                x |= 1 << int(k)
        pts.append(x)
    return pts


def _downset_weight_table(w: int, band: Band) -> tuple[list[int], int]:
    counts = [math.comb(w, j) for j in range(band.lo, min(w, band.hi) + 1)]
    cum = []
    total = 0
    for c in counts:
        total += c
        cum.append(total)
    return cum, total


def _subset_from_row(positions: list[int], j: int, row: np.ndarray) -> int:
    """Uniform j-subset of positions, randomness taken from a float row."""
    y = 0
    if j:
        for k in np.argsort(row[: len(positions)], kind="stable")[:j]:
            y |= 1 << positions[int(k)]
    return y


def _bit_positions(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def uc_tester(f, cfg: TesterConfig) -> TesterReport:
    """Union-closedness tester: banded point + full banded-downset witness check.

    Accepts every union-closed function with probability 1; rejects functions
    eps-far from union-closed with probability >= 9/10 over ceil(100/eps)
    iterations.  Queries per iteration: 1 + |banded downset of x|.
    """
    band = mid_band(f.arity, cfg.eps)
    m = _iterations(cfg)
    counter = QueryCounter(f)
    rng = stream(cfg.seed)
    xs = _batch_band_points(f.arity, band, m, rng)
    for i, x in enumerate(xs):
        witness = witness_check_uc(counter, x, band, cfg.enumeration_cap)
        if witness is not None:
            return TesterReport("reject", witness, counter.count, i + 1, cfg.seed)
    return TesterReport("accept", None, counter.count, m, cfg.seed)


def int_tester(f, cfg: TesterConfig) -> TesterReport:
    """Intersectingness tester: banded point vs the complement's banded downset.

    Accepts every intersecting function with probability 1; rejects eps-far
    functions with probability >= 9/10.  Queries per iteration:
    1 + |banded downset of the complement of x|.
    """
    band = mid_band(f.arity, cfg.eps)
    m = _iterations(cfg)
    counter = QueryCounter(f)
    rng = stream(cfg.seed)
    xs = _batch_band_points(f.arity, band, m, rng)
    for i, x in enumerate(xs):
        witness = witness_check_int(counter, x, band, cfg.enumeration_cap)
        if witness is not None:
            return TesterReport("reject", witness, counter.count, i + 1, cfg.seed)
    return TesterReport("accept", None, counter.count, m, cfg.seed)


def uc_triple_tester(f, cfg: TesterConfig) -> TesterReport:
    """3-query-per-round union-closedness tester over the widened band.

    Each round queries exactly x, y1, y2 with y1, y2 uniform in x's banded
    downset, and rejects on a violating triple.  Perfect completeness; round
    count ceil(100/tau) unless overridden.
    """
    n = f.arity
    band = mid_band(n, cfg.eps, widened=True)
    rounds = _tau_rounds(cfg, n)
    counter = QueryCounter(f)
    rng = stream(cfg.seed)
    xs = _batch_band_points(n, band, rounds, rng)
    rows1 = rng.random((rounds, n))
    rows2 = rng.random((rounds, n))
    tables: dict[int, tuple[list[int], int]] = {}
    for i, x in enumerate(xs):
        positions = _bit_positions(x)
        w = len(positions)
        if w not in tables:
            tables[w] = _downset_weight_table(w, band)
        cum, total = tables[w]
        j1 = band.lo + bisect_right(cum, int(rng.integers(0, total, dtype=np.uint64)))
        j2 = band.lo + bisect_right(cum, int(rng.integers(0, total, dtype=np.uint64)))
        y1 = _subset_from_row(positions, j1, rows1[i])
        y2 = _subset_from_row(positions, j2, rows2[i])
        fx = counter(x)
        f1 = counter(y1)
        f2 = counter(y2)
        if f1 == 1 and f2 == 1 and y1 | y2 == x and fx == 0:
            cert = TripleCertificate(y1, y2, x)
            return TesterReport("reject", cert, counter.count, i + 1, cfg.seed)
    return TesterReport("accept", None, counter.count, rounds, cfg.seed)


def int_pair_tester(f, cfg: TesterConfig) -> TesterReport:
    """2-query-per-round intersectingness tester.

    Each round queries x and one uniform y from the banded downset of the
    complement of x; rejects on an I-violating pair.  Perfect completeness;
    same round calibration as the 3-query tester.
    """
    n = f.arity
    full = (1 << n) - 1
    band = mid_band(n, cfg.eps)
    rounds = _tau_rounds(cfg, n)
    counter = QueryCounter(f)
    rng = stream(cfg.seed)
    xs = _batch_band_points(n, band, rounds, rng)
    rows = rng.random((rounds, n))
    tables: dict[int, tuple[list[int], int]] = {}
    for i, x in enumerate(xs):
        positions = _bit_positions(x ^ full)
        w = len(positions)
        if w not in tables:
            tables[w] = _downset_weight_table(w, band)
        cum, total = tables[w]
        j = band.lo + bisect_right(cum, int(rng.integers(0, total, dtype=np.uint64)))
        y = _subset_from_row(positions, j, rows[i])
        fx = counter(x)
        fy = counter(y)
        if fx == 1 and fy == 1:
            cert = IViolatingPair(y, x)
            return TesterReport("reject", cert, counter.count, i + 1, cfg.seed)
    return TesterReport("accept", None, counter.count, rounds, cfg.seed)
