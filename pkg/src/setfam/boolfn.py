"""Boolean functions on the hypercube: points, oracles, bands, truncations.

Points of {0,1}^n are plain Python ints: coordinate i of [n] is bit i-1, so
the integer value of a point doubles as its index into a truth table
(little-endian).  The bitstring "011" (coordinate 1 = 0, coordinates 2,3 = 1)
is the int 0b110 = 6.  Hamming weight is ``x.bit_count()``.  Dense points are
restricted to n <= 63.

A function oracle is anything with an ``arity`` attribute that maps a point
int to 0/1 when called.  ``BooleanFunction`` wraps a closure lazily (nothing
is materialized, so composed functions work at any n); ``TruthTable`` is the
dense materialization for n <= 24 and backs the exact oracles.
"""

from __future__ import annotations

import json
import math
import threading
from bisect import bisect_right
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Callable, Iterable, Iterator, NamedTuple

import numpy as np

__all__ = [
    "MAX_DENSE_ARITY",
    "MAX_TABLE_ARITY",
    "DEFAULT_ENUMERATION_CAP",
    "EnumerationCapError",
    "ResourceCapError",
    "weight",
    "popcount_array",
    "parse_bits",
    "format_bits",
    "Band",
    "mid_band",
    "BooleanFunction",
    "TruthTable",
    "QueryCounter",
    "truncate_uc",
    "truncate_int",
    "down_band_count",
    "enumerate_down_band",
    "band_weight_counts",
    "sample_band_weights",
    "sample_band_uniform",
    "sample_down_band_uniform",
    "const_function",
    "dictator",
    "majority",
]

MAX_DENSE_ARITY = 63
MAX_TABLE_ARITY = 24

#: Refuse banded-downset enumerations predicted to exceed this many points.
DEFAULT_ENUMERATION_CAP = 2**28


class ResourceCapError(RuntimeError):
    """A computation would exceed a configured resource cap."""


class EnumerationCapError(ResourceCapError):
    """Predicted enumeration size exceeds the cap (reported, never truncated)."""

    def __init__(self, predicted: int, cap: int):
        super().__init__(f"banded downset has {predicted} points, exceeding cap {cap}")
        self.predicted = predicted
        self.cap = cap


def weight(x: int) -> int:
    """Hamming weight |x|."""
    return x.bit_count()


_POP16: np.ndarray | None = None


def popcount_array(a: np.ndarray) -> np.ndarray:
    """Elementwise popcount of an unsigned integer array (up to 64-bit)."""
    global _POP16
    if _POP16 is None:
        v = np.arange(1 << 16, dtype=np.uint16)
        _POP16 = (
            np.unpackbits(v.view(np.uint8).reshape(-1, 2), axis=1, bitorder="little")
            .sum(axis=1)
            .astype(np.uint8)
        )
    a = np.asarray(a, dtype=np.uint64)
    out = np.zeros(a.shape, dtype=np.int64)
    for shift in (0, 16, 32, 48):
        out += _POP16[((a >> np.uint64(shift)) & np.uint64(0xFFFF)).astype(np.uint16)]
    return out


def parse_bits(s: str) -> int:
    """Point int for a bitstring whose leftmost char is coordinate 1."""
    x = 0
    for i, ch in enumerate(s):
        if ch == "1":
            x |= 1 << i
        elif ch != "0":
            raise ValueError(f"bad bitstring {s!r}")
    return x


def format_bits(x: int, n: int) -> str:
    """Inverse of :func:`parse_bits`."""
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


class Band(NamedTuple):
    """Inclusive Hamming-weight interval [lo, hi]."""

    lo: int
    hi: int

    def __contains__(self, w: int) -> bool:  # type: ignore[override]
        return self.lo <= w <= self.hi

    def weights(self) -> range:
        return range(self.lo, self.hi + 1)

    def is_empty(self) -> bool:
        return self.lo > self.hi


def _check_eps(eps: float) -> None:
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0,1), got {eps}")


def mid_band(n: int, eps: float, widened: bool = False) -> Band:
    """Middle-layers band [n/2 - T, n/2 + T] rounded inward and clamped to [0, n].

    T = sqrt(2 n ln(4/eps)); the widened variant (used by the 3-query tester)
    replaces ln(4/eps) with ln(4n/eps).  Endpoints are rounded inward
    (ceil/floor) so the band never contains an excluded weight.
    """
    _check_eps(eps)
    if n < 1:
        raise ValueError("n must be >= 1")
    arg = 4.0 * n / eps if widened else 4.0 / eps
    t = math.sqrt(n * 2.0 * math.log(arg))
    lo = max(0, math.ceil(n / 2.0 - t))
    hi = min(n, math.floor(n / 2.0 + t))
    return Band(lo, hi)


class BooleanFunction:
    """Lazy query oracle over {0,1}^arity; eval must be pure."""

    __slots__ = ("arity", "_fn")

    def __init__(self, arity: int, fn: Callable[[int], int]):
        if not 1 <= arity <= MAX_DENSE_ARITY:
            raise ValueError(f"arity must be in [1, {MAX_DENSE_ARITY}]")
        self.arity = arity
        self._fn = fn

    def __call__(self, x: int) -> int:
        return self._fn(x)


def const_function(n: int, value: int) -> BooleanFunction:
    v = 1 if value else 0
    return BooleanFunction(n, lambda x: v)


def dictator(n: int, coord: int = 1) -> BooleanFunction:
    """f(x) = x_coord (coordinates are 1-based)."""
    if not 1 <= coord <= n:
        raise ValueError("coordinate out of range")
    bit = coord - 1
    return BooleanFunction(n, lambda x: (x >> bit) & 1)


def majority(n: int) -> BooleanFunction:
    thr = n / 2.0
    return BooleanFunction(n, lambda x: 1 if x.bit_count() > thr else 0)


class QueryCounter:
    """Counting wrapper around an oracle; the tally is thread-safe.

    Wrapping never changes returned values, and the count goes up by exactly
    one per evaluation.
    """

    __slots__ = ("arity", "_inner", "_count", "_lock")

    def __init__(self, inner):
        self.arity = inner.arity
        self._inner = inner
        self._count = 0
        self._lock = threading.Lock()

    def __call__(self, x: int) -> int:
        with self._lock:
            self._count += 1
        return self._inner(x)

    @property
    def count(self) -> int:
        return self._count


BFTT1_MAGIC = b"BFTT1\n"


class TruthTable:
    """Dense bit-packed function on {0,1}^n, n <= 24.

    The underlying storage is a single Python int whose bit p is the value at
    point p; a numpy 0/1 view is materialized on demand for vector transforms.
    """

    __slots__ = ("arity", "bits", "_array")

    def __init__(self, arity: int, bits: int):
        if not 1 <= arity <= MAX_TABLE_ARITY:
            raise ValueError(f"table arity must be in [1, {MAX_TABLE_ARITY}]")
        size = 1 << arity
        if bits < 0 or bits >> size:
            raise ValueError("bits outside table range")
        self.arity = arity
        self.bits = bits
        self._array: np.ndarray | None = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_ones(cls, arity: int, ones: Iterable[int]) -> "TruthTable":
        bits = 0
        for p in ones:
            if not 0 <= p < (1 << arity):
                raise ValueError(f"point {p} outside arity-{arity} cube")
            bits |= 1 << p
        return cls(arity, bits)

    @classmethod
    def from_callable(cls, f) -> "TruthTable":
        n = f.arity
        if n > MAX_TABLE_ARITY:
            raise ValueError(f"cannot materialize arity {n} > {MAX_TABLE_ARITY}")
        bits = 0
        for p in range(1 << n):
            if f(p):
                bits |= 1 << p
        return cls(n, bits)

    @classmethod
    def from_array(cls, arity: int, values: np.ndarray) -> "TruthTable":
        values = np.asarray(values).astype(np.uint8).ravel()
        if values.size != 1 << arity:
            raise ValueError("array length != 2^arity")
        packed = np.packbits(values, bitorder="little").tobytes()
        return cls(arity, int.from_bytes(packed, "little"))

    # -- oracle interface ----------------------------------------------------

    def __call__(self, x: int) -> int:
        return (self.bits >> x) & 1

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruthTable)
            and self.arity == other.arity
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.arity, self.bits))

    def ones(self) -> list[int]:
        """Indices of 1-inputs, ascending."""
        out = []
        bits = self.bits
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return out

    def count_ones(self) -> int:
        return self.bits.bit_count()

    def as_array(self) -> np.ndarray:
        """0/1 uint8 view of length 2^arity (cached)."""
        if self._array is None:
            size = 1 << self.arity
            raw = self.bits.to_bytes((size + 7) // 8, "little")
            self._array = np.unpackbits(
                np.frombuffer(raw, dtype=np.uint8), bitorder="little"
            )[:size]
        return self._array

    # -- file formats --------------------------------------------------------
    #
    # BFTT1: magic b"BFTT1\n", one decimal arity line, then ceil(2^n/8) raw
    # bytes, point index little-endian within bytes LSB-first (point p lives
    # in byte p//8 at bit p%8).

    def to_bftt1(self) -> bytes:
        size = 1 << self.arity
        return (
            BFTT1_MAGIC
            + f"{self.arity}\n".encode()
            + self.bits.to_bytes((size + 7) // 8, "little")
        )

    @classmethod
    def from_bftt1(cls, data: bytes) -> "TruthTable":
        if not data.startswith(BFTT1_MAGIC):
            raise ValueError("not a BFTT1 file (bad magic)")
        rest = data[len(BFTT1_MAGIC):]
        nl = rest.index(b"\n")
        arity = int(rest[:nl])
        payload = rest[nl + 1:]
        expected = ((1 << arity) + 7) // 8
        if len(payload) != expected:
            raise ValueError(f"BFTT1 payload is {len(payload)} bytes, expected {expected}")
        return cls(arity, int.from_bytes(payload, "little"))

    def save(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_bftt1())

    @classmethod
    def load(cls, path: str | Path) -> "TruthTable":
        return cls.from_bftt1(Path(path).read_bytes())

    def to_json_obj(self) -> dict:
        return {"n": self.arity, "ones": self.ones()}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "TruthTable":
        return cls.from_ones(int(obj["n"]), obj["ones"])

    @classmethod
    def from_json(cls, text: str) -> "TruthTable":
        return cls.from_json_obj(json.loads(text))


@dataclass(frozen=True)
class _Truncation:
    """Lazy band truncation; callable, pointwise idempotent."""

    arity: int
    band: Band
    low_value: int
    high_value: int
    inner: Callable[[int], int]

    def __call__(self, x: int) -> int:
        w = x.bit_count()
        if w < self.band.lo:
            return self.low_value
        if w > self.band.hi:
            return self.high_value
        return self.inner(x)


def truncate_uc(f, eps: float) -> _Truncation:
    """0 strictly below the mid band, 1 strictly above, f inside.

    Preserves union-closedness and at worst halves distance to it.
    """
    band = mid_band(f.arity, eps)
    return _Truncation(f.arity, band, 0, 1, f)


def truncate_int(f, eps: float) -> _Truncation:
    """Both tails forced to 0, f inside the mid band.

    Preserves intersectingness and at worst halves distance to it.
    """
    band = mid_band(f.arity, eps)
    return _Truncation(f.arity, band, 0, 0, f)


# -- banded downsets ---------------------------------------------------------


def down_band_count(x: int, band: Band) -> int:
    """|{y <= x : |y| in band}| in closed form (sum of binomials)."""
    w = x.bit_count()
    return sum(math.comb(w, j) for j in range(band.lo, min(w, band.hi) + 1))


def enumerate_down_band(
    x: int, band: Band, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[int]:
    """Yield every y <= x (coordinatewise) with |y| in the band, each once.

    Order: ascending weight, then ascending combinations of x's set bits.
    Refuses up front (EnumerationCapError) if the closed-form cardinality
    exceeds ``cap``; the caller must see resource failure, not wrong answers.
    """
    predicted = down_band_count(x, band)
    if predicted > cap:
        raise EnumerationCapError(predicted, cap)
    positions = []
    bits = x
    while bits:
        low = bits & -bits
        positions.append(low.bit_length() - 1)
        bits ^= low
    w = len(positions)
    for j in range(band.lo, min(w, band.hi) + 1):
        if j == 0:
            yield 0
            continue
        for combo in combinations(positions, j):
            y = 0
            for p in combo:
                y |= 1 << p
            yield y


# -- band sampling -----------------------------------------------------------


def band_weight_counts(n: int, band: Band) -> list[int]:
    """[C(n, j) for j in band], the weight-class sizes."""
    return [math.comb(n, j) for j in band.weights()]


def _cumulative(counts: list[int]) -> tuple[list[int], int]:
    cum = []
    total = 0
    for c in counts:
        total += c
        cum.append(total)
    return cum, total


def sample_band_weights(n: int, band: Band, rng: np.random.Generator, size: int) -> np.ndarray:
    """Weight classes for ``size`` uniform draws from the banded cube.

    This is the weight layer of :func:`sample_band_uniform`: class j is hit
    with probability C(n,j)/sum over the band, using exact integer arithmetic.
    """
    counts = band_weight_counts(n, band)
    cum, total = _cumulative(counts)
    if total == 0:
        raise ValueError(f"band {band} is empty on {{0..{n}}}")
    us = rng.integers(0, total, size=size, dtype=np.uint64)
    edges = np.array(cum, dtype=np.uint64)
    idx = np.searchsorted(edges, us, side="right")
    return np.asarray(band.lo + idx, dtype=np.int64)


def _subset_of(positions: list[int], j: int, rng: np.random.Generator) -> int:
    """Uniform j-subset of the given bit positions, as a point int."""
    if j == 0:
        return 0
    order = rng.permutation(len(positions))
    y = 0
    for k in order[:j]:
        y |= 1 << positions[k]
    return y


def sample_band_uniform(n: int, band: Band, rng: np.random.Generator) -> int:
    """Exactly uniform point with weight in the band.

    Draws the weight class with probability proportional to C(n,j) (exact
    integer arithmetic), then a uniform j-subset of [n].
    """
    j = int(sample_band_weights(n, band, rng, 1)[0])
    return _subset_of(list(range(n)), j, rng)


def sample_down_band_uniform(x: int, band: Band, rng: np.random.Generator) -> int:
    """Exactly uniform element of the banded downset of x (must be nonempty)."""
    positions = [p for p in range(x.bit_length()) if (x >> p) & 1]
    w = len(positions)
    counts = [math.comb(w, j) for j in range(band.lo, min(w, band.hi) + 1)]
    cum, total = _cumulative(counts)
    if total == 0:
        raise ValueError("banded downset is empty")
    u = int(rng.integers(0, total, dtype=np.uint64))
    j = band.lo + bisect_right(cum, u)
    return _subset_of(positions, j, rng)
