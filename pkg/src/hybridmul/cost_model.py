"""Closed-form gate counts and critical-path delays for the multipliers.

Delays are returned as integer coefficients of the unit AND delay (T_a) and
the unit XOR delay (T_x).  Logarithms of widths that are not powers of two are
rounded up.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import floor

from .errors import InvalidLevelCount, NonPositiveWeight, NotPowerOfTwo

FIELDS = ("scheme", "m", "k", "and_count", "xor_count", "delay_ta", "delay_tx", "adp")


@dataclass(frozen=True)
class GateCost:
    and_count: int
    xor_count: int
    delay_ta: int
    delay_tx: int

    def delay(self, t_a: float = 1.0, t_x: float = 1.0) -> float:
        return self.delay_ta * t_a + self.delay_tx * t_x


def ceil_log2(x: int) -> int:
    if x < 1:
        raise ValueError(f"log2 of non-positive width {x}")
    return (x - 1).bit_length()


def is_pow2(m: int) -> bool:
    return m >= 1 and m & (m - 1) == 0


def next_pow2(m: int) -> int:
    return 1 << (m - 1).bit_length()


def _require_pow2(m: int) -> int:
    if m < 2 or not is_pow2(m):
        raise NotPowerOfTwo(f"width {m} is not a power of two >= 2")
    return m.bit_length() - 1


def cost_cm(m: int) -> GateCost:
    if m < 1:
        raise ValueError(f"width must be positive, got {m}")
    return GateCost(m * m, (m - 1) ** 2, 1, ceil_log2(m))


def cost_km(m: int) -> GateCost:
    levels = _require_pow2(m)
    ands = 3**levels
    # 3*log2(m-1) vanishes at m=2; the 2-bit cell has two XORs on its longest path.
    delay = 2 if m == 2 else 3 * ceil_log2(m - 1)
    return GateCost(ands, 6 * ands - 8 * m + 2, 1, delay)


def cost_oka(m: int) -> GateCost:
    levels = _require_pow2(m)
    ands = 3**levels
    delay = 2 if m == 2 else 2 * ceil_log2(m - 1)
    return GateCost(ands, 6 * ands - 8 * m + 2, 1, delay)


def oka_delay_alt(m: int) -> int:
    """The 2*log2(m) - 1 form of the overlap-free delay, reported next to the table form."""
    return 2 * _require_pow2(m) - 1


def max_levels(m: int) -> int:
    return m.bit_length() - 2


def cost_hybrid(m: int, k: int) -> GateCost:
    if m < 2:
        raise ValueError(f"width must be >= 2, got {m}")
    if not 0 <= k <= max_levels(m):
        raise InvalidLevelCount(f"k={k} outside 0..{max_levels(m)} for m={m}")
    leaf = -(-m // (1 << k))
    ands = 3**k * leaf * leaf
    xors = (
        3**k * (leaf - 1) ** 2
        + 8 * m * (Fraction(3, 2) ** k - 1)
        - 2 * (3**k - 1)
    )
    return GateCost(ands, floor(xors + Fraction(1, 2)), 1, 3 * k + ceil_log2(leaf))


def adp(
    cost: GateCost,
    area_weights: tuple[float, float] = (1.0, 1.0),
    delay_weights: tuple[float, float] = (1.0, 1.0),
) -> float:
    """Gate-weighted area times unit-weighted delay."""
    if min(*area_weights, *delay_weights) <= 0:
        raise NonPositiveWeight("all area and delay weights must be positive")
    w_and, w_xor = area_weights
    d_a, d_x = delay_weights
    area = cost.and_count * w_and + cost.xor_count * w_xor
    return area * (cost.delay_ta * d_a + cost.delay_tx * d_x)


@dataclass(frozen=True)
class CostRow:
    scheme: str
    m: int
    k: int | None
    and_count: int
    xor_count: int
    delay_ta: int
    delay_tx: int
    adp: float
    delay_tx_alt: int | None = None

    @classmethod
    def of(cls, scheme, m, k, cost: GateCost, area_weights=(1.0, 1.0), delay_weights=(1.0, 1.0), **extra):
        return cls(scheme, m, k, *asdict(cost).values(), adp(cost, area_weights, delay_weights), **extra)

    @property
    def leaf(self) -> int | None:
        return None if self.k is None else -(-self.m // (1 << self.k))

    def as_dict(self) -> dict:
        d = asdict(self)
        if d["delay_tx_alt"] is None:
            del d["delay_tx_alt"]
        return d


def estimate(
    scheme: str,
    m: int,
    k: int | None = None,
    area_weights=(1.0, 1.0),
    delay_weights=(1.0, 1.0),
) -> CostRow:
    """Model row for one scheme; ``k`` is only read by the hybrid scheme."""
    if scheme == "cm":
        return CostRow.of("cm", m, None, cost_cm(m), area_weights, delay_weights)
    if scheme == "km":
        return CostRow.of("km", m, None, cost_km(m), area_weights, delay_weights)
    if scheme == "oka":
        return CostRow.of(
            "oka", m, None, cost_oka(m), area_weights, delay_weights, delay_tx_alt=oka_delay_alt(m)
        )
    if scheme == "hybrid":
        k = 1 if k is None else k
        return CostRow.of("hybrid", m, k, cost_hybrid(m, k), area_weights, delay_weights)
    raise ValueError(f"unknown scheme {scheme!r}")


@dataclass(frozen=True)
class ThresholdScan:
    m: int
    best_k: int
    best_leaf: int
    rows: tuple[CostRow, ...]

    def row(self, k: int) -> CostRow:
        return next(r for r in self.rows if r.k == k)


def optimal_threshold(
    m: int,
    area_weights: tuple[float, float] = (1.0, 1.0),
    delay_weights: tuple[float, float] = (1.0, 1.0),
) -> ThresholdScan:
    """Scan every hybrid level count for ``m`` and pick the least model ADP.

    Ties go to the smaller ``k``.
    """
    if m < 4:
        raise ValueError(f"threshold scan needs m >= 4, got {m}")
    rows = tuple(
        CostRow.of("hybrid", m, k, cost_hybrid(m, k), area_weights, delay_weights)
        for k in range(max_levels(m) + 1)
    )
    best = min(rows, key=lambda r: (r.adp, r.k))
    return ThresholdScan(m, best.k, best.leaf, rows)


def rows_to_csv(rows) -> str:
    dicts = [r.as_dict() if isinstance(r, CostRow) else dict(r) for r in rows]
    names = list(FIELDS)
    for d in dicts:
        names += [key for key in d if key not in names]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
    writer.writeheader()
    writer.writerows(dicts)
    return buf.getvalue()


def rows_to_json(rows) -> str:
    return json.dumps([r.as_dict() if isinstance(r, CostRow) else dict(r) for r in rows], indent=2)
