"""Carryless multipliers: schoolbook (CM), Karatsuba (KM), overlap-free
Karatsuba (OKA) and the hybrid scheme that stops Karatsuba at a cutover width.

All four algorithms run on bit-sliced rows (``field_core.to_slices``): a width-n
operand is a list of n ints and every AND/XOR acts on all lanes at once.  A
single multiplication is just a batch of one lane, so :func:`mul_km` and
:func:`multiply_many` share one implementation.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import InvalidThreshold, OperandTooLarge
from .field_core import BitPoly, PolyLike, _as_int, from_slices, to_slices

KINDS = ("cm", "km", "oka", "hybrid")

# Stage-I cutover widths per NIST curve size.
DEFAULT_THRESHOLDS = {163: 41, 233: 59, 283: 71, 571: 71}


@dataclass(frozen=True)
class MulStrategy:
    kind: str
    threshold: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown strategy {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.kind == "hybrid":
            if self.threshold is None:
                raise InvalidThreshold("hybrid strategy needs a threshold")
            if self.threshold < 2:
                raise InvalidThreshold(f"threshold must be >= 2, got {self.threshold}")
        elif self.threshold is not None:
            raise ValueError(f"{self.kind} takes no threshold")

    @classmethod
    def parse(cls, text: str, m: int | None = None) -> "MulStrategy":
        """Parse ``cm``, ``km``, ``oka``, ``hybrid`` or ``hybrid:<threshold>``.

        A bare ``hybrid`` takes the preset threshold for width ``m``.
        """
        kind, _, thr = text.strip().lower().partition(":")
        if kind != "hybrid":
            if thr:
                raise ValueError(f"{kind} takes no threshold")
            return cls(kind)
        if thr:
            try:
                return cls("hybrid", int(thr))
            except ValueError as exc:
                if isinstance(exc, InvalidThreshold):
                    raise
                raise InvalidThreshold(f"bad threshold {thr!r}") from None
        return cls.hybrid_for(m)

    @classmethod
    def hybrid_for(cls, m: int | None) -> "MulStrategy":
        if m not in DEFAULT_THRESHOLDS:
            raise InvalidThreshold(
                f"no preset threshold for width {m}; use hybrid:<threshold>"
            )
        return cls("hybrid", DEFAULT_THRESHOLDS[m])

    def __str__(self) -> str:
        return f"hybrid:{self.threshold}" if self.kind == "hybrid" else self.kind


@dataclass
class MulStats:
    """Recursion counters filled in by the multipliers when passed in."""

    leaf_calls: int = 0
    km_levels: int = 0
    leaf_widths: Counter = field(default_factory=Counter)

    def leaf(self, width: int, depth: int) -> None:
        self.leaf_calls += 1
        self.leaf_widths[width] += 1
        self.km_levels = max(self.km_levels, depth)

    @property
    def leaf_and_gates(self) -> int:
        return sum(w * w * k for w, k in self.leaf_widths.items())


# -- row kernels --------------------------------------------------------------


def _cm_rows(a: list[int], b: list[int]) -> list[int]:
    nb = len(b)
    c = [0] * (len(a) + nb - 1)
    for i, ai in enumerate(a):
        if ai:
            c[i : i + nb] = [x ^ (ai & y) for x, y in zip(c[i : i + nb], b)]
    return c


def _karatsuba_rows(a, b, base, stats, depth):
    n = len(a)
    if n <= base:
        if stats is not None:
            stats.leaf(n, depth)
        return _cm_rows(a, b)
    h = (n + 1) // 2
    al, ah = a[:h], a[h:]
    bl, bh = b[:h], b[h:]
    m0 = _karatsuba_rows(al, bl, base, stats, depth + 1)
    m1 = _karatsuba_rows(ah, bh, base, stats, depth + 1)
    sa = al[:]
    sb = bl[:]
    for i, v in enumerate(ah):
        sa[i] ^= v
    for i, v in enumerate(bh):
        sb[i] ^= v
    m2 = _karatsuba_rows(sa, sb, base, stats, depth + 1)
    for i, v in enumerate(m0):
        m2[i] ^= v
    for i, v in enumerate(m1):
        m2[i] ^= v
    c = m0 + [0] * (2 * n - 1 - len(m0))
    for i, v in enumerate(m2):
        c[h + i] ^= v
    for i, v in enumerate(m1):
        c[2 * h + i] ^= v
    return c


def _oka_rows(a, b, stats, depth):
    n = len(a)
    if n <= 2:
        if stats is not None:
            stats.leaf(n, depth)
        return _cm_rows(a, b)
    ae, ao = a[0::2], a[1::2]
    be, bo = b[0::2], b[1::2]
    e = _oka_rows(ae, be, stats, depth + 1)
    o = _oka_rows(ao, bo, stats, depth + 1)
    mid = _oka_rows(
        [x ^ y for x, y in zip(ae, ao)], [x ^ y for x, y in zip(be, bo)], stats, depth + 1
    )
    c = [0] * (2 * n - 1)
    for j, (ev, ov, mv) in enumerate(zip(e, o, mid)):
        c[2 * j] ^= ev
        c[2 * j + 1] = mv ^ ev ^ ov
        c[2 * j + 2] ^= ov
    return c


def _next_pow2(n: int) -> int:
    return 1 << (n - 1).bit_length()


def _multiply_rows(a_rows, b_rows, n, strategy: MulStrategy, stats):
    kind = strategy.kind
    if kind == "cm":
        if stats is not None:
            stats.leaf(n, 0)
        return _cm_rows(a_rows, b_rows)
    if kind == "km":
        return _karatsuba_rows(a_rows, b_rows, 2, stats, 0)
    if kind == "hybrid":
        return _karatsuba_rows(a_rows, b_rows, strategy.threshold, stats, 0)
    width = _next_pow2(n)
    pad = [0] * (width - n)
    return _oka_rows(a_rows + pad, b_rows + pad, stats, 0)[: 2 * n - 1]


# -- public API ---------------------------------------------------------------


def _check(v: int, n: int) -> int:
    if n < 1:
        raise ValueError(f"width must be positive, got {n}")
    if v >> n:
        raise OperandTooLarge(f"operand of degree {v.bit_length() - 1} does not fit width {n}")
    return v


def _rows_of(v: int, n: int) -> list[int]:
    return [(v >> i) & 1 for i in range(n)]


def _int_of(rows: Sequence[int]) -> int:
    out = 0
    for i, r in enumerate(rows):
        if r:
            out |= 1 << i
    return out


def multiply(
    a: PolyLike, b: PolyLike, n: int, strategy: MulStrategy, stats: MulStats | None = None
) -> BitPoly:
    """Carryless product of two width-``n`` operands (``2n - 1`` output bits)."""
    av = _check(_as_int(a), n)
    bv = _check(_as_int(b), n)
    rows = _multiply_rows(_rows_of(av, n), _rows_of(bv, n), n, strategy, stats)
    return BitPoly(_int_of(rows))


def multiply_many(
    a_values: Sequence[PolyLike],
    b_values: Sequence[PolyLike],
    n: int,
    strategy: MulStrategy,
    stats: MulStats | None = None,
) -> list[int]:
    """Multiply pairwise, all lanes in one bit-sliced pass.

    ``stats`` counts one recursion, not one per lane.
    """
    if len(a_values) != len(b_values):
        raise ValueError("operand batches differ in length")
    if n < 1:
        raise ValueError(f"width must be positive, got {n}")
    if not a_values:
        return []
    a_rows = to_slices(a_values, n)
    b_rows = to_slices(b_values, n)
    rows = _multiply_rows(a_rows, b_rows, n, strategy, stats)
    return from_slices(rows, len(a_values))


def mul_cm(a: PolyLike, b: PolyLike, n: int) -> BitPoly:
    return multiply(a, b, n, MulStrategy("cm"))


def mul_km(a: PolyLike, b: PolyLike, n: int, stats: MulStats | None = None) -> BitPoly:
    return multiply(a, b, n, MulStrategy("km"), stats)


def mul_oka(a: PolyLike, b: PolyLike, n: int, stats: MulStats | None = None) -> BitPoly:
    return multiply(a, b, n, MulStrategy("oka"), stats)


def mul_hybrid(
    a: PolyLike, b: PolyLike, n: int, threshold: int, stats: MulStats | None = None
) -> BitPoly:
    return multiply(a, b, n, MulStrategy("hybrid", threshold), stats)


# -- splitting plans ----------------------------------------------------------


class Split(NamedTuple):
    level: int
    width: int
    left: int
    right: int


@dataclass(frozen=True)
class SplitPlan:
    """Distinct-width halving tree from ``root`` down to CM leaves.

    ``left`` is the low half, ceil(width/2); ``right`` the high half.
    """

    root: int
    threshold: int
    splits: tuple[Split, ...]
    leaves: tuple[int, ...]

    @property
    def depth(self) -> int:
        return 1 + max((s.level for s in self.splits), default=-1)

    def level(self, k: int) -> list[Split]:
        return [s for s in self.splits if s.level == k]

    def widths_at(self, k: int) -> list[int]:
        """Every distinct node width at depth ``k`` (splits and leaves)."""
        if k == 0:
            return [self.root]
        return sorted({w for s in self.level(k - 1) for w in (s.left, s.right)}, reverse=True)

    def chain(self, branch: str = "ceil") -> list[int]:
        """Widths met by always following the ceil (or floor) child."""
        if branch not in ("ceil", "floor"):
            raise ValueError("branch must be 'ceil' or 'floor'")
        out = [self.root]
        w = self.root
        while w > self.threshold:
            w = (w + 1) // 2 if branch == "ceil" else w // 2
            out.append(w)
        return out


def split_sequence(m: int, threshold: int) -> SplitPlan:
    if threshold < 2:
        raise InvalidThreshold(f"threshold must be >= 2, got {threshold}")
    if m < 1:
        raise ValueError(f"width must be positive, got {m}")
    splits: list[Split] = []
    leaves: set[int] = set()
    frontier = [m]
    level = 0
    while frontier:
        nxt: set[int] = set()
        for w in sorted(set(frontier), reverse=True):
            if w <= threshold:
                leaves.add(w)
                continue
            left, right = (w + 1) // 2, w // 2
            splits.append(Split(level, w, left, right))
            nxt.update((left, right))
        frontier = sorted(nxt, reverse=True)
        level += 1
    return SplitPlan(m, threshold, tuple(splits), tuple(sorted(leaves, reverse=True)))
