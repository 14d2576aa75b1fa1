"""Reduction of double-width products modulo a NIST polynomial, and the fused
modular multiply.

Three reduction paths, all bit-exact with ``field_core.mod_reduce_oracle``:

* :func:`reduce_generic` folds the high half through r(x) until it vanishes;
* :func:`reduce_unified` is the four-term W ^ X ^ Y ^ Z form for trinomials
  x^m + x^n + 1 with n < m/2, where two folds always suffice;
* :func:`reduce_tabled` consumes the high part one machine word at a time
  using precomputed shifts x^k * r(x).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import InputTooWide, UnsupportedPolynomial, UnsupportedWordWidth
from .field_core import BitPoly, FieldParams, PolyLike, _as_int, _set_bits
from .multipliers import DEFAULT_THRESHOLDS as _PRESET_M
from .multipliers import MulStats, MulStrategy, multiply, multiply_many

WORD_WIDTHS = (8, 16, 32, 64)
DEFAULT_WORD_WIDTH = 64
REDUCTIONS = ("generic", "unified", "tabled")


def _check_width(c: int, params: FieldParams) -> int:
    if c.bit_length() > 2 * params.m - 1:
        raise InputTooWide(
            f"degree {c.bit_length() - 1} exceeds 2m-2={2 * params.m - 2} for {params.name}"
        )
    return c


def reduce_generic(c: PolyLike, params: FieldParams) -> BitPoly:
    cv = _check_width(_as_int(c), params)
    m = params.m
    mask = (1 << m) - 1
    rterms = list(_set_bits(params.r.value))
    while cv >> m:
        hi = cv >> m
        cv &= mask
        for t in rterms:
            cv ^= hi << t
    return BitPoly(cv)


def trinomial_middle(params: FieldParams) -> int:
    """Middle exponent n of x^m + x^n + 1, or raise if the unified form does not apply."""
    if not params.is_trinomial:
        raise UnsupportedPolynomial(f"unsupported polynomial: {params.name} is not a trinomial")
    n = max(params.r.exponents())
    if not 0 < n < params.m / 2 or params.r.coeff(0) != 1:
        raise UnsupportedPolynomial(
            f"unsupported polynomial: {params.name} needs x^m + x^n + 1 with n < m/2"
        )
    return n


def unified_terms(c: PolyLike, params: FieldParams) -> tuple[int, int, int, int]:
    """The four addends (W, X, Y, Z) whose XOR is ``c mod p``."""
    n = trinomial_middle(params)
    cv = _check_width(_as_int(c), params)
    m = params.m
    mask = (1 << m) - 1
    hi = cv >> m  # c[m .. 2m-2]
    top = cv >> (2 * m - n)  # c[2m-n .. 2m-2], the part of hi << n past bit m-1
    w = cv & mask
    x = hi
    y = (hi << n) & mask
    z = top ^ (top << n)
    return w, x, y, z


def reduce_unified(c: PolyLike, params: FieldParams) -> BitPoly:
    w, x, y, z = unified_terms(c, params)
    return BitPoly(w ^ x ^ y ^ z)


@dataclass(frozen=True)
class ReductionTable:
    """Precomputed x^k * r(x), 0 <= k < word_width, for one field."""

    word_width: int
    rows: tuple[int, ...]
    params: FieldParams
    # byte_rows[j][v]: XOR of rows[8j + t] over the set bits t of v
    byte_rows: tuple[tuple[int, ...], ...] = field(repr=False, compare=False, default=())


def build_table(params: FieldParams, word_width: int = DEFAULT_WORD_WIDTH) -> ReductionTable:
    if word_width not in WORD_WIDTHS:
        raise UnsupportedWordWidth(f"word width must be one of {WORD_WIDTHS}, got {word_width}")
    r = params.r.value
    rows = tuple(r << k for k in range(word_width))
    byte_rows = []
    for j in range(word_width // 8):
        lut = [0] * 256
        for v in range(1, 256):
            low = v & -v
            lut[v] = lut[v ^ low] ^ rows[8 * j + low.bit_length() - 1]
        byte_rows.append(tuple(lut))
    return ReductionTable(word_width, rows, params, tuple(byte_rows))


def reduce_tabled(c: PolyLike, table: ReductionTable) -> BitPoly:
    params = table.params
    cv = _check_width(_as_int(c), params)
    m = params.m
    W = table.word_width
    while cv.bit_length() > m:
        top = cv.bit_length() - 1
        start = max(m, top - W + 1)
        word = cv >> start
        cv ^= word << start
        # word * x^start == word * x^(start-m) * r(x)
        acc = 0
        j = 0
        while word:
            acc ^= table.byte_rows[j][word & 0xFF]
            word >>= 8
            j += 1
        cv ^= acc << (start - m)
    return BitPoly(cv)


_TABLES: dict[tuple[str, int], ReductionTable] = {}


def _table_for(params: FieldParams, word_width: int) -> ReductionTable:
    key = (params.name, word_width)
    tab = _TABLES.get(key)
    if tab is None or tab.params != params:
        tab = build_table(params, word_width)
        _TABLES[key] = tab
    return tab


def reduce(
    c: PolyLike, params: FieldParams, method: str = "generic", word_width: int = DEFAULT_WORD_WIDTH
) -> BitPoly:
    if method == "generic":
        return reduce_generic(c, params)
    if method == "unified":
        return reduce_unified(c, params)
    if method == "tabled":
        return reduce_tabled(c, _table_for(params, word_width))
    raise ValueError(f"unknown reduction {method!r}; expected one of {', '.join(REDUCTIONS)}")


def default_strategy(params: FieldParams) -> MulStrategy:
    """Preset hybrid cutover for the four curves, schoolbook otherwise."""
    if params.m in _PRESET_M:
        return MulStrategy.hybrid_for(params.m)
    return MulStrategy("cm")


def modmul(
    a: PolyLike,
    b: PolyLike,
    params: FieldParams,
    strategy: MulStrategy | None = None,
    reduction: str = "generic",
    stats: MulStats | None = None,
) -> BitPoly:
    """Field product: multiply with ``strategy``, then reduce."""
    av = params.check_element(a)
    bv = params.check_element(b)
    strategy = strategy or default_strategy(params)
    if reduction == "unified":
        trinomial_middle(params)
    product = multiply(av, bv, params.m, strategy, stats)
    return reduce(product, params, reduction)


def modmul_many(
    a_values: Sequence[PolyLike],
    b_values: Sequence[PolyLike],
    params: FieldParams,
    strategy: MulStrategy | None = None,
    reduction: str = "generic",
) -> list[int]:
    """Batch :func:`modmul`; the multiply runs bit-sliced, reduction per lane."""
    ints_a = [params.check_element(v) for v in a_values]
    ints_b = [params.check_element(v) for v in b_values]
    strategy = strategy or default_strategy(params)
    if reduction == "unified":
        trinomial_middle(params)
    products = multiply_many(ints_a, ints_b, params.m, strategy)
    return [reduce(c, params, reduction).value for c in products]


def field_pow_many(
    values: Sequence[PolyLike],
    e: int,
    params: FieldParams,
    strategy: MulStrategy | None = None,
    reduction: str = "generic",
) -> list[int]:
    """Square-and-multiply on a batch, every step going through :func:`modmul_many`."""
    if e < 0:
        raise ValueError("exponent must be non-negative")
    base = [params.check_element(v) for v in values]
    result = [1] * len(base)
    for bit in bin(e)[2:] if e else "":
        result = modmul_many(result, result, params, strategy, reduction)
        if bit == "1":
            result = modmul_many(result, base, params, strategy, reduction)
    return result

