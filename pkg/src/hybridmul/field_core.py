"""Binary polynomials, reference arithmetic and the NIST field registry.

A polynomial over GF(2) is stored as a non-negative Python int whose bit ``i``
is the coefficient of ``x^i``.  :class:`BitPoly` wraps that int as an
immutable value; the heavy lifting elsewhere in the package works on plain
ints or on bit-sliced rows (see :func:`to_slices`).

The two oracles, :func:`clmul_oracle` and :func:`mod_reduce_oracle`, are kept
deliberately naive.  Every fast path in the package is checked against them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .errors import OperandTooLarge, UnknownCurve, ZeroModulus

PolyLike = Union["BitPoly", int]

_HEX_RE = re.compile(r"^(0[xX])?[0-9a-fA-F]+$")


class BitPoly:
    """Immutable polynomial over GF(2); bit ``i`` is the coefficient of x^i."""

    __slots__ = ("_v",)

    def __init__(self, value: int = 0):
        value = int(value)
        if value < 0:
            raise ValueError("polynomial value must be non-negative")
        object.__setattr__(self, "_v", value)

    def __setattr__(self, name, value):
        raise AttributeError("BitPoly is immutable")

    @classmethod
    def from_exponents(cls, *exponents: int) -> "BitPoly":
        """``from_exponents(163, 7, 6, 3, 0)`` is x^163 + x^7 + x^6 + x^3 + 1."""
        v = 0
        for e in exponents:
            v ^= 1 << e
        return cls(v)

    @classmethod
    def from_hex(cls, text: str) -> "BitPoly":
        text = text.strip()
        if not _HEX_RE.match(text):
            raise ValueError(f"not a hex polynomial: {text!r}")
        return cls(int(text, 16))

    @property
    def value(self) -> int:
        return self._v

    @property
    def degree(self) -> int | None:
        """Highest set exponent, or ``None`` for the zero polynomial."""
        if self._v == 0:
            return None
        return self._v.bit_length() - 1

    def is_zero(self) -> bool:
        return self._v == 0

    def coeff(self, i: int) -> int:
        return (self._v >> i) & 1

    def exponents(self) -> list[int]:
        """Set exponents in descending order."""
        return sorted(_set_bits(self._v), reverse=True)

    def weight(self) -> int:
        return bin(self._v).count("1")

    def hex(self) -> str:
        return format(self._v, "x")

    def __int__(self) -> int:
        return self._v

    def __index__(self) -> int:
        return self._v

    def __eq__(self, other) -> bool:
        if isinstance(other, BitPoly):
            return self._v == other._v
        if isinstance(other, int):
            return self._v == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._v)

    def __xor__(self, other: PolyLike) -> "BitPoly":
        return BitPoly(self._v ^ _as_int(other))

    __add__ = __xor__
    __radd__ = __xor__
    __rxor__ = __xor__
    __sub__ = __xor__

    def __lshift__(self, k: int) -> "BitPoly":
        return BitPoly(self._v << k)

    def __rshift__(self, k: int) -> "BitPoly":
        return BitPoly(self._v >> k)

    def __bool__(self) -> bool:
        return self._v != 0

    def __str__(self) -> str:
        if self._v == 0:
            return "0"
        terms = []
        for e in self.exponents():
            terms.append("1" if e == 0 else "x" if e == 1 else f"x^{e}")
        return " + ".join(terms)

    def __repr__(self) -> str:
        return f"BitPoly({self})"


def _as_int(p: PolyLike) -> int:
    if isinstance(p, BitPoly):
        return p.value
    v = int(p)
    if v < 0:
        raise ValueError("polynomial value must be non-negative")
    return v


def _set_bits(v: int) -> Iterable[int]:
    i = 0
    while v:
        if v & 1:
            yield i
        v >>= 1
        i += 1


def degree(p: PolyLike) -> int | None:
    v = _as_int(p)
    return v.bit_length() - 1 if v else None


@dataclass(frozen=True)
class FieldParams:
    """A binary field GF(2^m) given by its irreducible polynomial."""

    name: str
    m: int
    p: BitPoly

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("extension degree must be positive")
        if self.p.degree != self.m:
            raise ValueError(f"{self.name}: modulus degree {self.p.degree} != m={self.m}")

    @property
    def r(self) -> BitPoly:
        """Low part of the modulus: p(x) = x^m + r(x)."""
        return self.p ^ (1 << self.m)

    @property
    def is_trinomial(self) -> bool:
        return self.p.weight() == 3

    @property
    def is_pentanomial(self) -> bool:
        return self.p.weight() == 5

    def check_element(self, a: PolyLike) -> int:
        v = _as_int(a)
        if v >> self.m:
            raise OperandTooLarge(f"degree {v.bit_length() - 1} >= m={self.m} for {self.name}")
        return v


def _field(name: str, *exps: int) -> FieldParams:
    return FieldParams(name, exps[0], BitPoly.from_exponents(*exps))


# NIST FIPS 186-2 polynomials, plus the small trinomials/pentanomial used at
# the intermediate Karatsuba widths.
REGISTRY: dict[str, FieldParams] = {
    f.name: f
    for f in (
        _field("6", 6, 1, 0),
        _field("11", 11, 2, 0),
        _field("21", 21, 2, 0),
        _field("41", 41, 3, 0),
        _field("82", 82, 8, 3, 1, 0),
        _field("B-163", 163, 7, 6, 3, 0),
        _field("B-233", 233, 70, 0),
        _field("B-283", 283, 12, 7, 5, 0),
        _field("B-571", 571, 10, 5, 2, 0),
        # FIPS 186 B-233 modulus.  "B-233" above keeps the x^70 middle term as
        # tabulated, which is reducible (see is_irreducible), so it defines a
        # ring rather than a field.
        _field("B-233-fips", 233, 74, 0),
    )
}

CURVES = ("B-163", "B-233", "B-283", "B-571")
TABLE2 = ("6", "11", "21", "41", "82", *CURVES)


def nist_params(name: str | int) -> FieldParams:
    """Look up a registry entry by label ("B-233") or by degree (41, "41", 163)."""
    key = str(name).strip()
    if key in REGISTRY:
        return REGISTRY[key]
    if key.isdigit():
        for f in REGISTRY.values():
            if f.m == int(key):
                return f
    raise UnknownCurve(f"unknown field {name!r}; known: {', '.join(REGISTRY)}")


def poly_add(a: PolyLike, b: PolyLike) -> BitPoly:
    return BitPoly(_as_int(a) ^ _as_int(b))


def clmul_oracle(a: PolyLike, b: PolyLike) -> BitPoly:
    """Carryless product by the defining double sum over coefficient pairs."""
    av, bv = _as_int(a), _as_int(b)
    bbits = list(_set_bits(bv))
    out = 0
    for i in _set_bits(av):
        for j in bbits:
            out ^= 1 << (i + j)
    return BitPoly(out)


def mod_reduce_oracle(c: PolyLike, p: PolyLike) -> BitPoly:
    """Remainder of polynomial long division of ``c`` by ``p``."""
    cv, pv = _as_int(c), _as_int(p)
    if pv == 0:
        raise ZeroModulus("modulus is the zero polynomial")
    dp = pv.bit_length()
    while cv.bit_length() >= dp:
        cv ^= pv << (cv.bit_length() - dp)
    return BitPoly(cv)


def field_mul_oracle(a: PolyLike, b: PolyLike, params: FieldParams) -> BitPoly:
    params.check_element(a)
    params.check_element(b)
    return mod_reduce_oracle(clmul_oracle(a, b), params.p)


# spread table: byte -> 16-bit value with a zero between every pair of bits
_SPREAD = [int("".join(c + "0" for c in format(i, "08b")), 2) >> 1 for i in range(256)]


def _interleave_zeros(v: int) -> int:
    out = 0
    shift = 0
    while v:
        out |= _SPREAD[v & 0xFF] << shift
        v >>= 8
        shift += 16
    return out


def _fold(c: int, params: FieldParams) -> int:
    m = params.m
    mask = (1 << m) - 1
    rterms = list(_set_bits(params.r.value))
    while c >> m:
        hi = c >> m
        c &= mask
        for t in rterms:
            c ^= hi << t
    return c


def field_square(a: PolyLike, params: FieldParams) -> BitPoly:
    v = params.check_element(a)
    return BitPoly(_fold(_interleave_zeros(v), params))


def field_pow(
    a: PolyLike,
    e: int,
    params: FieldParams,
    mul: Callable[[BitPoly, BitPoly], BitPoly] | None = None,
) -> BitPoly:
    """Left-to-right square-and-multiply.

    ``mul`` replaces both the squaring and the multiply step when given, which
    lets callers route exponentiation through a particular multiplier.
    """
    base = BitPoly(params.check_element(a))
    if e < 0:
        raise ValueError("exponent must be non-negative")
    if mul is None:
        sq = lambda x: field_square(x, params)  # noqa: E731
        mult = lambda x, y: field_mul_oracle(x, y, params)  # noqa: E731
    else:
        sq = lambda x: mul(x, x)  # noqa: E731
        mult = mul
    result = BitPoly(1)
    for bit in bin(e)[2:] if e else "":
        result = sq(result)
        if bit == "1":
            result = mult(result, base)
    return result


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    return out + ([n] if n > 1 else [])


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, mod_reduce_oracle(a, b).value
    return a


def is_irreducible(p: PolyLike) -> bool:
    """Rabin's test: x^(2^m) = x mod p and gcd(x^(2^(m/q)) - x, p) = 1 for primes q | m."""
    pv = _as_int(p)
    m = pv.bit_length() - 1
    if m < 1:
        return False
    if m == 1:
        return True
    f = FieldParams("test", m, BitPoly(pv))
    powers = {}
    x = 2
    for k in range(1, m + 1):
        x = field_square(x, f).value
        powers[k] = x
    if powers[m] != 2:
        return False
    return all(_gcd(pv, powers[m // q] ^ 2) == 1 for q in _prime_factors(m))


# -- bit slicing -------------------------------------------------------------
#
# A batch of polynomials of declared width n becomes n "rows"; bit t of row i
# is coefficient x^i of the t-th polynomial.  Gate-style algorithms then run
# once per row with Python int AND/XOR acting on every lane at once.


def _bit_matrix(values: Sequence[int], n: int) -> np.ndarray:
    """(len(values), n) uint8 matrix of coefficients, column i = x^i."""
    nbytes = max(1, (n + 7) // 8)
    try:
        buf = b"".join(int(v).to_bytes(nbytes, "little") for v in values)
    except OverflowError:
        raise OperandTooLarge(f"operand wider than {n} bits") from None
    arr = np.frombuffer(buf, dtype=np.uint8).reshape(len(values), nbytes)
    bits = np.unpackbits(arr, axis=1, bitorder="little")
    if bits[:, n:].any():
        raise OperandTooLarge(f"operand wider than {n} bits")
    return bits[:, :n]


def _from_bit_matrix(bits: np.ndarray) -> list[int]:
    packed = np.packbits(bits.astype(np.uint8, copy=False), axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def to_slices(values: Sequence[PolyLike], n: int) -> list[int]:
    """Transpose ``len(values)`` polynomials of width ``n`` into n lane-rows."""
    ints = [_as_int(v) for v in values]
    if not ints:
        return [0] * n
    return _from_bit_matrix(_bit_matrix(ints, n).T)


def from_slices(rows: Sequence[int], count: int) -> list[int]:
    """Inverse of :func:`to_slices`: n lane-rows back into ``count`` ints."""
    if not rows:
        return [0] * count
    return _from_bit_matrix(_bit_matrix(rows, count).T)


def clmul_oracle_many(a_values: Sequence[PolyLike], b_values: Sequence[PolyLike]) -> list[int]:
    """Batch form of :func:`clmul_oracle`.

    Each product is the integer sum of a_i * b_j over i + j = k, taken mod 2,
    accumulated with numpy over coefficient matrices.
    """
    a_ints = [_as_int(v) for v in a_values]
    b_ints = [_as_int(v) for v in b_values]
    if len(a_ints) != len(b_ints):
        raise ValueError("operand batches differ in length")
    if not a_ints:
        return []
    na = max(1, max(v.bit_length() for v in a_ints))
    nb = max(1, max(v.bit_length() for v in b_ints))
    out: list[int] = []
    chunk = 4096
    for s in range(0, len(a_ints), chunk):
        A = _bit_matrix(a_ints[s : s + chunk], na).astype(np.uint16)
        B = _bit_matrix(b_ints[s : s + chunk], nb).astype(np.uint16)
        C = np.zeros((A.shape[0], na + nb - 1), dtype=np.uint16)
        for i in range(na):
            C[:, i : i + nb] += A[:, i : i + 1] * B
        out.extend(_from_bit_matrix(C & 1))
    return out
