import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybridmul.errors import OperandTooLarge, UnknownCurve, ZeroModulus
from hybridmul.field_core import (
    CURVES,
    REGISTRY,
    TABLE2,
    BitPoly,
    FieldParams,
    clmul_oracle,
    clmul_oracle_many,
    degree,
    field_mul_oracle,
    field_pow,
    field_square,
    from_slices,
    is_irreducible,
    mod_reduce_oracle,
    nist_params,
    to_slices,
)

# (field, a, b, a*b mod p); products from the long-division oracle, one of them
# cross-checked with sympy's GF(2) polynomial remainder.
FROZEN_PRODUCTS = [
    ("B-163", "14dc2a627940eee3cba6f875c2e84496e7857dd86", "6b7740a63c1d8fac168fb90d7b938451ee325faa6",
     "671eff3f3077784cbbaf1d71b4e75fcc2e8e87882"),
    ("B-233", "b57f90ade7bc38d756d0055979a2da95a83ec33dd6887e840043e58844",
     "1164f3d4e7b37d72e4af69787709d9b532aba4e6c3686ff0de26a769806",
     "1c4a78f5732d823a9b712e6cf81f0ee5132dda43afa30b6e211e3f3b05c"),
    ("B-283", "1a6ab84ddfa7fa4ffe9ec11c63d5f77bb3a6a06131db61884f42b4b548a84a5b43d4318",
     "5385cb3df354788d4dd79d3b5834f4cecb736d877f1caf0ba49c19fc0a9c8beb070e384",
     "55e421cbd697918c8520ebc39c2b46dba966ffa00dcef689a44fb6607b2d1bcd9bab321"),
]


def test_bitpoly_basics():
    p = BitPoly.from_exponents(3, 1, 0)
    assert p.value == 0b1011
    assert p.degree == 3
    assert p.exponents() == [3, 1, 0]
    assert p.weight() == 3
    assert str(p) == "x^3 + x + 1"
    assert p.hex() == "b"
    assert BitPoly(0).degree is None
    assert degree(0) is None
    assert str(BitPoly(0)) == "0"


def test_bitpoly_hex_and_ops():
    assert BitPoly.from_hex("0x1F") == 31
    assert BitPoly.from_hex("1f") == BitPoly(31)
    with pytest.raises(ValueError):
        BitPoly.from_hex("xyz")
    with pytest.raises(ValueError):
        BitPoly(-1)
    a, b = BitPoly(0b1100), BitPoly(0b1010)
    assert a + b == a ^ b == a - b == 0b0110
    assert (a << 2) == 0b110000
    assert (a >> 2) == 0b11
    assert hash(a) == hash(BitPoly(12))
    with pytest.raises(AttributeError):
        a._v = 3


def test_registry_matches_table():
    expected = {
        "6": (6, 1, 0),
        "11": (11, 2, 0),
        "21": (21, 2, 0),
        "41": (41, 3, 0),
        "82": (82, 8, 3, 1, 0),
        "B-163": (163, 7, 6, 3, 0),
        "B-233": (233, 70, 0),
        "B-283": (283, 12, 7, 5, 0),
        "B-571": (571, 10, 5, 2, 0),
    }
    assert TABLE2 == tuple(expected)
    for name, exps in expected.items():
        f = REGISTRY[name]
        assert f.m == exps[0]
        assert f.p.exponents() == list(exps)
    assert REGISTRY["B-233-fips"].p.exponents() == [233, 74, 0]
    assert REGISTRY["B-163"].is_pentanomial and REGISTRY["B-233"].is_trinomial


def test_nist_params_lookup():
    assert nist_params("B-163") is REGISTRY["B-163"]
    assert nist_params(41).name == "41"
    assert nist_params("233").name == "B-233"
    with pytest.raises(UnknownCurve):
        nist_params("B-999")
    assert set(CURVES) <= set(REGISTRY)


def test_field_params_validation():
    with pytest.raises(ValueError):
        FieldParams("bad", 5, BitPoly.from_exponents(4, 0))
    f = REGISTRY["6"]
    assert f.r == BitPoly.from_exponents(1, 0)
    with pytest.raises(OperandTooLarge):
        f.check_element(1 << 6)


def test_oracles_known_values():
    assert clmul_oracle(0x1B, 0x35) == 0x2A7
    assert clmul_oracle(0xFFFF, 0xFFFF) == 0x55555555
    assert clmul_oracle(0, 0xFF) == 0
    assert mod_reduce_oracle(0b111, 0b11) == 1
    with pytest.raises(ZeroModulus):
        mod_reduce_oracle(5, 0)


@pytest.mark.parametrize("name,a,b,c", FROZEN_PRODUCTS)
def test_frozen_field_products(name, a, b, c):
    f = nist_params(name)
    assert field_mul_oracle(BitPoly.from_hex(a), BitPoly.from_hex(b), f).hex() == c


def test_irreducibility():
    for name in TABLE2:
        if name != "B-233":
            assert is_irreducible(REGISTRY[name].p), name
    assert is_irreducible(REGISTRY["B-233-fips"].p)
    # x^233 + x^70 + 1 factors over GF(2)
    assert not is_irreducible(REGISTRY["B-233"].p)
    assert not is_irreducible(BitPoly.from_exponents(2, 0))  # (x+1)^2
    assert is_irreducible(0b111)


def test_fermat_small_fields():
    for name in ("6", "11", "21", "41", "82", "B-163"):
        f = REGISTRY[name]
        for a in (1, 2, 3, (1 << f.m) - 1):
            assert field_pow(a, 1 << f.m, f) == a


def test_field_pow_custom_mul():
    f = REGISTRY["11"]
    mul = lambda x, y: field_mul_oracle(x, y, f)  # noqa: E731
    for a in range(1, 50):
        assert field_pow(a, 2047, f, mul) == 1
    assert field_pow(5, 0, f) == 1
    with pytest.raises(ValueError):
        field_pow(5, -1, f)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(list(REGISTRY)), st.data())
def test_square_matches_oracle(name, data):
    f = REGISTRY[name]
    a = data.draw(st.integers(0, (1 << f.m) - 1))
    assert field_square(a, f) == field_mul_oracle(a, a, f)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, (1 << 70) - 1), min_size=1, max_size=40))
def test_slices_roundtrip(values):
    rows = to_slices(values, 70)
    assert len(rows) == 70
    assert from_slices(rows, len(values)) == values


def test_slices_reject_wide():
    with pytest.raises(OperandTooLarge):
        to_slices([1 << 8], 8)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2**200), st.integers(0, 2**90)), min_size=1, max_size=20))
def test_batch_oracle_matches_single(pairs):
    a = [p[0] for p in pairs]
    b = [p[1] for p in pairs]
    assert clmul_oracle_many(a, b) == [clmul_oracle(x, y).value for x, y in pairs]


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**64), st.integers(0, 2**64), st.integers(0, 2**64))
def test_clmul_ring_laws(a, b, c):
    assert clmul_oracle(a, b) == clmul_oracle(b, a)
    assert clmul_oracle(a, b ^ c) == clmul_oracle(a, b) ^ clmul_oracle(a, c)
    d = clmul_oracle(a, b)
    assert d.degree == (None if not a or not b else a.bit_length() + b.bit_length() - 2)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**300), st.sampled_from(list(REGISTRY)))
def test_reduce_oracle_remainder(c, name):
    p = REGISTRY[name].p
    r = mod_reduce_oracle(c, p)
    assert r.value.bit_length() <= p.degree
    # c - r is a multiple of p: reduce again and the remainder vanishes
    assert mod_reduce_oracle(c ^ r.value, p) == 0
