import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybridmul.errors import InputTooWide, OperandTooLarge, UnsupportedPolynomial, UnsupportedWordWidth
from hybridmul.field_core import REGISTRY, field_mul_oracle, mod_reduce_oracle, nist_params
from hybridmul.multipliers import MulStats, MulStrategy
from hybridmul.reduction import (
    WORD_WIDTHS,
    build_table,
    default_strategy,
    field_pow_many,
    modmul,
    modmul_many,
    reduce,
    reduce_generic,
    reduce_tabled,
    reduce_unified,
    trinomial_middle,
    unified_terms,
)

TRINOMIALS = [n for n, f in REGISTRY.items() if f.is_trinomial and max(f.r.exponents()) < f.m / 2]


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(list(REGISTRY)), st.data())
def test_generic_and_tabled_match_oracle(name, data):
    f = REGISTRY[name]
    c = data.draw(st.integers(0, (1 << (2 * f.m - 1)) - 1))
    want = mod_reduce_oracle(c, f.p)
    assert reduce_generic(c, f) == want
    w = data.draw(st.sampled_from(WORD_WIDTHS))
    assert reduce_tabled(c, build_table(f, w)) == want


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(TRINOMIALS), st.data())
def test_unified_matches_oracle(name, data):
    f = REGISTRY[name]
    c = data.draw(st.integers(0, (1 << (2 * f.m - 1)) - 1))
    assert reduce_unified(c, f) == mod_reduce_oracle(c, f.p)


def test_trinomial_coverage():
    assert {"6", "11", "21", "41", "B-233", "B-233-fips"} <= set(TRINOMIALS)


@pytest.mark.parametrize("name", list(REGISTRY))
def test_x_to_the_m(name):
    f = REGISTRY[name]
    for method in ("generic", "tabled") + (("unified",) if name in TRINOMIALS else ()):
        assert reduce(1 << f.m, f, method) == f.r


def test_exact_folds():
    assert reduce(1 << 163, nist_params("B-163")).exponents() == [7, 6, 3, 0]
    assert reduce(1 << 233, nist_params("B-233"), "unified").exponents() == [70, 0]


def test_unified_terms_single_bit():
    # x^233: X contributes bit 0, Y bit 70, W and Z nothing
    w, x, y, z = unified_terms(1 << 233, nist_params("B-233"))
    assert (w, x, y, z) == (0, 1, 1 << 70, 0)
    # top coefficient x^464 reaches the Z term
    _, _, _, z = unified_terms(1 << 464, nist_params("B-233"))
    assert z != 0


def test_unified_rejects_pentanomials():
    for name in ("B-163", "B-283", "B-571", "82"):
        with pytest.raises(UnsupportedPolynomial, match="unsupported polynomial"):
            trinomial_middle(nist_params(name))
        with pytest.raises(UnsupportedPolynomial):
            modmul(1, 1, nist_params(name), reduction="unified")


def test_width_and_method_errors():
    f = nist_params("B-163")
    with pytest.raises(InputTooWide):
        reduce_generic(1 << (2 * 163 - 1), f)
    with pytest.raises(UnsupportedWordWidth):
        build_table(f, 12)
    with pytest.raises(ValueError):
        reduce(1, f, "barrett")
    with pytest.raises(OperandTooLarge):
        modmul(1 << 163, 1, f)


def test_default_strategy():
    assert default_strategy(nist_params("B-163")) == MulStrategy("hybrid", 41)
    assert default_strategy(nist_params("B-571")) == MulStrategy("hybrid", 71)
    assert default_strategy(nist_params("41")) == MulStrategy("cm")


def test_modmul_identity_and_stats():
    f = nist_params("B-163")
    x = random.Random(7).getrandbits(163)
    assert modmul(1, x, f) == x
    stats = MulStats()
    modmul(x, x, f, stats=stats)
    assert stats.leaf_calls == 9


@pytest.mark.parametrize("name", ["B-163", "B-233", "B-283", "B-571", "82"])
def test_modmul_many_all_paths(name):
    f = nist_params(name)
    rng = random.Random(name)
    a = [rng.getrandbits(f.m) for _ in range(30)]
    b = [rng.getrandbits(f.m) for _ in range(30)]
    want = [field_mul_oracle(x, y, f).value for x, y in zip(a, b)]
    strategies = [MulStrategy("cm"), MulStrategy("km"), MulStrategy("oka"), default_strategy(f)]
    for s in strategies:
        for red in ("generic", "tabled") + (("unified",) if name in TRINOMIALS else ()):
            assert modmul_many(a, b, f, s, red) == want, (s, red)


@pytest.mark.parametrize("s", ["cm", "km", "oka", "hybrid:41"])
def test_fermat_through_each_multiplier(s):
    f = nist_params("B-163")
    rng = random.Random(3)
    vals = [rng.getrandbits(163) or 1 for _ in range(4)]
    assert field_pow_many(vals, 1 << 163, f, MulStrategy.parse(s)) == vals


def test_field_pow_many_edge():
    f = nist_params("41")
    assert field_pow_many([5, 7], 0, f) == [1, 1]
    with pytest.raises(ValueError):
        field_pow_many([5], -2, f)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["6", "11", "21", "41", "82", "B-163", "B-233-fips"]), st.data())
def test_field_laws(name, data):
    f = REGISTRY[name]
    el = st.integers(0, (1 << f.m) - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    mm = lambda x, y: modmul(x, y, f).value  # noqa: E731
    assert mm(a, b) == mm(b, a)
    assert mm(mm(a, b), c) == mm(a, mm(b, c))
    assert mm(a, b ^ c) == mm(a, b) ^ mm(a, c)
    assert mm(a, 1) == a
