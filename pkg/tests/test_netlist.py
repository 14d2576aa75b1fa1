import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybridmul import netlist as nl
from hybridmul.cost_model import ceil_log2, cost_hybrid
from hybridmul.errors import NotPowerOfTwo, WidthMismatch
from hybridmul.field_core import clmul_oracle, clmul_oracle_many, field_mul_oracle, nist_params
from hybridmul.multipliers import MulStrategy
from hybridmul.reduction import modmul_many


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 13, 32])
def test_cm_formulas(n):
    s = nl.stats(nl.build_cm(n))
    assert s == nl.NetlistStats(n * n, (n - 1) ** 2, 1, ceil_log2(n))


def test_ka2_cell():
    s = nl.stats(nl.build_km(2))
    assert (s.and_count, s.xor_count, s.depth_xor) == (3, 4, 2)
    assert nl.stats(nl.build_oka(2)) == s


def test_measured_depths():
    km = [nl.stats(nl.build_km(1 << e)).depth_xor for e in range(1, 7)]
    oka = [nl.stats(nl.build_oka(1 << e)).depth_xor for e in range(1, 7)]
    # middle term evaluated left to right, (P ^ M0) ^ M1
    assert km == [2, 5, 8, 12, 16, 20]
    assert oka == [2 * e for e in range(1, 7)]


def test_pow2_required():
    with pytest.raises(NotPowerOfTwo):
        nl.build_km(6)
    with pytest.raises(NotPowerOfTwo):
        nl.build_oka(1)
    with pytest.raises(NotPowerOfTwo):
        nl.build_modmul(nist_params("B-163"), MulStrategy("km"))


@pytest.mark.parametrize(
    "net",
    [nl.build_cm(4), nl.build_km(4), nl.build_oka(4), nl.build_hybrid(4, 2), nl.build_hybrid(3, 2)],
    ids=lambda n: n.name,
)
def test_exhaustive_simulation(net):
    n = net.width_a
    pairs = list(product(range(1 << n), repeat=2))
    got = nl.simulate_many(net, [p[0] for p in pairs], [p[1] for p in pairs])
    assert got == [clmul_oracle(a, b).value for a, b in pairs]
    assert all(nl.simulate(net, a, b) == clmul_oracle(a, b) for a, b in pairs[::7])


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 70), st.integers(2, 9), st.integers(0, 2**32))
def test_hybrid_netlists_simulate(n, thr, seed):
    net = nl.build_hybrid(n, thr)
    rng = random.Random(seed)
    a = [rng.getrandbits(n) for _ in range(16)]
    b = [rng.getrandbits(n) for _ in range(16)]
    assert nl.simulate_many(net, a, b) == clmul_oracle_many(a, b)
    nl.audit(net)


def test_hybrid_163_tally_matches_model():
    net = nl.build_hybrid(163, 41)
    assert nl.stats(net).and_count == cost_hybrid(163, 2).and_count == 15129


def test_modmul_netlist_regions():
    f = nist_params("B-233")
    net = nl.build_modmul(f, MulStrategy("hybrid", 59))
    red = nl.stats(net, "reduction")
    assert red.and_count == 0 and red.xor_count > 0
    mult = nl.stats(net, "multiplier")
    assert mult.and_count == cost_hybrid(233, 2).and_count
    assert len(net.outputs) == 233
    rng = random.Random(5)
    a = [rng.getrandbits(233) for _ in range(50)]
    b = [rng.getrandbits(233) for _ in range(50)]
    assert nl.simulate_many(net, a, b) == modmul_many(a, b, f)


def test_reduction_sources_single_term():
    f = nist_params("B-233")
    src = nl.reduction_sources(f)
    # output bit 70 collects product bit 70 plus x^233's fold
    assert 233 in src[70] and 233 in src[0]


def test_text_roundtrip(tmp_path):
    net = nl.build_modmul(nist_params("41"), MulStrategy("cm"))
    text = nl.write_netlist(net)
    assert text.startswith("# netlist ")
    back = nl.read_netlist(text)
    assert back == net
    assert back.regions == net.regions
    p = tmp_path / "n.txt"
    p.write_text(text)
    assert nl.read_netlist(p.read_text()) == net


def test_read_rejects_bad_text():
    with pytest.raises(ValueError):
        nl.read_netlist("g0 = AND a0 b0\n")
    with pytest.raises(ValueError):
        nl.read_netlist("inputs a 1 b 1\ng0 = NAND a0 b0\n")
    with pytest.raises(ValueError):
        nl.read_netlist("inputs a 1 b 1\ng0 = AND a0 b5\n")
    # forward reference: gate 0 reads gate 1
    with pytest.raises(ValueError):
        nl.read_netlist("inputs a 1 b 1\ng0 = XOR g1 a0\ng1 = AND a0 b0\nc0 = g0\n")


def test_simulate_width_checks():
    net = nl.build_cm(4)
    with pytest.raises(WidthMismatch):
        nl.simulate(net, 16, 1)
    with pytest.raises(WidthMismatch):
        nl.simulate_many(net, [1, 2], [1])
    assert nl.simulate_many(net, [], []) == []


def test_stats_json():
    js = nl.stats_json({"cm2": nl.stats(nl.build_cm(2))})
    assert '"and_count": 4' in js


def test_build_multiplier_dispatch():
    assert nl.build_multiplier(MulStrategy("oka"), 8).name == nl.build_oka(8).name
    assert nl.stats(nl.build_multiplier(MulStrategy("hybrid", 41), 163)).and_count == 15129


def test_modmul_netlist_b163_small_batch():
    f = nist_params("B-163")
    net = nl.build_modmul(f, MulStrategy("hybrid", 41))
    rng = random.Random(11)
    for _ in range(5):
        a, b = rng.getrandbits(163), rng.getrandbits(163)
        assert nl.simulate(net, a, b) == field_mul_oracle(a, b, f)
