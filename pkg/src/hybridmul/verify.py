"""Batch invariant suites behind ``hybridmul verify``.

Each suite returns a :class:`SuiteResult`.  When a suite finds a bad operand
pair it is shrunk (greedy bit clearing) before being reported, so failures
come back as small, readable counterexamples.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Callable, Mapping

from . import netlist as nl
from .cost_model import ceil_log2
from .field_core import (
    CURVES,
    REGISTRY,
    FieldParams,
    clmul_oracle,
    clmul_oracle_many,
    field_mul_oracle,
    field_pow,
    is_irreducible,
    mod_reduce_oracle,
)
from .multipliers import MulStrategy, multiply, multiply_many
from .reduction import default_strategy, modmul_many, reduce, trinomial_middle
from .errors import UnsupportedPolynomial

LEVELS = ("quick", "full")


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    detail: str = ""
    counterexample: str | None = None


def shrink_pair(a: int, b: int, fails: Callable[[int, int], bool]) -> tuple[int, int]:
    """Clear bits of ``a`` then ``b`` one at a time while ``fails`` stays true."""
    for which in (0, 1):
        bit = 0
        while True:
            v = a if which == 0 else b
            if v >> bit == 0:
                break
            if (v >> bit) & 1:
                trial = v & ~(1 << bit)
                ta, tb = (trial, b) if which == 0 else (a, trial)
                if fails(ta, tb):
                    a, b = ta, tb
            bit += 1
    return a, b


def _strategies_for(n: int) -> list[MulStrategy]:
    out = [MulStrategy("cm"), MulStrategy("km"), MulStrategy("oka")]
    out += [MulStrategy("hybrid", t) for t in (2, 3) if t < n]
    return out


def _first_mismatch(got, want):
    for i, (g, w) in enumerate(zip(got, want)):
        if g != w:
            return i
    return None


def suite_exhaustive(max_n: int) -> SuiteResult:
    checked = 0
    for n in range(1, max_n + 1):
        pairs = list(product(range(1 << n), repeat=2))
        av = [p[0] for p in pairs]
        bv = [p[1] for p in pairs]
        want = [clmul_oracle(a, b).value for a, b in pairs]
        for s in _strategies_for(n):
            got = multiply_many(av, bv, n, s)
            i = _first_mismatch(got, want)
            checked += len(pairs)
            if i is not None:
                a, b = shrink_pair(
                    av[i], bv[i], lambda x, y: multiply(x, y, n, s) != clmul_oracle(x, y)
                )
                return SuiteResult(
                    f"exhaustive n<={max_n}", False, checked, f"{s} at n={n}",
                    f"n={n} strategy={s} a={a:x} b={b:x}",
                )
    return SuiteResult(f"exhaustive n<={max_n}", True, checked)


def suite_random_strategies(rng: random.Random, widths, trials: int) -> SuiteResult:
    checked = 0
    for n in widths:
        av = [rng.getrandbits(n) for _ in range(trials)]
        bv = [rng.getrandbits(n) for _ in range(trials)]
        want = clmul_oracle_many(av, bv)
        strategies = [MulStrategy("cm"), MulStrategy("km"), MulStrategy("oka"), MulStrategy("hybrid", max(2, n // 4))]
        for s in strategies:
            got = multiply_many(av, bv, n, s)
            checked += trials
            i = _first_mismatch(got, want)
            if i is not None:
                a, b = shrink_pair(
                    av[i], bv[i], lambda x, y: multiply(x, y, n, s) != clmul_oracle(x, y)
                )
                return SuiteResult(
                    "random strategies", False, checked, f"{s} at n={n}",
                    f"n={n} strategy={s} a={a:x} b={b:x}",
                )
    return SuiteResult("random strategies", True, checked)


def suite_registry(registry: Mapping[str, FieldParams]) -> SuiteResult:
    bad = []
    for name, f in registry.items():
        problems = []
        if f.p.degree != f.m:
            problems.append("degree")
        if not f.p.coeff(0):
            problems.append("no constant term")
        if f.p.weight() not in (3, 5):
            problems.append(f"{f.p.weight()} terms")
        if mod_reduce_oracle(1 << f.m, f.p) != f.r:
            problems.append("x^m mod p != r")
        if not is_irreducible(f.p):
            problems.append("reducible")
        if problems:
            bad.append((name, f, problems))
    if bad:
        name, f, _ = bad[0]
        detail = "; ".join(f"{n}: {', '.join(pr)}" for n, _, pr in bad)
        return SuiteResult("registry", False, len(registry), detail, f"{name} p={f.p}")
    return SuiteResult("registry", True, len(registry))


def _reductions(f: FieldParams) -> list[str]:
    methods = ["generic", "tabled"]
    try:
        trinomial_middle(f)
        methods.append("unified")
    except UnsupportedPolynomial:
        pass
    return methods


def suite_reduction(rng: random.Random, registry, trials: int) -> SuiteResult:
    checked = 0
    for name, f in registry.items():
        for _ in range(trials):
            c = rng.getrandbits(2 * f.m - 1)
            want = mod_reduce_oracle(c, f.p)
            for method in _reductions(f):
                checked += 1
                if reduce(c, f, method) != want:
                    return SuiteResult(
                        "reduction", False, checked, f"{method} on {name}", f"{name} c={c:x}"
                    )
    return SuiteResult("reduction", True, checked)


def suite_axioms(rng: random.Random, registry, trials: int) -> SuiteResult:
    checked = 0
    for name, f in registry.items():
        strat = default_strategy(f)
        a = [rng.getrandbits(f.m) for _ in range(trials)]
        b = [rng.getrandbits(f.m) for _ in range(trials)]
        c = [rng.getrandbits(f.m) for _ in range(trials)]
        mm = lambda x, y: modmul_many(x, y, f, strat)  # noqa: E731
        ab, ba = mm(a, b), mm(b, a)
        bc = mm(b, c)
        ab_c, a_bc = mm(ab, c), mm(a, bc)
        left = mm(a, [y ^ z for y, z in zip(b, c)])
        ac = mm(a, c)
        checks = {
            "commutativity": (ab, ba),
            "associativity": (ab_c, a_bc),
            "distributivity": (left, [x ^ y for x, y in zip(ab, ac)]),
        }
        # anchor one lane to the oracle so a consistently wrong modmul still fails
        oracle = [field_mul_oracle(x, y, f).value for x, y in zip(a[:8], b[:8])]
        checks["oracle anchor"] = (ab[:8], oracle)
        for law, (got, want) in checks.items():
            checked += len(got)
            i = _first_mismatch(got, want)
            if i is not None:
                return SuiteResult(
                    "field axioms", False, checked, f"{law} on {name}",
                    f"{name} a={a[i]:x} b={b[i]:x} c={c[i]:x}",
                )
    return SuiteResult("field axioms", True, checked)


def suite_fermat(rng: random.Random, registry, trials: int) -> SuiteResult:
    checked = 0
    bad = []
    for name, f in registry.items():
        for _ in range(trials):
            a = rng.getrandbits(f.m) or 1
            checked += 1
            if field_pow(a, 1 << f.m, f) != a:
                a, _ = shrink_pair(a, 0, lambda x, _y: x != 0 and field_pow(x, 1 << f.m, f) != x)
                bad.append((name, a))
                break
    if bad:
        names = ", ".join(n for n, _ in bad)
        return SuiteResult("fermat", False, checked, f"a^(2^m) != a on {names}", f"{bad[0][0]} a={bad[0][1]:x}")
    return SuiteResult("fermat", True, checked)


def suite_netlist(rng: random.Random, max_n: int, vectors: int) -> SuiteResult:
    checked = 0

    def fail(detail, ce=None):
        return SuiteResult("netlist conformance", False, checked, detail, ce)

    for n in range(1, max_n + 1):
        s = nl.stats(nl.build_cm(n))
        checked += 1
        if (s.and_count, s.xor_count, s.depth_and, s.depth_xor) != (n * n, (n - 1) ** 2, 1, ceil_log2(n)):
            return fail(f"cm n={n}: {s}")
    n = 2
    while n <= max_n:
        ands = 3 ** (n.bit_length() - 1)
        km, oka = nl.stats(nl.build_km(n)), nl.stats(nl.build_oka(n))
        checked += 2
        if (km.and_count, km.xor_count) != (ands, 6 * ands - 8 * n + 2):
            return fail(f"km n={n}: {km}")
        if n >= 8 and not oka.depth_xor < km.depth_xor:
            return fail(f"oka depth {oka.depth_xor} >= km depth {km.depth_xor} at n={n}")
        n *= 2
    for n in (1, 2, 3, 4, 8, 16):
        for s in _strategies_for(n):
            if s.kind in ("km", "oka") and (n < 2 or n & (n - 1)):
                continue
            net = nl.build_multiplier(s, n)
            if n <= 4:
                pairs = list(product(range(1 << n), repeat=2))
            else:
                pairs = [(rng.getrandbits(n), rng.getrandbits(n)) for _ in range(vectors)]
            av = [p[0] for p in pairs]
            bv = [p[1] for p in pairs]
            got = nl.simulate_many(net, av, bv)
            want = clmul_oracle_many(av, bv)
            checked += len(pairs)
            i = _first_mismatch(got, want)
            if i is not None:
                a, b = shrink_pair(av[i], bv[i], lambda x, y: nl.simulate(net, x, y) != clmul_oracle(x, y))
                return fail(f"{net.name} simulation", f"n={n} strategy={s} a={a:x} b={b:x}")
    return SuiteResult("netlist conformance", True, checked)


def suite_modmul_netlist(rng: random.Random, registry, field_name: str, vectors: int) -> SuiteResult:
    f = registry[field_name]
    strat = default_strategy(f)
    net = nl.build_modmul(f, strat)
    av = [rng.getrandbits(f.m) for _ in range(vectors)]
    bv = [rng.getrandbits(f.m) for _ in range(vectors)]
    got = nl.simulate_many(net, av, bv)
    want = [field_mul_oracle(a, b, f).value for a, b in zip(av, bv)]
    i = _first_mismatch(got, want)
    if i is not None:
        a, b = shrink_pair(
            av[i], bv[i], lambda x, y: nl.simulate(net, x, y) != field_mul_oracle(x, y, f)
        )
        return SuiteResult("modmul netlist", False, vectors, field_name, f"{field_name} a={a:x} b={b:x}")
    return SuiteResult("modmul netlist", True, vectors)


def _netlist_field(registry) -> str:
    if "B-163" in registry:
        return "B-163"
    return min(registry, key=lambda k: abs(registry[k].m - 163))


def run_suites(
    level: str = "quick",
    seed: int = 0,
    registry: Mapping[str, FieldParams] | None = None,
) -> list[SuiteResult]:
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    registry = dict(REGISTRY if registry is None else registry)
    rng = random.Random(seed)
    full = level == "full"
    small = {k: v for k, v in registry.items() if v.m <= 163}
    curves = {k: v for k, v in registry.items() if k in CURVES}
    return [
        suite_registry(registry),
        suite_exhaustive(6),
        suite_random_strategies(rng, (163, 233, 283, 571) if full else (41, 163), 1000 if full else 100),
        suite_reduction(rng, registry, 1000 if full else 50),
        suite_axioms(rng, registry if full else small, 1000 if full else 50),
        suite_fermat(rng, registry if full else {**small, **curves}, 100 if full else 3),
        suite_netlist(rng, 64 if full else 16, 1000 if full else 200),
        suite_modmul_netlist(rng, registry, _netlist_field(registry), 1000 if full else 100),
    ]
