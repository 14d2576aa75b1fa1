"""Gate-level construction and simulation of the multipliers.

A :class:`Netlist` is a flat, topologically ordered list of 2-input AND/XOR
gates.  Node ids are laid out as::

    0                      constant zero
    1 .. na                a[0] .. a[na-1]
    na+1 .. na+nb          b[0] .. b[nb-1]
    na+nb+1 + g            gate g

so a gate can only reference smaller ids and acyclicity holds by construction
(:func:`audit` re-checks it).  Simulation is bit-parallel: every node value is
a Python int whose bit t belongs to test vector t.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .errors import NotPowerOfTwo, InvalidThreshold, WidthMismatch
from .field_core import FieldParams, PolyLike, _as_int, from_slices, to_slices
from .multipliers import MulStrategy

AND, XOR = 0, 1
_KIND_NAMES = ("AND", "XOR")


@dataclass(frozen=True)
class Netlist:
    name: str
    width_a: int
    width_b: int
    kinds: tuple[int, ...]
    in0: tuple[int, ...]
    in1: tuple[int, ...]
    outputs: tuple[int, ...]
    regions: dict = field(default_factory=dict, compare=False)

    @property
    def first_gate(self) -> int:
        return 1 + self.width_a + self.width_b

    def __len__(self) -> int:
        return len(self.kinds)

    def ref_name(self, node: int) -> str:
        if node == 0:
            return "zero"
        if node <= self.width_a:
            return f"a{node - 1}"
        if node < self.first_gate:
            return f"b{node - 1 - self.width_a}"
        return f"g{node - self.first_gate}"


@dataclass(frozen=True)
class NetlistStats:
    and_count: int
    xor_count: int
    depth_and: int
    depth_xor: int

    def as_dict(self) -> dict:
        return asdict(self)


class _Builder:
    def __init__(self, na: int, nb: int):
        self.na, self.nb = na, nb
        self.base = 1 + na + nb
        self.kinds: list[int] = []
        self.in0: list[int] = []
        self.in1: list[int] = []
        self.regions: dict[str, tuple[int, int]] = {}

    @property
    def a(self) -> list[int]:
        return list(range(1, self.na + 1))

    @property
    def b(self) -> list[int]:
        return list(range(self.na + 1, self.na + self.nb + 1))

    def gate(self, kind: int, x: int, y: int) -> int:
        self.kinds.append(kind)
        self.in0.append(x)
        self.in1.append(y)
        return self.base + len(self.kinds) - 1

    def and_(self, x: int, y: int) -> int:
        return self.gate(AND, x, y)

    def xor(self, x: int, y: int) -> int:
        return self.gate(XOR, x, y)

    def xor_tree(self, refs: Sequence[int]) -> int:
        """Balanced pairwise XOR reduction; empty input yields the zero pin."""
        layer = list(refs)
        if not layer:
            return 0
        while len(layer) > 1:
            nxt = [self.xor(layer[i], layer[i + 1]) for i in range(0, len(layer) - 1, 2)]
            if len(layer) % 2:
                nxt.append(layer[-1])
            layer = nxt
        return layer[0]

    def finish(self, name: str, outputs: Sequence[int]) -> Netlist:
        net = Netlist(
            name,
            self.na,
            self.nb,
            tuple(self.kinds),
            tuple(self.in0),
            tuple(self.in1),
            tuple(outputs),
            dict(self.regions),
        )
        audit(net)
        return net


# -- multiplier blocks over wire lists ----------------------------------------


def _cm_block(bld: _Builder, a: list[int], b: list[int]) -> list[int]:
    n = len(a)
    columns: list[list[int]] = [[] for _ in range(2 * n - 1)]
    for i in range(n):
        for j in range(n):
            columns[i + j].append(bld.and_(a[i], b[j]))
    return [bld.xor_tree(col) for col in columns]


def _karatsuba_combine(bld: _Builder, m0, m1, p, h: int, out_len: int) -> list[int]:
    """Middle term m2 = (p ^ m0) ^ m1, then overlap-add m0 + m2*x^h + m1*x^2h."""
    m2 = [bld.xor(bld.xor(pv, x), y) for pv, x, y in zip(p, m0, m1)]
    c: list[int | None] = [None] * out_len
    for shift, part in ((0, m0), (2 * h, m1), (h, m2)):
        for i, w in enumerate(part):
            pos = shift + i
            if pos >= out_len:
                break
            c[pos] = w if c[pos] is None else bld.xor(c[pos], w)
    return [0 if w is None else w for w in c]


def _ka2_cell(bld: _Builder, a: list[int], b: list[int]) -> list[int]:
    """2-bit Karatsuba cell: 3 AND, 4 XOR, two XOR levels."""
    lo = bld.and_(a[0], b[0])
    hi = bld.and_(a[1], b[1])
    mid = bld.and_(bld.xor(a[0], a[1]), bld.xor(b[0], b[1]))
    return [lo, bld.xor(mid, bld.xor(lo, hi)), hi]


def _km_block(bld: _Builder, a: list[int], b: list[int]) -> list[int]:
    n = len(a)
    if n == 1:
        return [bld.and_(a[0], b[0])]
    if n == 2:
        return _ka2_cell(bld, a, b)
    h = n // 2
    m0 = _km_block(bld, a[:h], b[:h])
    m1 = _km_block(bld, a[h:], b[h:])
    sa = [bld.xor(x, y) for x, y in zip(a[:h], a[h:])]
    sb = [bld.xor(x, y) for x, y in zip(b[:h], b[h:])]
    p = _km_block(bld, sa, sb)
    return _karatsuba_combine(bld, m0, m1, p, h, 2 * n - 1)


def _oka_block(bld: _Builder, a: list[int], b: list[int]) -> list[int]:
    n = len(a)
    if n == 1:
        return [bld.and_(a[0], b[0])]
    if n == 2:
        return _ka2_cell(bld, a, b)
    ae, ao = a[0::2], a[1::2]
    be, bo = b[0::2], b[1::2]
    e = _oka_block(bld, ae, be)
    o = _oka_block(bld, ao, bo)
    sa = [bld.xor(x, y) for x, y in zip(ae, ao)]
    sb = [bld.xor(x, y) for x, y in zip(be, bo)]
    p = _oka_block(bld, sa, sb)
    c = [0] * (2 * n - 1)
    # odd coefficients never overlap; e ^ o settles while p is still in its pre-add
    for j, (ev, ov, pv) in enumerate(zip(e, o, p)):
        c[2 * j + 1] = bld.xor(pv, bld.xor(ev, ov))
    c[0] = e[0]
    c[2 * n - 2] = o[-1]
    for j in range(1, n - 1):
        c[2 * j] = bld.xor(e[j], o[j - 1])
    return c


def _hybrid_block(bld: _Builder, a: list[int], b: list[int], threshold: int) -> list[int]:
    n = len(a)
    if n <= threshold:
        return _cm_block(bld, a, b)
    h = (n + 1) // 2
    pad = [0] * (2 * h - n)
    al, ah = a[:h], a[h:] + pad
    bl, bh = b[:h], b[h:] + pad
    m0 = _hybrid_block(bld, al, bl, threshold)
    m1 = _hybrid_block(bld, ah, bh, threshold)
    sa = [bld.xor(x, y) for x, y in zip(al, ah)]
    sb = [bld.xor(x, y) for x, y in zip(bl, bh)]
    p = _hybrid_block(bld, sa, sb, threshold)
    return _karatsuba_combine(bld, m0, m1, p, h, 2 * n - 1)


def _require_pow2(n: int) -> None:
    if n < 2 or n & (n - 1):
        raise NotPowerOfTwo(f"width {n} is not a power of two >= 2")


def _build(name: str, n: int, block, *extra) -> Netlist:
    bld = _Builder(n, n)
    out = block(bld, bld.a, bld.b, *extra)
    bld.regions["multiplier"] = (0, len(bld.kinds))
    return bld.finish(name, out)


def build_cm(n: int) -> Netlist:
    if n < 1:
        raise ValueError(f"width must be positive, got {n}")
    return _build(f"cm{n}", n, _cm_block)


def build_km(n: int) -> Netlist:
    _require_pow2(n)
    return _build(f"km{n}", n, _km_block)


def build_oka(n: int) -> Netlist:
    _require_pow2(n)
    return _build(f"oka{n}", n, _oka_block)


def build_hybrid(m: int, threshold: int) -> Netlist:
    if threshold < 2:
        raise InvalidThreshold(f"threshold must be >= 2, got {threshold}")
    if m < 2:
        raise ValueError(f"width must be >= 2, got {m}")
    return _build(f"hybrid{m}_{threshold}", m, _hybrid_block, threshold)


def build_multiplier(strategy: MulStrategy, n: int) -> Netlist:
    if strategy.kind == "cm":
        return build_cm(n)
    if strategy.kind == "km":
        return build_km(n)
    if strategy.kind == "oka":
        return build_oka(n)
    return build_hybrid(n, strategy.threshold)


def reduction_sources(params: FieldParams) -> list[list[int]]:
    """For each output bit i < m, the product positions j whose x^j mod p has bit i set."""
    m = params.m
    sources: list[list[int]] = [[] for _ in range(m)]
    r = params.r.value
    x = 1
    for j in range(2 * m - 1):
        for i in range(m):
            if (x >> i) & 1:
                sources[i].append(j)
        x <<= 1
        if x >> m:
            x ^= (1 << m) ^ r
    return sources


def build_modmul(params: FieldParams, strategy: MulStrategy) -> Netlist:
    m = params.m
    bld = _Builder(m, m)
    if strategy.kind == "cm":
        product = _cm_block(bld, bld.a, bld.b)
    elif strategy.kind == "hybrid":
        product = _hybrid_block(bld, bld.a, bld.b, strategy.threshold)
    else:
        _require_pow2(m)
        block = _km_block if strategy.kind == "km" else _oka_block
        product = block(bld, bld.a, bld.b)
    split = len(bld.kinds)
    bld.regions["multiplier"] = (0, split)
    out = [bld.xor_tree([product[j] for j in src]) for src in reduction_sources(params)]
    bld.regions["reduction"] = (split, len(bld.kinds))
    return bld.finish(f"modmul_{params.name}_{strategy}", out)


# -- analysis ------------------------------------------------------------------


def audit(net: Netlist) -> None:
    """Raise ``ValueError`` unless every reference points strictly backwards."""
    base = net.first_gate
    for g, (x, y) in enumerate(zip(net.in0, net.in1)):
        if not (0 <= x < base + g and 0 <= y < base + g):
            raise ValueError(f"gate g{g} references a later or unknown node")
    limit = base + len(net.kinds)
    for o in net.outputs:
        if not 0 <= o < limit:
            raise ValueError(f"output references unknown node {o}")


def stats(net: Netlist, region: str | None = None) -> NetlistStats:
    """Gate tallies (optionally within one region) and longest-path depths per kind.

    Depths run from the input pins: to the outputs for the whole netlist, or to
    the deepest gate inside ``region`` when one is named.
    """
    base = net.first_gate
    size = base + len(net.kinds)
    da = [0] * size
    dx = [0] * size
    for g, (kind, x, y) in enumerate(zip(net.kinds, net.in0, net.in1)):
        node = base + g
        da[node] = max(da[x], da[y]) + (kind == AND)
        dx[node] = max(dx[x], dx[y]) + (kind == XOR)
    if region:
        lo, hi = net.regions[region]
        ends = range(base + lo, base + hi)
    else:
        lo, hi = 0, len(net.kinds)
        ends = net.outputs
    kinds = net.kinds[lo:hi]
    n_and = sum(1 for k in kinds if k == AND)
    return NetlistStats(
        n_and,
        len(kinds) - n_and,
        max((da[o] for o in ends), default=0),
        max((dx[o] for o in ends), default=0),
    )


def _evaluate(net: Netlist, a_rows: list[int], b_rows: list[int]) -> list[int]:
    vals = [0, *a_rows, *b_rows]
    append = vals.append
    for kind, x, y in zip(net.kinds, net.in0, net.in1):
        append(vals[x] & vals[y] if kind == AND else vals[x] ^ vals[y])
    return [vals[o] for o in net.outputs]


def _check_inputs(net: Netlist, a: int, b: int) -> None:
    if a >> net.width_a or b >> net.width_b:
        raise WidthMismatch(
            f"inputs exceed declared widths a{net.width_a}/b{net.width_b}"
        )


def simulate(net: Netlist, a: PolyLike, b: PolyLike) -> int:
    """Output bits (as an int, bit i = output i) for one input vector."""
    av, bv = _as_int(a), _as_int(b)
    _check_inputs(net, av, bv)
    rows = _evaluate(
        net,
        [(av >> i) & 1 for i in range(net.width_a)],
        [(bv >> i) & 1 for i in range(net.width_b)],
    )
    return sum(1 << i for i, v in enumerate(rows) if v)


def simulate_many(net: Netlist, a_values: Sequence[PolyLike], b_values: Sequence[PolyLike]) -> list[int]:
    """Evaluate many vectors in one bit-parallel pass."""
    if len(a_values) != len(b_values):
        raise WidthMismatch("input batches differ in length")
    a_ints = [_as_int(v) for v in a_values]
    b_ints = [_as_int(v) for v in b_values]
    for av, bv in zip(a_ints, b_ints):
        _check_inputs(net, av, bv)
    if not a_ints:
        return []
    rows = _evaluate(net, to_slices(a_ints, net.width_a), to_slices(b_ints, net.width_b))
    return from_slices(rows, len(a_ints))


# -- text format ---------------------------------------------------------------


def write_netlist(net: Netlist) -> str:
    lines = [
        f"# netlist {net.name}",
        f"inputs a {net.width_a} b {net.width_b}",
        f"outputs {len(net.outputs)}",
    ]
    for rname, (lo, hi) in net.regions.items():
        lines.append(f"region {rname} {lo} {hi}")
    for g, (kind, x, y) in enumerate(zip(net.kinds, net.in0, net.in1)):
        lines.append(f"g{g} = {_KIND_NAMES[kind]} {net.ref_name(x)} {net.ref_name(y)}")
    for i, o in enumerate(net.outputs):
        lines.append(f"c{i} = {net.ref_name(o)}")
    return "\n".join(lines) + "\n"


def read_netlist(text: str) -> Netlist:
    name = "netlist"
    na = nb = None
    regions: dict[str, tuple[int, int]] = {}
    kinds: list[int] = []
    in0: list[int] = []
    in1: list[int] = []
    outputs: dict[int, int] = {}

    def ref(tok: str) -> int:
        if tok == "zero":
            return 0
        idx = int(tok[1:])
        if tok[0] == "a" and idx < na:
            return 1 + idx
        if tok[0] == "b" and idx < nb:
            return 1 + na + idx
        if tok[0] == "g":
            return 1 + na + nb + idx
        raise ValueError(f"bad reference {tok!r}")

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.startswith("# netlist "):
                name = line[len("# netlist ") :]
            continue
        parts = line.split()
        try:
            if parts[0] == "inputs":
                na, nb = int(parts[2]), int(parts[4])
            elif parts[0] == "outputs":
                pass
            elif parts[0] == "region":
                regions[parts[1]] = (int(parts[2]), int(parts[3]))
            elif parts[0].startswith("g"):
                if int(parts[0][1:]) != len(kinds):
                    raise ValueError("gates out of order")
                kinds.append(_KIND_NAMES.index(parts[2]))
                in0.append(ref(parts[3]))
                in1.append(ref(parts[4]))
            elif parts[0].startswith("c"):
                outputs[int(parts[0][1:])] = ref(parts[2])
            else:
                raise ValueError("unrecognised line")
        except (IndexError, ValueError, TypeError) as exc:
            raise ValueError(f"line {lineno}: {exc}: {raw!r}") from None
    if na is None:
        raise ValueError("missing 'inputs' header")
    net = Netlist(
        name, na, nb, tuple(kinds), tuple(in0), tuple(in1),
        tuple(outputs[i] for i in range(len(outputs))), regions,
    )
    audit(net)
    return net


def stats_json(items: dict[str, NetlistStats]) -> str:
    return json.dumps({k: v.as_dict() for k, v in items.items()}, indent=2)
