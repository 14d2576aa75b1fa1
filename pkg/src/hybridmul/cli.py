"""Command-line front end.

Exit status: 0 on success, 1 when a verification finds a mismatch, 2 on bad
flags or input.  ``HYBRIDMUL_FORMAT`` (table, json or csv) sets the default
``--format``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import statistics
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from . import netlist as nl
from .cost_model import (
    CostRow,
    cost_cm,
    cost_hybrid,
    cost_km,
    cost_oka,
    estimate,
    is_pow2,
    max_levels,
    optimal_threshold,
    rows_to_csv,
    rows_to_json,
)
from .errors import GF2Error
from .field_core import CURVES, REGISTRY, BitPoly, FieldParams, clmul_oracle_many, field_mul_oracle, nist_params
from .multipliers import DEFAULT_THRESHOLDS, MulStrategy, multiply
from .reduction import REDUCTIONS, default_strategy, modmul
from .verify import run_suites, shrink_pair

FORMATS = ("table", "json", "csv")
FORMAT_ENV = "HYBRIDMUL_FORMAT"


class UsageError(Exception):
    pass


def _default_format() -> str:
    fmt = os.environ.get(FORMAT_ENV, "table").strip().lower()
    if fmt not in FORMATS:
        raise UsageError(f"{FORMAT_ENV}={fmt!r} is not one of {', '.join(FORMATS)}")
    return fmt


def _hex(text: str) -> BitPoly:
    return BitPoly.from_hex(text)


def _weights(text: str) -> tuple[float, float]:
    try:
        a, x = (float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}") from None
    return a, x


def _emit(text: str, out) -> None:
    out.write(text if text.endswith("\n") else text + "\n")


def _dicts_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    names: list[str] = []
    for r in rows:
        names += [k for k in r if k not in names]
    writer = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


# -- mul / modmul -------------------------------------------------------------


def cmd_mul(args, out) -> int:
    strategy = MulStrategy.parse(args.strategy, args.n)
    _emit(multiply(_hex(args.a), _hex(args.b), args.n, strategy).hex(), out)
    return 0


def cmd_modmul(args, out) -> int:
    params = nist_params(args.field)
    strategy = MulStrategy.parse(args.strategy, params.m) if args.strategy else None
    _emit(modmul(_hex(args.a), _hex(args.b), params, strategy, args.reduction).hex(), out)
    return 0


# -- estimate -----------------------------------------------------------------


def _row_line(r: CostRow, mark: str = "") -> str:
    k = "" if r.k is None else f" k={r.k} leaf={r.leaf}"
    alt = "" if r.delay_tx_alt is None else f" (alt {r.delay_tx_alt}Tx)"
    return (
        f"{mark}{r.scheme} m={r.m}{k} and={r.and_count} xor={r.xor_count} "
        f"delay={r.delay_ta}Ta+{r.delay_tx}Tx{alt} adp={r.adp:g}"
    )


def cmd_estimate(args, out) -> int:
    fmt = args.format or _default_format()
    weights = dict(area_weights=args.area_weights, delay_weights=args.delay_weights)
    if args.scan_thresholds:
        if args.scheme not in (None, "hybrid"):
            raise UsageError("--scan-thresholds scans the hybrid scheme only")
        scan = optimal_threshold(args.m, **weights)
        if args.plot:
            from .plotting import plot_scans

            plot_scans([scan], args.plot, {args.m: DEFAULT_THRESHOLDS[args.m]} if args.m in DEFAULT_THRESHOLDS else None)
        if fmt == "json":
            _emit(json.dumps({"m": scan.m, "best_k": scan.best_k, "best_leaf": scan.best_leaf,
                              "rows": [r.as_dict() for r in scan.rows]}, indent=2), out)
        elif fmt == "csv":
            _emit(rows_to_csv(scan.rows), out)
        else:
            for r in scan.rows:
                _emit(_row_line(r, "* " if r.k == scan.best_k else "  "), out)
            _emit(f"best k={scan.best_k} leaf={scan.best_leaf}", out)
        return 0
    if args.plot:
        raise UsageError("--plot needs --scan-thresholds")
    if args.scheme:
        schemes = [args.scheme]
    else:
        schemes = ["cm"] + (["km", "oka"] if args.m >= 2 and is_pow2(args.m) else [])
        schemes += ["hybrid"] if args.m >= 4 else []
    rows = [estimate(s, args.m, args.k if s == "hybrid" else None, **weights) for s in schemes]
    if fmt == "json":
        _emit(rows_to_json(rows), out)
    elif fmt == "csv":
        _emit(rows_to_csv(rows), out)
    else:
        for r in rows:
            _emit(_row_line(r), out)
    return 0


# -- netlist ------------------------------------------------------------------


def hybrid_levels(m: int, threshold: int) -> int:
    """KM levels the hybrid recursion takes before every leaf fits ``threshold``."""
    k = 0
    while -(-m // (1 << k)) > threshold:
        k += 1
    return k


def _model_for(kind: str, n: int, threshold: int | None):
    if kind == "cm":
        return cost_cm(n)
    if kind in ("km", "oka"):
        return (cost_km if kind == "km" else cost_oka)(n) if is_pow2(n) and n >= 2 else None
    k = hybrid_levels(n, threshold)
    return cost_hybrid(n, k) if n >= 2 and k <= max_levels(n) else None


def _build(args):
    """Returns (netlist, strategy, width, field or None)."""
    if args.build == "modmul":
        if not args.field:
            raise UsageError("--build modmul needs --field")
        params = nist_params(args.field)
        strategy = MulStrategy.parse(args.strategy, params.m) if args.strategy else default_strategy(params)
        return nl.build_modmul(params, strategy), strategy, params.m, params
    if args.n is None:
        raise UsageError(f"--build {args.build} needs --n")
    if args.build == "hybrid":
        thr = args.threshold
        strategy = MulStrategy("hybrid", thr) if thr is not None else MulStrategy.hybrid_for(args.n)
    else:
        if args.threshold is not None:
            raise UsageError("--threshold only applies to --build hybrid")
        strategy = MulStrategy(args.build)
    return nl.build_multiplier(strategy, args.n), strategy, args.n, None


_STAT_FIELDS = ("and_count", "xor_count", "depth_and", "depth_xor")


def _stats_rows(net, strategy, n, params) -> list[dict]:
    region = "multiplier" if params is not None else None
    got = nl.stats(net, region)
    rows = [{"source": "netlist" if region is None else region, **got.as_dict()}]
    cost = _model_for(strategy.kind, n, strategy.threshold)
    if cost is not None:
        model = {"and_count": cost.and_count, "xor_count": cost.xor_count,
                 "depth_and": cost.delay_ta, "depth_xor": cost.delay_tx}
        rows.append({"source": "model", **model})
        rows.append({"source": "diff", **{k: rows[0][k] - model[k] for k in _STAT_FIELDS}})
    if params is not None:
        red = nl.stats(net, "reduction")
        rows.append({"source": "reduction", **red.as_dict()})
        rows.append({"source": "total", **nl.stats(net).as_dict()})
    return rows


def _verify_netlist(net, n, params, trials, seed, out) -> int:
    rng = random.Random(seed)
    if params is None and n <= 4:
        pairs = [(a, b) for a in range(1 << n) for b in range(1 << n)]
    else:
        pairs = [(rng.getrandbits(n), rng.getrandbits(n)) for _ in range(trials)]
    av = [p[0] for p in pairs]
    bv = [p[1] for p in pairs]
    got = nl.simulate_many(net, av, bv)
    if params is None:
        want = clmul_oracle_many(av, bv)
        ref = lambda x, y: clmul_oracle_many([x], [y])[0]  # noqa: E731
    else:
        want = [field_mul_oracle(a, b, params).value for a, b in pairs]
        ref = lambda x, y: field_mul_oracle(x, y, params).value  # noqa: E731
    for a, b, g, w in zip(av, bv, got, want):
        if g != w:
            a, b = shrink_pair(a, b, lambda x, y: nl.simulate(net, x, y) != ref(x, y))
            _emit(f"MISMATCH {net.name}: a={a:x} b={b:x} netlist={nl.simulate(net, a, b):x} "
                  f"expected={ref(a, b):x}", out)
            return 1
    _emit(f"verified {net.name}: {len(pairs)} vectors ok", out)
    return 0


def cmd_netlist(args, out) -> int:
    fmt = args.format or _default_format()
    net, strategy, n, params = _build(args)
    acted = False
    if args.emit:
        text = nl.write_netlist(net)
        if args.emit == "-":
            out.write(text)
        else:
            Path(args.emit).write_text(text)
        acted = True
    if args.stats:
        rows = _stats_rows(net, strategy, n, params)
        if fmt == "json":
            _emit(json.dumps({r.pop("source"): r for r in rows}, indent=2), out)
        elif fmt == "csv":
            _emit(_dicts_to_csv(rows), out)
        else:
            for r in rows:
                _emit(f"{r['source']:<9} " + " ".join(
                    f"{k.replace('_count', '')}={r[k]}" for k in _STAT_FIELDS), out)
        acted = True
    status = 0
    if args.verify is not None:
        if args.verify < 1:
            raise UsageError("--verify needs a positive trial count")
        status = _verify_netlist(net, n, params, args.verify, args.seed, out)
        acted = True
    if not acted:
        out.write(nl.write_netlist(net))
    return status


# -- bench --------------------------------------------------------------------


@dataclass(frozen=True)
class BenchReport:
    scheme: str
    field: str
    width: int
    trials: int
    total_s: float
    ns_median: float
    ns_mean: float
    checksum: str

    def as_dict(self) -> dict:
        return asdict(self)


def run_bench(
    params: FieldParams,
    strategy: MulStrategy,
    trials: int,
    seed: int,
    reduction: str = "generic",
) -> BenchReport:
    """Time ``trials`` single modmuls on seeded operands; XOR-fold the outputs."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    ops = [(rng.getrandbits(params.m), rng.getrandbits(params.m)) for _ in range(trials)]
    times = []
    checksum = 0
    start = time.perf_counter()
    for a, b in ops:
        t0 = time.perf_counter_ns()
        c = modmul(a, b, params, strategy, reduction)
        times.append(max(1, time.perf_counter_ns() - t0))
        checksum ^= c.value
    total = max(time.perf_counter() - start, 1e-9)
    return BenchReport(
        str(strategy), params.name, params.m, trials, total,
        float(statistics.median(times)), float(statistics.fmean(times)), format(checksum, "x"),
    )


def cmd_bench(args, out) -> int:
    fmt = args.format or _default_format()
    params = nist_params(args.field)
    strategy = MulStrategy.parse(args.strategy, params.m) if args.strategy else default_strategy(params)
    rep = run_bench(params, strategy, args.trials, args.seed, args.reduction)
    if fmt == "json":
        _emit(json.dumps(rep.as_dict(), indent=2), out)
    elif fmt == "csv":
        _emit(_dicts_to_csv([rep.as_dict()]), out)
    else:
        _emit(" ".join(f"{k}={v}" for k, v in rep.as_dict().items()), out)
    return 0


# -- verify -------------------------------------------------------------------


def corrupt_registry(spec: str) -> dict[str, FieldParams]:
    """Copy of the registry with one modulus bit flipped; ``spec`` is NAME:BIT."""
    name, _, bit = spec.partition(":")
    base = nist_params(name)
    try:
        bit = int(bit)
    except ValueError:
        raise UsageError(f"bad corruption spec {spec!r}; expected NAME:BIT") from None
    if not 0 <= bit < base.m:
        raise UsageError(f"corruption bit must be in 0..{base.m - 1}")
    reg = dict(REGISTRY)
    reg[base.name] = FieldParams(base.name, base.m, base.p ^ (1 << bit))
    return reg


def cmd_verify(args, out) -> int:
    registry = corrupt_registry(args.corrupt_registry) if args.corrupt_registry else dict(REGISTRY)
    if args.fields:
        registry = {nist_params(f).name: registry[nist_params(f).name] for f in args.fields}
    results = run_suites(args.level, args.seed, registry)
    _emit(f"{'suite':<22} {'status':<6} {'checked':>9}  detail", out)
    for r in results:
        _emit(f"{r.name:<22} {'PASS' if r.passed else 'FAIL':<6} {r.checked:>9}  {r.detail}", out)
    failed = [r for r in results if not r.passed]
    for r in failed:
        if r.counterexample:
            _emit(f"counterexample ({r.name}): {r.counterexample}", out)
    return 1 if failed else 0


# -- report -------------------------------------------------------------------


def _comparison_rows() -> list[dict]:
    cases = [("cm", 16, None), ("cm", 64, None), ("km", 16, None), ("km", 64, None),
             ("oka", 16, None), ("oka", 64, None), ("hybrid", 163, 41), ("hybrid", 233, 59)]
    rows = []
    for kind, n, thr in cases:
        strategy = MulStrategy(kind, thr)
        got = nl.stats(nl.build_multiplier(strategy, n))
        cost = _model_for(kind, n, thr)
        rows.append({
            "label": f"{strategy}@{n}", "model_and": cost.and_count, "net_and": got.and_count,
            "model_xor": cost.xor_count, "net_xor": got.xor_count,
            "model_depth_xor": cost.delay_tx, "net_depth_xor": got.depth_xor,
        })
    return rows


def cmd_report(args, out) -> int:
    from .plotting import plot_model_vs_netlist, plot_scans

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    ms = [nist_params(f).m for f in args.fields]
    weights = dict(area_weights=args.area_weights, delay_weights=args.delay_weights)
    scans = [optimal_threshold(m, **weights) for m in ms]
    written = []
    scan_rows = [r for s in scans for r in s.rows]
    (outdir / "scan.csv").write_text(rows_to_csv(scan_rows))
    plot_scans(scans, outdir / "scan.png", {m: DEFAULT_THRESHOLDS[m] for m in ms if m in DEFAULT_THRESHOLDS})
    written += ["scan.csv", "scan.png"]
    comp = _comparison_rows()
    (outdir / "model_vs_netlist.csv").write_text(_dicts_to_csv(comp))
    plot_model_vs_netlist(comp, outdir / "model_vs_netlist.png")
    written += ["model_vs_netlist.csv", "model_vs_netlist.png"]
    for s in scans:
        _emit(f"m={s.m} best_k={s.best_k} best_leaf={s.best_leaf}", out)
    for name in written:
        _emit(str(outdir / name), out)
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hybridmul", description="GF(2^m) multipliers, cost model and netlists")
    sub = p.add_subparsers(dest="command", required=True)

    def fmt_flag(sp, choices=FORMATS):
        sp.add_argument("--format", choices=choices, help=f"output format (default ${FORMAT_ENV} or table)")

    def weight_flags(sp):
        sp.add_argument("--area-weights", type=_weights, default=(1.0, 1.0), metavar="AND,XOR")
        sp.add_argument("--delay-weights", type=_weights, default=(1.0, 1.0), metavar="TA,TX")

    sp = sub.add_parser("mul", help="carryless product of two width-n operands")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--strategy", default="cm", help="cm|km|oka|hybrid[:threshold]")
    sp.add_argument("--a", required=True, help="hex")
    sp.add_argument("--b", required=True, help="hex")
    sp.set_defaults(func=cmd_mul)

    sp = sub.add_parser("modmul", help="field product modulo a registry polynomial")
    sp.add_argument("--field", required=True, help=", ".join(REGISTRY))
    sp.add_argument("--strategy", help="default: preset hybrid for B-fields, cm otherwise")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--reduction", choices=REDUCTIONS, default="generic")
    sp.set_defaults(func=cmd_modmul)

    sp = sub.add_parser("estimate", help="closed-form gate counts and delays")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--scheme", choices=("cm", "km", "oka", "hybrid"))
    sp.add_argument("--k", type=int, help="hybrid KM levels (default 1)")
    sp.add_argument("--scan-thresholds", action="store_true")
    sp.add_argument("--plot", metavar="PATH", help="with --scan-thresholds, save the scan as an image")
    weight_flags(sp)
    fmt_flag(sp)
    sp.set_defaults(func=cmd_estimate)

    sp = sub.add_parser("netlist", help="build, emit, measure and simulate gate netlists")
    sp.add_argument("--build", required=True, choices=("cm", "km", "oka", "hybrid", "modmul"))
    sp.add_argument("--n", type=int)
    sp.add_argument("--threshold", type=int)
    sp.add_argument("--field")
    sp.add_argument("--strategy", help="multiplier inside --build modmul")
    sp.add_argument("--emit", metavar="PATH", help="write the netlist text ('-' for stdout)")
    sp.add_argument("--verify", type=int, metavar="TRIALS")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--stats", action="store_true")
    fmt_flag(sp)
    sp.set_defaults(func=cmd_netlist)

    sp = sub.add_parser("bench", help="time seeded modmuls")
    sp.add_argument("--field", required=True)
    sp.add_argument("--strategy")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--reduction", choices=REDUCTIONS, default="generic")
    fmt_flag(sp)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("verify", help="run the invariant suites")
    sp.add_argument("--level", choices=("quick", "full"), default="quick")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--fields", nargs="+", metavar="FIELD", help="restrict the field suites (default: whole registry)")
    sp.add_argument("--corrupt-registry", metavar="NAME:BIT", help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("report", help="write scan and model-vs-netlist CSVs and figures")
    sp.add_argument("--out", required=True, metavar="DIR")
    sp.add_argument("--fields", nargs="+", default=list(CURVES))
    weight_flags(sp)
    sp.set_defaults(func=cmd_report)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (GF2Error, ValueError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
