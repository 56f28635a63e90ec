"""Command-line entry point: ``cmbound <command> [options]``.

Every command writes JSON with sorted keys (or a plain table with
``--format table``) and records the seed it ran with. Exit codes: 0 ok,
2 bad input or inadmissible field, 3 computation cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from cmbound import bounds, density, ffcurves, gimage
from cmbound.errors import CapExceeded, InadmissibleField
from cmbound.numfield import (
    Cyclotomic,
    Quadratic,
    SplittingData,
    normalize,
    parse_descriptor,
    splitting_of_5,
)

EXIT_OK, EXIT_INPUT, EXIT_CAP = 0, 2, 3
DEFAULT_SEED = 0
REPORT_QUADRATIC = (1, 2, 5)
REPORT_CYCLO_MAX = 50
REPORT_DEGREES = (2, 4, 6, 8)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse already exits 2; keep the message on stderr
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace(";", ",").split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from exc


def _efr(text: str) -> SplittingData:
    vals = _int_list(text)
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("--efr expects e,f,r")
    try:
        return SplittingData(*vals)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


# --- output --------------------------------------------------------------------------


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def _flatten(obj, prefix: str = "") -> list[tuple[str, str]]:
    if isinstance(obj, dict):
        rows = []
        for k in sorted(obj):
            rows += _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
        return rows
    if isinstance(obj, list) and obj and isinstance(obj[0], dict):
        rows = []
        for i, v in enumerate(obj):
            rows += _flatten(v, f"{prefix}[{i}]")
        return rows
    return [(prefix, json.dumps(obj) if isinstance(obj, (list, type(None), bool)) else str(obj))]


def render_table(obj) -> str:
    rows = _flatten(obj)
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def _emit(args, records: Sequence[dict], text: Optional[str] = None) -> None:
    if args.format == "table":
        body = text if text is not None else "\n\n".join(render_table(r) for r in records)
    else:
        body = "\n".join(dumps(r) for r in records)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(body + "\n")
    else:
        sys.stdout.write(body + "\n")


def _wrap(args, result) -> dict:
    return {"command": args.command, "seed": args.seed, "result": result}


# --- commands ------------------------------------------------------------------------


def _bound_record(d) -> dict:
    d = normalize(d)
    s = splitting_of_5(d)
    res = bounds.lower_bound(s)
    out = res.to_dict()
    out.update(field=str(d), degree=d.degree, formula=res.formula())
    return out


def cmd_bound(args) -> list[dict]:
    if args.field is not None:
        rec = _bound_record(parse_descriptor(args.field))
    elif args.efr is not None:
        res = bounds.lower_bound(args.efr)
        rec = res.to_dict()
        rec["formula"] = res.formula()
    else:
        res = bounds.generic_bound(args.degree)
        rec = res.to_dict()
        rec.update(formula=res.formula(), degree=args.degree)
    return [_wrap(args, rec)]


def cmd_census(args) -> list[dict]:
    res = ffcurves.census(args.f).to_dict()
    res["f"] = args.f
    if args.f <= ffcurves.TRACE_CHECK_MAX_F:
        tc = ffcurves.trace_cross_check(args.f)
        res["trace_check"] = {"checked": tc.checked, "mismatches": tc.mismatches,
                              "hasse_violations": tc.hasse_violations}
    else:
        res["trace_check"] = None
    return [_wrap(args, res)]


def cmd_density(args) -> list[dict]:
    d = parse_descriptor(args.field)
    if args.mode == "exact":
        rep = density.ordinary_density_exact(d, args.X)
    else:
        rep = density.montecarlo_density(d, args.X, args.samples, args.seed)
    return [_wrap(args, rep.to_dict())]


def _split_coords(d, coords: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    n = d.degree
    if len(coords) != 2 * n:
        raise ValueError(f"{d} needs {2 * n} coordinates (A then B), got {len(coords)}")
    return tuple(coords[:n]), tuple(coords[n:])


def read_batch(path: str) -> list[tuple[int, str, tuple[int, ...]]]:
    """Rows ``field;A coords;B coords``; blank lines and ``#`` comments are skipped."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for i, row in enumerate(csv.reader(fh, delimiter=";")):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if row[0].strip().lower() == "field":
                continue  # header
            rows.append((i, row[0].strip(), tuple(int(c) for c in row[1:] if c.strip())))
    return rows


def _curve_from_args(args):
    if args.field is None or args.A is None or args.B is None:
        raise ValueError("give --input, or --field with --A and --B")
    return parse_descriptor(args.field), (args.A, args.B)


def cmd_image_scan(args) -> list[dict]:
    if args.heights is not None:
        d = parse_descriptor(args.field) if args.field else None
        if d is None:
            raise ValueError("--heights needs --field")
        rows = gimage.scan_heights(d, args.heights, args.samples, args.seed, args.L,
                                   force_cm=args.force_cm)
        return [_wrap(args, {"field": str(d), "L": args.L, "rows": [r.to_dict() for r in rows]})]
    if args.input:
        jobs = []
        for row_idx, text, coords in read_batch(args.input):
            d = parse_descriptor(text)
            jobs.append((row_idx, d, _split_coords(d, coords)))
    else:
        d, pair = _curve_from_args(args)
        jobs = [(0, d, pair)]
    out = []
    for row_idx, d, pair in jobs:
        if args.checklist:
            rec = gimage.checklist(d, pair, args.L).to_dict()
        else:
            rec = gimage.certify_sl2(d, pair, args.L).to_dict()
        rec.update(row=row_idx, seed=args.seed)
        out.append(rec)
    return out


def cmd_dg_find(args) -> list[dict]:
    d, pair = _curve_from_args(args)
    l = gimage.dg_find(d, pair, args.Lmax)
    rec = {"field": str(d), "curve": gimage.curve_id(*pair), "Lmax": args.Lmax, "l": l,
           "verified": None if l is None else gimage.verify_dg_prime(d, pair, l)}
    if l is not None:
        rec["traces"] = [s.a for s in gimage.frob_traces(d, pair, l)]
    return [_wrap(args, rec)]


def cmd_threshold(args) -> list[dict]:
    res = bounds.threshold(args.eps, args.scan_max)
    rec = res.to_dict()
    rec["level"] = str(res.level)
    rec["eps"] = str(Fraction(args.eps))
    rec["envelope_N"] = bounds.envelope(res.N)
    rec["envelope_N_minus_1"] = bounds.envelope(res.N - 1) if res.N > 2 else None
    return [_wrap(args, rec)]


_KIND = {(1, 1, 2): "split", (1, 2, 1): "inert", (2, 1, 1): "ramified"}


def report_data() -> dict:
    quad = []
    for m in REPORT_QUADRATIC:
        rec = _bound_record(Quadratic(m))
        rec["kind"] = _KIND[(rec["e"], rec["f"], rec["r"])]
        quad.append(rec)
    cyc = []
    for n in range(3, REPORT_CYCLO_MAX + 1):
        if n % 4 == 2 or n % 5 == 0:
            continue
        rec = _bound_record(Cyclotomic(n))
        rec["n"] = n
        rec["envelope"] = bounds.envelope(n)
        cyc.append(rec)
    gen = []
    for deg in REPORT_DEGREES:
        res = bounds.generic_bound(deg)
        rec = res.to_dict()
        rec.update(degree=deg, formula=res.formula())
        gen.append(rec)
    return {"quadratic": quad, "cyclotomic": cyc, "generic": gen}


def report_table(data: dict) -> str:
    lines = ["Quadratic fields Q(sqrt-m)",
             f"{'field':<12} {'e,f,r':<7} {'bound':<28} exact"]
    for r in data["quadratic"]:
        efr = f"{r['e']},{r['f']},{r['r']}"
        lines.append(f"{r['field']:<12} {efr:<7} "
                     f"{r['kind'] + ', ' + r['formula'] + ' = ' + r['decimal']:<28} {r['exact']}")
    lines += ["", "Cyclotomic fields Q(zeta n), n <= %d, 5 not dividing n" % REPORT_CYCLO_MAX,
              f"{'field':<12} {'deg':>3} {'e,f,r':<8} {'bound':<16} {'envelope':<16} formula"]
    for r in data["cyclotomic"]:
        efr = f"{r['e']},{r['f']},{r['r']}"
        lines.append(f"{r['field']:<12} {r['degree']:>3} {efr:<8} {r['decimal']:<16} "
                     f"{r['envelope']:<16.12g} {r['formula']}")
    lines += ["", "Generic bound (4/5)^(2 deg)", f"{'deg':>3}  {'bound':<16} exact"]
    for r in data["generic"]:
        lines.append(f"{r['degree']:>3}  {r['decimal']:<16} {r['exact']}")
    return "\n".join(lines)


def cmd_report(args) -> list[dict]:
    return [_wrap(args, report_data())]


# --- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default=None)
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = _Parser(prog="cmbound", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bound", parents=[common], help="lower bound (1 - 5^-f)^(2r)")
    g = b.add_mutually_exclusive_group(required=True)
    g.add_argument("--field")
    g.add_argument("--efr", type=_efr, help="e,f,r")
    g.add_argument("--degree", type=int, help="generic bound for [K:Q] = degree")
    b.set_defaults(func=cmd_bound)

    c = sub.add_parser("census", parents=[common], help="pairs over F_{5^f} by reduction type")
    c.add_argument("--f", type=int, required=True)
    c.set_defaults(func=cmd_census)

    dn = sub.add_parser("density", parents=[common], help="residue-criterion density")
    dn.add_argument("--field", required=True)
    dn.add_argument("--X", type=_rational, required=True)
    dn.add_argument("--mode", choices=("exact", "mc"), default="exact")
    dn.add_argument("--samples", type=int, default=10**6)
    dn.set_defaults(func=cmd_density)

    im = sub.add_parser("image-scan", parents=[common], help="certify mod-5 images")
    im.add_argument("--input", help="CSV with rows field;A coords;B coords")
    im.add_argument("--field")
    im.add_argument("--A", type=_int_list)
    im.add_argument("--B", type=_int_list)
    im.add_argument("--L", type=int, default=gimage.DEFAULT_L)
    im.add_argument("--checklist", action="store_true", help="full hypothesis checklist")
    im.add_argument("--heights", type=lambda s: [_rational(t) for t in s.split(",")],
                    help="comma-separated X values for a height scan")
    im.add_argument("--samples", type=int, default=100)
    im.add_argument("--force-cm", action="store_true", help="height scan with B = 0")
    im.set_defaults(func=cmd_image_scan)

    dg = sub.add_parser("dg-find", parents=[common], help="smallest decomposed generic prime")
    dg.add_argument("--field", required=True)
    dg.add_argument("--A", type=_int_list, required=True)
    dg.add_argument("--B", type=_int_list, required=True)
    dg.add_argument("--Lmax", type=int, default=gimage.DEFAULT_L)
    dg.set_defaults(func=cmd_dg_find)

    t = sub.add_parser("threshold", parents=[common], help="envelope threshold N(eps)")
    t.add_argument("--eps", type=_rational, required=True)
    t.add_argument("--scan-max", type=int, default=10**5)
    t.set_defaults(func=cmd_threshold)

    r = sub.add_parser("report", parents=[common], help="corollary table")
    r.set_defaults(func=cmd_report)
    return p


def main(argv: Optional[Iterable[str]] = None) -> int:
    args = build_parser().parse_args(None if argv is None else list(argv))
    if args.format is None:
        args.format = "table" if args.command == "report" else "json"
    try:
        records = args.func(args)
    except CapExceeded as exc:
        print(f"cmbound: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InadmissibleField as exc:
        print(f"cmbound: inadmissible field: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, TypeError, OSError) as exc:
        print(f"cmbound: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = None
    if args.command == "report" and args.format == "table":
        text = f"seed: {args.seed}\n" + report_table(records[0]["result"])
    _emit(args, records, text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
