"""
Command-line entry point: ``edgedsc <command> [options]``.

Exit codes: 0 success, 1 usage error, 2 lossy decode or failed check,
3 internal error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import sys
from fractions import Fraction

from . import selftest
from .codec import compress_all, decode, encode_payload, pair_decode_detail
from .codes import LinearBlockCode, code_from_spec, gray_encode
from .errors import UndecodableSyndrome, UsageError
from .gf2 import BitBlock
from .metrics import (
    css_empirical,
    css_of_scheme,
    css_surface,
    ldr_probe,
    ldr_success_fraction,
)
from .netsim import (
    CorrelationModel,
    generate_trace,
    parse_events,
    run_churn,
    run_simulation,
    run_tamper_trials,
)
from .schemes import build_dg, build_fg

EXIT_OK, EXIT_USAGE, EXIT_LOSSY, EXIT_INTERNAL = 0, 1, 2, 3

# fallback values for options that are neither on the command line nor in --config
DEFAULTS = {
    "code": None,
    "scheme": None,
    "nodes": None,
    "g1": None,
    "g2": None,
    "r1": None,
    "split": 0.5,
    "seed": 0,
    "out": None,
    "format": "table",
    "mode": None,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _global_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--code", help="hamming:<order> or file:<parity-check file>")
    g.add_argument("--scheme", choices=["dg", "fg"], help="partitioning scheme")
    g.add_argument("--nodes", type=int, help="number of nodes")
    g.add_argument("--g1", type=int, help="FG: nodes in group 1")
    g.add_argument("--g2", type=int, help="FG: nodes in group 2")
    g.add_argument("--r1", type=int, help="FG: rows owned by group 1 (default k//2)")
    g.add_argument("--split", type=float, help="FG: target fraction of nodes in group 1 (default 0.5)")
    g.add_argument("--seed", type=int, help="PRNG seed (default 0)")
    g.add_argument("--out", help="output file")
    g.add_argument("--format", choices=["table", "csv", "json"], help="output format")
    g.add_argument("--config", help="JSON file supplying option values; flags win")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _global_options()
    parser = _Parser(prog="edgedsc", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("css", parents=[common], help="closed-form and measured CSS")
    p.add_argument("--compare", action="store_true", help="DG vs FG balanced vs FG max")
    p.add_argument("--empirical", action="store_true", help="also measure CSS on a seeded trace")
    p.add_argument("--steps", type=int, default=100, help="trace length for --empirical")

    p = sub.add_parser("heatmap", parents=[common], help="FG CSS over all group splits (CSV)")

    p = sub.add_parser("roundtrip", parents=[common], help="compress and decode given readings")
    p.add_argument("--values", required=True, help="comma-separated node readings")
    p.add_argument("--encoding", choices=["binary", "gray"], default="binary",
                   help="render readings as plain binary (default) or Gray code")
    p.add_argument("--mode", choices=["single", "vote"], help="FG decode mode (default single)")

    p = sub.add_parser("ldr", parents=[common], help="probe the lossless decoding range")
    p.add_argument("--max-offset", type=int, default=4)
    p.add_argument("--exhaustive-limit", type=int, default=10,
                   help="enumerate every base value up to this width")
    p.add_argument("--samples", type=int, default=2000, help="bases sampled beyond the limit")
    p.add_argument("--mode", choices=["single", "vote"])

    p = sub.add_parser("simulate", parents=[common], help="end-to-end trace simulation")
    p.add_argument("--window", type=int, default=1)
    p.add_argument("--drift", type=int, default=1)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--mode", choices=["single", "vote"])
    p.add_argument("--trace-out", help="write the generated trace as CSV")

    p = sub.add_parser("churn", parents=[common], help="join/leave management cost")
    p.add_argument("--scheme-kind", choices=["dg", "fg", "both"], default="both")
    p.add_argument("--events", default="joins:5", help='e.g. "joins:10,leaves:5"')

    p = sub.add_parser("tamper", parents=[common], help="vote robustness under payload tampering")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--flips", default="1-3", help="bits flipped per tampered payload, e.g. 1-3")
    p.add_argument("--tampered", type=int, default=1, help="number of tampered nodes")
    p.add_argument("--window", type=int, default=1)
    p.add_argument("--mode", choices=["single", "vote"])

    p = sub.add_parser("selftest", parents=[common], help="exhaustive built-in checks")
    return parser


def _subparser(parser: argparse.ArgumentParser, command: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise KeyError(command)


def _parse(parser: argparse.ArgumentParser, argv) -> argparse.Namespace:
    """Parse ``argv``; values from ``--config`` become defaults so flags win."""
    args = parser.parse_args(argv)
    if args.config:
        with open(args.config) as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise UsageError("config file must hold a JSON object")
        cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
        if cfg.pop("command", args.command) != args.command:
            raise UsageError(f"config file is not for the {args.command!r} command")
        sub = _subparser(parser, args.command)
        known = {a.dest for a in sub._actions} - {"help", "config"}
        unknown = set(cfg) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        sub.set_defaults(**cfg)
        args = parser.parse_args(argv)
    for key, value in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    return args


@contextlib.contextmanager
def _output(path):
    if path:
        with open(path, "w", newline="") as fh:
            yield fh
    else:
        yield sys.stdout


def _pct(x: Fraction) -> str:
    return f"{100 * float(x):.2f}%"


def _make_scheme(args, code: LinearBlockCode, default_kind: str = "dg"):
    kind = args.scheme or default_kind
    N = args.nodes
    if N is None:
        N = (args.g1 + args.g2) if (args.g1 and args.g2) else 2
    if kind == "dg":
        return build_dg(code, N)
    sizes = None
    if args.g1 is not None or args.g2 is not None:
        g1 = args.g1 if args.g1 is not None else N - args.g2
        sizes = (g1, N - g1)
    return build_fg(code, N, args.split, args.r1, group_sizes=sizes)


def _framed_bits(scheme) -> int:
    total = 0
    for part in scheme.partitions:
        body = scheme.code.n - part.a
        total += 48 + 8 * ((body + 7) // 8)
    return total


def cmd_css(args) -> int:
    code = code_from_spec(args.code or "hamming:3")
    N = args.nodes if args.nodes is not None else 4
    rows = []

    def add(label, scheme):
        closed = css_of_scheme(scheme)
        row = {
            "scheme": label,
            "css": closed,
            "exact": f"{closed * scheme.N * code.n}/{scheme.N * code.n}",
            "css_framed": css_empirical(scheme.N * code.n, _framed_bits(scheme)),
        }
        if args.empirical:
            trace = generate_trace(CorrelationModel(code.n, 1, 1, args.seed), scheme.N, args.steps)
            rep = run_simulation(scheme, trace, "vote" if scheme.kind == "dg" else "single")
            row["empirical"] = rep.empirical_css
        rows.append(row)

    if args.compare or args.scheme is None:
        add("DG", build_dg(code, N))
        if N >= 2:
            add("FG balanced", build_fg(code, N, r_g1=code.k // 2, group_sizes=(N // 2, N - N // 2)))
            add("FG max", build_fg(code, N, r_g1=0, group_sizes=(1, N - 1)))
        dg = rows[0]["css"]
        for r in rows:
            r["ratio"] = r["css"] / dg
    else:
        args.nodes = N
        add(args.scheme.upper(), _make_scheme(args, code))

    with _output(args.out) as fh:
        if args.format == "json":
            out = []
            for r in rows:
                d = {k: (f"{float(v):.6f}" if isinstance(v, Fraction) else v) for k, v in r.items()}
                out.append(d)
            json.dump({"code": str(code), "nodes": N, "rows": out}, fh, indent=2)
            fh.write("\n")
        elif args.format == "csv":
            w = csv.writer(fh, lineterminator="\n")
            keys = list(rows[0])
            w.writerow(keys)
            for r in rows:
                w.writerow([f"{float(v):.4f}" if isinstance(v, Fraction) else v for v in r.values()])
        else:
            print(f"{code}, N={N}", file=fh)
            for r in rows:
                line = f"  {r['scheme']:<12} CSS {_pct(r['css']):>7}  ({r['exact']})"
                line += f"  framed {_pct(r['css_framed'])}"
                if "empirical" in r:
                    line += f"  measured {_pct(r['empirical'])}"
                if "ratio" in r:
                    line += f"  x{float(r['ratio']):.1f} vs DG"
                print(line, file=fh)
    return EXIT_OK


def cmd_heatmap(args) -> int:
    code = code_from_spec(args.code or "hamming:6")
    N = args.nodes if args.nodes is not None else 1000
    surface = css_surface(code, N)
    with _output(args.out) as fh:
        surface.to_csv(fh)
    hi, lo = surface.argmax(), surface.argmin()
    summary = (
        f"{code}, N={N}: {surface.saved.size} cells; "
        f"max {surface.at(*hi)} = {_pct(surface.at(*hi))} at N_g1={hi[0]}, r_g1={hi[1]}; "
        f"min {surface.at(*lo)} = {_pct(surface.at(*lo))} at N_g1={lo[0]}, r_g1={lo[1]}"
    )
    print(summary, file=sys.stderr if args.out is None else sys.stdout)
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    code = code_from_spec(args.code or "hamming:3")
    try:
        values = [int(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"bad --values {args.values!r}") from None
    if args.nodes is None:
        args.nodes = len(values)
    if len(values) != args.nodes:
        raise UsageError(f"{len(values)} values for {args.nodes} nodes")
    if args.encoding == "gray":
        msgs = [gray_encode(v, code.n) for v in values]
    else:
        if any(not 0 <= v < (1 << code.n) for v in values):
            raise UsageError(f"values must fit in n={code.n} bits")
        msgs = [BitBlock(v, code.n) for v in values]
    scheme = _make_scheme(args, code)
    mode = args.mode or ("vote" if scheme.kind == "dg" else "single")
    payloads = compress_all(scheme, msgs)
    print(f"{code}, {scheme.kind.upper()} N={scheme.N}")
    for p, m in zip(payloads, msgs):
        part = scheme.partition(p.node_id)
        wire = encode_payload(p, part, scheme.kind)
        print(
            f"  node {p.node_id}: message {m}  (u,a,v)=({part.u},{part.a},{part.v})  "
            f"payload {p.kept_prefix}|{p.kept_suffix}|{p.m_bar}  "
            f"{len(p)} bits, {len(wire)} bytes framed"
        )
    report = decode(scheme, payloads, mode)
    by_id = {p.node_id: p for p in payloads}
    seen = set()
    for nd in report.nodes.values():
        for partner, _ in nd.tentative:
            key = tuple(sorted((nd.node_id, partner)))
            if key in seen:
                continue
            seen.add(key)
            i, j = key
            tr = pair_decode_detail(code, by_id[i], scheme.partition(i), by_id[j], scheme.partition(j))
            print(
                f"  pair ({i},{j}): c={tr.c} syndrome={tr.syndrome} "
                f"C={tr.correction.codeword} -> {tr.first}, {tr.second}"
            )
    lossless = True
    for nid, m in zip(scheme.node_ids, msgs):
        got = report.nodes[nid].recovered
        ok = got == m
        lossless &= ok
        flag = "ok" if ok else "MISMATCH"
        alert = " alert" if report.nodes[nid].integrity_alert else ""
        print(f"  node {nid}: recovered {got if got is not None else '-'}  {flag}{alert}")
    print("lossless" if lossless else "LOSSY")
    return EXIT_OK if lossless else EXIT_LOSSY


def cmd_ldr(args) -> int:
    code = code_from_spec(args.code or "hamming:3")
    scheme = _make_scheme(args, code)
    mode = args.mode or ("vote" if scheme.kind == "dg" else "single")
    d = ldr_probe(
        code, scheme, code.n, args.max_offset, mode=mode,
        exhaustive_limit=args.exhaustive_limit, samples=args.samples, seed=args.seed,
    )
    how = "exhaustive" if code.n <= args.exhaustive_limit else f"sampled, seed={args.seed}"
    print(f"{code}, {scheme.kind.upper()} N={scheme.N}: guaranteed range {d} ({how})")
    print(f"  t = {code.t}: {'meets' if d >= code.t else 'BELOW'} the t guarantee")
    if d < args.max_offset:
        frac = ldr_success_fraction(
            scheme, d + 1, mode=mode, exhaustive_limit=args.exhaustive_limit,
            samples=args.samples, seed=args.seed,
        )
        print(f"  spread {d + 1}: {100 * frac:.2f}% of cases still decode (not guaranteed)")
    return EXIT_OK if d >= code.t else EXIT_LOSSY


def cmd_simulate(args) -> int:
    code = code_from_spec(args.code or "hamming:3")
    scheme = _make_scheme(args, code)
    mode = args.mode or ("vote" if scheme.kind == "dg" else "single")
    model = CorrelationModel(code.n, args.window, args.drift, args.seed)
    trace = generate_trace(model, scheme.N, args.steps)
    if args.trace_out:
        trace.to_csv(args.trace_out, scheme.node_ids)
    report = run_simulation(scheme, trace, mode, seed=args.seed)
    if args.format == "json" or args.out:
        with _output(args.out) as fh:
            fh.write(report.to_json(indent=2) + "\n")
    if args.format != "json":
        print(f"{code}, {scheme.kind.upper()} N={scheme.N}, mode={mode}, window={args.window}")
        print(report.table())
    return EXIT_OK


def cmd_churn(args) -> int:
    code = code_from_spec(args.code or "hamming:5")
    N0 = args.nodes if args.nodes is not None else 3
    events = parse_events(args.events, range(1, N0 + 1))
    kinds = ["fg", "dg"] if args.scheme_kind == "both" else [args.scheme_kind]
    logs = {k: run_churn(k, events, code, N0, split_ratio=args.split, r_g1=args.r1) for k in kinds}
    with _output(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n") if args.format == "csv" else None
        header = ["event", "node"] + [f"{k.upper()} msgs" for k in kinds]
        if w:
            w.writerow(header)
        else:
            print(f"{code}, start N={N0}, {len(events)} events", file=fh)
            print("  " + "  ".join(f"{h:>8}" for h in header), file=fh)
        for i, (kind, nid) in enumerate(events):
            row = [kind, nid] + [logs[k].entries[i].messages for k in kinds]
            if w:
                w.writerow(row)
            else:
                print("  " + "  ".join(f"{c:>8}" for c in row), file=fh)
        totals = ["total", ""] + [logs[k].total_messages for k in kinds]
        if w:
            w.writerow(totals)
        else:
            print("  " + "  ".join(f"{c:>8}" for c in totals), file=fh)
    return EXIT_OK


def cmd_tamper(args) -> int:
    code = code_from_spec(args.code or "hamming:4")
    if args.nodes is None:
        args.nodes = 5
    scheme = _make_scheme(args, code)
    mode = args.mode or "vote"
    lo, _, hi = args.flips.partition("-")
    try:
        flips = (int(lo), int(hi or lo))
    except ValueError:
        raise UsageError(f"bad --flips {args.flips!r}") from None
    stats = run_tamper_trials(
        scheme, args.trials, flips=flips, tampered=args.tampered,
        window=args.window, mode=mode, seed=args.seed,
    )
    print(f"{code}, {scheme.kind.upper()} N={scheme.N}, mode={mode}, seed={args.seed}")
    print(f"  trials                 {stats.trials}")
    print(f"  tampered nodes/trial   {args.tampered} ({flips[0]}-{flips[1]} bit flips)")
    print(f"  honest nodes correct   {stats.honest_correct}/{stats.honest_total} "
          f"({100 * stats.honest_rate:.2f}%)")
    print(f"  trials with alert      {stats.trials_with_alert}")
    print(f"  alert mismatches       {stats.alert_mismatches}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    failed = []
    for name, ok, detail in selftest.run():
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        if not ok:
            failed.append(name)
    if failed:
        print(f"violated: {', '.join(failed)}")
        return EXIT_LOSSY
    print("all checks passed")
    return EXIT_OK


COMMANDS = {
    "css": cmd_css,
    "heatmap": cmd_heatmap,
    "roundtrip": cmd_roundtrip,
    "ldr": cmd_ldr,
    "simulate": cmd_simulate,
    "churn": cmd_churn,
    "tamper": cmd_tamper,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _parse(parser, argv)
        return COMMANDS[args.command](args)
    except (UsageError, OSError, json.JSONDecodeError) as exc:
        print(f"edgedsc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UndecodableSyndrome as exc:
        print(f"edgedsc: {exc}", file=sys.stderr)
        return EXIT_LOSSY
    except Exception as exc:  # noqa: BLE001
        print(f"edgedsc: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
