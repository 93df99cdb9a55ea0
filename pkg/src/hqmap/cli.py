"""Command-line interface: ``hqmap <subcommand> ...``."""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .arch import ConfigError, load_config
from .bench import FAMILIES, BenchSpec, generate_text
from .flat import map_flat_program
from .mapper import map_program
from .oracle import replay
from .qasm import (
    DEFAULT_FLATTEN_LIMIT,
    ExpansionLimitError,
    QasmError,
    count_instructions,
    flat_to_program,
    flatten,
    format_program,
    parse_file,
)
from .report import (
    ProgramMismatch,
    ReportError,
    audit_report,
    build_report,
    compare,
    format_comparison,
    format_report,
    format_text,
    parse_report,
    write_csv,
)
from .syscode import SyscodeFormatError, read_syscode


class CliError(Exception):
    pass


def _map_one(job: tuple) -> tuple[str, str, str]:
    """Map one file; returns (stem, report text, human summary). Runs in a worker."""
    path, mode, arch, out, limit, crit = job
    cfg = load_config(arch)
    p = parse_file(path)
    stem = Path(path).stem
    if mode == "flat":
        mr = map_flat_program(p, cfg, limit=limit)
        base = Path(out) / f"{stem}.flat"
    else:
        mr = map_program(p, cfg)
        base = Path(out) / stem
    rep = build_report(mr, benchmark=stem, critical_path=crit)
    mr.system_code.save(f"{base}.syscode")
    text = format_report(rep)
    Path(f"{base}.report").write_text(text, encoding="utf-8")
    human = format_text(rep)
    Path(f"{base}.txt").write_text(human, encoding="utf-8")
    return stem, text, human


def cmd_map(args, mode: str) -> int:
    Path(args.out).mkdir(parents=True, exist_ok=True)
    limit = getattr(args, "limit", DEFAULT_FLATTEN_LIMIT)
    jobs = [(f, mode, args.arch, args.out, limit, not args.no_critical_path) for f in args.qasm]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_map_one, jobs))
    else:
        results = [_map_one(j) for j in jobs]
    reports = []
    for stem, text, human in results:
        print(human, end="")
        reports.append(parse_report(text))
    if args.csv:
        with open(args.csv, "a" if args.csv_append else "w", encoding="utf-8", newline="") as fh:
            write_csv(reports, fh, header=not (args.csv_append and fh.tell()))
    return 0


def cmd_flatten(args) -> int:
    p = parse_file(args.qasm)
    fp = flatten(p, args.limit)
    text = format_program(flat_to_program(fp, p))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_gen(args) -> int:
    fam = args.family
    if fam == "repeat":
        params = {"K": args.k, "N": args.n, "n_qubits": args.qubits}
    elif fam == "nest":
        params = {"depth": args.depth, "fanout": args.fanout, "K": args.k}
    elif fam == "adder":
        params = {"width": args.width}
    else:
        params = {"width": args.width, "N": args.n, "K": args.k}
    text = generate_text(BenchSpec(fam, params, args.seed))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_compare(args) -> int:
    h = parse_report(Path(args.report_h).read_text(encoding="utf-8"))
    f = parse_report(Path(args.report_f).read_text(encoding="utf-8"))
    print(format_comparison(compare(h, f)), end="")
    return 0


def cmd_verify(args) -> int:
    sc = read_syscode(args.syscode)
    res = replay(sc)
    print(f"records          {res.n_records}")
    print(f"depth            {res.depth}")
    print(f"execution time   {res.exec_time}")
    if res.bus_bandwidth is not None:
        print(f"bus in flight    {res.max_in_flight} (bandwidth {res.bus_bandwidth})")
    status = 0
    for v in res.violations:
        print(f"violation: {v}", file=sys.stderr)
        status = 1
    if args.report:
        rep = parse_report(Path(args.report).read_text(encoding="utf-8"))
        for msg in audit_report(rep, sc):
            print(f"report mismatch: {msg}", file=sys.stderr)
            status = 1
    print("ok" if status == 0 else "FAILED")
    return status


def cmd_stats(args) -> int:
    p = parse_file(args.qasm)
    c = count_instructions(p)
    print(f"modules {len(p.modules)}")
    print(f"modular {c.modular}")
    print(f"flattened {c.flattened}" + (" (saturated)" if c.saturated else ""))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hqmap", description="Hierarchical quantum circuit mapping.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def mapping(name: str, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("qasm", nargs="+")
        sp.add_argument("--arch", help="architecture config (default: $HQMAP_ARCH)")
        sp.add_argument("--out", default=".", help="output directory")
        sp.add_argument("--csv", help="write one CSV row per benchmark")
        sp.add_argument("--csv-append", action="store_true", help="append to the CSV file")
        sp.add_argument("--jobs", type=int, default=1, help="map input files in parallel")
        sp.add_argument("--no-critical-path", action="store_true",
                        help="skip the critical-path walk for the report")
        return sp

    mapping("map", "hierarchical mapping")
    sp = mapping("map-flat", "flatten, then map onto one grid")
    sp.add_argument("--limit", type=int, default=DEFAULT_FLATTEN_LIMIT)

    sp = sub.add_parser("flatten", help="inline every call")
    sp.add_argument("qasm")
    sp.add_argument("--limit", type=int, default=DEFAULT_FLATTEN_LIMIT)
    sp.add_argument("--out")

    sp = sub.add_parser("gen", help="generate a benchmark program")
    sp.add_argument("family", choices=FAMILIES)
    sp.add_argument("--k", type=int, default=10, help="gates per module body")
    sp.add_argument("--n", type=int, default=4, help="number of calls")
    sp.add_argument("--qubits", type=int, default=4, help="qubits (repeat)")
    sp.add_argument("--width", type=int, default=4)
    sp.add_argument("--depth", type=int, default=3)
    sp.add_argument("--fanout", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")

    sp = sub.add_parser("compare", help="compare hierarchical and flat reports")
    sp.add_argument("report_h")
    sp.add_argument("report_f")

    sp = sub.add_parser("verify", help="replay a system code and check it")
    sp.add_argument("syscode")
    sp.add_argument("--report", help="also audit this report against the system code")

    sp = sub.add_parser("stats", help="modular and flattened instruction counts")
    sp.add_argument("qasm")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "map":
            return cmd_map(args, "hierarchical")
        if args.cmd == "map-flat":
            return cmd_map(args, "flat")
        return {"flatten": cmd_flatten, "gen": cmd_gen, "compare": cmd_compare,
                "verify": cmd_verify, "stats": cmd_stats}[args.cmd](args)
    except ProgramMismatch as exc:
        print(f"hqmap: {exc}", file=sys.stderr)
        return 3
    except QasmError as exc:
        print(f"hqmap: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, ExpansionLimitError, ReportError, SyscodeFormatError, ValueError, OSError) as exc:
        print(f"hqmap: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
