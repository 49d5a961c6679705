"""Command-line interface: match, gen, decompress, verify, bench.

Exit codes: 0 found / ok, 1 not found, 2 error, 3 verification mismatch.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
import time

from . import counters
from .generate import SHAPES, generate, text_length
from .matcher import match
from .oracle import OracleConfig, OracleTooLong, oracle_match
from .slp import SlpError, TooLong, decompress_guarded, parse_slp, render_slp

EXIT_FOUND, EXIT_NOT_FOUND, EXIT_ERROR, EXIT_MISMATCH = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read_slp(path):
    with open(path, "rb") as fh:
        return parse_slp(fh.read())


def _pattern(args) -> bytes:
    if args.pattern is not None and args.pattern_file is not None:
        raise UsageError("give either --pattern or --pattern-file, not both")
    if args.pattern is not None:
        p = os.fsencode(args.pattern)
    elif args.pattern_file is not None:
        with open(args.pattern_file, "rb") as fh:
            p = fh.read()
    else:
        raise UsageError("a pattern is required (--pattern or --pattern-file)")
    if not p:
        raise UsageError("pattern must be nonempty")
    return p


def _emit(report: dict, as_json: bool, out=None):
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps(report, sort_keys=True) + "\n")
        return
    for key in sorted(report):
        val = report[key]
        if isinstance(val, dict):
            for sub in sorted(val):
                out.write(f"{key}.{sub}={_fmt(val[sub])}\n")
        else:
            out.write(f"{key}={_fmt(val)}\n")


def _fmt(v):
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def run_match(slp, p: bytes) -> dict:
    """RunReport as a plain dict."""
    t0 = time.perf_counter()
    res = match(slp, p)
    micros = int((time.perf_counter() - t0) * 1e6)
    return {
        "found": res.found,
        "occurrence": res.occurrence,
        "witness_rule": res.witness_rule,
        "witness_offset": res.witness_offset,
        "counters": dict(res.counters or counters.snapshot()),
        "timings": {"match_us": micros},
    }


def cmd_match(args) -> int:
    t0 = time.perf_counter()
    slp = _read_slp(args.slp)
    p = _pattern(args)
    parse_us = int((time.perf_counter() - t0) * 1e6)
    report = run_match(slp, p)
    report["timings"]["parse_us"] = parse_us
    _emit(report, args.json)
    return EXIT_FOUND if report["found"] else EXIT_NOT_FOUND


def cmd_gen(args) -> int:
    n = args.n
    if args.k is not None:
        n = args.k + 1
    if n is None:
        raise UsageError("--n (or --k for power) is required")
    slp = generate(args.shape, n, os.fsencode(args.alphabet), args.seed, args.max_len)
    text = render_slp(slp)
    if args.output:
        with open(args.output, "w", encoding="latin-1", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_FOUND


def cmd_decompress(args) -> int:
    slp = _read_slp(args.slp)
    data = decompress_guarded(slp, args.limit)
    sys.stdout.buffer.write(data)
    sys.stdout.flush()
    return EXIT_FOUND


def cmd_verify(args) -> int:
    slp = _read_slp(args.slp)
    p = _pattern(args)
    res = match(slp, p)
    try:
        found, pos = oracle_match(slp, p, OracleConfig(decompress_limit=args.limit))
    except OracleTooLong:
        print(f"warning: text longer than {args.limit} bytes, oracle skipped", file=sys.stderr)
        _emit({"found": res.found, "oracle": "skipped"}, args.json)
        return EXIT_FOUND
    agree = found == res.found
    if agree and res.found and res.occurrence is not None:
        text = decompress_guarded(slp, args.limit)
        agree = text[res.occurrence:res.occurrence + len(p)] == p
    _emit({"found": res.found, "oracle_found": found, "oracle_occurrence": pos,
           "occurrence": res.occurrence, "agree": agree}, args.json)
    return EXIT_FOUND if agree else EXIT_MISMATCH


def cmd_bench(args) -> int:
    rng = random.Random(args.seed)
    alphabet = os.fsencode(args.alphabet)
    p = bytes(rng.choice(alphabet) for _ in range(args.m))
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["n", "m", "N_or_cap", "wa_queries", "concat_queries", "micros"])
    ns = args.n or [1 << e for e in range(args.min_exp, args.max_exp + 1)]
    for n in ns:
        slp = generate(args.shape, n, alphabet, args.seed)
        t0 = time.perf_counter()
        res = match(slp, p)
        micros = int((time.perf_counter() - t0) * 1e6)
        c = res.counters
        writer.writerow([n, args.m, text_length(slp), c["wa_queries"], c["concat_queries"], micros])
    return EXIT_FOUND


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="slpmatch",
                                 description="Pattern matching on SLP-compressed text.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_pattern(sp):
        sp.add_argument("--pattern", help="pattern literal (bytes of the argument)")
        sp.add_argument("--pattern-file", help="read the pattern bytes from a file")

    sp = sub.add_parser("match", help="decide whether the pattern occurs")
    sp.add_argument("slp")
    add_pattern(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_match)

    sp = sub.add_parser("gen", help="generate a test SLP")
    sp.add_argument("--shape", choices=SHAPES, default="random-binary")
    sp.add_argument("--n", type=int, help="number of rules")
    sp.add_argument("--k", type=int, help="doubling steps for --shape power (n = k + 1)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--alphabet", default="ab")
    sp.add_argument("--max-len", type=int, default=None)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("decompress", help="print the derived text")
    sp.add_argument("slp")
    sp.add_argument("--limit", type=int, default=10 ** 6)
    sp.set_defaults(func=cmd_decompress)

    sp = sub.add_parser("verify", help="compare the matcher against the brute-force oracle")
    sp.add_argument("slp")
    add_pattern(sp)
    sp.add_argument("--limit", type=int, default=10 ** 6)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("bench", help="query counts over a sweep of grammar sizes (CSV)")
    sp.add_argument("--shape", choices=SHAPES, default="random-binary")
    sp.add_argument("--m", type=int, default=32)
    sp.add_argument("--min-exp", type=int, default=8)
    sp.add_argument("--max-exp", type=int, default=14)
    sp.add_argument("--n", type=int, nargs="*", help="explicit list of n values")
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--alphabet", default="ab")
    sp.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, SlpError, UsageError, ValueError, TooLong) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
