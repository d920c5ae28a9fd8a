"""Command-line interface: ``fastkernel {kernelize,solve,gen,verify}``.

Exit status is 0 on success or YES, 1 on NO (or a failed verification) and
2 on usage or format errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .approx import HEURISTICS
from .core import FastKernelError
from .exact import DEFAULT_LIMIT, InstanceTooLarge, fas_exact
from .io import GeneratorSpec, InstanceFormatError, format_instance, generate, parse_instance
from .kernelize import ReductionTrace, TraceMismatch, Verdict, decide, kernelize, replay_trace

EXIT_OK, EXIT_NO, EXIT_USAGE = 0, 1, 2


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="ascii")


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="ascii")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fastkernel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernelize", help="reduce an instance to a kernel")
    p.add_argument("--mode", choices=("linear", "subquadratic"), default="linear")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--heuristic", choices=HEURISTICS, default="kwiksort")
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--extra-rules", action="store_true", help="also run Rules 2 and 4 in linear mode")
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT, help="exact solver vertex limit")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--trace")

    p = sub.add_parser("solve", help="exact minimum feedback arc set, or decide a given k")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--mode", choices=("linear", "subquadratic"), default="linear")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--kind", choices=("uniform", "planted"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--planted-k", type=int, default=0)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output")

    p = sub.add_parser("verify", help="replay a trace and compare with a kernel")
    p.add_argument("--input", required=True)
    p.add_argument("--trace", required=True)
    p.add_argument("--kernel", required=True)
    return parser


def _kernelize(args) -> int:
    t = parse_instance(_read(args.input))
    if args.k < 0:
        raise ValueError("--k must be non-negative")
    config = {}
    if args.mode == "linear":
        config = dict(epsilon=args.epsilon, heuristic=args.heuristic, restarts=args.restarts,
                      seed=args.seed, exact_limit=args.limit, extra_rules=args.extra_rules)
    result = kernelize(t, args.k, args.mode, **config)
    if args.trace:
        _write(args.trace, result.trace.to_text())
    _write(args.output, format_instance(result.kernel))
    sys.stdout.write(result.stats_lines())
    return EXIT_NO if result.verdict is Verdict.NO else EXIT_OK


def _solve(args) -> int:
    t = parse_instance(_read(args.input))
    if args.k is None:
        res = fas_exact(t, args.limit)
        print(f"fas_size={res.fas_size}")
        print("ordering=" + " ".join(map(str, res.optimal_ordering)))
        for u, v in res.minimal_fas:
            print(f"{u} {v}")
        return EXIT_OK
    if args.k < 0:
        raise ValueError("--k must be non-negative")
    d = decide(t, args.k, args.mode, exact_limit=args.limit,
               **({"seed": args.seed} if args.mode == "linear" else {}))
    if not d.yes:
        print("NO")
        return EXIT_NO
    print(f"YES size={len(d.arcs)}")
    for u, v in d.arcs:
        print(f"{u} {v}")
    return EXIT_OK


def _gen(args) -> int:
    spec = GeneratorSpec(args.kind, args.n, args.seed, args.planted_k)
    _write(args.output, format_instance(generate(spec)))
    return EXIT_OK


def _verify(args) -> int:
    t = parse_instance(_read(args.input))
    trace = ReductionTrace.from_text(_read(args.trace))
    kernel = parse_instance(_read(args.kernel))
    try:
        replayed = replay_trace(t, trace)
    except TraceMismatch as exc:
        print(f"mismatch: {exc}")
        return EXIT_NO
    if format_instance(replayed) != format_instance(kernel):
        print("mismatch: replayed kernel differs")
        return EXIT_NO
    print(f"verified vertices={replayed.n} ids=" + ",".join(map(str, replayed.ids)))
    return EXIT_OK


COMMANDS = {"kernelize": _kernelize, "solve": _solve, "gen": _gen, "verify": _verify}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (InstanceFormatError, TraceMismatch, InstanceTooLarge, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FastKernelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
