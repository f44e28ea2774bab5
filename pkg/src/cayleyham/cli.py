"""Command line entry point."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .construct import ConstructOptions, ConstructionError, construct
from .groups import GroupSpec, SpecError
from .harness import ExportError, SweepConfig, enumerate_group_specs, export_dot, gprime_shape, run_suite
from .walks import GenSet, WalkWord, find_hamiltonian_cycle, verify_hamiltonian_cycle


def _load(path: str):
    return json.loads(Path(path).read_text())


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_enumerate(args) -> int:
    rows = [{**s.to_json(), "order": s.order, "gprime_shape": gprime_shape(s)} for s in enumerate_group_specs(args.p, args.q)]
    _emit(json.dumps(rows, indent=1) + "\n", args.out)
    return 0


def cmd_construct(args) -> int:
    spec = GroupSpec.from_json(_load(args.spec))
    gens = GenSet.from_json(_load(args.gens))
    options = ConstructOptions(allow_fallback=args.fallback, budget=args.budget, seed=args.seed)
    report = construct(spec, gens, options)
    _emit(json.dumps(report.to_json(args.timing), sort_keys=True, indent=1) + "\n", args.out)
    return 1 if report.outcome == "failed" else 0


def cmd_verify(args) -> int:
    spec = GroupSpec.from_json(_load(args.spec))
    gens = GenSet.from_json(_load(args.gens))
    data = _load(args.word)
    word = WalkWord.from_json(data["cycle"] if isinstance(data, dict) else data)
    check = verify_hamiltonian_cycle(spec, gens, word)
    print("ok" if check else f"not a Hamiltonian cycle: {check.message}")
    return 0 if check else 1


def cmd_sweep(args) -> int:
    config = SweepConfig.from_json(_load(args.config))
    result = run_suite(config)
    print(json.dumps(result.buckets, sort_keys=True))
    return 0 if result.ok else 1


def cmd_export_dot(args) -> int:
    spec = GroupSpec.from_json(_load(args.spec))
    gens = GenSet.from_json(_load(args.gens))
    data = _load(args.word)
    word = WalkWord.from_json(data["cycle"] if isinstance(data, dict) else data)
    _emit(export_dot(spec, gens, word, args.style), args.out)
    return 0


def cmd_search(args) -> int:
    spec = GroupSpec.from_json(_load(args.spec))
    gens = GenSet.from_json(_load(args.gens))
    result = find_hamiltonian_cycle(spec, gens, budget=args.budget, seed=args.seed)
    out = {"status": result.status, "expansions": result.expansions,
           "cycle": result.word.to_json() if result.word is not None else None}
    _emit(json.dumps(out, indent=1) + "\n", args.out)
    return 0 if result.found else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cayleyham", description="Hamiltonian cycles in Cayley graphs of metacyclic groups")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list group specs of order 6pq")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("construct", help="build and verify a Hamiltonian cycle")
    p.add_argument("--spec", required=True)
    p.add_argument("--gens", required=True)
    p.add_argument("--fallback", action="store_true", help="use search when the case is delegated")
    p.add_argument("--budget", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timing", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check a word is a Hamiltonian cycle")
    p.add_argument("--spec", required=True)
    p.add_argument("--gens", required=True)
    p.add_argument("--word", required=True, help="word JSON, or a construct report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="run a batch sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("export-dot", help="render the graph with the cycle highlighted")
    p.add_argument("--spec", required=True)
    p.add_argument("--gens", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--style", choices=("plain", "grid"), default="plain")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("search", help="backtracking search for a Hamiltonian cycle")
    p.add_argument("--spec", required=True)
    p.add_argument("--gens", required=True)
    p.add_argument("--budget", type=int, default=10**7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (SpecError, ConstructionError, ExportError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
