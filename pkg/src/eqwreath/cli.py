"""Command line entry point: ``eqwreath <command> ...``.

Every command prints ``key=value`` lines on stdout.  Exit status is 0 for
solved/passed, 1 for refuted/failed and 2 for usage or input errors.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .assembly import pipeline
from .groups import load_group
from .solver import SearchBudgetExceeded, Status, format_assignment, scan_sys_fin, solve, solvable_in
from .towers import Locality, load_tower, locality_trials
from .universal import UniversalProblem, XBudgetError, compute_X_N
from .words import EquationSystem, parse_system


class UsageError(ValueError):
    pass


def parse_assign(text: str, prefix: str = "a") -> list[int]:
    """``a1=3,a2=-1`` -> ``[3, -1]``; indices must be exactly ``1..k``."""
    values = {}
    for item in filter(None, (t.strip() for t in text.split(","))):
        key, sep, val = item.partition("=")
        if not sep or not key.startswith(prefix) or not key[1:].isdigit():
            raise UsageError(f"bad assignment {item!r}; expected {prefix}<i>=<int>")
        try:
            values[int(key[1:])] = int(val)
        except ValueError:
            raise UsageError(f"bad value in {item!r}") from None
    if sorted(values) != list(range(1, len(values) + 1)):
        raise UsageError(f"assignment indices must run {prefix}1, {prefix}2, ... without gaps")
    return [values[i] for i in range(1, len(values) + 1)]


def parse_support(text: str) -> dict[tuple[int, int], int]:
    """``f1@-1=1,f1@0=0`` -> ``{(1, -1): 1, (1, 0): 0}``."""
    out = {}
    for item in filter(None, (t.strip() for t in text.split(","))):
        try:
            lhs, val = item.split("=")
            coord, point = lhs.split("@")
            if not coord.startswith("f"):
                raise ValueError
            out[(int(coord[1:]), int(point))] = int(val)
        except ValueError:
            raise UsageError(f"bad support entry {item!r}; expected f<i>@<point>=<h>") from None
    return out


def _load_system(path: str) -> EquationSystem:
    with open(path, encoding="utf-8") as fh:
        return parse_system(fh.read())


def _consts(args, ws: EquationSystem) -> list[int]:
    consts = parse_assign(args.assign) if args.assign else []
    if len(consts) != ws.k:
        raise UsageError(f"system has {ws.k} constants, --assign gives {len(consts)}")
    return consts


def cmd_solve(args) -> tuple[list[str], int]:
    G, ws = load_group(args.group), _load_system(args.system)
    report = solve(G, ws, _consts(args, ws), budget=args.budget, workers=args.workers)
    lines = [f"status={report.status.value}", f"group={G.name}"]
    if report.status is Status.SOLVED:
        lines.extend(f"x{i + 1}={v}" for i, v in enumerate(report.solution))
        return lines, 0
    return lines, 1


def cmd_solvable(args) -> tuple[list[str], int]:
    G, ws = load_group(args.group), _load_system(args.system)
    report = solvable_in(G, ws, budget=args.budget, workers=args.workers)
    lines = [f"status={report.status.value}", f"group={G.name}"]
    if report.witness is not None:
        lines.append(f"witness={format_assignment('a', report.witness)}")
    return lines, 0 if report.ok else 1


def cmd_scan(args) -> tuple[list[str], int]:
    verdict = scan_sys_fin(_load_system(args.system), args.max_order,
                           budget=args.budget, workers=args.workers)
    return verdict.lines(), 1 if verdict.counterexample else 0


def cmd_locality(args) -> tuple[list[str], int]:
    tower = load_tower(args.tower) if args.tower else None
    tally = locality_trials(args.trials, args.seed, tower, workers=args.workers)
    lines = tally.lines()
    if tally.first_differing is not None:
        i, word, hname, x = tally.first_differing
        lines.append(f"example trial={i} word={word.replace(' ', '_')} H={hname} x={x}")
    return lines, 1 if tally.counts[Locality.VIOLATION] else 0


def cmd_xn(args) -> tuple[list[str], int]:
    ws, tower, H = _load_system(args.system), load_tower(args.tower), load_group(args.H)
    prob = UniversalProblem(H, tower, ws, tuple(_consts(args, ws)))
    level = args.level or tower.depth
    if not 1 <= level <= tower.depth:
        raise UsageError(f"level must be in 1..{tower.depth}")
    X = compute_X_N(prob, level, witnesses=args.witnesses, workers=args.workers)
    lines = X.lines()
    if args.witnesses and X.witnesses:
        for (M, u_M), table in sorted(X.witnesses.items()):
            for fbar, phi in sorted(table.items()):
                lines.append(f"witness level={M} u={','.join(map(str, u_M))} "
                             f"f={','.join(map(str, fbar))} phi={','.join(map(str, phi))}")
    return lines, 0 if X.members else 1


def cmd_pipeline(args) -> tuple[list[str], int]:
    ws, tower, H = _load_system(args.system), load_tower(args.tower), load_group(args.H)
    report = pipeline(ws, tower, H, _consts(args, ws), parse_support(args.support or ""),
                      scan_order=args.scan_order, probe_level=args.probe_level,
                      workers=args.workers)
    return report.lines, report.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eqwreath",
                                     description="Exact equation solving in finite groups and wreath products.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=1, help="threads (output does not depend on it)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="least solution for given constants")
    p.add_argument("--group", required=True, help="group file, catalog:NAME or cyclic:N")
    p.add_argument("--system", required=True)
    p.add_argument("--assign", default="", help="a1=<idx>,a2=<idx>,...")
    p.add_argument("--budget", type=int, default=10**8, help="node budget per x1 value")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("solvable", parents=[common], help="solvable for every constant tuple?")
    p.add_argument("--group", required=True)
    p.add_argument("--system", required=True)
    p.add_argument("--budget", type=int, default=10**8)
    p.set_defaults(func=cmd_solvable)

    p = sub.add_parser("scan", parents=[common], help="search the catalog for a counterexample")
    p.add_argument("--system", required=True)
    p.add_argument("--max-order", type=int, default=8)
    p.add_argument("--budget", type=int, default=10**8)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("locality", parents=[common], help="random locality checks")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tower")
    p.set_defaults(func=cmd_locality)

    p = sub.add_parser("xn", parents=[common], help="universal-solution set at one level")
    p.add_argument("--system", required=True)
    p.add_argument("--tower", required=True)
    p.add_argument("--H", required=True)
    p.add_argument("--assign", default="", help="ambient constants a1=<int>,...")
    p.add_argument("--level", type=int)
    p.add_argument("--witnesses", action="store_true")
    p.set_defaults(func=cmd_xn)

    p = sub.add_parser("pipeline", parents=[common], help="X sets, assembly and window checks")
    p.add_argument("--system", required=True)
    p.add_argument("--tower", required=True)
    p.add_argument("--H", required=True)
    p.add_argument("--assign", default="")
    p.add_argument("--support", default="", help="f<i>@<point>=<h>,...")
    p.add_argument("--scan-order", type=int, default=8)
    p.add_argument("--probe-level", type=int)
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.workers < 1:
        parser.error("--workers must be at least 1")
    try:
        lines, code = args.func(args)
    except (OSError, ValueError, LookupError, SearchBudgetExceeded, XBudgetError) as exc:
        print(f"error={type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write("".join(line + "\n" for line in lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
