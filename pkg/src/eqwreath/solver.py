"""Solving equation systems in finite groups.

``solve`` finds the lexicographically least solution with a pruned
backtracking search (the kernel); ``brute_oracle`` is a plain enumeration
kept independent of the kernel for cross-checking.
"""
from __future__ import annotations

import enum
import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .catalog import catalog
from .groups import FiniteGroup
from .words import CONSTANT, EquationSystem, evaluate, evaluate_system

DEFAULT_BUDGET = 10**8
BRUTE_LIMIT = 10**6


class SearchBudgetExceeded(RuntimeError):
    def __init__(self, budget: int, branch: int):
        super().__init__(f"search exceeded {budget} nodes in top-level branch {branch}")
        self.budget = budget
        self.branch = branch


class Status(enum.Enum):
    SOLVED = "solved"
    NO_SOLUTION = "no-solution"
    SOLVABLE_IN_GROUP = "solvable"
    NOT_SOLVABLE = "not-solvable"


@dataclass
class SolveReport:
    status: Status
    group: str
    solution: tuple[int, ...] | None = None
    witness: tuple[int, ...] | None = None
    nodes: int = 0
    seconds: float = field(default=0.0, compare=False)

    @property
    def ok(self) -> bool:
        return self.status in (Status.SOLVED, Status.SOLVABLE_IN_GROUP)


def compile_system(ws: EquationSystem) -> tuple[kernels.Program, list[int]]:
    """Kernel program plus the indices of variable-free words."""
    k, n = ws.k, ws.n
    slots, signs, woff = [], [], [0]
    by_depth: list[list[int]] = [[] for _ in range(n)]
    static = []
    for w_index, w in enumerate(ws.words):
        for letter in w:
            slots.append(letter.index - 1 if letter.kind == CONSTANT else k + letter.index - 1)
            signs.append(letter.sign)
        woff.append(len(slots))
        top = max(w.variable_indices(), default=0)
        if top == 0:
            static.append(w_index)
        else:
            by_depth[top - 1].append(w_index)
    check_off, check_words = [0], []
    for ws_at in by_depth:
        check_words.extend(ws_at)
        check_off.append(len(check_words))
    return kernels.Program(slots, signs, woff, check_off, check_words), static


def _static_ok(G: FiniteGroup, ws: EquationSystem, static: list[int], consts) -> bool:
    return all(evaluate(ws.words[i], G, consts) == 0 for i in static)


def _flatten(domains: Sequence[Sequence[int]]) -> tuple[np.ndarray, np.ndarray]:
    arrays = [np.asarray(d, dtype=np.int32) for d in domains]
    doff = np.zeros(len(arrays) + 1, dtype=np.int32)
    doff[1:] = np.cumsum([a.size for a in arrays])
    dom = np.concatenate(arrays) if arrays else np.zeros(0, dtype=np.int32)
    return dom, doff


def _check_consts(G: FiniteGroup, ws: EquationSystem, consts: Sequence[int]) -> list[int]:
    consts = [int(c) for c in consts]
    if len(consts) < ws.k:
        raise ValueError(f"system needs {ws.k} constants, got {len(consts)}")
    if any(not 0 <= c < G.order for c in consts):
        raise ValueError(f"constant outside group of order {G.order}")
    return consts[:ws.k]


def solve(G: FiniteGroup, ws: EquationSystem, consts: Sequence[int], *,
          domains: Sequence[Sequence[int]] | None = None, budget: int = DEFAULT_BUDGET,
          workers: int = 1, compiled: tuple | None = None) -> SolveReport:
    """Lexicographically least ``x`` (x1 most significant) with ``w(a, x) = 1``.

    ``domains[j]`` optionally restricts ``x(j+1)`` to listed elements, tried
    in the listed order.  The node budget applies per value of ``x1``.
    """
    t0 = time.perf_counter()
    consts = _check_consts(G, ws, consts)
    program, static = compiled or compile_system(ws)
    if domains is None:
        domains = [range(G.order)] * ws.n
    if not _static_ok(G, ws, static, consts):
        return SolveReport(Status.NO_SOLUTION, G.name, seconds=time.perf_counter() - t0)
    if ws.n == 0:
        return SolveReport(Status.SOLVED, G.name, solution=(),
                           seconds=time.perf_counter() - t0)
    dom, doff = _flatten(domains)
    top = int(doff[1])

    def branch(v: int):
        return kernels.search(G, program, consts, dom, doff, v, v + 1, budget)

    nodes = 0
    found = None
    if workers <= 1:
        for v in range(top):
            status, pos, used = branch(v)
            nodes += used
            if status == kernels.OVER_BUDGET:
                raise SearchBudgetExceeded(budget, v)
            if status == kernels.FOUND:
                found = pos
                break
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for lo in range(0, top, workers):
                results = list(pool.map(branch, range(lo, min(top, lo + workers))))
                for offset, (status, pos, used) in enumerate(results):
                    nodes += used
                    if status == kernels.OVER_BUDGET:
                        raise SearchBudgetExceeded(budget, lo + offset)
                    if status == kernels.FOUND:
                        found = pos
                        break
                if found is not None:
                    break
    elapsed = time.perf_counter() - t0
    if found is None:
        return SolveReport(Status.NO_SOLUTION, G.name, nodes=nodes, seconds=elapsed)
    solution = tuple(int(dom[doff[j] + found[j]]) for j in range(ws.n))
    if any(v != 0 for v in evaluate_system(ws, G, consts, solution)):
        raise AssertionError(f"kernel returned a non-solution {solution} in {G.name}")
    return SolveReport(Status.SOLVED, G.name, solution=solution, nodes=nodes, seconds=elapsed)


def conjugation_orbit(G: FiniteGroup, consts: tuple[int, ...]) -> set[tuple[int, ...]]:
    return {tuple(G.conjugate(c, g) for c in consts) for g in G.elements}


def solvable_in(G: FiniteGroup, ws: EquationSystem, *, symmetry: bool = True,
                budget: int = DEFAULT_BUDGET, workers: int = 1) -> SolveReport:
    """Decide ``for all a exists x: w(a, x) = 1`` in ``G``.

    Constant tuples are visited in lexicographic order; with ``symmetry`` only
    the least tuple of each simultaneous-conjugation orbit is solved, which
    leaves the reported witness unchanged.
    """
    t0 = time.perf_counter()
    compiled = compile_system(ws)
    seen: set[tuple[int, ...]] = set()
    nodes = 0
    for consts in itertools.product(range(G.order), repeat=ws.k):
        if symmetry:
            if consts in seen:
                continue
            seen |= conjugation_orbit(G, consts)
        report = solve(G, ws, consts, budget=budget, workers=workers, compiled=compiled)
        nodes += report.nodes
        if report.status is Status.NO_SOLUTION:
            return SolveReport(Status.NOT_SOLVABLE, G.name, witness=consts, nodes=nodes,
                               seconds=time.perf_counter() - t0)
    return SolveReport(Status.SOLVABLE_IN_GROUP, G.name, nodes=nodes,
                       seconds=time.perf_counter() - t0)


@dataclass
class SysFinVerdict:
    counterexample: bool
    max_order: int
    group: FiniteGroup | None = None
    witness: tuple[int, ...] | None = None

    def lines(self) -> list[str]:
        if not self.counterexample:
            return ["status=no-counterexample", f"max_order={self.max_order}"]
        return ["status=counterexample", f"group={self.group.name}",
                f"order={self.group.order}", f"witness={format_assignment('a', self.witness)}"]


def scan_sys_fin(ws: EquationSystem, max_order: int, *, budget: int = DEFAULT_BUDGET,
                 workers: int = 1) -> SysFinVerdict:
    """Look for a catalog group of order <= max_order where ``ws`` is not solvable.

    Finding none is not evidence of membership in the set of systems solvable
    in all finite groups; the catalog is finite.
    """
    for G in catalog(max_order):
        report = solvable_in(G, ws, budget=budget, workers=workers)
        if report.status is Status.NOT_SOLVABLE:
            return SysFinVerdict(True, max_order, G, report.witness)
    return SysFinVerdict(False, max_order)


def brute_oracle(G: FiniteGroup, ws: EquationSystem, consts: Sequence[int],
                 domains: Sequence[Sequence[int]] | None = None) -> SolveReport:
    """First solution in lexicographic order by exhaustive enumeration."""
    if domains is None:
        domains = [range(G.order)] * ws.n
    size = 1
    for d in domains:
        size *= len(d)
    if size > BRUTE_LIMIT:
        raise ValueError(f"brute-force space {size} exceeds {BRUTE_LIMIT}")
    consts = list(consts)
    for xs in itertools.product(*domains):
        if all(v == G.identity for v in evaluate_system(ws, G, consts, xs)):
            return SolveReport(Status.SOLVED, G.name, solution=tuple(xs))
    return SolveReport(Status.NO_SOLUTION, G.name)


def format_assignment(prefix: str, values: Sequence[int]) -> str:
    return ",".join(f"{prefix}{i + 1}={v}" for i, v in enumerate(values))
