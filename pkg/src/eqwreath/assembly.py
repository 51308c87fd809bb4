"""Assembling a wreath solution on the deepest section and checking it on
finite windows; plus the end-to-end pipeline behind ``eqwreath pipeline``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .groups import FiniteGroup
from .solver import Status, format_assignment, scan_sys_fin, solve
from .towers import QuotientTower, finite_level_check
from .universal import (DeepestMember, UniversalProblem, check_compatibility,
                        deepest_nonempty_member)
from .words import CONSTANT, EquationSystem, evaluate, evaluate_system


class AssemblyError(ValueError):
    pass


@dataclass(eq=False)
class AssemblyInstance:
    """Constants ``(f, a)``: ``support[(i, x)]`` is ``f_i(x)``; identity elsewhere."""

    prob: UniversalProblem
    support: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        tower, d = self.prob.tower, self.prob.tower.depth
        for (i, x), h in self.support.items():
            if not 1 <= i <= self.prob.k:
                raise AssemblyError(f"support names f{i} but the system has {self.prob.k} constants")
            if not 0 <= h < self.prob.H.order:
                raise AssemblyError(f"f{i}@{x}={h} is not an element of H")
            if not tower.ambient_contains(x, d):
                raise AssemblyError(f"support point {x} lies outside the deepest section")

    def f(self, i: int, x: int) -> int:
        return self.support.get((i, x), 0)

    def pulled_back(self, M: int) -> list[tuple[int, ...]]:
        """``f_M`` with ``f_M(x_M) = f(x)`` for ``x`` in the level-``M`` section."""
        tower = self.prob.tower
        return [tuple(self.f(i, tower.lift(y, M)) for y in tower.level(M).elements)
                for i in range(1, self.prob.k + 1)]


def solve_level(prob: UniversalProblem, M: int, f_M: Sequence[Sequence[int]],
                u: Sequence[int], u_level: int) -> list[tuple[int, ...]] | None:
    """Least ``psi`` with ``w((f_M, a_M), (psi, u_M)) = 1`` in ``H wr L_M``."""
    tower = prob.tower
    if u_level < M:
        raise AssemblyError("u must be given at a level at least as fine as M")
    W = prob.wreath(M)
    g = tower.level(M).order
    a_M = prob.consts_at(M)
    u_M = [tower.project(v, u_level, M) for v in u]
    consts = [W.encode(f, a) for f, a in zip(f_M, a_M)]
    nf = prob.H.order**g
    domains = [[c * g + v for c in range(nf)] for v in u_M]
    report = solve(W, prob.system, consts, domains=domains, compiled=prob.compiled)
    if report.status is not Status.SOLVED:
        return None
    return [W.decode(v).f for v in report.solution]


@dataclass
class AssembledSolution:
    """``phi[j][x]`` for ``x`` in the deepest section; ``u`` at the finest level."""

    phi: list[dict[int, int]]
    u: tuple[int, ...]
    u_ambient: tuple[int, ...]
    psi: list[tuple[int, ...]]
    provenance: dict[int, int]


def assemble(inst: AssemblyInstance, u: Sequence[int]) -> AssembledSolution:
    prob, tower = inst.prob, inst.prob.tower
    d = tower.depth
    psi = solve_level(prob, d, inst.pulled_back(d), u, d)
    if psi is None:
        raise AssemblyError(f"no level-{d} solution for u={tuple(u)}; u is not in X_{d}")
    section = tower.sections[d - 1]
    phi = [{x: p[tower.reduce(x, d)] for x in section} for p in psi]
    u_ambient = tuple(tower.lift(v, d) for v in u)
    return AssembledSolution(phi, tuple(u), u_ambient, psi, {x: d for x in section})


class _Ambient:
    def __init__(self, tower: QuotientTower):
        self.identity = tower.ambient_identity
        self.mul = tower.ambient_mul
        self.inv = tower.ambient_inv


@dataclass
class WindowReport:
    probe_level: int
    entries: list[tuple[int, tuple[int, ...] | None]]
    group_levels: list[bool]
    cross_checked: bool | None

    @property
    def in_window(self) -> list[tuple[int, tuple[int, ...]]]:
        return [(x, d) for x, d in self.entries if d is not None]

    @property
    def passed(self) -> bool:
        return (all(self.group_levels) and self.cross_checked is not False
                and all(all(v == 0 for v in d) for _, d in self.in_window))


def delta_at(inst: AssemblyInstance, sol: AssembledSolution, x: int) -> tuple[int, ...] | None:
    """H-parts at ``x`` of ``w((f, a), (phi, u))``, read off the section values.

    ``None`` if some point of ``x * S(a, u)`` falls outside the deepest section.
    """
    prob, tower = inst.prob, inst.prob.tower
    H = prob.H
    out = []
    for w in prob.system.words:
        acc, s = 0, tower.ambient_identity
        for letter in w.letters:
            if letter.kind == CONSTANT:
                g = prob.consts[letter.index - 1]
                fn = lambda y, i=letter.index: inst.f(i, y)
            else:
                g = sol.u_ambient[letter.index - 1]
                table = sol.phi[letter.index - 1]
                fn = table.get
            if letter.sign < 0:
                s = tower.ambient_mul(s, tower.ambient_inv(g))
            y = tower.ambient_mul(x, s)
            value = fn(y)
            if value is None or not tower.ambient_contains(y, tower.depth):
                return None
            acc = H.mul(acc, value if letter.sign > 0 else H.inv(value))
            if letter.sign > 0:
                s = tower.ambient_mul(s, g)
        out.append(acc)
    return tuple(out)


def level_deltas(inst: AssemblyInstance, sol: AssembledSolution) -> list[tuple[int, ...]]:
    """H-parts of the system evaluated in the materialized ``H wr L_d``, per point."""
    prob = inst.prob
    d = prob.tower.depth
    W = prob.wreath(d)
    consts = [W.encode(f, a) for f, a in zip(inst.pulled_back(d), prob.consts_at(d))]
    vars = [W.encode(p, v) for p, v in zip(sol.psi, sol.u)]
    values = [W.decode(v).f for v in evaluate_system(prob.system, W, consts, vars)]
    return [tuple(f[y] for f in values) for y in prob.tower.level(d).elements]


def verify_window(inst: AssemblyInstance, sol: AssembledSolution,
                  probe_level: int | None = None, cross_check: bool = True) -> WindowReport:
    prob, tower = inst.prob, inst.prob.tower
    d = tower.depth
    j = probe_level or max(1, d - 1)
    prefix_words = prob.system.prefix_union()
    ambient = _Ambient(tower)
    S = {evaluate(p, ambient, prob.consts, sol.u_ambient) for p in prefix_words}
    entries = []
    for x in sorted(tower.sections[j - 1]):
        inside = all(tower.ambient_contains(ambient.mul(x, s), d) for s in S)
        entries.append((x, delta_at(inst, sol, x) if inside else None))
    groups = finite_level_check(prob.system, prob.consts, sol.u_ambient, tower)
    cross = None
    if cross_check:
        table = level_deltas(inst, sol)
        cross = all(delta == table[tower.reduce(x, d)] for x, delta in entries
                    if delta is not None)
    return WindowReport(j, entries, groups, cross)


@dataclass
class PipelineReport:
    lines: list[str]
    passed: bool
    deepest: DeepestMember | None = None
    window: WindowReport | None = None

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _format_delta(delta: tuple[int, ...]) -> str:
    return "identity" if all(v == 0 for v in delta) else ",".join(map(str, delta))


def pipeline(system: EquationSystem, tower: QuotientTower, H: FiniteGroup,
             consts: Sequence[int], support: Mapping[tuple[int, int], int] | None = None,
             *, scan_order: int = 8, probe_level: int | None = None, workers: int = 1,
             budget: int | None = None) -> PipelineReport:
    """Scan, X sets per level, compatibility, deepest member, assembly, windows."""
    lines = []
    verdict = scan_sys_fin(system, scan_order, workers=workers)
    if verdict.counterexample:
        lines.append(f"scan=counterexample group={verdict.group.name} "
                     f"witness={format_assignment('a', verdict.witness)}")
    else:
        lines.append(f"scan=none max_order={scan_order}")
    kwargs = {} if budget is None else {"budget": budget}
    prob = UniversalProblem(H, tower, system, tuple(consts), **kwargs)
    inst = AssemblyInstance(prob, dict(support or {}))
    deepest = deepest_nonempty_member(prob, workers=workers)
    for X in deepest.sets:
        lines.append(f"xn[{X.level}]={len(X)}")
    if deepest.empty:
        lines.append(f"empty level={deepest.level} hint={deepest.hint}")
        lines.append("verdict=FAIL")
        return PipelineReport(lines, False, deepest)
    compat_ok = True
    for fine in range(2, len(deepest.sets) + 1):
        bad = check_compatibility(prob, fine, fine - 1, deepest.sets[fine - 1],
                                  deepest.sets[fine - 2])
        if bad is not None:
            compat_ok = False
            lines.append(f"compat=violation level={fine} u={','.join(map(str, bad))}")
    if compat_ok:
        lines.append("compat=ok")
    sol = assemble(inst, deepest.member)
    lines.append(f"u={','.join(map(str, sol.u))}")
    lines.append(f"u_ambient={','.join(map(str, sol.u_ambient))}")
    report = verify_window(inst, sol, probe_level)
    lines.append("levels=" + ",".join("ok" if ok else "fail" for ok in report.group_levels))
    for x, delta in report.entries:
        if delta is None:
            lines.append(f"window[{report.probe_level}] x={x} out-of-window")
        else:
            lines.append(f"window[{report.probe_level}] x={x} delta={_format_delta(delta)}")
    lines.append("cross=" + {None: "skipped", True: "ok", False: "mismatch"}[report.cross_checked])
    passed = compat_ok and report.passed
    lines.append(f"verdict={'PASS' if passed else 'FAIL'}")
    return PipelineReport(lines, passed, deepest, report)
