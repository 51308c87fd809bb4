"""Level sets of universal solutions over a quotient tower.

For a level ``N`` the set ``X_N`` holds the tuples ``u`` in ``L_N^n`` such
that for every level ``M <= N`` and every ``f`` in ``(H^{L_M})^k`` some
``phi`` in ``(H^{L_M})^n`` solves ``w((f, a_M), (phi, u_M)) = 1`` in
``H wr L_M``.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .groups import (DEFAULT_ORDER_CAP, FiniteGroup, SizeCapError, WreathProduct,
                     function_code, power_action, semidirect_product, wreath_order,
                     wreath_product)
from .solver import Status, brute_oracle, compile_system, solve
from .towers import QuotientTower
from .words import EquationSystem, evaluate_system

DEFAULT_X_BUDGET = 10**7


class XBudgetError(RuntimeError):
    def __init__(self, level: int, size: int, budget: int):
        super().__init__(f"level {level}: search space {size} exceeds budget {budget}")
        self.level = level
        self.size = size
        self.budget = budget


@dataclass(eq=False)
class UniversalProblem:
    """``consts`` are ambient elements (integers for an integer tower)."""

    H: FiniteGroup
    tower: QuotientTower
    system: EquationSystem
    consts: tuple[int, ...]
    budget: int = DEFAULT_X_BUDGET
    cap: int = DEFAULT_ORDER_CAP
    _wreaths: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        self.consts = tuple(int(c) for c in self.consts)
        if len(self.consts) != self.system.k:
            raise ValueError(f"system has {self.system.k} constants, got {len(self.consts)}")

    @property
    def k(self) -> int:
        return self.system.k

    @property
    def n(self) -> int:
        return self.system.n

    def consts_at(self, j: int) -> tuple[int, ...]:
        return tuple(self.tower.reduce(c, j) for c in self.consts)

    def search_size(self, j: int) -> int:
        return self.H.order ** ((self.k + self.n) * self.tower.level(j).order)

    def check_budget(self, N: int) -> None:
        """Raise before any search if some level ``M <= N`` is out of reach."""
        for M in range(1, N + 1):
            size = self.search_size(M)
            if size > self.budget:
                raise XBudgetError(M, size, self.budget)
            order = wreath_order(self.H, self.tower.level(M))
            if order > self.cap:
                raise SizeCapError(order, self.cap)

    def wreath(self, j: int) -> WreathProduct:
        if j not in self._wreaths:
            self._wreaths[j] = wreath_product(self.H, self.tower.level(j), cap=self.cap)
        return self._wreaths[j]

    @cached_property
    def compiled(self):
        return compile_system(self.system)


@dataclass(frozen=True)
class LevelVerdict:
    ok: bool
    reason: str = ""
    witnesses: dict | None = None


def level_condition(prob: UniversalProblem, M: int, u_M: Sequence[int],
                    keep_witnesses: bool = False) -> LevelVerdict:
    """Whether ``u_M`` passes the condition at level ``M`` for every ``f``."""
    L = prob.tower.level(M)
    a_M = prob.consts_at(M)
    if any(v != 0 for v in evaluate_system(prob.system, L, a_M, u_M)):
        return LevelVerdict(False, f"group part fails at level {M}")
    W = prob.wreath(M)
    g = L.order
    nf = prob.H.order**g
    domains = [np.arange(nf, dtype=np.int64) * g + u for u in u_M]
    witnesses = {} if keep_witnesses else None
    for fbar in itertools.product(range(nf), repeat=prob.k):
        consts = [fc * g + a for fc, a in zip(fbar, a_M)]
        report = solve(W, prob.system, consts, domains=domains, compiled=prob.compiled)
        if report.status is Status.NO_SOLUTION:
            fs = ";".join(",".join(map(str, W.decode(c).f)) for c in consts)
            return LevelVerdict(False, f"no solution at level {M} for f=({fs})")
        if witnesses is not None:
            witnesses[fbar] = tuple(v // g for v in report.solution)
    return LevelVerdict(True, witnesses=witnesses)


@dataclass
class XNSet:
    level: int
    members: list[tuple[int, ...]]
    witnesses: dict | None = None
    rejections: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, u) -> bool:
        return tuple(u) in set(self.members)

    def lines(self) -> list[str]:
        out = [f"level={self.level} size={len(self.members)}"]
        out.extend(",".join(map(str, u)) for u in self.members)
        return out


def compute_X_N(prob: UniversalProblem, N: int, *, witnesses: bool = False,
                workers: int = 1) -> XNSet:
    """Exact ``X_N`` by exhaustive quantification (members sorted)."""
    prob.check_budget(N)
    tower = prob.tower
    L_N = tower.level(N)
    candidates = list(itertools.product(range(L_N.order), repeat=prob.n))
    keys = sorted({(M, tuple(tower.project(v, N, M) for v in u))
                   for u in candidates for M in range(1, N + 1)})

    def run(key):
        M, u_M = key
        return key, level_condition(prob, M, u_M, keep_witnesses=witnesses)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            verdicts = dict(ex.map(run, keys))
    else:
        verdicts = dict(map(run, keys))
    members, rejections = [], {}
    kept = {} if witnesses else None
    for u in candidates:
        failed = None
        for M in range(1, N + 1):
            v = verdicts[(M, tuple(tower.project(x, N, M) for x in u))]
            if not v.ok:
                failed = v.reason
                break
        if failed is None:
            members.append(u)
            if kept is not None:
                for M in range(1, N + 1):
                    u_M = tuple(tower.project(x, N, M) for x in u)
                    kept[(M, u_M)] = verdicts[(M, u_M)].witnesses
        else:
            rejections[u] = failed
    return XNSet(N, members, kept, rejections)


def check_compatibility(prob: UniversalProblem, fine: int, coarse: int,
                        X_fine: XNSet | None = None, X_coarse: XNSet | None = None
                        ) -> tuple[int, ...] | None:
    """First member of ``X_fine`` whose image is missing from ``X_coarse``."""
    if X_fine is None:
        X_fine = compute_X_N(prob, fine)
    if X_coarse is None:
        X_coarse = compute_X_N(prob, coarse)
    allowed = set(X_coarse.members)
    for u in X_fine.members:
        if tuple(prob.tower.project(v, fine, coarse) for v in u) not in allowed:
            return u
    return None


@dataclass
class UniversalTuple:
    """``k`` elements of ``D = prod_M (H^{L_M})^{m_M}``, ``m_M = |H|^(k |L_M|)``.

    ``blocks[i]`` is ``(level, m, point offset)``; coordinate ``c`` of block
    ``i`` occupies points ``offset + c*|L_M| ... offset + (c+1)*|L_M| - 1``.
    ``functions[t]`` is the value table of the t-th component over all points.
    """

    H: FiniteGroup
    k: int
    levels: list[FiniteGroup]
    blocks: list[tuple[int, int, int]]
    functions: list[tuple[int, ...]]

    @property
    def points(self) -> int:
        return sum(m * L.order for (_, m, _), L in zip(self.blocks, self.levels))

    def codes(self) -> list[int]:
        return [function_code(f, self.H.order) for f in self.functions]

    def projection(self, block: int, c: int) -> tuple[tuple[int, ...], ...]:
        _, _, offset = self.blocks[block]
        size = self.levels[block].order
        lo = offset + c * size
        return tuple(f[lo:lo + size] for f in self.functions)


def build_universal_tuple(H: FiniteGroup, k: int, levels: Sequence[FiniteGroup],
                          max_points: int = 10**6) -> UniversalTuple:
    levels = list(levels)
    blocks, offset = [], 0
    for i, L in enumerate(levels):
        m = H.order ** (k * L.order)
        blocks.append((i + 1, m, offset))
        offset += m * L.order
    if offset > max_points:
        raise XBudgetError(len(levels), offset, max_points)
    functions = [[0] * offset for _ in range(k)]
    for (level, m, off), L in zip(blocks, levels):
        size = L.order
        all_funcs = list(itertools.product(range(H.order), repeat=size))
        for c, combo in enumerate(itertools.product(all_funcs, repeat=k)):
            for t in range(k):
                functions[t][off + c * size: off + (c + 1) * size] = combo[t]
    ut = UniversalTuple(H, k, levels, blocks, [tuple(f) for f in functions])
    for i, (level, m, _) in enumerate(blocks):
        seen = {ut.projection(i, c) for c in range(m)}
        if len(seen) != H.order ** (k * levels[i].order):
            raise AssertionError(f"block {level} is not universal")
    return ut


@dataclass
class MicroReport:
    equal: bool
    x_members: list[tuple[int, ...]]
    projected: list[tuple[int, ...]]
    group_order: int


def universal_group(prob: UniversalProblem, N: int):
    """``D_N x| L_N`` and the universal constants, materialized."""
    tower = prob.tower
    levels = [tower.level(M) for M in range(1, N + 1)]
    ut = build_universal_tuple(prob.H, prob.k, levels)
    L_N = tower.level(N)
    point_map = np.empty((L_N.order, ut.points), dtype=np.int64)
    for g in L_N.elements:
        for i, ((M, m, off), L) in enumerate(zip(ut.blocks, levels)):
            g_M = tower.project(g, N, M)
            moved = np.asarray([L.mul(x, g_M) for x in L.elements])
            for c in range(m):
                base = off + c * L.order
                point_map[g, base:base + L.order] = base + moved
    act = power_action(L_N, prob.H, point_map, cap=prob.cap)
    S = semidirect_product(act.space, L_N, act, name=f"D{N}:{L_N.name}", cap=prob.cap)
    return S, ut


def micro_projection_check(prob: UniversalProblem, N: int) -> MicroReport:
    """Compare ``X_N`` with the u-projection of the solution set in ``D_N x| L_N``."""
    S, ut = universal_group(prob, N)
    a_N = prob.consts_at(N)
    consts = [S.encode(code, a) for code, a in zip(ut.codes(), a_N)]
    nd = S.D.order
    projected = []
    for u in itertools.product(range(S.G.order), repeat=prob.n):
        domains = [[S.encode(d, v) for d in range(nd)] for v in u]
        if brute_oracle(S, prob.system, consts, domains).status is Status.SOLVED:
            projected.append(u)
    X = compute_X_N(prob, N)
    return MicroReport(X.members == projected, X.members, projected, S.order)


@dataclass
class DeepestMember:
    level: int
    member: tuple[int, ...] | None
    sets: list[XNSet]
    hint: str = ""

    @property
    def empty(self) -> bool:
        return self.member is None


def deepest_nonempty_member(prob: UniversalProblem, workers: int = 1) -> DeepestMember:
    """Least member of ``X_d``, or the coarsest empty level with a refutation hint."""
    sets = []
    for j in range(1, prob.tower.depth + 1):
        X = compute_X_N(prob, j, workers=workers)
        sets.append(X)
        if not X.members:
            points = sum(prob.H.order ** (prob.k * prob.tower.level(M).order)
                         * prob.tower.level(M).order for M in range(1, j + 1))
            first = next(iter(X.rejections.values()), "no candidates")
            hint = (f"system fails in D{j}:L{j} of order "
                    f"{prob.H.order}^{points}*{prob.tower.level(j).order}; {first}")
            return DeepestMember(j, None, sets, hint)
    return DeepestMember(prob.tower.depth, sets[-1].members[0], sets)
