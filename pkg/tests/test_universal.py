import itertools
import random

import pytest

from eqwreath.groups import SizeCapError, WreathElement, WreathGroup, cyclic, trivial
from eqwreath.towers import integer_tower
from eqwreath.universal import (UniversalProblem, XBudgetError, build_universal_tuple,
                                check_compatibility, compute_X_N, deepest_nonempty_member,
                                level_condition, micro_projection_check)
from eqwreath.words import EquationSystem, evaluate_system, system

from randsys import random_system


def brute_X(prob: UniversalProblem, N: int) -> list[tuple[int, ...]]:
    """X_N straight from the definition, evaluating in the lazy wreath group."""
    tower, H = prob.tower, prob.H
    out = []
    for u in itertools.product(range(tower.level(N).order), repeat=prob.n):
        ok = True
        for M in range(1, N + 1):
            L = tower.level(M)
            W = WreathGroup(H, L)
            u_M = [tower.project(v, N, M) for v in u]
            a_M = prob.consts_at(M)
            funcs = list(itertools.product(range(H.order), repeat=L.order))
            for fs in itertools.product(funcs, repeat=prob.k):
                consts = [WreathElement(f, a) for f, a in zip(fs, a_M)]
                if not any(all(r == W.identity for r in evaluate_system(
                        prob.system, W, consts, [WreathElement(p, v) for p, v in zip(ps, u_M)]))
                        for ps in itertools.product(funcs, repeat=prob.n)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(u)
    return out


def test_forced_system_pins_each_level():
    prob = UniversalProblem(cyclic(2), integer_tower([2, 4]), system("x1 a1^-1"), (2,))
    assert compute_X_N(prob, 1).members == [(0,)]
    assert compute_X_N(prob, 2).members == [(2,)]
    assert check_compatibility(prob, 2, 1) is None


def test_negative_control_is_empty_with_hint():
    prob = UniversalProblem(cyclic(2), integer_tower([2]), system("x1^2 a1"), (1,))
    X = compute_X_N(prob, 1)
    assert X.members == [] and "group part fails" in X.rejections[(0,)]
    deepest = deepest_nonempty_member(prob)
    assert deepest.empty and deepest.level == 1 and "group part fails" in deepest.hint


def test_commutator_everything_survives():
    for H in (trivial(), cyclic(2)):
        prob = UniversalProblem(H, integer_tower([2, 4]), system("x1 a1 x1^-1 a1^-1"), (1,))
        assert compute_X_N(prob, 2).members == [(u,) for u in range(4)]


@pytest.mark.parametrize("seed", range(12))
def test_X_matches_definition(seed):
    rng = random.Random(seed)
    ws = random_system(rng, max_k=1, max_n=1, max_total=4)
    tower = integer_tower([2, 4])
    prob = UniversalProblem(cyclic(2), tower, ws, tuple(rng.randrange(-4, 4) for _ in range(ws.k)))
    for N in (1, 2):
        assert compute_X_N(prob, N).members == brute_X(prob, N), str(ws)


def test_witnesses_solve_their_instances():
    prob = UniversalProblem(cyclic(2), integer_tower([2, 4]), system("x1 a1 x1 a1^-1"), (1,))
    X = compute_X_N(prob, 2, witnesses=True)
    assert X.members
    for (M, u_M), table in X.witnesses.items():
        W = prob.wreath(M)
        g = prob.tower.level(M).order
        for fbar, phi in table.items():
            consts = [fc * g + a for fc, a in zip(fbar, prob.consts_at(M))]
            vars = [pc * g + u for pc, u in zip(phi, u_M)]
            assert all(v == 0 for v in evaluate_system(prob.system, W, consts, vars))


def test_level_condition_reports_failing_f():
    prob = UniversalProblem(cyclic(2), integer_tower([2]), system("x1^2 a1"), (0,))
    verdict = level_condition(prob, 1, (1,))
    assert verdict.ok is False and "no solution" in verdict.reason


def test_compatibility_on_random_systems():
    rng = random.Random(11)
    for _ in range(15):
        ws = random_system(rng, max_k=1, max_n=1, max_total=4)
        prob = UniversalProblem(cyclic(2), integer_tower([2, 4]), ws,
                                tuple(rng.randrange(-4, 4) for _ in range(ws.k)))
        assert check_compatibility(prob, 2, 1) is None


def test_budget_and_cap_are_checked_first():
    prob = UniversalProblem(cyclic(2), integer_tower([2, 4, 8]), system("x1 x2 a1 a2"),
                            (0, 0), budget=10**4)
    with pytest.raises(XBudgetError) as exc:
        compute_X_N(prob, 3)
    assert exc.value.level == 2
    capped = UniversalProblem(cyclic(2), integer_tower([2, 4, 8]), system("x1 a1"), (0,), cap=100)
    with pytest.raises(SizeCapError):
        compute_X_N(capped, 3)


def test_universal_tuple_covers_every_function():
    ut = build_universal_tuple(cyclic(2), 1, [cyclic(2), cyclic(4)])
    assert [b[1] for b in ut.blocks] == [4, 16]
    assert ut.points == 4 * 2 + 16 * 4
    assert {ut.projection(1, c) for c in range(16)} == {
        (f,) for f in itertools.product(range(2), repeat=4)}


@pytest.mark.parametrize("text", ["x1 a1^-1", "x1^2 a1", "x1 a1 x1^-1 a1^-1", "x1^2 a1^-1"])
def test_micro_projection(text):
    for a in (0, 1):
        prob = UniversalProblem(cyclic(2), integer_tower([2]), system(text, k=1), (a,))
        report = micro_projection_check(prob, 1)
        assert report.equal, (text, a, report.x_members, report.projected)
        assert report.group_order == 2**8 * 2


def test_zero_constant_systems():
    prob = UniversalProblem(cyclic(2), integer_tower([2, 4]), EquationSystem(system("x1^2").words), ())
    assert compute_X_N(prob, 2).members == [(0,), (2,)]


def test_universal_tuple_small_cases():
    ut = build_universal_tuple(trivial(), 1, [cyclic(2)])
    assert [b[1] for b in ut.blocks] == [1]
    ut = build_universal_tuple(cyclic(2), 1, [cyclic(2)])
    assert [b[1] for b in ut.blocks] == [4]
    seen = [ut.projection(0, c) for c in range(4)]
    assert sorted(seen) == [(f,) for f in itertools.product(range(2), repeat=2)]


def test_micro_projection_with_trivial_H():
    for text in ("x1 a1^-1", "x1^2 a1"):
        for a in (0, 1):
            prob = UniversalProblem(trivial(), integer_tower([2]), system(text, k=1), (a,))
            assert micro_projection_check(prob, 1).equal


def test_deepest_member_examples():
    forced = UniversalProblem(cyclic(2), integer_tower([2, 4, 8]), system("x1 a1^-1"), (5,))
    deepest = deepest_nonempty_member(forced)
    assert not deepest.empty and deepest.level == 3 and deepest.member == (5,)
    comm = UniversalProblem(trivial(), integer_tower([2, 4]), system("x1 a1 x1^-1 a1^-1"), (3,))
    deepest = deepest_nonempty_member(comm)
    assert deepest.level == 2 and len(deepest.sets[-1]) == 4


def test_compatibility_is_vacuous_over_empty_fine_set():
    prob = UniversalProblem(cyclic(2), integer_tower([2, 4]), system("x1^2 a1"), (1,))
    assert compute_X_N(prob, 2).members == []
    assert check_compatibility(prob, 2, 1) is None


def test_X_is_independent_of_worker_count():
    prob = UniversalProblem(cyclic(2), integer_tower([2, 4]), system("x1 a1 x1 a1^-1"), (1,))
    base = compute_X_N(prob, 2).members
    assert compute_X_N(prob, 2, workers=3).members == base
