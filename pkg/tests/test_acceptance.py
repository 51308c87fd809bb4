"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (or as a script).
"""
import itertools
import random
import statistics
import time

import pytest

from eqwreath.assembly import pipeline
from eqwreath.catalog import catalog
from eqwreath.cli import main
from eqwreath.groups import (SizeCapError, action_by_right_translation, cyclic,
                             semidirect_product, wreath_order, wreath_product)
from eqwreath.solver import Status, brute_oracle, scan_sys_fin, solve
from eqwreath.towers import Locality, integer_tower, locality_trials
from eqwreath.universal import (UniversalProblem, check_compatibility, compute_X_N,
                                micro_projection_check)
from eqwreath.words import EquationSystem, Letter, Word, parse_word, prefix_set, system

from randsys import random_system


@pytest.fixture
def report(capsys):
    lines = []

    def emit(number, name, ok, detail):
        lines.append(f"ACCEPTANCE {number} {name}: {'PASS' if ok else 'FAIL'} ({detail})")

    yield emit
    with capsys.disabled():
        for line in lines:
            print("\n" + line, end="")
        print()


def run_cli(capsys, argv):
    code = main([str(a) for a in argv])
    out, _ = capsys.readouterr()
    return code, out


def test_1_prefix_set(report):
    p = parse_word("x1^2 x2 x1^-1")
    expected = {parse_word(t) for t in ["1", "x1", "x1^2", "x1^2 x2", "x1^2 x2 x1^-1"]}
    times = []
    for _ in range(200):
        t0 = time.perf_counter()
        got = prefix_set(p)
        times.append(time.perf_counter() - t0)
    ms = statistics.median(times) * 1e3
    ok = got == expected and len(got) == 5 and ms < 1.0
    report(1, "prefix set of worked example", ok, f"{len(got)} prefixes, median {ms:.4f} ms < 1 ms")
    assert ok


def test_2_solver_matches_oracle(report):
    t0 = time.perf_counter()
    rng = random.Random(2024)
    systems = [random_system(rng) for _ in range(200)]
    groups = catalog(8)
    checked = disagreements = 0
    for G in groups:
        for ws in systems:
            for consts in itertools.product(range(G.order), repeat=ws.k):
                fast, slow = solve(G, ws, consts), brute_oracle(G, ws, consts)
                checked += 1
                if (fast.status, fast.solution) != (slow.status, slow.solution):
                    disagreements += 1
    elapsed = time.perf_counter() - t0
    ok = disagreements == 0 and elapsed < 120
    report(2, "solve agrees with brute force", ok,
           f"{len(groups)} groups, 200 systems, {checked} instances, "
           f"{disagreements} disagreements, {elapsed:.1f} s < 120 s")
    assert ok


def test_3_locality(report):
    t0 = time.perf_counter()
    tally = locality_trials(10_000, seed=3, max_order=12, max_h=4, max_len=6)
    elapsed = time.perf_counter() - t0
    violations = tally.counts[Locality.VIOLATION]
    ok = (tally.trials >= 10_000 and violations == 0 and tally.premise_fails_differing >= 1
          and elapsed < 120)
    report(3, "locality lemma", ok,
           f"{tally.trials} trials, {violations} violations, "
           f"{tally.premise_fails_differing} premise-fails with differing values, "
           f"{elapsed:.1f} s < 120 s")
    assert ok


def test_4_wreath_construction(report):
    t0 = time.perf_counter()
    groups = catalog(16)
    built = largest = 0
    for H in groups:
        for G in groups:
            if wreath_order(H, G) > 10_000:
                with pytest.raises(SizeCapError):
                    wreath_product(H, G)
                continue
            W = wreath_product(H, G)  # validates every group axiom
            assert W.order == H.order**G.order * G.order
            built += 1
            largest = max(largest, W.order)
    act = action_by_right_translation(cyclic(2), cyclic(2))
    S = semidirect_product(act.space, cyclic(2), act)
    W = wreath_product(cyclic(2), cyclic(2))
    same = W.same_table(S)
    elapsed = time.perf_counter() - t0
    ok = same and elapsed < 60
    report(4, "wreath products", ok,
           f"{built} pairs up to order {largest} validated, semidirect match {same}, "
           f"{elapsed:.1f} s < 60 s")
    assert ok


def test_5_xn_correctness(report):
    t0 = time.perf_counter()
    prob = UniversalProblem(cyclic(2), integer_tower([2, 4]), system("x1 a1^-1"), (2,))
    levels_ok = [compute_X_N(prob, j).members for j in (1, 2)] == [[(0,)], [(2,)]]
    rng = random.Random(55)
    violations = nonempty = 0
    for _ in range(100):
        ws = random_system(rng, max_k=1, max_n=2, max_total=4)
        consts = tuple(rng.randrange(-4, 4) for _ in range(ws.k))
        p = UniversalProblem(cyclic(2), integer_tower([2, 4]), ws, consts)
        fine, coarse = compute_X_N(p, 2), compute_X_N(p, 1)
        nonempty += bool(fine.members)
        if check_compatibility(p, 2, 1, fine, coarse) is not None:
            violations += 1
    elapsed = time.perf_counter() - t0
    ok = levels_ok and violations == 0 and elapsed < 180
    report(5, "X_N correctness", ok,
           f"forced system levels exact {levels_ok}, 100 random systems ({nonempty} nonempty), "
           f"{violations} compatibility violations, {elapsed:.1f} s < 180 s")
    assert ok


def micro_systems():
    syms = [Letter(k, 1, s) for k in "ax" for s in (1, -1)]
    seen = set()
    for length in range(1, 5):
        for letters in itertools.product(syms, repeat=length):
            w = Word(letters)
            if len(w) == length and w.variable_indices() and w not in seen:
                seen.add(w)
                yield EquationSystem((w,), 1, 1)


def test_6_micro_projection(report):
    t0 = time.perf_counter()
    systems = list(micro_systems())
    mismatches = instances = 0
    for ws in systems:
        for a in (0, 1):
            prob = UniversalProblem(cyclic(2), integer_tower([2]), ws, (a,))
            instances += 1
            if not micro_projection_check(prob, 1).equal:
                mismatches += 1
    elapsed = time.perf_counter() - t0
    ok = len(systems) >= 20 and mismatches == 0 and elapsed < 300
    report(6, "micro projection", ok,
           f"{len(systems)} systems, {instances} instances, {mismatches} mismatches, "
           f"{elapsed:.1f} s < 300 s")
    assert ok


def test_7_negative_control(report, capsys, tmp_path):
    (tmp_path / "sq.eq").write_text("x1^2 a1\n")
    (tmp_path / "t.twr").write_text("ztower 2 4\n")
    t0 = time.perf_counter()
    verdict = scan_sys_fin(system("x1^2 a1"), 8)
    code, out = run_cli(capsys, ["pipeline", "--system", tmp_path / "sq.eq", "--tower",
                                 tmp_path / "t.twr", "--H", "cyclic:2", "--assign", "a1=1"])
    elapsed = time.perf_counter() - t0
    ok = (verdict.counterexample and verdict.group.name == "Z2" and code == 1
          and "empty level=1" in out and out.endswith("verdict=FAIL\n") and elapsed < 1)
    report(7, "negative control", ok,
           f"scan group {verdict.group.name if verdict.group else None}, pipeline exit {code}, "
           f"{elapsed:.2f} s < 1 s")
    assert ok


def test_8_end_to_end(report, capsys, tmp_path):
    (tmp_path / "comm.eq").write_text("x1 a1 x1^-1 a1^-1\n")
    (tmp_path / "t.twr").write_text("ztower 2 4 8\n")
    argv = ["pipeline", "--system", tmp_path / "comm.eq", "--tower", tmp_path / "t.twr",
            "--H", "cyclic:2", "--assign", "a1=1", "--support", "f1@-1=1,f1@0=1"]
    t0 = time.perf_counter()
    code, out = run_cli(capsys, argv)
    _, out2 = run_cli(capsys, argv)
    _, out4 = run_cli(capsys, argv + ["--workers", "4"])
    elapsed = time.perf_counter() - t0
    res = pipeline(system("x1 a1 x1^-1 a1^-1"), integer_tower([2, 4, 8]), cyclic(2), [1],
                   {(1, -1): 1, (1, 0): 1})
    windows = [ln for ln in out.splitlines() if ln.startswith("window[")]
    in_window = [ln for ln in windows if "delta=" in ln]
    order = UniversalProblem(cyclic(2), integer_tower([2, 4, 8]), system("x1 a1 x1^-1 a1^-1"),
                             (1,)).wreath(3).order
    ok = (code == 0 and in_window and all(ln.endswith("delta=identity") for ln in in_window)
          and "cross=ok" in out.splitlines() and res.window.cross_checked is True
          and order == 2048 and out == out2 == out4 and elapsed < 120)
    report(8, "end-to-end window check", ok,
           f"exit {code}, {len(in_window)}/{len(windows)} windows in range all identity, "
           f"cross-checked in order-{order} wreath, byte-identical x3, {elapsed:.1f} s < 120 s")
    assert ok


def test_9_cli_determinism(report, capsys, tmp_path):
    (tmp_path / "comm.eq").write_text("x1 a1 x1^-1 a1^-1\n")
    (tmp_path / "sq.eq").write_text("x1^2 a1\n")
    (tmp_path / "f.eq").write_text("x1 a1^-1\n")
    (tmp_path / "t.twr").write_text("ztower 2 4\n")
    d = tmp_path
    commands = [
        ["solve", "--group", "catalog:S3", "--system", d / "comm.eq", "--assign", "a1=2"],
        ["solvable", "--group", "catalog:Q8", "--system", d / "sq.eq"],
        ["scan", "--system", d / "sq.eq", "--max-order", "8"],
        ["locality", "--trials", "500", "--seed", "9"],
        ["locality", "--trials", "200", "--seed", "9", "--tower", d / "t.twr"],
        ["xn", "--system", d / "f.eq", "--tower", d / "t.twr", "--H", "cyclic:2",
         "--assign", "a1=2", "--witnesses"],
        ["pipeline", "--system", d / "f.eq", "--tower", d / "t.twr", "--H", "cyclic:2",
         "--assign", "a1=2", "--support", "f1@0=1"],
    ]
    differing = []
    for argv in commands:
        outs = {run_cli(capsys, argv + ["--workers", str(w)]) for w in (1, 1, 2, 4)}
        if len(outs) != 1:
            differing.append(argv[0])
    ok = not differing
    report(9, "CLI determinism", ok,
           f"{len(commands)} commands x 4 runs (workers 1,1,2,4), differing: {differing or 'none'}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
