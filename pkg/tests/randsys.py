"""Seeded random equation systems shared by the solver tests."""
from __future__ import annotations

import random

from eqwreath.words import EquationSystem, Letter, Word


def random_system(rng: random.Random, max_k: int = 2, max_n: int = 2,
                  max_total: int = 6) -> EquationSystem:
    k, n = rng.randint(0, max_k), rng.randint(1, max_n)
    r = rng.randint(1, 2)
    budget = rng.randint(r, max_total)
    cuts = sorted(rng.sample(range(1, budget), r - 1)) if r > 1 else []
    lengths = [b - a for a, b in zip([0] + cuts, cuts + [budget])]
    words = []
    for length in lengths:
        letters = []
        for _ in range(length):
            kind = "a" if k and rng.random() < 0.4 else "x"
            index = rng.randint(1, k if kind == "a" else n)
            letters.append(Letter(kind, index, rng.choice((1, -1))))
        words.append(Word(tuple(letters)))
    return EquationSystem(tuple(words), k, n)
