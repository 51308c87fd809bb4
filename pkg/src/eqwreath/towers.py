"""Finite quotient towers with nested sections, section pullbacks, and the
locality check for wreath products.

Levels are numbered ``1..d`` from coarsest to finest.  An integer tower has
levels ``Z/m_1, ..., Z/m_d`` over the ambient group of integers; an
explicit tower uses its finest level as the ambient group.
"""
from __future__ import annotations

import enum
import os
import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .catalog import catalog
from .groups import (FiniteGroup, GroupError, GroupHom, HomomorphismError, WreathElement,
                     WreathGroup, cyclic, identity_hom, load_group, normal_closure,
                     quotient, validate_hom)
from .words import (CONSTANT, VARIABLE, EquationSystem, Letter, Word, evaluate,
                    evaluate_system, prefixes)


class TowerError(ValueError):
    pass


class QuotientTower:
    """A chain ``L_d -> ... -> L_1`` of surjections with nested sections.

    ``sections[j-1]`` is the section of level ``j``: a tuple of ambient
    elements mapping bijectively onto ``L_j``, nested increasingly.
    """

    def __init__(self, levels: Sequence[FiniteGroup], to_level: Sequence[np.ndarray],
                 sections: Sequence[Sequence[int]] | None = None,
                 moduli: Sequence[int] | None = None):
        self.levels = list(levels)
        self.moduli = tuple(moduli) if moduli is not None else None
        # _to_level[j-1][y] is the image in L_j of y in the finest level
        self._to_level = [np.asarray(p, dtype=np.int64) for p in to_level]
        self._check_maps()
        if sections is None:
            sections = self._default_sections()
        self.sections = [tuple(int(v) for v in s) for s in sections]
        self._check_sections()
        self._lift = [{self.reduce(x, j + 1): x for x in s} for j, s in enumerate(self.sections)]

    @property
    def is_integer(self) -> bool:
        return self.moduli is not None

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level(self, j: int) -> FiniteGroup:
        return self.levels[j - 1]

    def __repr__(self) -> str:
        if self.is_integer:
            return f"<QuotientTower ztower {' '.join(map(str, self.moduli))}>"
        return f"<QuotientTower explicit {[L.name for L in self.levels]}>"

    # ambient group: integers under addition, or the finest level
    @property
    def ambient_identity(self) -> int:
        return 0

    def ambient_mul(self, x: int, y: int) -> int:
        return x + y if self.is_integer else self.levels[-1].mul(x, y)

    def ambient_inv(self, x: int) -> int:
        return -x if self.is_integer else self.levels[-1].inv(x)

    def reduce(self, x: int, j: int) -> int:
        """Image of the ambient element ``x`` in ``L_j``."""
        if self.is_integer:
            return x % self.moduli[j - 1]
        return int(self._to_level[j - 1][x])

    def project(self, y: int, i: int, j: int) -> int:
        """``pi_{i->j}(y)`` for ``y`` in ``L_i``, ``i >= j``."""
        return self.map(i, j)(y)

    def map(self, i: int, j: int) -> GroupHom:
        if not 1 <= j <= i <= self.depth:
            raise TowerError(f"no tower map from level {i} to level {j}")
        cache = self.__dict__.setdefault("_maps", {})
        if (i, j) not in cache:
            cache[(i, j)] = self._build_map(i, j)
        return cache[(i, j)]

    def _build_map(self, i: int, j: int) -> GroupHom:
        if self.is_integer:
            images = np.arange(self.moduli[i - 1]) % self.moduli[j - 1]
        else:
            lift = self._finest_lift(i)
            images = self._to_level[j - 1][lift]
        return GroupHom(self.level(i), self.level(j), images)

    def _finest_lift(self, i: int) -> np.ndarray:
        lift = np.full(self.level(i).order, -1, dtype=np.int64)
        for y in range(self.levels[-1].order - 1, -1, -1):
            lift[self._to_level[i - 1][y]] = y
        return lift

    def lift(self, y: int, j: int) -> int:
        """The section representative of ``y`` in ``L_j``."""
        return self._lift[j - 1][y]

    def ambient_contains(self, x: int, j: int) -> bool:
        return self._lift[j - 1].get(self.reduce(x, j)) == x

    def sectioned(self, i: int, j: int) -> SectionedHom:
        """``pi_{i->j}`` with the image of the level-``j`` section in ``L_i``."""
        return sectioned_hom(self.map(i, j), [self.reduce(x, i) for x in self.sections[j - 1]])

    def _check_maps(self) -> None:
        d = self.depth
        if d == 0:
            raise TowerError("a tower needs at least one level")
        for i in range(d, 0, -1):
            for j in range(i, 0, -1):
                h = self.map(i, j)
                if not h.is_surjective():
                    raise TowerError(f"tower map {i}->{j} is not surjective")
                witness = validate_hom(h)
                if witness is not None:
                    raise HomomorphismError(*witness)
                for k in range(i, j - 1, -1):
                    composite = self.map(i, k).then(self.map(k, j))
                    if not np.array_equal(composite.images, h.images):
                        raise TowerError(f"tower maps incompatible: {i}->{k}->{j} != {i}->{j}")

    def _default_sections(self) -> list[tuple[int, ...]]:
        if self.is_integer:
            return [tuple(range(-(m // 2), m - m // 2)) for m in self.moduli]
        out, chosen = [], []
        for j in range(1, self.depth + 1):
            covered = {self.reduce(x, j) for x in chosen}
            for y in range(self.levels[-1].order):
                if self.reduce(y, j) not in covered:
                    covered.add(self.reduce(y, j))
                    chosen.append(y)
            out.append(tuple(sorted(chosen)))
        return out

    def _check_sections(self) -> None:
        if len(self.sections) != self.depth:
            raise TowerError("one section per level required")
        for j, s in enumerate(self.sections, start=1):
            if not self.is_integer and any(not 0 <= x < self.levels[-1].order for x in s):
                raise TowerError(f"section {j} has elements outside the finest level")
            images = sorted(self.reduce(x, j) for x in s)
            if images != list(range(self.level(j).order)):
                raise TowerError(f"section {j} does not map bijectively onto level {j}")
            if j > 1 and not set(self.sections[j - 2]) <= set(s):
                raise TowerError(f"section {j - 1} is not contained in section {j}")


def integer_tower(moduli: Sequence[int], sections: dict[int, Sequence[int]] | None = None
                  ) -> QuotientTower:
    """Levels ``Z/m_j`` with centered-residue sections unless overridden."""
    moduli = [int(m) for m in moduli]
    if not moduli or any(m < 1 for m in moduli):
        raise TowerError("moduli must be positive")
    for lo, hi in zip(moduli, moduli[1:]):
        if hi <= lo or hi % lo:
            raise TowerError(f"modulus {lo} must strictly divide {hi}")
    levels = [cyclic(m) for m in moduli]
    fine = np.arange(moduli[-1])
    to_level = [fine % m for m in moduli]
    secs = [tuple(range(-(m // 2), m - m // 2)) for m in moduli]
    for j, s in (sections or {}).items():
        secs[j - 1] = tuple(s)
    return QuotientTower(levels, to_level, secs, moduli=moduli)


def explicit_tower(levels: Sequence[FiniteGroup], maps: dict[int, Sequence[int]],
                   sections: dict[int, Sequence[int]] | None = None) -> QuotientTower:
    """``maps[i]`` lists the images in ``L_{i-1}`` of the elements of ``L_i``."""
    d = len(levels)
    for i in range(2, d + 1):
        if i not in maps:
            raise TowerError(f"missing map from level {i} to level {i - 1}")
    to_level = [None] * d
    to_level[d - 1] = np.arange(levels[-1].order)
    for i in range(d, 1, -1):
        step = np.asarray(maps[i], dtype=np.int64)
        if step.shape != (levels[i - 1].order,):
            raise TowerError(f"map {i} needs {levels[i - 1].order} images")
        to_level[i - 2] = step[to_level[i - 1]]
    secs = None
    if sections:
        default = QuotientTower(levels, to_level).sections
        secs = [tuple(sections.get(j, default[j - 1])) for j in range(1, d + 1)]
    return QuotientTower(levels, to_level, secs)


def parse_tower(text: str, base_dir: str = ".") -> QuotientTower:
    """Tower file: ``ztower m1 m2 ...`` or ``explicit`` with ``level``/``map`` lines.

    Both accept ``section <level> <elements...>`` override lines.
    """
    lines = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise TowerError("empty tower file")
    head, body = lines[0], lines[1:]
    sections: dict[int, list[int]] = {}
    try:
        if head[0] == "ztower":
            moduli = [int(v) for v in head[1:]]
            for ln in body:
                if ln[0] != "section":
                    raise TowerError(f"unexpected line {' '.join(ln)!r}")
                sections[int(ln[1])] = [int(v) for v in ln[2:]]
            return integer_tower(moduli, sections)
        if head == ["explicit"]:
            levels, maps = [], {}
            for ln in body:
                if ln[0] == "level" and len(ln) == 2:
                    ref = ln[1]
                    if ":" not in ref and not os.path.isabs(ref):
                        ref = os.path.join(base_dir, ref)
                    levels.append(load_group(ref))
                elif ln[0] == "map":
                    maps[int(ln[1])] = [int(v) for v in ln[2:]]
                elif ln[0] == "section":
                    sections[int(ln[1])] = [int(v) for v in ln[2:]]
                else:
                    raise TowerError(f"unexpected line {' '.join(ln)!r}")
            return explicit_tower(levels, maps, sections)
    except (ValueError, IndexError) as exc:
        if isinstance(exc, (TowerError, GroupError)):
            raise
        raise TowerError(f"malformed tower file: {exc}") from None
    raise TowerError(f"unknown tower kind {head[0]!r}")


def load_tower(path: str) -> QuotientTower:
    with open(path, encoding="utf-8") as fh:
        return parse_tower(fh.read(), os.path.dirname(os.path.abspath(path)))


# -- sections and pullbacks --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SectionedHom:
    gamma: GroupHom
    section: tuple[int, ...]

    def __post_init__(self):
        g = self.gamma
        if not g.is_surjective():
            raise GroupError("sectioned map must be surjective")
        images = sorted(g(x) for x in self.section)
        if images != list(range(g.target.order)):
            raise GroupError("section does not map bijectively onto the target")

    @property
    def source(self) -> FiniteGroup:
        return self.gamma.source

    @property
    def target(self) -> FiniteGroup:
        return self.gamma.target


def sectioned_hom(gamma: GroupHom, section: Sequence[int]) -> SectionedHom:
    return SectionedHom(gamma, tuple(int(x) for x in section))


def section_pullback(sh: SectionedHom, phi: Sequence[int]) -> tuple[int, ...]:
    """``phi_gamma`` with ``phi_gamma(gamma(x)) = phi(x)`` for ``x`` in the section."""
    out = [0] * sh.target.order
    for x in sh.section:
        out[sh.gamma(x)] = phi[x]
    return tuple(out)


def wreath_pushforward(sh: SectionedHom, element: WreathElement) -> WreathElement:
    return WreathElement(section_pullback(sh, element.f), sh.gamma(element.g))


class Locality(enum.Enum):
    PREMISE_FAILS = "premise-fails"
    VERIFIED = "verified"
    VIOLATION = "violation"


@dataclass(frozen=True)
class LocalityResult:
    outcome: Locality
    value: int
    pushed_value: int

    @property
    def differs(self) -> bool:
        return self.value != self.pushed_value


def check_locality(p: Word, H: FiniteGroup, consts: Sequence[WreathElement],
                   vars: Sequence[WreathElement], sh: SectionedHom, x: int) -> LocalityResult:
    """Compare the H-part of ``p`` at ``x`` upstairs with its pushforward at ``gamma(x)``.

    The comparison is only claimed when every point ``x s``, with ``s`` a
    prefix value of ``p`` under the group parts, lies in the section.
    """
    A = sh.source
    group_consts = [e.g for e in consts]
    group_vars = [e.g for e in vars]
    window = [A.mul(x, evaluate(q, A, group_consts, group_vars)) for q in prefixes(p)]
    inside = set(sh.section)
    value = evaluate(p, WreathGroup(H, A), consts, vars).f[x]
    pushed = evaluate(p, WreathGroup(H, sh.target),
                      [wreath_pushforward(sh, e) for e in consts],
                      [wreath_pushforward(sh, e) for e in vars]).f[sh.gamma(x)]
    if not all(y in inside for y in window):
        return LocalityResult(Locality.PREMISE_FAILS, value, pushed)
    outcome = Locality.VERIFIED if value == pushed else Locality.VIOLATION
    return LocalityResult(outcome, value, pushed)


def finite_level_check(ws: EquationSystem, consts: Sequence[int], vars: Sequence[int],
                       tower: QuotientTower) -> list[bool]:
    """For each level ``j``, whether ``w(a_j, u_j) = 1`` in ``L_j`` (ambient inputs)."""
    out = []
    for j in range(1, tower.depth + 1):
        L = tower.level(j)
        a_j = [tower.reduce(c, j) for c in consts]
        u_j = [tower.reduce(v, j) for v in vars]
        out.append(all(v == 0 for v in evaluate_system(ws, L, a_j, u_j)))
    return out


# -- randomized locality trials -----------------------------------------------------

def surjection_pool(max_order: int = 12) -> list[GroupHom]:
    """Identity maps, maps to the trivial group, and quotient maps by the normal
    closure of each single element, over catalog groups of order <= max_order."""
    pool = []
    for G in catalog(max_order):
        seen = set()
        pool.append(identity_hom(G))
        for g in G.elements:
            N = tuple(normal_closure(G, [g]))
            if N in seen or len(N) == 1:
                continue
            seen.add(N)
            Q, h = quotient(G, N)
            pool.append(h)
    return pool


def random_word(rng: random.Random, k: int, n: int, max_len: int) -> Word:
    letters = []
    for _ in range(rng.randint(0, max_len)):
        if k and (not n or rng.random() < 0.5):
            letters.append(Letter(CONSTANT, rng.randint(1, k), rng.choice((1, -1))))
        else:
            letters.append(Letter(VARIABLE, rng.randint(1, n), rng.choice((1, -1))))
    return Word(tuple(letters))


@dataclass
class LocalityTally:
    trials: int = 0
    counts: Counter = field(default_factory=Counter)
    premise_fails_differing: int = 0
    first_differing: tuple | None = None

    def lines(self) -> list[str]:
        return [
            f"trials={self.trials}",
            f"verified={self.counts[Locality.VERIFIED]}",
            f"premise_fails={self.counts[Locality.PREMISE_FAILS]}",
            f"premise_fails_differing={self.premise_fails_differing}",
            f"violation={self.counts[Locality.VIOLATION]}",
        ]


def _random_instance(rng: random.Random, pool: list[SectionedHom | GroupHom],
                     hs: list[FiniteGroup], max_len: int):
    base = rng.choice(pool)
    if isinstance(base, SectionedHom):
        sh = base
    else:
        fibres: dict[int, list[int]] = {}
        for x in base.source.elements:
            fibres.setdefault(base(x), []).append(x)
        sh = sectioned_hom(base, [rng.choice(fibres[b]) for b in range(base.target.order)])
    H = rng.choice(hs)
    A = sh.source
    k, n = rng.randint(1, 2), rng.randint(1, 2)
    p = random_word(rng, k, n, max_len)

    def elem() -> WreathElement:
        return WreathElement(tuple(rng.randrange(H.order) for _ in A.elements),
                             rng.randrange(A.order))

    consts = [elem() for _ in range(k)]
    vars = [elem() for _ in range(n)]
    x = rng.randrange(A.order)
    return p, H, consts, vars, sh, x


def locality_trials(trials: int, seed: int, tower: QuotientTower | None = None,
                    max_order: int = 12, max_h: int = 4, max_len: int = 6,
                    workers: int = 1) -> LocalityTally:
    """Run seeded random locality checks; trial ``i`` uses seed ``f"{seed}:{i}"``.

    Without a tower the maps come from ``surjection_pool``; with one, from
    the tower maps out of its finest level (with the tower's own sections)
    plus randomly re-sectioned copies.
    """
    if tower is None:
        pool: list = surjection_pool(max_order)
    else:
        d = tower.depth
        pool = []
        for j in range(1, d + 1):
            pool.append(tower.sectioned(d, j))
            pool.append(tower.map(d, j))
    hs = catalog(max_h)

    def run(i: int):
        rng = random.Random(f"{seed}:{i}")
        p, H, consts, vars, sh, x = _random_instance(rng, pool, hs, max_len)
        return i, check_locality(p, H, consts, vars, sh, x), (str(p), H.name, x)

    tally = LocalityTally(trials=trials)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(run, range(trials)))
    else:
        results = [run(i) for i in range(trials)]
    for i, res, info in results:
        tally.counts[res.outcome] += 1
        if res.outcome is Locality.PREMISE_FAILS and res.differs:
            tally.premise_fails_differing += 1
            if tally.first_differing is None:
                tally.first_differing = (i,) + info
    return tally
