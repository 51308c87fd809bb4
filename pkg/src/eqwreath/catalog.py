"""Built-in small groups, each given by permutation generators.

Every group of order <= 16 appears exactly once up to isomorphism (the
tests prove this by enumeration for orders <= 8 only).
"""
from __future__ import annotations

from functools import lru_cache

from .groups import FiniteGroup, GroupError, format_cycles, from_permutations

MAX_CATALOG_ORDER = 16


def _cycle(start: int, length: int) -> str:
    if length < 2:
        return ""
    return "(" + " ".join(str(p) for p in range(start, start + length)) + ")"


def _cyclic_product(*lengths: int) -> tuple[int, list[str]]:
    gens, start = [], 1
    for n in lengths:
        gens.append(_cycle(start, n))
        start += n
    return start - 1, gens


def _dihedral(n: int) -> tuple[int, list[str]]:
    rotation = _cycle(1, n)
    reflection = "".join(f"({i} {n + 2 - i})" for i in range(2, n) if i < n + 2 - i)
    return n, [rotation, reflection]


def _metacyclic(m: int, k: int, s: int, r: int) -> tuple[int, list[str]]:
    """Right regular representation of <a, b | a^m, b^k = a^s, b a b^-1 = a^r>.

    Elements ``a^i b^j`` are labelled ``i + m*j``.
    """
    def mul(x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
        (i, j), (i2, j2) = x, y
        i_new = (i + pow(r, j, m) * i2) % m
        j_new = j + j2
        if j_new >= k:
            j_new -= k
            i_new = (i_new + s) % m
        return i_new, j_new

    elems = [(i, j) for j in range(k) for i in range(m)]
    return _regular(elems, mul, [(1 % m, 0), (0, 1 % k)])


def _regular(elems: list, mul, gens: list) -> tuple[int, list[str]]:
    label = {e: idx for idx, e in enumerate(elems)}
    return len(elems), [format_cycles([label[mul(e, g)] for e in elems]) for g in gens]


def _swap_by_z4() -> tuple[int, list[str]]:
    """``Z2^2 x| Z4``, the generator of Z4 swapping the two Z2 factors."""
    def mul(x, y):
        (u, v, j), (u2, v2, j2) = x, y
        if j % 2:
            u2, v2 = v2, u2
        return (u ^ u2, v ^ v2, (j + j2) % 4)

    elems = [(u, v, j) for j in range(4) for v in range(2) for u in range(2)]
    return _regular(elems, mul, [(1, 0, 0), (0, 0, 1)])


def _pauli() -> tuple[int, list[str]]:
    """``i^k X^a Z^b`` with ``Z X = -X Z``."""
    def mul(x, y):
        (k, a, b), (k2, a2, b2) = x, y
        return ((k + k2 + 2 * b * a2) % 4, a ^ a2, b ^ b2)

    elems = [(k, a, b) for b in range(2) for a in range(2) for k in range(4)]
    return _regular(elems, mul, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])


def _with_z2(degree: int, gens: list[str]) -> tuple[int, list[str]]:
    return degree + 2, gens + [f"({degree + 1} {degree + 2})"]


_ENTRIES: list[tuple[str, tuple[int, list[str]]]] = [
    ("1", (1, [])),
    ("Z2", _cyclic_product(2)),
    ("Z3", _cyclic_product(3)),
    ("Z4", _cyclic_product(4)),
    ("Z2^2", _cyclic_product(2, 2)),
    ("Z5", _cyclic_product(5)),
    ("Z6", _cyclic_product(6)),
    ("S3", (3, ["(1 2 3)", "(1 2)"])),
    ("Z7", _cyclic_product(7)),
    ("Z8", _cyclic_product(8)),
    ("Z4xZ2", _cyclic_product(4, 2)),
    ("Z2^3", _cyclic_product(2, 2, 2)),
    ("D4", _dihedral(4)),
    ("Q8", _metacyclic(4, 2, 2, 3)),
    ("Z9", _cyclic_product(9)),
    ("Z3^2", _cyclic_product(3, 3)),
    ("Z10", _cyclic_product(10)),
    ("D5", _dihedral(5)),
    ("Z11", _cyclic_product(11)),
    ("Z12", _cyclic_product(12)),
    ("Z6xZ2", _cyclic_product(6, 2)),
    ("D6", _dihedral(6)),
    ("A4", (4, ["(1 2 3)", "(1 2)(3 4)"])),
    ("Dic3", _metacyclic(6, 2, 3, 5)),
    ("Z13", _cyclic_product(13)),
    ("Z14", _cyclic_product(14)),
    ("D7", _dihedral(7)),
    ("Z15", _cyclic_product(15)),
    ("Z16", _cyclic_product(16)),
    ("Z8xZ2", _cyclic_product(8, 2)),
    ("Z4^2", _cyclic_product(4, 4)),
    ("Z4xZ2^2", _cyclic_product(4, 2, 2)),
    ("Z2^4", _cyclic_product(2, 2, 2, 2)),
    ("D8", _dihedral(8)),
    ("Q16", _metacyclic(8, 2, 4, 7)),
    ("SD16", _metacyclic(8, 2, 0, 3)),
    ("M16", _metacyclic(8, 2, 0, 5)),
    ("Z4:Z4", _metacyclic(4, 4, 0, 3)),
    ("Z2xD4", _with_z2(*_dihedral(4))),
    ("Z2xQ8", _with_z2(*_metacyclic(4, 2, 2, 3))),
    ("Z2^2:Z4", _swap_by_z4()),
    ("Pauli", _pauli()),
]


def catalog_entries() -> list[tuple[str, int, list[str]]]:
    """``(name, degree, generators)`` in catalog order."""
    return [(name, degree, [g for g in gens if g]) for name, (degree, gens) in _ENTRIES]


@lru_cache(maxsize=None)
def _build_all() -> tuple[FiniteGroup, ...]:
    groups = [from_permutations(degree, gens, name=name)
              for name, degree, gens in catalog_entries()]
    groups.sort(key=lambda G: G.order)  # stable: file order within an order class
    return tuple(groups)


def catalog(max_order: int) -> list[FiniteGroup]:
    """Catalog groups of order <= ``max_order``, ascending by order."""
    if max_order > MAX_CATALOG_ORDER:
        raise GroupError(f"catalog covers orders up to {MAX_CATALOG_ORDER}, got {max_order}")
    return [G for G in _build_all() if G.order <= max_order]


def by_name(name: str) -> FiniteGroup:
    for G in _build_all():
        if G.name == name:
            return G
    raise KeyError(name)
