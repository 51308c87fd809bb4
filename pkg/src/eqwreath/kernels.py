"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the numpy/pure
Python twin takes over.  Setting ``EQWREATH_PURE=1`` forces the fallback.
"""
from __future__ import annotations

import os
from functools import cached_property
from types import ModuleType

import numpy as np

from . import _pykernels

FOUND = _pykernels.FOUND
EXHAUSTED = _pykernels.EXHAUSTED
OVER_BUDGET = _pykernels.OVER_BUDGET


def _load_compiled() -> ModuleType | None:
    if os.environ.get("EQWREATH_PURE"):
        return None
    try:
        from . import _ckernels
    except ImportError:
        return None
    return _ckernels


_compiled = _load_compiled()
_active: ModuleType = _compiled if _compiled is not None else _pykernels


def backend() -> str:
    return "compiled" if _active is _compiled else "python"


def available_backends() -> list[str]:
    return ["compiled", "python"] if _compiled is not None else ["python"]


def use_backend(name: str) -> None:
    """Switch the active backend (``"compiled"`` or ``"python"``)."""
    global _active
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        _active = _compiled
    elif name == "python":
        _active = _pykernels
    else:
        raise ValueError(f"unknown backend {name!r}")


def _i32(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.int32)


def build_wreath(h_table, g_table) -> np.ndarray:
    return _active.build_wreath(_i32(h_table), _i32(g_table))


def build_semidirect(d_table, g_table, act) -> np.ndarray:
    return _active.build_semidirect(_i32(d_table), _i32(g_table), _i32(act))


def associativity_witness(table, gens) -> tuple[int, int, int] | None:
    return _active.associativity_witness(_i32(table), _i32(gens))


class Program:
    """Flattened equation system for the search kernels.

    Slot ``i < k`` holds constant ``a(i+1)``, slot ``k + j`` holds variable
    ``x(j+1)``.  ``check_words[check_off[d]:check_off[d+1]]`` are the words
    whose highest variable is ``x(d+1)``.
    """

    def __init__(self, slots, signs, woff, check_off, check_words):
        self.arrays = tuple(_i32(v) for v in (slots, signs, woff, check_off, check_words))

    @cached_property
    def lists(self):
        return tuple(v.tolist() for v in self.arrays)


def search(group, program: Program, consts, dom, doff, top_lo, top_hi, budget):
    """Returns ``(status, positions, nodes)``; see ``_ckernels.search``."""
    if _active is _compiled:
        return _compiled.search(group.table, group.inverses, *program.arrays,
                                _i32(consts), _i32(dom), _i32(doff),
                                int(top_lo), int(top_hi), int(budget))
    return _pykernels.search_lists(group.rows, group._inv_list, *program.lists,
                                   [int(c) for c in consts], np.asarray(dom).tolist(), np.asarray(doff).tolist(),
                                   int(top_lo), int(top_hi), int(budget))
