"""Pure Python / numpy twins of the routines in ``_ckernels.pyx``."""
from __future__ import annotations

import numpy as np

FOUND = 0
EXHAUSTED = 1
OVER_BUDGET = 2

_ROW_CHUNK = 256


def _digits(base: int, width: int) -> np.ndarray:
    count = base**width
    out = np.zeros((count, max(width, 1)), dtype=np.int32)
    codes = np.arange(count, dtype=np.int64)
    for i in range(width):
        out[:, i] = codes % base
        codes //= base
    return out


def build_wreath(h: np.ndarray, g: np.ndarray) -> np.ndarray:
    nh, ng = h.shape[0], g.shape[0]
    fd = _digits(nh, ng)
    nf = fd.shape[0]
    pw = nh ** np.arange(ng, dtype=np.int64)
    out = np.empty((nf, ng, nf, ng), dtype=np.int32)
    for ga in range(ng):
        shifted = fd[:, g[:, ga]]  # shifted[fb, x] = f'(x ga)
        for lo in range(0, nf, _ROW_CHUNK):
            block = h[fd[lo:lo + _ROW_CHUNK, None, :], shifted[None, :, :]]
            code = block.astype(np.int64) @ pw
            out[lo:lo + _ROW_CHUNK, ga, :, :] = code[:, :, None] * ng + g[ga][None, None, :]
    return out.reshape(nf * ng, nf * ng)


def build_semidirect(d: np.ndarray, g: np.ndarray, act: np.ndarray) -> np.ndarray:
    nd, ng = d.shape[0], g.shape[0]
    out = np.empty((nd, ng, nd, ng), dtype=np.int32)
    for ga in range(ng):
        prod = d[:, act[ga]].astype(np.int64) * ng
        out[:, ga, :, :] = prod[:, :, None] + g[ga][None, None, :]
    return out.reshape(nd * ng, nd * ng)


def associativity_witness(t: np.ndarray, gens: np.ndarray):
    n = t.shape[0]
    for c in gens:
        c = int(c)
        right = t[c]  # c b
        for lo in range(0, n, _ROW_CHUNK):
            rows = np.arange(lo, min(n, lo + _ROW_CHUNK))
            lhs = t[t[rows, c]]  # (a c) b
            rhs = t[rows[:, None], right[None, :]]  # a (c b)
            bad = np.argwhere(lhs != rhs)
            if bad.size:
                a, b = bad[0]
                return (int(rows[a]), c, int(b))
    return None


def search(table, inv, slots, signs, woff, check_off, check_words,
           consts, dom, doff, top_lo, top_hi, budget):
    return search_lists(table.tolist(), inv.tolist(), slots.tolist(), signs.tolist(),
                        woff.tolist(), check_off.tolist(), check_words.tolist(),
                        [int(c) for c in consts], dom.tolist(), doff.tolist(),
                        top_lo, top_hi, budget)


def search_lists(rows, inv, slots, signs, woff, check_off, check_words,
                 consts, dom, doff, top_lo, top_hi, budget):
    k = len(consts)
    n = len(doff) - 1
    if n == 0:
        return (EXHAUSTED, np.zeros(0, dtype=np.int32), 0)
    vals = [int(c) for c in consts] + [0] * n
    words = []
    for w in range(len(woff) - 1):
        words.append([(slots[j], signs[j] < 0) for j in range(woff[w], woff[w + 1])])
    checks = [[words[w] for w in check_words[check_off[d]:check_off[d + 1]]] for d in range(n)]
    domains = [dom[doff[d]:doff[d + 1]] for d in range(n)]

    def satisfied(d):
        for letters in checks[d]:
            acc = 0
            for slot, inverted in letters:
                v = vals[slot]
                acc = rows[acc][inv[v] if inverted else v]
            if acc:
                return False
        return True

    pos = [0] * n
    pos[0] = top_lo
    depth = 0
    nodes = 0
    status = EXHAUSTED
    while depth >= 0:
        limit = top_hi if depth == 0 else len(domains[depth])
        if pos[depth] >= limit:
            depth -= 1
            if depth >= 0:
                pos[depth] += 1
            continue
        nodes += 1
        if nodes > budget:
            status = OVER_BUDGET
            break
        vals[k + depth] = domains[depth][pos[depth]]
        if satisfied(depth):
            if depth == n - 1:
                status = FOUND
                break
            depth += 1
            pos[depth] = 0
        else:
            pos[depth] += 1
    return (status, np.asarray(pos, dtype=np.int32), nodes)
