# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops: table construction, associativity, pruned search.

Every function here has a twin in ``_pykernels`` with an identical signature
and identical results; ``eqwreath.kernels`` picks one at import time.
"""
import numpy as np

cdef int FOUND = 0
cdef int EXHAUSTED = 1
cdef int OVER_BUDGET = 2


def _digits(int base, int width):
    """Row c holds the base-``base`` digits of c, least significant first."""
    cdef long long count = 1
    cdef int i
    for i in range(width):
        count *= base
    out = np.zeros((count, max(width, 1)), dtype=np.int32)
    codes = np.arange(count, dtype=np.int64)
    for i in range(width):
        out[:, i] = codes % base
        codes //= base
    return out


def build_wreath(const int[:, ::1] h, const int[:, ::1] g):
    """Cayley table of H wr G, element (f, g) stored at f_code * |G| + g."""
    cdef int nh = h.shape[0]
    cdef int ng = g.shape[0]
    cdef int[:, ::1] fd = _digits(nh, ng)
    cdef int nf = fd.shape[0]
    cdef Py_ssize_t size = <Py_ssize_t>nf * ng
    out = np.empty((size, size), dtype=np.int32)
    cdef int[:, ::1] o = out
    cdef int[::1] pw = np.empty(ng, dtype=np.int32)
    cdef int fa, ga, fb, gb, x, code
    cdef Py_ssize_t row, col
    with nogil:
        code = 1
        for x in range(ng):
            pw[x] = code
            code = code * nh
        for fa in range(nf):
            for ga in range(ng):
                row = <Py_ssize_t>fa * ng + ga
                for fb in range(nf):
                    # (f . (ga . f'))(x) = f(x) f'(x ga)
                    code = 0
                    for x in range(ng):
                        code = code + h[fd[fa, x], fd[fb, g[x, ga]]] * pw[x]
                    col = <Py_ssize_t>fb * ng
                    for gb in range(ng):
                        o[row, col + gb] = code * ng + g[ga, gb]
    return out


def build_semidirect(const int[:, ::1] d, const int[:, ::1] g, const int[:, ::1] act):
    """Cayley table of D x| G, (d, g) stored at d * |G| + g."""
    cdef int nd = d.shape[0]
    cdef int ng = g.shape[0]
    cdef Py_ssize_t size = <Py_ssize_t>nd * ng
    out = np.empty((size, size), dtype=np.int32)
    cdef int[:, ::1] o = out
    cdef int da, ga, db, gb, prod
    cdef Py_ssize_t row, col
    with nogil:
        for da in range(nd):
            for ga in range(ng):
                row = <Py_ssize_t>da * ng + ga
                for db in range(nd):
                    prod = d[da, act[ga, db]] * ng
                    col = <Py_ssize_t>db * ng
                    for gb in range(ng):
                        o[row, col + gb] = prod + g[ga, gb]
    return out


def associativity_witness(const int[:, ::1] t, const int[::1] gens):
    """First (a, c, b) with (a c) b != a (c b) for c in ``gens``, else None."""
    cdef Py_ssize_t n = t.shape[0]
    cdef Py_ssize_t i, a, b
    cdef int c, ac
    cdef int wa = -1, wb = -1, wc = -1
    with nogil:
        for i in range(gens.shape[0]):
            c = gens[i]
            for a in range(n):
                ac = t[a, c]
                for b in range(n):
                    if t[ac, b] != t[a, t[c, b]]:
                        wa = <int>a
                        wb = <int>b
                        wc = c
                        break
                if wa >= 0:
                    break
            if wa >= 0:
                break
    if wa < 0:
        return None
    return (wa, wc, wb)


cdef inline bint _check_words(const int[:, ::1] table, const int[::1] inv,
                              const int[::1] slots, const int[::1] signs,
                              const int[::1] woff, const int[::1] words,
                              Py_ssize_t lo, Py_ssize_t hi, int[::1] vals) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef int w, acc, v
    for i in range(lo, hi):
        w = words[i]
        acc = 0
        for j in range(woff[w], woff[w + 1]):
            v = vals[slots[j]]
            if signs[j] < 0:
                v = inv[v]
            acc = table[acc, v]
        if acc != 0:
            return False
    return True


def search(const int[:, ::1] table, const int[::1] inv,
           const int[::1] slots, const int[::1] signs, const int[::1] woff,
           const int[::1] check_off, const int[::1] check_words,
           const int[::1] consts, const int[::1] dom, const int[::1] doff,
           int top_lo, int top_hi, long long budget):
    """Depth-first search for the lexicographically least satisfying choice.

    Variable ``d`` ranges over ``dom[doff[d]:doff[d+1]]`` in order; the first
    variable is restricted to positions ``top_lo:top_hi``.  Words listed in
    ``check_words[check_off[d]:check_off[d+1]]`` are tested once variable
    ``d`` is fixed.  Returns ``(status, positions, nodes)``.
    """
    cdef int k = consts.shape[0]
    cdef int n = doff.shape[0] - 1
    vals_arr = np.zeros(k + n, dtype=np.int32)
    pos_arr = np.zeros(max(n, 1), dtype=np.int32)
    cdef int[::1] vals = vals_arr
    cdef int[::1] pos = pos_arr
    cdef long long nodes = 0
    cdef int status = EXHAUSTED
    cdef int depth = 0
    cdef int limit, i
    for i in range(k):
        vals[i] = consts[i]
    if n == 0:
        return (EXHAUSTED, pos_arr[:0], 0)
    with nogil:
        pos[0] = top_lo
        while depth >= 0:
            if depth == 0:
                limit = top_hi
            else:
                limit = doff[depth + 1] - doff[depth]
            if pos[depth] >= limit:
                depth -= 1
                if depth >= 0:
                    pos[depth] += 1
                continue
            nodes += 1
            if nodes > budget:
                status = OVER_BUDGET
                break
            vals[k + depth] = dom[doff[depth] + pos[depth]]
            if _check_words(table, inv, slots, signs, woff, check_words,
                            check_off[depth], check_off[depth + 1], vals):
                if depth == n - 1:
                    status = FOUND
                    break
                depth += 1
                pos[depth] = 0
            else:
                pos[depth] += 1
    return (status, pos_arr[:n].copy(), nodes)
