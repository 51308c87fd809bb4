"""Independent helpers for the catalog tests: brute enumeration of group
tables with a fixed identity, and an isomorphism search by generator images.
"""
from __future__ import annotations


def enumerate_group_tables(n: int):
    """Yield every group multiplication table on 0..n-1 with identity 0."""
    t = [[-1] * n for _ in range(n)]
    for i in range(n):
        t[0][i] = t[i][0] = i
    row_used = [set([i]) for i in range(n)]
    col_used = [set([i]) for i in range(n)]
    # cells holding each value
    where = [[(i, 0), (0, i)] if i else [(0, 0)] for i in range(n)]
    cells = [(a, b) for a in range(1, n) for b in range(1, n)]

    def consistent(a, b, c):
        for x in range(n):
            # (a b) x = a (b x)
            bx = t[b][x]
            if bx >= 0 and t[c][x] >= 0 and t[a][bx] >= 0 and t[c][x] != t[a][bx]:
                return False
            # (x a) b = x (a b)
            xa = t[x][a]
            if xa >= 0 and t[xa][b] >= 0 and t[x][c] >= 0 and t[xa][b] != t[x][c]:
                return False
        for x, y in where[a]:
            # (x y) b = x (y b) where x y = a
            yb = t[y][b]
            if yb >= 0 and t[x][yb] >= 0 and t[x][yb] != c:
                return False
        for x, y in where[b]:
            # a (x y) = (a x) y where x y = b
            ax = t[a][x]
            if ax >= 0 and t[ax][y] >= 0 and t[ax][y] != c:
                return False
        return True

    def fill(i):
        if i == len(cells):
            yield [row[:] for row in t]
            return
        a, b = cells[i]
        for c in range(n):
            if c in row_used[a] or c in col_used[b]:
                continue
            t[a][b] = c
            row_used[a].add(c)
            col_used[b].add(c)
            where[c].append((a, b))
            if consistent(a, b, c):
                yield from fill(i + 1)
            where[c].pop()
            t[a][b] = -1
            row_used[a].discard(c)
            col_used[b].discard(c)

    yield from fill(0)


def element_order(t, a):
    k, acc = 1, a
    while acc != 0:
        acc = t[acc][a]
        k += 1
    return k


def generators(t):
    n = len(t)
    reached, gens = {0}, []
    while len(reached) < n:
        g = min(set(range(n)) - reached)
        gens.append(g)
        frontier = list(reached)
        while frontier:
            nxt = []
            for a in frontier:
                for h in gens:
                    b = t[a][h]
                    if b not in reached:
                        reached.add(b)
                        nxt.append(b)
            frontier = nxt
    return gens


def isomorphisms(s, t, first_only=False):
    """All isomorphisms from table ``s`` to table ``t`` (as image lists)."""
    n = len(s)
    if len(t) != n:
        return []
    gens = generators(s)
    out = []

    def extend(images):
        phi = {0: 0}
        frontier = [0]
        while frontier:
            nxt = []
            for a in frontier:
                for g, h in zip(gens, images):
                    b, c = s[a][g], t[phi[a]][h]
                    if b in phi:
                        if phi[b] != c:
                            return None
                    else:
                        phi[b] = c
                        nxt.append(b)
            frontier = nxt
        if len(set(phi.values())) != n:
            return None
        if any(phi[s[a][b]] != t[phi[a]][phi[b]] for a in range(n) for b in range(n)):
            return None
        return [phi[a] for a in range(n)]

    def pick(i, images):
        if first_only and out:
            return
        if i == len(gens):
            phi = extend(images)
            if phi is not None:
                out.append(phi)
            return
        want = element_order(s, gens[i])
        for h in range(n):
            if element_order(t, h) == want and h not in images:
                pick(i + 1, images + [h])

    pick(0, [])
    return out
