"""Integer Smith normal form and finite abelian group quotients.

Pure-Python integer arithmetic; sizes here are small (relation matrices of
a few hundred rows), so exactness beats speed.
"""

from __future__ import annotations


def smith_normal_form(rows: list[list[int]]):
    """Return (diag, T, Tinv) for the row lattice of `rows` in Z^m.

    T and Tinv are m x m unimodular with T @ Tinv = I, chosen so that the
    lattice spanned by the input rows equals the lattice spanned by
    diag[i] * (row i of Tinv) ... i.e. x is in the lattice iff (x @ T)_i is
    divisible by diag[i] for all i.  diag entries are nonnegative and form
    a divisibility chain.
    """
    if not rows:
        raise ValueError("need at least one relation row")
    m = len(rows[0])
    a = [list(map(int, r)) for r in rows]
    r = len(a)
    t = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    tinv = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def col_add(i, j, c):
        # col_i += c * col_j
        for row in a:
            row[i] += c * row[j]
        for row in t:
            row[i] += c * row[j]
        for k in range(m):
            tinv[j][k] -= c * tinv[i][k]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in t:
            row[i], row[j] = row[j], row[i]
        tinv[i], tinv[j] = tinv[j], tinv[i]

    def col_neg(i):
        for row in a:
            row[i] = -row[i]
        for row in t:
            row[i] = -row[i]
        for k in range(m):
            tinv[i][k] = -tinv[i][k]

    def row_add(i, j, c):
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]

    size = min(r, m)
    for step in range(size):
        # locate a minimal nonzero pivot in the trailing block
        while True:
            best = None
            for i in range(step, r):
                for j in range(step, m):
                    v = a[i][j]
                    if v and (best is None or abs(v) < abs(best[2])):
                        best = (i, j, v)
            if best is None:
                break
            bi, bj, _ = best
            if bi != step:
                row_swap(step, bi)
            if bj != step:
                col_swap(step, bj)
            if a[step][step] < 0:
                col_neg(step)
            piv = a[step][step]
            dirty = False
            for i in range(step + 1, r):
                q = a[i][step] // piv
                if q:
                    row_add(i, step, -q)
                if a[i][step]:
                    dirty = True
            for j in range(step + 1, m):
                q = a[step][j] // piv
                if q:
                    col_add(j, step, -q)
                if a[step][j]:
                    dirty = True
            if dirty:
                continue
            # enforce divisibility of the trailing block by the pivot
            bad = None
            for i in range(step + 1, r):
                for j in range(step + 1, m):
                    if a[i][j] % piv:
                        bad = (i, j)
                        break
                if bad:
                    break
            if bad is None:
                break
            row_add(step, bad[0], 1)
        if best is None:
            break

    diag = [a[i][i] if i < r else 0 for i in range(m)]
    return diag, t, tinv


class AbelianQuotient:
    """Z^m modulo the lattice spanned by integer relation rows (finite)."""

    def __init__(self, relation_rows: list[list[int]], m: int):
        diag, t, tinv = smith_normal_form([list(r) for r in relation_rows])
        if any(d == 0 for d in diag):
            raise ValueError("quotient is infinite")
        self.m = m
        self._t = t
        self._tinv = tinv
        self._diag = diag
        self.kept = [i for i, d in enumerate(diag) if d != 1]
        self.orders = [diag[i] for i in self.kept]

    def project(self, x: list[int]) -> list[int]:
        """Coordinates of the class of x in the kept cyclic factors."""
        y = [sum(int(x[k]) * self._t[k][i] for k in range(self.m)) for i in self.kept]
        return [yi % d for yi, d in zip(y, self.orders)]

    def generator_rep(self, j: int) -> list[int]:
        """An integer vector in Z^m representing the j-th quotient generator."""
        i = self.kept[j]
        return list(self._tinv[i])

    @property
    def size(self) -> int:
        out = 1
        for d in self.orders:
            out *= d
        return out
