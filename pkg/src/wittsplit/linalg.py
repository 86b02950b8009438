"""Dense linear algebra over a prime field F_p.

Matrices are numpy int64 arrays with entries reduced mod p.  Row reduction
uses the first nonzero pivot in column order, so every routine here is
deterministic for a given input.
"""

from __future__ import annotations

import numpy as np

SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
                53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


def check_prime(p: int) -> int:
    if p not in SMALL_PRIMES:
        raise ValueError(f"modulus {p} is not a supported prime (2..97)")
    return p


def inv_mod(a: int, p: int) -> int:
    return pow(int(a) % p, p - 2, p)


def as_matrix(rows, p: int) -> np.ndarray:
    m = np.asarray(rows, dtype=np.int64)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    return np.mod(m, p)


def rref(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form.  Returns (R, pivot_columns)."""
    m = np.mod(np.array(mat, dtype=np.int64), p)
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = (m[r] * inv_mod(m[r, c], p)) % p
        other = np.nonzero(m[:, c])[0]
        other = other[other != r]
        if other.size:
            m[other] = (m[other] - np.outer(m[other, c], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(mat: np.ndarray, p: int) -> int:
    if mat.size == 0:
        return 0
    return len(rref(mat, p)[1])


def solve(mat: np.ndarray, rhs: np.ndarray, p: int) -> np.ndarray | None:
    """One solution of mat @ x = rhs over F_p, or None if inconsistent.

    Free variables are set to zero, first-pivot order.
    """
    mat = np.mod(np.asarray(mat, dtype=np.int64), p)
    rhs = np.mod(np.asarray(rhs, dtype=np.int64), p)
    rows, cols = mat.shape
    aug = np.concatenate([mat, rhs.reshape(rows, -1)], axis=1)
    red, pivots = rref(aug, p)
    nrhs = aug.shape[1] - cols
    if any(pc >= cols for pc in pivots):
        return None
    x = np.zeros((cols, nrhs), dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = red[r, cols:]
    if rhs.ndim == 1:
        x = x[:, 0]
    return x


def kernel_basis(mat: np.ndarray, p: int) -> np.ndarray:
    """Rows span ker(mat) (acting on column vectors)."""
    mat = np.mod(np.asarray(mat, dtype=np.int64), p)
    rows, cols = mat.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    red, pivots = rref(mat, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = (-red[r, fc]) % p
    return basis


class Echelon:
    """Incremental column-space tracker with membership solves.

    Columns are inserted one at a time; `reduce` splits a vector into a
    part inside the current span (returned as a combination of the inserted
    columns) plus a remainder supported away from the pivot rows.
    """

    def __init__(self, dim: int, p: int):
        self.dim = dim
        self.p = p
        self.vectors: list[np.ndarray] = []       # echelonized spanning vectors
        self.combos: list[dict[int, int]] = []    # expression in inserted columns
        self.pivots: list[int] = []
        self.ncols = 0

    def _reduce(self, v: np.ndarray) -> tuple[np.ndarray, dict[int, int]]:
        p = self.p
        v = np.mod(v, p)
        combo: dict[int, int] = {}
        for vec, cmb, piv in zip(self.vectors, self.combos, self.pivots):
            c = int(v[piv]) % p
            if c:
                v = (v - c * vec) % p
                for k, val in cmb.items():
                    combo[k] = (combo.get(k, 0) - c * val) % p
        return v, combo

    def insert(self, col: np.ndarray) -> bool:
        """Add a column; returns True if it enlarged the span."""
        p = self.p
        idx = self.ncols
        self.ncols += 1
        v, combo = self._reduce(np.asarray(col, dtype=np.int64))
        combo[idx] = (combo.get(idx, 0) + 1) % p
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        piv = int(nz[0])
        scale = inv_mod(int(v[piv]), p)
        v = (v * scale) % p
        combo = {k: (val * scale) % p for k, val in combo.items() if val % p}
        self.vectors.append(v)
        self.combos.append(combo)
        self.pivots.append(piv)
        return True

    def reduce(self, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Split v; returns (remainder, combo) with v = combo-part + remainder.

        combo has one entry per inserted column.
        """
        rem, combo = self._reduce(np.asarray(v, dtype=np.int64))
        out = np.zeros(self.ncols, dtype=np.int64)
        for k, val in combo.items():
            out[k] = (-val) % self.p
        return rem, out

    def contains(self, v: np.ndarray) -> bool:
        rem, _ = self.reduce(v)
        return not rem.any()

    @property
    def rank(self) -> int:
        return len(self.pivots)
