"""Truncated p-typical Witt rings W_n(A) over finite-dimensional F_p-algebras.

Coordinates of a Witt vector are algebra elements stacked into an (n, dim)
integer array; ring operations evaluate the universal structure polynomials
reduced mod p.  All operations accept leading batch axes, which the span
and enumeration routines rely on.

W-bar denotes the quotient W_n(A)/pW_n(A), coordinatized as an F_p-space by
greedy closure over the additive generating set {V^i([m])}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import FiniteAlgebra
from .errors import CapExceeded, ReducednessRequired, RingMismatch, TruncationOverflow
from .linalg import kernel_basis, rank
from .wittpoly import structure_polys

ENUMERATION_CAP = 1 << 20


class WittVector:
    """Element of W_n(A); thin wrapper over an (n, dim) coordinate array."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring: "WittRing", coords):
        self.ring = ring
        self.coords = np.mod(np.asarray(coords, dtype=np.int64), ring.p)

    def _check(self, other):
        if not isinstance(other, WittVector) or other.ring is not self.ring:
            raise RingMismatch("operands from different Witt rings")

    def __add__(self, other):
        self._check(other)
        return WittVector(self.ring, self.ring.add(self.coords, other.coords))

    def __sub__(self, other):
        self._check(other)
        return WittVector(self.ring, self.ring.sub(self.coords, other.coords))

    def __mul__(self, other):
        self._check(other)
        return WittVector(self.ring, self.ring.mul(self.coords, other.coords))

    def __neg__(self):
        return WittVector(self.ring, self.ring.neg(self.coords))

    def __eq__(self, other):
        return (isinstance(other, WittVector) and other.ring is self.ring
                and np.array_equal(self.coords, other.coords))

    def __hash__(self):
        return hash((id(self.ring), self.coords.tobytes()))

    def frobenius(self):
        return WittVector(self.ring, self.ring.frob(self.coords))

    def verschiebung(self, k: int = 1):
        return WittVector(self.ring, self.ring.vshift(self.coords, k))

    def restrict(self, m: int):
        sub = self.ring.truncated(m)
        return WittVector(sub, self.coords[..., :m, :])

    def is_zero(self):
        return not self.coords.any()

    def __repr__(self):
        parts = ", ".join(self.ring.algebra.element_repr(c) for c in self.coords)
        return f"({parts})"


class WittRing:
    """W_n(A) with structure-polynomial arithmetic."""

    def __init__(self, algebra: FiniteAlgebra, n: int):
        if n < 1:
            raise ValueError("truncation length must be >= 1")
        self.algebra = algebra
        self.p = algebra.p
        self.n = n
        self.dim = algebra.dim
        sp = structure_polys(self.p, n)
        self._sum_terms = sp.modp_terms("sum")
        self._prod_terms = sp.modp_terms("prod")
        self._neg_one = None
        self._shorter: dict[int, WittRing] = {}

    # vector constructors

    def zero(self) -> WittVector:
        return WittVector(self, np.zeros((self.n, self.dim), dtype=np.int64))

    def one(self) -> WittVector:
        c = np.zeros((self.n, self.dim), dtype=np.int64)
        c[0] = self.algebra.unit
        return WittVector(self, c)

    def teichmuller(self, a) -> WittVector:
        c = np.zeros((self.n, self.dim), dtype=np.int64)
        c[0] = np.mod(a, self.p)
        return WittVector(self, c)

    def from_coords(self, rows) -> WittVector:
        return WittVector(self, rows)

    def from_int(self, k: int) -> WittVector:
        k %= self.p ** self.n
        result = self.zero().coords
        base = self.one().coords
        while k:
            if k & 1:
                result = self.add(result, base)
            k >>= 1
            if k:
                base = self.add(base, base)
        return WittVector(self, result)

    def truncated(self, m: int) -> "WittRing":
        if m > self.n:
            raise TruncationOverflow(f"cannot restrict length {self.n} to {m}")
        if m == self.n:
            return self
        if m not in self._shorter:
            self._shorter[m] = WittRing(self.algebra, m)
        return self._shorter[m]

    # raw coordinate arithmetic; x, y have shape (..., n, dim)

    def _eval(self, terms_by_slot, x, y):
        A = self.algebra
        inputs = np.concatenate([x, y], axis=-2)  # (..., 2n, dim)
        pow_cache: dict[tuple[int, int], np.ndarray] = {}

        def power(slot, e):
            key = (slot, e)
            if key not in pow_cache:
                if e == 1:
                    pow_cache[key] = inputs[..., slot, :]
                else:
                    half = power(slot, e // 2)
                    sq = A.mul(half, half)
                    pow_cache[key] = A.mul(sq, inputs[..., slot, :]) if e % 2 else sq
            return pow_cache[key]

        out = np.zeros(x.shape, dtype=np.int64)
        for i, terms in enumerate(terms_by_slot):
            acc = np.zeros(x.shape[:-2] + (self.dim,), dtype=np.int64)
            for c, factors in terms:
                val = None
                for slot, e in factors:
                    pw = power(slot, e)
                    val = pw if val is None else A.mul(val, pw)
                if val is None:
                    val = np.broadcast_to(A.unit, acc.shape)
                acc = (acc + c * val) % self.p
            out[..., i, :] = acc
        return out

    def add(self, x, y):
        return self._eval(self._sum_terms, x, y)

    def mul(self, x, y):
        return self._eval(self._prod_terms, x, y)

    def neg(self, x):
        if self.p != 2:
            return (-x) % self.p
        if self._neg_one is None:
            self._neg_one = self.from_int(self.p ** self.n - 1).coords
        return self.mul(np.broadcast_to(self._neg_one, x.shape), x)

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def frob(self, x):
        return self.algebra.frobenius(x)

    def vshift(self, x, k: int = 1):
        if k < 0 or k > self.n:
            raise TruncationOverflow(f"shift by {k} in length-{self.n} ring")
        out = np.zeros_like(x)
        if k < self.n:
            out[..., k:, :] = x[..., : self.n - k, :]
        return out

    def pmul(self, x):
        """p*x computed as V(F(x))."""
        return self.vshift(self.frob(x))

    def restrict_coords(self, x, m: int):
        return x[..., :m, :]

    # enumeration and encoding

    def size(self) -> int:
        return self.p ** (self.n * self.dim)

    def encode(self, x) -> int:
        flat = np.asarray(x, dtype=np.int64).reshape(-1)
        val = 0
        for c in reversed(flat):
            val = val * self.p + int(c)
        return val

    def encode_batch(self, x: np.ndarray) -> np.ndarray:
        flat = x.reshape(x.shape[:-2] + (self.n * self.dim,))
        if self.size() < (1 << 62):
            w = self.p ** np.arange(self.n * self.dim, dtype=np.int64)
            return flat @ w
        w = self.p ** np.arange(self.n * self.dim, dtype=object)
        return flat.astype(object) @ w

    def decode(self, code: int) -> np.ndarray:
        out = np.zeros(self.n * self.dim, dtype=np.int64)
        for i in range(out.size):
            code, r = divmod(code, self.p)
            out[i] = r
        return out.reshape(self.n, self.dim)

    def all_elements(self, cap: int = ENUMERATION_CAP) -> np.ndarray:
        total = self.size()
        if total > cap:
            raise CapExceeded(f"|W_{self.n}(A)| = {total} exceeds enumeration cap {cap}")
        codes = np.arange(total, dtype=np.int64)
        digits = np.zeros((total, self.n * self.dim), dtype=np.int64)
        for i in range(self.n * self.dim):
            codes, digits[:, i] = np.divmod(codes, self.p)
        return digits.reshape(total, self.n, self.dim)

    def group_generators(self) -> np.ndarray:
        """{V^i([m])}: an additive generating set of (W_n(A), +)."""
        gens = np.zeros((self.n * self.dim, self.n, self.dim), dtype=np.int64)
        k = 0
        for i in range(self.n):
            for b in range(self.dim):
                gens[k, i, b] = 1
                k += 1
        return gens


def additive_order(ring: WittRing, x) -> int:
    """Order of x in (W_n(A), +); always a power of p."""
    order = 1
    cur = np.mod(np.asarray(x), ring.p)
    while cur.any():
        cur = ring.pmul(cur)
        order *= ring.p
    return order


class SpannedQuotient:
    """F_p-coordinatization of W_n(A)/H for an additive subgroup H.

    H is given by generators; the quotient must be elementary abelian
    (p*W_n(A) contained in H), which holds for both quotients used here
    (mod p, and mod the Frobenius image).  Builds a greedy basis from the
    standard generating set and a full coordinate table.
    """

    def __init__(self, ring: WittRing, subgroup_gens: np.ndarray,
                 cap: int = ENUMERATION_CAP):
        self.ring = ring
        p = ring.p
        total = ring.size()
        if total > cap:
            raise CapExceeded(f"|W_{ring.n}(A)| = {total} exceeds cap {cap}")

        sub = self._closure(subgroup_gens)
        self.subgroup_size = sub.shape[0]

        elems = [sub]
        coords = [np.zeros((sub.shape[0], 0), dtype=np.int64)]
        index = {int(c): 0 for c in ring.encode_batch(sub)}
        basis: list[np.ndarray] = []
        cur_elems = sub
        cur_coords = coords[0]

        for g in ring.group_generators():
            if int(ring.encode(g)) in index:
                continue
            # adjoin g: new span is the union of old + j*g for j < p
            k = len(basis)
            basis.append(g)
            blocks_e = [cur_elems]
            blocks_c = [np.pad(cur_coords, ((0, 0), (0, 1)))]
            jg = np.zeros_like(g)
            for j in range(1, p):
                jg = ring.add(jg, g)
                shifted = ring.add(cur_elems, np.broadcast_to(jg, cur_elems.shape))
                cc = np.pad(cur_coords, ((0, 0), (0, 1)))
                cc[:, k] = j
                blocks_e.append(shifted)
                blocks_c.append(cc)
            cur_elems = np.concatenate(blocks_e)
            cur_coords = np.concatenate(blocks_c)
            index = {int(c): i for i, c in enumerate(ring.encode_batch(cur_elems))}
            if len(index) != cur_elems.shape[0]:
                raise RuntimeError("span collision: subgroup generators not independent")
            if cur_elems.shape[0] == total:
                break

        if cur_elems.shape[0] != total:
            raise RuntimeError("generating set failed to span the Witt group")
        self.dim = len(basis)
        self.basis = basis
        self._index = index
        self._coords = np.pad(cur_coords,
                              ((0, 0), (0, self.dim - cur_coords.shape[1])))

    def _closure(self, gens: np.ndarray) -> np.ndarray:
        ring = self.ring
        zero = np.zeros((1, ring.n, ring.dim), dtype=np.int64)
        elems = zero
        seen = {int(ring.encode_batch(zero)[0])}
        for g in gens:
            if not g.any():
                continue
            frontier = elems
            while True:
                cand = ring.add(frontier, np.broadcast_to(g, frontier.shape))
                codes = ring.encode_batch(cand)
                fresh = np.array([c not in seen for c in codes.tolist()])
                if not fresh.any():
                    break
                frontier = cand[fresh]
                seen.update(int(c) for c in codes[fresh].tolist())
                elems = np.concatenate([elems, frontier])
        return elems

    def coords(self, x) -> np.ndarray:
        """F_p coordinates of the class of x; additive by construction."""
        i = self._index.get(int(self.ring.encode(x)))
        if i is None:
            raise ValueError("element outside the enumerated group")
        return self._coords[i].copy()

    def coords_batch(self, xs: np.ndarray) -> np.ndarray:
        codes = self.ring.encode_batch(xs)
        rows = np.array([self._index[int(c)] for c in codes.tolist()])
        return self._coords[rows]

    def rep(self, j: int) -> np.ndarray:
        return self.basis[j].copy()


class WbarSpace:
    """W_n(A)/p with its F_p-basis, the additive map F, and the twisted action."""

    def __init__(self, algebra: FiniteAlgebra, n: int, cap: int = ENUMERATION_CAP):
        self.algebra = algebra
        self.n = n
        self.ring = WittRing(algebra, n)
        gens = self.ring.group_generators()
        pgens = np.stack([self.ring.pmul(g) for g in gens])
        self.quotient = SpannedQuotient(self.ring, pgens, cap=cap)
        self.dim = self.quotient.dim
        self._f_matrix = None
        self._action_cache: dict[bytes, np.ndarray] = {}

    def coords(self, x) -> np.ndarray:
        return self.quotient.coords(x)

    def rep(self, j: int) -> np.ndarray:
        return self.quotient.rep(j)

    @property
    def f_matrix(self) -> np.ndarray:
        """Matrix of F: A -> Wbar_n(A), x -> class of [x]^p (additive)."""
        if self._f_matrix is None:
            A = self.algebra
            cols = []
            for b in range(A.dim):
                e = np.zeros(A.dim, dtype=np.int64)
                e[b] = 1
                mp = A.pow(e, A.p)
                cols.append(self.coords(self.ring.teichmuller(mp).coords))
            self._f_matrix = np.stack(cols, axis=1) % A.p
        return self._f_matrix

    def f_of(self, a) -> np.ndarray:
        """Class of [a]^p in Wbar-coordinates."""
        return (self.f_matrix @ np.mod(a, self.algebra.p)) % self.algebra.p

    def frobenius_kernel(self) -> np.ndarray:
        """Rows span ker(F: A -> Wbar_n(A))."""
        return kernel_basis(self.f_matrix, self.algebra.p)

    def action_matrix(self, a) -> np.ndarray:
        """Matrix of the twisted module action m -> [a^p] * m on Wbar."""
        key = np.mod(a, self.algebra.p).tobytes()
        if key not in self._action_cache:
            A = self.algebra
            t = self.ring.teichmuller(A.pow(np.asarray(a), A.p)).coords
            cols = []
            for j in range(self.dim):
                prod = self.ring.mul(t, self.rep(j))
                cols.append(self.coords(prod))
            self._action_cache[key] = (np.stack(cols, axis=1) % A.p
                                       if cols else np.zeros((self.dim, 0), dtype=np.int64))
        return self._action_cache[key]

    def v_image_dim(self) -> int:
        """Dimension of the image of V: Wbar_{n-1} -> Wbar_n."""
        if self.n == 1:
            return 0
        shorter = WittRing(self.algebra, self.n - 1)
        cols = []
        for g in shorter.group_generators():
            lifted = np.zeros((self.n, self.algebra.dim), dtype=np.int64)
            lifted[1:] = g
            cols.append(self.coords(lifted))
        return rank(np.stack(cols, axis=1), self.algebra.p)


def wbar_space(algebra: FiniteAlgebra, n: int, cap: int = ENUMERATION_CAP) -> WbarSpace:
    return WbarSpace(algebra, n, cap=cap)


@dataclass
class ExactSequenceReport:
    algebra_dim: int
    m: int
    reduced: bool
    dim_wbar: int
    dim_wf: int                 # dim W_{m-1}(A)/F(W_{m-1}(A))
    f_injective: bool
    first_middle_exact: bool
    first_surjective: bool
    v_well_defined: bool
    v_injective: bool
    r_surjective: bool
    second_middle_exact: bool
    dim_bookkeeping: bool
    f_kernel_dim: int

    @property
    def first_exact(self) -> bool:
        return self.f_injective and self.first_middle_exact and self.first_surjective

    @property
    def second_exact(self) -> bool:
        return self.v_well_defined and self.v_injective and self.r_surjective \
            and self.second_middle_exact


def check_exact_sequences(algebra: FiniteAlgebra, m: int,
                          require_reduced: bool = False,
                          cap: int = ENUMERATION_CAP) -> ExactSequenceReport:
    """Verify the two short exact sequences linking A, Wbar_m and W_{m-1}/F.

    First:  0 -> A -F-> Wbar_m(A) -> Wbar_m(A)/F(A) -> 0   (needs A reduced)
    Second: 0 -> W_{m-1}(A)/F -V-> Wbar_m(A) -R-> A -> 0   (always)
    """
    if m < 2:
        raise ValueError("need m >= 2 for the second sequence")
    reduced = algebra.is_reduced()
    if require_reduced and not reduced:
        raise ReducednessRequired("first sequence requested for a non-reduced algebra")
    p = algebra.p

    wb = wbar_space(algebra, m, cap=cap)
    fmat = wb.f_matrix
    fker = kernel_basis(fmat, p)
    f_injective = fker.shape[0] == 0

    # cokernel of F has the complementary dimension; middle exactness of the
    # first sequence is rank bookkeeping for a linear quotient
    f_rank = rank(fmat, p)
    first_middle = f_rank == algebra.dim - fker.shape[0]
    first_surjective = True  # quotient map onto coker(F)

    ring_short = WittRing(algebra, m - 1)
    gens_short = ring_short.group_generators()
    fgens = np.stack([ring_short.frob(g) for g in gens_short])
    wf = SpannedQuotient(ring_short, fgens, cap=cap)

    # induced V into Wbar_m
    cols = []
    ok_defined = True
    for j in range(wf.dim):
        r = wf.rep(j)
        lifted = np.zeros((m, algebra.dim), dtype=np.int64)
        lifted[1:] = r
        cols.append(wb.coords(lifted))
    vmat = (np.stack(cols, axis=1) if cols
            else np.zeros((wb.dim, 0), dtype=np.int64))
    # well-definedness: V sends the Frobenius image into pW_m
    for g in gens_short:
        fg = ring_short.frob(g)
        lifted = np.zeros((m, algebra.dim), dtype=np.int64)
        lifted[1:] = fg
        if wb.coords(lifted).any():
            ok_defined = False
            break
    v_injective = kernel_basis(vmat, p).shape[0] == 0 if wf.dim else True

    # R^{m-1}: Wbar_m -> A on basis representatives
    rcols = [wb.rep(j)[0] for j in range(wb.dim)]
    rmat = (np.stack(rcols, axis=1) if rcols
            else np.zeros((algebra.dim, 0), dtype=np.int64))
    r_surjective = rank(rmat, p) == algebra.dim
    comp = (rmat @ vmat) % p if wf.dim else np.zeros((algebra.dim, 0), dtype=np.int64)
    middle = (not comp.any()) and rank(vmat, p) == wb.dim - rank(rmat, p)

    # the second sequence forces dim Wbar_m = dim A + dim(W_{m-1}/F); for
    # reduced A this is the full bookkeeping since ker F = 0
    bookkeeping = wb.dim == algebra.dim + wf.dim

    return ExactSequenceReport(
        algebra_dim=algebra.dim, m=m, reduced=reduced,
        dim_wbar=wb.dim, dim_wf=wf.dim,
        f_injective=f_injective,
        first_middle_exact=first_middle,
        first_surjective=first_surjective,
        v_well_defined=ok_defined,
        v_injective=v_injective,
        r_surjective=r_surjective,
        second_middle_exact=middle,
        dim_bookkeeping=bookkeeping,
        f_kernel_dim=fker.shape[0],
    )
