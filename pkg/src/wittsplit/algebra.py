"""Finite-dimensional commutative F_p-algebras with explicit multiplication tables.

An algebra is presented as F_p[x_1..x_k]/I with I Artinian; the monomial
basis is the Groebner staircase and multiplication is a dense structure
tensor, so every element is a numpy coordinate vector.  Elements double as
the coefficients of Witt vectors elsewhere in the package.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from .errors import CapExceeded, NotFiniteDimensional
from .groebner import groebner_basis, normal_form, staircase
from .linalg import check_prime, kernel_basis
from .polys import Expvec, Polynomial, parse_poly

DIM_CAP = 64


class FiniteAlgebra:
    """F_p-algebra of finite dimension with basis-indexed coordinates."""

    def __init__(self, p: int, names: tuple[str, ...], basis: list[Expvec],
                 table: np.ndarray, generators: np.ndarray,
                 presentation: tuple[list[Polynomial], list[Polynomial]] | None = None,
                 check: bool = True):
        self.p = check_prime(p)
        self.names = tuple(names)
        self.basis = list(basis)
        self.dim = len(basis)
        self.table = np.mod(np.asarray(table, dtype=np.int64), p)
        self.generators = np.mod(np.asarray(generators, dtype=np.int64), p)
        self.presentation = presentation
        self._frob = None
        self._reduced = None
        if self.dim < 1:
            raise ValueError("algebra must contain 1 (unit ideal rejected)")
        unit = self._find_unit()
        self.unit = unit
        if check:
            self._validate()

    # construction

    def _find_unit(self) -> np.ndarray:
        zero_exp = tuple([0] * len(self.names))
        if zero_exp in self.basis:
            u = np.zeros(self.dim, dtype=np.int64)
            u[self.basis.index(zero_exp)] = 1
            return u
        raise ValueError("basis does not contain the constant monomial")

    def _validate(self):
        t = self.table
        if not np.array_equal(t, t.transpose(1, 0, 2)):
            raise ValueError("multiplication table is not commutative")
        if self.dim <= 16:
            left = np.einsum("ijm,mkl->ijkl", t, t) % self.p
            right = np.einsum("jkm,iml->ijkl", t, t) % self.p
            if not np.array_equal(left, right):
                raise ValueError("multiplication table is not associative")
        else:
            rng = np.random.default_rng(0)
            for _ in range(200):
                i, j, k = rng.integers(0, self.dim, size=3)
                ei = np.eye(self.dim, dtype=np.int64)
                lhs = self.mul(self.mul(ei[i], ei[j]), ei[k])
                rhs = self.mul(ei[i], self.mul(ei[j], ei[k]))
                if not np.array_equal(lhs, rhs):
                    raise ValueError("multiplication table is not associative")
        for i in range(self.dim):
            e = np.zeros(self.dim, dtype=np.int64)
            e[i] = 1
            if not np.array_equal(self.mul(self.unit, e), e):
                raise ValueError("unit does not act as identity")

    # element operations (coordinate vectors, shape (dim,) or batched (..., dim))

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def one(self) -> np.ndarray:
        return self.unit.copy()

    def add(self, u, v):
        return (u + v) % self.p

    def sub(self, u, v):
        return (u - v) % self.p

    def scale(self, c: int, u):
        return (c * u) % self.p

    def mul(self, u, v):
        return np.einsum("...i,...j,ijk->...k", u, v, self.table) % self.p

    def pow(self, u, e: int):
        result = np.broadcast_to(self.unit, u.shape).copy() if u.ndim > 1 else self.one()
        base = u % self.p
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    @property
    def frobenius_matrix(self) -> np.ndarray:
        """Matrix of x -> x^p (F_p-linear), columns indexed by basis."""
        if self._frob is None:
            cols = []
            for i in range(self.dim):
                e = np.zeros(self.dim, dtype=np.int64)
                e[i] = 1
                cols.append(self.pow(e, self.p))
            self._frob = np.stack(cols, axis=1)
        return self._frob

    def frobenius(self, u):
        return np.einsum("ij,...j->...i", self.frobenius_matrix, u) % self.p

    def is_reduced(self) -> bool:
        """No nonzero nilpotents; equivalent to ker(x -> x^p) = 0."""
        if self._reduced is None:
            self._reduced = kernel_basis(self.frobenius_matrix, self.p).shape[0] == 0
        return self._reduced

    def frobenius_kernel_element(self) -> np.ndarray | None:
        """Some nonzero x with x^p = 0, or None when reduced."""
        k = kernel_basis(self.frobenius_matrix, self.p)
        if k.shape[0] == 0:
            return None
        return k[0] % self.p

    # encode/decode elements as integers in [0, p^dim)

    def encode(self, u) -> int:
        val = 0
        for c in reversed(np.asarray(u, dtype=np.int64)):
            val = val * self.p + int(c)
        return val

    def decode(self, code: int) -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.int64)
        for i in range(self.dim):
            code, r = divmod(code, self.p)
            out[i] = r
        return out

    def encode_batch(self, arr: np.ndarray) -> np.ndarray:
        if self.p ** self.dim < (1 << 62):
            weights = self.p ** np.arange(self.dim, dtype=np.int64)
            return arr @ weights
        weights = self.p ** np.arange(self.dim, dtype=object)
        return arr.astype(object) @ weights

    def elements(self):
        for t in product(range(self.p), repeat=self.dim):
            yield np.array(t, dtype=np.int64)

    def size(self) -> int:
        return self.p ** self.dim

    def coords_of_poly(self, f: Polynomial) -> np.ndarray:
        """Coordinates of the residue class of f."""
        gb = self.presentation[1] if self.presentation else []
        nf = normal_form(f, gb) if gb else f
        out = np.zeros(self.dim, dtype=np.int64)
        for e, c in nf.terms.items():
            out[self.basis.index(e)] = c % self.p
        return out

    def element_repr(self, u) -> str:
        bits = []
        for c, e in zip(u, self.basis):
            if c % self.p == 0:
                continue
            mono = "*".join(f"{n}^{x}" if x > 1 else n
                            for n, x in zip(self.names, e) if x)
            if not mono:
                bits.append(str(int(c)))
            elif c % self.p == 1:
                bits.append(mono)
            else:
                bits.append(f"{int(c)}*{mono}")
        return " + ".join(bits) if bits else "0"

    def random_element(self, rng) -> np.ndarray:
        return rng.integers(0, self.p, size=self.dim, dtype=np.int64)

    def __repr__(self):
        gens = ", ".join(self.names) if self.names else ""
        return f"FiniteAlgebra(p={self.p}, dim={self.dim}, vars=[{gens}])"


def algebra_from_presentation(variables, ideal_gens, p: int,
                              dim_cap: int = DIM_CAP) -> FiniteAlgebra:
    """Build F_p[variables]/(ideal_gens) with its staircase monomial basis."""
    check_prime(p)
    variables = tuple(variables)
    gens = []
    for g in ideal_gens:
        if isinstance(g, str):
            g = parse_poly(g, variables, p)
        if g.p != p or g.vars != variables:
            g = Polynomial(variables, g.terms, p)
        gens.append(g)
    if not variables:
        return _base_field_algebra(p)
    gb = groebner_basis(gens)
    if not gb:
        raise NotFiniteDimensional("zero ideal has an infinite staircase")
    monos = staircase(gb, dim_cap=dim_cap)
    if not monos:
        raise ValueError("unit ideal: the quotient algebra is zero")
    if len(monos) > dim_cap:
        raise CapExceeded(f"dimension {len(monos)} exceeds cap {dim_cap}")
    index = {m: i for i, m in enumerate(monos)}
    dim = len(monos)
    table = np.zeros((dim, dim, dim), dtype=np.int64)
    for i, mi in enumerate(monos):
        for j, mj in enumerate(monos[:i + 1]):
            prod_exp = tuple(a + b for a, b in zip(mi, mj))
            f = Polynomial(variables, {prod_exp: 1}, p)
            nf = normal_form(f, gb)
            for e, c in nf.terms.items():
                table[i, j, index[e]] = c
            table[j, i] = table[i, j]
    gen_coords = []
    for name in variables:
        f = Polynomial.variable(variables, name, p)
        nf = normal_form(f, gb)
        row = np.zeros(dim, dtype=np.int64)
        for e, c in nf.terms.items():
            row[index[e]] = c
        gen_coords.append(row)
    generators = np.stack(gen_coords) if gen_coords else np.zeros((0, dim), dtype=np.int64)
    return FiniteAlgebra(p, variables, monos, table, generators,
                         presentation=(gens, gb))


def _base_field_algebra(p: int) -> FiniteAlgebra:
    table = np.ones((1, 1, 1), dtype=np.int64)
    return FiniteAlgebra(p, (), [()], table, np.zeros((0, 1), dtype=np.int64),
                         presentation=([], []))


def base_field(p: int) -> FiniteAlgebra:
    """F_p itself as a one-dimensional algebra."""
    return _base_field_algebra(p)


def find_irreducible(p: int, e: int) -> Polynomial:
    """Lexicographically first monic irreducible of degree e over F_p."""
    if e == 1:
        return parse_poly("u", ("u",), p)
    for tail in product(range(p), repeat=e):
        terms = {(e,): 1}
        for i, c in enumerate(tail):
            if c:
                terms[(i,)] = c
        f = Polynomial(("u",), terms, p)
        if _is_irreducible_univariate(f, p, e):
            return f
    raise RuntimeError("no irreducible polynomial found")


def _poly_mulmod(a: dict, b: dict, f: dict, e: int, p: int) -> dict:
    out: dict[int, int] = {}
    for i, ca in a.items():
        for j, cb in b.items():
            k = i + j
            out[k] = (out.get(k, 0) + ca * cb) % p
    # reduce modulo the monic f of degree e
    for k in sorted(out, reverse=True):
        if k < e:
            break
        c = out.pop(k)
        if not c:
            continue
        for i, cf in f.items():
            if i == e:
                continue
            kk = k - e + i
            out[kk] = (out.get(kk, 0) - c * cf) % p
    return {k: v for k, v in out.items() if v}


def _poly_gcd_univ(a: dict, b: dict, p: int) -> dict:
    """Monic gcd of univariate polynomials given as {degree: coeff} dicts."""
    def degree(u):
        return max(u) if u else -1

    def rem(u, v):
        u = dict(u)
        dv = degree(v)
        inv = pow(v[dv], p - 2, p)
        while u and degree(u) >= dv:
            du = degree(u)
            c = (u[du] * inv) % p
            for i, cv in v.items():
                k = du - dv + i
                val = (u.get(k, 0) - c * cv) % p
                if val:
                    u[k] = val
                else:
                    u.pop(k, None)
        return u

    while b:
        a, b = b, rem(a, b)
    if a:
        lead = a[degree(a)]
        inv = pow(lead, p - 2, p)
        a = {i: (c * inv) % p for i, c in a.items()}
    return a


def _is_irreducible_univariate(f: Polynomial, p: int, e: int) -> bool:
    fd = {exp[0]: c for exp, c in f.terms.items()}
    x = {1: 1}

    def xqpow(k):
        # x^(p^k) mod f by repeated p-th powering
        cur = dict(x)
        for _ in range(k):
            result = {0: 1}
            base = dict(cur)
            n = p
            while n:
                if n & 1:
                    result = _poly_mulmod(result, base, fd, e, p)
                n >>= 1
                if n:
                    base = _poly_mulmod(base, base, fd, e, p)
            cur = result
        return cur

    if xqpow(e) != x:
        return False
    for ell in {d for d in range(2, e + 1) if e % d == 0 and _is_prime_small(d)}:
        sub = xqpow(e // ell)
        diff = dict(sub)
        diff[1] = (diff.get(1, 0) - 1) % p
        if not diff[1]:
            del diff[1]
        diff = {i: c for i, c in diff.items() if c}
        if _poly_gcd_univ(fd, diff, p) != {0: 1}:
            return False
    return True


def _is_prime_small(n: int) -> bool:
    return n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def galois_field(p: int, e: int) -> FiniteAlgebra:
    """F_{p^e} as an e-dimensional F_p-algebra (generator named u)."""
    if e == 1:
        return base_field(p)
    f = find_irreducible(p, e)
    return algebra_from_presentation(("u",), [f], p)


def tensor_algebra(a: FiniteAlgebra, b: FiniteAlgebra,
                   dim_cap: int = DIM_CAP) -> FiniteAlgebra:
    """A (x) B over F_p with the pair basis and componentwise product."""
    if a.p != b.p:
        raise ValueError("tensor factors must share the prime")
    dim = a.dim * b.dim
    if dim > dim_cap:
        raise CapExceeded(f"tensor dimension {dim} exceeds cap {dim_cap}")
    p = a.p
    names = tuple(f"{n}.l" for n in a.names) + tuple(f"{n}.r" for n in b.names)
    ka = len(a.names)
    basis = []
    for ma in a.basis:
        for mb in b.basis:
            basis.append(tuple(ma) + tuple(mb))
    table = np.einsum("ijk,abc->iajbkc", a.table, b.table).reshape(dim, dim, dim) % p
    gen_rows = []
    for g in a.generators:
        gen_rows.append(np.einsum("i,j->ij", g, b.unit).reshape(dim) % p)
    for g in b.generators:
        gen_rows.append(np.einsum("i,j->ij", a.unit, g).reshape(dim) % p)
    generators = (np.stack(gen_rows) if gen_rows
                  else np.zeros((0, dim), dtype=np.int64))
    out = FiniteAlgebra(p, names, basis, table, generators, presentation=None)
    out._tensor_factors = (a, b)
    return out


def embed_left(a: FiniteAlgebra, t: FiniteAlgebra, u) -> np.ndarray:
    """Coordinates of u (x) 1 inside a tensor algebra t = a (x) b."""
    bfac = t._tensor_factors[1]
    return np.einsum("...i,j->...ij", u, bfac.unit).reshape(u.shape[:-1] + (t.dim,)) % t.p


def embed_right(b: FiniteAlgebra, t: FiniteAlgebra, u) -> np.ndarray:
    afac = t._tensor_factors[0]
    return np.einsum("i,...j->...ij", afac.unit, u).reshape(u.shape[:-1] + (t.dim,)) % t.p


def tensor_vector(t: FiniteAlgebra, u, v) -> np.ndarray:
    """Coordinates of u (x) v in t = a (x) b."""
    return np.einsum("...i,...j->...ij", u, v).reshape(u.shape[:-1] + (t.dim,)) % t.p


def is_reduced(a: FiniteAlgebra) -> bool:
    return a.is_reduced()
