"""Finite p-typical Cartier modules: (M, F, V) with FV = p on abelian p-groups.

Includes the Witt ring of a finite algebra packaged as a Cartier module
(explicit invariant-factor generators found by enumeration), the free
V-extension M[V] of a module-with-F, the relation-quotient tensor product
of two Cartier modules truncated at a V-power, and the comparison of that
truncated product with the Witt ring of the tensor algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import FiniteAlgebra, embed_left, embed_right, tensor_algebra
from .errors import CapExceeded, ComparisonFailed
from .snf import AbelianQuotient
from .witt import WittRing, additive_order

CARTIER_ENUM_CAP = 1 << 18
ORDER_EXP_CAP = 6


@dataclass
class CartierModule:
    """Finite abelian p-group in invariant-factor form with F and V matrices.

    Component i is Z/p^orders[i]; F and V act by matrix multiplication on
    coordinate columns.  Only FV = p is required by the definition; whether
    VF = p also holds is recorded rather than assumed.
    """
    p: int
    orders: list[int]              # exponents e_i of the cyclic components
    F: np.ndarray
    V: np.ndarray
    twist: int = 0
    vf_is_p: bool = field(default=True)

    def __post_init__(self):
        self.F = np.asarray(self.F, dtype=object)
        self.V = np.asarray(self.V, dtype=object)
        if any(e > ORDER_EXP_CAP for e in self.orders):
            raise CapExceeded(f"component order exceeds p^{ORDER_EXP_CAP}")
        self._moduli = [self.p ** e for e in self.orders]
        _check_well_defined(self.F, self._moduli, self.p)
        _check_well_defined(self.V, self._moduli, self.p)
        fv = _matmul_mod(self.F, self.V, self._moduli)
        if not _is_p_times_identity(fv, self.p, self._moduli):
            raise ValueError("FV != p")
        vf = _matmul_mod(self.V, self.F, self._moduli)
        self.vf_is_p = _is_p_times_identity(vf, self.p, self._moduli)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def size(self) -> int:
        out = 1
        for m in self._moduli:
            out *= m
        return out

    def reduce(self, v) -> np.ndarray:
        return np.array([int(x) % m for x, m in zip(v, self._moduli)], dtype=object)

    def add(self, u, v):
        return self.reduce([int(a) + int(b) for a, b in zip(u, v)])

    def scale(self, c: int, u):
        return self.reduce([c * int(a) for a in u])

    def apply_f(self, u):
        return self.reduce(self.F @ np.asarray(u, dtype=object))

    def apply_v(self, u):
        return self.reduce(self.V @ np.asarray(u, dtype=object))

    def element_order(self, u) -> int:
        u = self.reduce(u)
        order = 1
        while any(u):
            u = self.scale(self.p, u)
            order *= self.p
        return order

    def random_element(self, rng):
        return self.reduce([int(rng.integers(0, m)) for m in self._moduli])

    def elements(self):
        from itertools import product
        for t in product(*(range(m) for m in self._moduli)):
            yield np.array(t, dtype=object)


def _check_well_defined(mat, moduli, p):
    r = len(moduli)
    for i in range(r):
        for j in range(r):
            if moduli[i] > moduli[j] and (int(mat[i][j]) * moduli[j]) % moduli[i]:
                raise ValueError("matrix does not preserve component orders")


def _matmul_mod(a, b, moduli):
    out = a @ b
    return np.array([[int(out[i][j]) % moduli[i] for j in range(len(moduli))]
                     for i in range(len(moduli))], dtype=object)


def _is_p_times_identity(mat, p, moduli) -> bool:
    r = len(moduli)
    for i in range(r):
        for j in range(r):
            want = p if i == j else 0
            if (int(mat[i][j]) - want) % moduli[i]:
                return False
    return True


@dataclass
class WittCartierData:
    """witt_as_cartier output: the module plus the coordinate table."""
    module: CartierModule
    ring: WittRing
    generators: np.ndarray          # (rank, n, dim) Witt coordinates
    _index: dict                    # encoded element -> row in _coords
    _coords: np.ndarray             # (|G|, rank) object array

    def coords(self, witt_coords) -> np.ndarray:
        i = self._index[int(self.ring.encode(witt_coords))]
        return self._coords[i].copy()


def witt_as_cartier(algebra: FiniteAlgebra, n: int,
                    cap: int = CARTIER_ENUM_CAP) -> WittCartierData:
    """Additive group of W_n(A) in invariant-factor form with F, V matrices.

    Greedy basis extraction: repeatedly pick an element of maximal order in
    the quotient by the current span, correct the lift so its order drops
    to its quotient order, and enlarge the span.
    """
    ring = WittRing(algebra, n)
    total = ring.size()
    if total > cap:
        raise CapExceeded(f"|W_{n}(A)| = {total} exceeds cartier cap {cap}")
    p = ring.p
    elems = ring.all_elements(cap)
    codes = ring.encode_batch(elems)

    span_elems = np.zeros((1, n, algebra.dim), dtype=np.int64)
    span_index = {int(ring.encode(span_elems[0])): 0}
    span_coords = np.zeros((1, 0), dtype=object)
    gens: list[np.ndarray] = []
    exps: list[int] = []

    def quotient_order_exp(x) -> int:
        t = 0
        cur = x
        while int(ring.encode(cur)) not in span_index:
            cur = ring.pmul(cur)
            t += 1
        return t

    while span_elems.shape[0] < total:
        best_t, best_i = -1, -1
        cur = elems
        alive = np.array([int(c) not in span_index for c in codes.tolist()])
        t = 0
        while alive.any():
            t += 1
            cur = ring.pmul(cur)
            now_in = np.array([int(c) in span_index
                               for c in ring.encode_batch(cur).tolist()])
            settled = alive & now_in
            if settled.any() and t > best_t:
                best_t = t
                best_i = int(np.nonzero(settled)[0][0])
            alive &= ~now_in
        y = elems[best_i].copy()
        # adjust the lift: p^t y = sum c_i g_i with p^t | c_i
        z = y
        for _ in range(best_t):
            z = ring.pmul(z)
        c = span_coords[span_index[int(ring.encode(z))]]
        for i, (ci, gi, ei) in enumerate(zip(c, gens, exps)):
            ci = int(ci)
            if ci % (p ** best_t):
                raise RuntimeError("invariant-factor adjustment failed")
            k = (-(ci // (p ** best_t))) % (p ** ei)
            y = ring.add(y, _int_mul(ring, gi, k))
        assert additive_order(ring, y) == p ** best_t
        # enlarge the span with multiples of y
        blocks_e = [span_elems]
        blocks_c = [np.pad(span_coords, ((0, 0), (0, 1)))]
        jy = np.zeros_like(y)
        for j in range(1, p ** best_t):
            jy = ring.add(jy, y)
            shifted = ring.add(span_elems, np.broadcast_to(jy, span_elems.shape))
            cc = np.pad(span_coords, ((0, 0), (0, 1)))
            cc[:, len(gens)] = j
            blocks_e.append(shifted)
            blocks_c.append(cc)
        span_elems = np.concatenate(blocks_e)
        span_coords = np.concatenate(blocks_c)
        span_index = {int(cd): i
                      for i, cd in enumerate(ring.encode_batch(span_elems).tolist())}
        if len(span_index) != span_elems.shape[0]:
            raise RuntimeError("span collision while extending the basis")
        gens.append(y)
        exps.append(best_t)

    rank_ = len(gens)
    fmat = np.zeros((rank_, rank_), dtype=object)
    vmat = np.zeros((rank_, rank_), dtype=object)
    for j, g in enumerate(gens):
        fg = ring.frob(g)
        vg = ring.vshift(g)
        fmat[:, j] = span_coords[span_index[int(ring.encode(fg))]]
        vmat[:, j] = span_coords[span_index[int(ring.encode(vg))]]
    module = CartierModule(p=p, orders=exps, F=fmat, V=vmat)
    return WittCartierData(module=module, ring=ring,
                           generators=np.stack(gens),
                           _index=span_index, _coords=span_coords)


def _int_mul(ring: WittRing, x, k: int):
    result = np.zeros_like(x)
    base = x
    while k:
        if k & 1:
            result = ring.add(result, base)
        k >>= 1
        if k:
            base = ring.add(base, base)
    return result


class MVExtension:
    """Free V-extension M[V] of a module-with-F, elements sparsely supported.

    An element maps slot i >= 0 to M-coordinates.  F and V follow the
    defining formulas; FV = p holds identically since no slot is dropped.
    The truncation parameter only bounds the window used for enumeration.
    """

    def __init__(self, orders: list[int], f_matrix, p: int, truncation: int):
        if truncation > 6:
            raise CapExceeded("M[V] truncation window capped at 6")
        self.p = p
        self.orders = list(orders)
        self._moduli = [p ** e for e in orders]
        self.F = np.asarray(f_matrix, dtype=object)
        self.truncation = truncation

    def _reduce(self, v):
        return tuple(int(x) % m for x, m in zip(v, self._moduli))

    def clean(self, elem: dict) -> dict:
        out = {}
        for i, v in elem.items():
            v = self._reduce(v)
            if any(v):
                out[i] = v
        return out

    def add(self, a: dict, b: dict) -> dict:
        out = dict(a)
        for i, v in b.items():
            if i in out:
                out[i] = self._reduce([x + y for x, y in zip(out[i], v)])
            else:
                out[i] = self._reduce(v)
        return self.clean(out)

    def apply_v(self, a: dict) -> dict:
        return {i + 1: v for i, v in a.items()}

    def apply_f(self, a: dict) -> dict:
        out: dict[int, tuple] = {}
        for i, v in a.items():
            if i == 0:
                img = self._reduce(self.F @ np.asarray(v, dtype=object))
                out[0] = (tuple(x + y for x, y in zip(out[0], img))
                          if 0 in out else img)
            else:
                img = self._reduce([self.p * int(x) for x in v])
                key = i - 1
                out[key] = (tuple(x + y for x, y in zip(out[key], img))
                            if key in out else img)
        return self.clean({i: self._reduce(v) for i, v in out.items()})

    def scale(self, c: int, a: dict) -> dict:
        return self.clean({i: tuple(c * int(x) for x in v) for i, v in a.items()})

    def window_size(self) -> int:
        base = 1
        for m in self._moduli:
            base *= m
        return base ** self.truncation

    def random_element(self, rng) -> dict:
        elem = {}
        for i in range(self.truncation):
            elem[i] = tuple(int(rng.integers(0, m)) for m in self._moduli)
        return self.clean(elem)


def mv_extend(module: CartierModule | tuple, truncation: int) -> MVExtension:
    """M[V] for a module-with-F; accepts a CartierModule or (orders, F, p)."""
    if isinstance(module, CartierModule):
        return MVExtension(module.orders, module.F, module.p, truncation)
    orders, fmat, p = module
    return MVExtension(orders, fmat, p, truncation)


@dataclass
class BoxProduct:
    """(M (x) N)[V] truncated at V^nv, modulo the exchange relations.

    Ambient generators are (a, b, k): the image of e_a (x) f_b in slot k,
    of order p^min(e_a, e_b, nv - k).  The relation lattice includes the
    slot truncation, so closure under F and V holds by construction.
    """
    p: int
    nv: int
    M: CartierModule
    N: CartierModule
    gens: list[tuple[int, int, int]]
    gen_exps: list[int]
    quotient: AbelianQuotient
    module: CartierModule
    relations: list[list[int]]
    _amb_f: np.ndarray
    _amb_v: np.ndarray

    def gen_index(self, a: int, b: int, k: int) -> int:
        return (k * self.M.rank + a) * self.N.rank + b

    def tensor_coords(self, u, v, k: int) -> np.ndarray:
        """Ambient coordinates of (u (x) v) V^k for module elements u, v."""
        out = np.zeros(len(self.gens), dtype=object)
        for a in range(self.M.rank):
            if not int(u[a]):
                continue
            for b in range(self.N.rank):
                if not int(v[b]):
                    continue
                out[self.gen_index(a, b, k)] = int(u[a]) * int(v[b])
        return self._amb_reduce(out)

    def _amb_reduce(self, x):
        return np.array([int(v) % (self.p ** e) for v, e in zip(x, self.gen_exps)],
                        dtype=object)

    def project(self, x) -> np.ndarray:
        return np.array(self.quotient.project([int(v) for v in x]), dtype=object)

    def ambient_f(self, x):
        return self._amb_reduce(self._amb_f @ np.asarray(x, dtype=object))

    def ambient_v(self, x):
        return self._amb_reduce(self._amb_v @ np.asarray(x, dtype=object))


def box_product(M: CartierModule, N: CartierModule, nv: int,
                size_cap: int = 1 << 24) -> BoxProduct:
    """Truncated Cartier tensor product with induced F and V."""
    if M.p != N.p:
        raise ValueError("factors must share the prime")
    p = M.p
    if M.size * N.size * nv > size_cap:
        raise CapExceeded("box product inputs exceed the size cap")
    rm, rn = M.rank, N.rank
    gens = [(a, b, k) for k in range(nv) for a in range(rm) for b in range(rn)]
    gen_exps = [min(M.orders[a], N.orders[b], nv - k) for (a, b, k) in gens]
    D = len(gens)

    def gi(a, b, k):
        return (k * rm + a) * rn + b

    # ambient F and V as integer matrices
    amb_f = np.zeros((D, D), dtype=object)
    amb_v = np.zeros((D, D), dtype=object)
    for (a, b, k) in gens:
        j = gi(a, b, k)
        if k > 0:
            amb_f[gi(a, b, k - 1), j] = p
        else:
            fa = M.apply_f(_unit(rm, a))
            fb = N.apply_f(_unit(rn, b))
            for a2 in range(rm):
                if not int(fa[a2]):
                    continue
                for b2 in range(rn):
                    if not int(fb[b2]):
                        continue
                    amb_f[gi(a2, b2, 0), j] += int(fa[a2]) * int(fb[b2])
        if k + 1 < nv:
            amb_v[gi(a, b, k + 1), j] = 1

    # relation lattice rows: component orders and the two exchange families
    rows: list[list[int]] = []
    for j, e in enumerate(gen_exps):
        row = [0] * D
        row[j] = p ** e
        rows.append(row)
    for k in range(nv):
        for a in range(rm):
            for b in range(rn):
                # (e_a (x) V f_b) V^k ~ (F e_a (x) f_b) V^{k+1}
                vb = N.apply_v(_unit(rn, b))
                row = [0] * D
                for b2 in range(rn):
                    if int(vb[b2]):
                        row[gi(a, b2, k)] += int(vb[b2])
                if k + 1 < nv:
                    fa = M.apply_f(_unit(rm, a))
                    for a2 in range(rm):
                        if int(fa[a2]):
                            row[gi(a2, b, k + 1)] -= int(fa[a2])
                if any(row):
                    rows.append(row)
                # (V e_a (x) f_b) V^k ~ (e_a (x) F f_b) V^{k+1}
                va = M.apply_v(_unit(rm, a))
                row = [0] * D
                for a2 in range(rm):
                    if int(va[a2]):
                        row[gi(a2, b, k)] += int(va[a2])
                if k + 1 < nv:
                    fb = N.apply_f(_unit(rn, b))
                    for b2 in range(rn):
                        if int(fb[b2]):
                            row[gi(a, b2, k + 1)] -= int(fb[b2])
                if any(row):
                    rows.append(row)

    quotient = AbelianQuotient(rows, D)

    # induced F, V on the quotient generators
    r = len(quotient.orders)
    qf = np.zeros((r, r), dtype=object)
    qv = np.zeros((r, r), dtype=object)
    for j in range(r):
        rep = quotient.generator_rep(j)
        qf[:, j] = quotient.project(list(np.asarray(rep, dtype=object) @ amb_f.T))
        qv[:, j] = quotient.project(list(np.asarray(rep, dtype=object) @ amb_v.T))
    orders_exp = [_exp_of(d, p) for d in quotient.orders]
    module = CartierModule(p=p, orders=orders_exp, F=qf, V=qv)

    box = BoxProduct(p=p, nv=nv, M=M, N=N, gens=gens, gen_exps=gen_exps,
                     quotient=quotient, module=module, relations=rows,
                     _amb_f=amb_f, _amb_v=amb_v)
    # relations vanish in the quotient by construction; assert anyway
    for row in rows:
        if any(box.project(row)):
            raise RuntimeError("relation does not vanish in the quotient")
    return box


def _unit(r: int, i: int):
    out = np.zeros(r, dtype=object)
    out[i] = 1
    return out


def _exp_of(d: int, p: int) -> int:
    e = 0
    while d % p == 0:
        d //= p
        e += 1
    if d != 1:
        raise RuntimeError("quotient order is not a p-power")
    return e


@dataclass
class BoxWittVerdict:
    p: int
    n: int
    dim_a: int
    dim_b: int
    orders_lhs: list[int]
    orders_rhs: list[int] | None
    cardinality_lhs: int
    cardinality_rhs: int
    isomorphism: bool
    equivariance: bool
    surjective_on_generators: bool
    relations_vanish: bool

    def to_jsonable(self):
        return {
            "p": self.p, "n": self.n, "dim_a": self.dim_a, "dim_b": self.dim_b,
            "orders_lhs": self.orders_lhs, "orders_rhs": self.orders_rhs,
            "cardinality_lhs": str(self.cardinality_lhs),
            "cardinality_rhs": str(self.cardinality_rhs),
            "isomorphism": self.isomorphism, "equivariance": self.equivariance,
            "surjective_on_generators": self.surjective_on_generators,
            "relations_vanish": self.relations_vanish,
        }


def compare_box_with_witt(A: FiniteAlgebra, B: FiniteAlgebra, n: int,
                          factor_cap: int = CARTIER_ENUM_CAP,
                          rhs_enum_cap: int = CARTIER_ENUM_CAP,
                          strict: bool = True) -> BoxWittVerdict:
    """Check mu: (W(A) box W(B))/V^n -> W_n(A (x) B) is a Cartier isomorphism.

    mu((a (x) b)V^k) = V^k(iota_A(a) * iota_B(b)).  Well-definedness rides on
    the projection formula x V(y) = V(F(x) y); here each relation generator
    is mapped and checked to vanish, mu is checked to hit every additive
    generator V^i([m (x) m']) of the target, and cardinalities settle
    injectivity.
    """
    if A.p != B.p:
        raise ValueError("factors must share the prime")
    da = witt_as_cartier(A, n, cap=factor_cap)
    db = witt_as_cartier(B, n, cap=factor_cap)
    box = box_product(da.module, db.module, n)

    T = tensor_algebra(A, B)
    ringT = WittRing(T, n)

    # mu on ambient generators
    mu_gens = []
    for (a, b, k) in box.gens:
        ia = np.stack([embed_left(A, T, row) for row in da.generators[a]])
        ib = np.stack([embed_right(B, T, row) for row in db.generators[b]])
        prod = ringT.mul(ia, ib)
        mu_gens.append(ringT.vshift(prod, k))

    exponent = ringT.p ** ringT.n    # additive exponent of W_n(T)

    def mu(ambient_vec) -> np.ndarray:
        out = np.zeros((n, T.dim), dtype=np.int64)
        for j, c in enumerate(ambient_vec):
            c = int(c) % exponent
            if c:
                out = ringT.add(out, _int_mul(ringT, mu_gens[j], c))
        return out

    relations_ok = all(not mu(row).any() for row in box.relations)

    # equivariance on ambient generators
    equiv = True
    for j in range(len(box.gens)):
        e = np.zeros(len(box.gens), dtype=object)
        e[j] = 1
        if not np.array_equal(mu(box.ambient_f(e)), ringT.frob(mu_gens[j])):
            equiv = False
            break
        if not np.array_equal(mu(box.ambient_v(e)), ringT.vshift(mu_gens[j])):
            equiv = False
            break

    # surjectivity onto the generating set {V^i([m (x) m'])}
    surj = True
    for c in range(T.dim):
        ma, mb = divmod(c, B.dim)
        ea = np.zeros(A.dim, dtype=np.int64)
        ea[ma] = 1
        eb = np.zeros(B.dim, dtype=np.int64)
        eb[mb] = 1
        ca = da.coords(da.ring.teichmuller(ea).coords)
        cb = db.coords(db.ring.teichmuller(eb).coords)
        for i in range(n):
            amb = box.tensor_coords(ca, cb, i)
            target = ringT.vshift(ringT.teichmuller(tensor_coords_vec(T, ea, eb)).coords, i)
            if not np.array_equal(mu(amb), target):
                surj = False
                break
        if not surj:
            break

    card_lhs = box.module.size
    card_rhs = ringT.size()
    orders_rhs = None
    if card_rhs <= rhs_enum_cap:
        orders_rhs = _witt_group_orders(ringT)
    iso = relations_ok and surj and (card_lhs == card_rhs)
    if strict and not iso:
        raise ComparisonFailed(
            f"box/Witt comparison failed for dims ({A.dim},{B.dim}) at n={n}")
    return BoxWittVerdict(
        p=A.p, n=n, dim_a=A.dim, dim_b=B.dim,
        orders_lhs=[box.p ** e for e in box.module.orders],
        orders_rhs=orders_rhs,
        cardinality_lhs=card_lhs, cardinality_rhs=card_rhs,
        isomorphism=iso, equivariance=equiv,
        surjective_on_generators=surj, relations_vanish=relations_ok)


def tensor_coords_vec(T: FiniteAlgebra, ea, eb):
    return np.einsum("i,j->ij", ea, eb).reshape(T.dim) % T.p


def _witt_group_orders(ring: WittRing) -> list[int]:
    """Invariant factors of (W_n(A), +) by torsion counting."""
    elems = ring.all_elements()
    p = ring.p
    counts = [1]                      # |G[p^0]|
    cur = elems
    while True:
        cur = ring.pmul(cur)
        zero = ~cur.reshape(cur.shape[0], -1).any(axis=1)
        counts.append(int(zero.sum()))
        if counts[-1] == elems.shape[0]:
            break
    t = [0]
    for c in counts[1:]:
        e = 0
        while p ** e < c:
            e += 1
        t.append(e)
    # number of factors with exponent >= j is t_j - t_{j-1}
    orders = []
    for j in range(1, len(t)):
        at_least_j = t[j] - t[j - 1]
        at_least_j1 = t[j + 1] - t[j] if j + 1 < len(t) else 0
        orders.extend([p ** j] * (at_least_j - at_least_j1))
    return sorted(orders, reverse=True)
