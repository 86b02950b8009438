"""Buchberger's algorithm for small zero-dimensional ideals over F_p.

Scope is deliberately narrow: few variables, low degrees, hard caps with
explicit errors.  Output bases are reduced and sorted, so recomputing the
basis of a basis returns it unchanged.
"""

from __future__ import annotations

from itertools import product

from .errors import CapExceeded, NotFiniteDimensional
from .linalg import inv_mod
from .polys import ORDERS, Expvec, Polynomial

MAX_VARS = 6
MAX_INPUT_DEGREE = 12
MAX_WORK_DEGREE = 40
MAX_PAIRS = 4000


def _divides(a: Expvec, b: Expvec) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _quotient(a: Expvec, b: Expvec) -> Expvec:
    return tuple(x - y for x, y in zip(a, b))


def _lcm(a: Expvec, b: Expvec) -> Expvec:
    return tuple(max(x, y) for x, y in zip(a, b))


def normal_form(f: Polynomial, basis: list[Polynomial], order: str = "grevlex") -> Polynomial:
    """Remainder of f under multivariate division by basis (fixed order)."""
    key = ORDERS[order]
    p = f.p
    leads = [(g.leading(order)[0], g) for g in basis if g]
    rem: dict[Expvec, int] = {}
    work = dict(f.terms)
    while work:
        e = max(work, key=key)
        c = work.pop(e)
        for le, g in leads:
            if _divides(le, e):
                q = _quotient(e, le)
                factor = (c * inv_mod(g.terms[le], p)) % p
                for ge, gc in g.terms.items():
                    te = tuple(x + y for x, y in zip(ge, q))
                    if te == e:
                        continue  # cancels the popped leading term exactly
                    v = (work.get(te, 0) - factor * gc) % p
                    if v:
                        work[te] = v
                    else:
                        work.pop(te, None)
                break
        else:
            rem[e] = c
    return Polynomial(f.vars, rem, p, _clean=False)


def _s_poly(f: Polynomial, g: Polynomial, order: str) -> Polynomial:
    p = f.p
    ef, cf = f.leading(order)
    eg, cg = g.leading(order)
    l = _lcm(ef, eg)
    mf = Polynomial(f.vars, {_quotient(l, ef): inv_mod(cf, p)}, p)
    mg = Polynomial(f.vars, {_quotient(l, eg): inv_mod(cg, p)}, p)
    return mf * f - mg * g


def groebner_basis(generators: list[Polynomial], order: str = "grevlex") -> list[Polynomial]:
    """Reduced Groebner basis of the ideal the generators span."""
    gens = [g for g in generators if g]
    if not gens:
        return []
    p = gens[0].p
    if p is None:
        raise ValueError("groebner_basis needs coefficients mod a prime")
    nvars = len(gens[0].vars)
    if nvars > MAX_VARS:
        raise CapExceeded(f"{nvars} variables exceeds cap {MAX_VARS}")
    for g in gens:
        if g.total_degree() > MAX_INPUT_DEGREE:
            raise CapExceeded(f"input degree {g.total_degree()} exceeds cap {MAX_INPUT_DEGREE}")

    basis = [g.monic(order) for g in gens]
    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    processed = 0
    while pairs:
        processed += 1
        if processed > MAX_PAIRS:
            raise CapExceeded(f"S-polynomial queue exceeded {MAX_PAIRS} pairs")
        i, j = pairs.pop()
        ei, _ = basis[i].leading(order)
        ej, _ = basis[j].leading(order)
        # product criterion: coprime leading monomials reduce to zero
        if _lcm(ei, ej) == tuple(a + b for a, b in zip(ei, ej)):
            continue
        s = _s_poly(basis[i], basis[j], order)
        r = normal_form(s, basis, order)
        if r:
            if r.total_degree() > MAX_WORK_DEGREE:
                raise CapExceeded(f"intermediate degree {r.total_degree()} exceeds cap")
            basis.append(r.monic(order))
            k = len(basis) - 1
            pairs.extend((k, t) for t in range(k))
    return _reduce_basis(basis, order)


def _reduce_basis(basis: list[Polynomial], order: str) -> list[Polynomial]:
    key = ORDERS[order]
    # drop redundant leading terms
    leads = [g.leading(order)[0] for g in basis]
    keep = []
    for i, g in enumerate(basis):
        li = leads[i]
        if any(j != i and _divides(leads[j], li) and (leads[j] != li or j < i)
               for j in range(len(basis))):
            continue
        keep.append(g)
    # tail-reduce each survivor against the others
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        out.append(normal_form(g, others, order).monic(order))
    out = [g for g in out if g]
    out.sort(key=lambda g: key(g.leading(order)[0]))
    return out


def staircase(basis: list[Polynomial], order: str = "grevlex",
              dim_cap: int = 4096) -> list[Expvec]:
    """Standard monomials below the leading-term staircase.

    Raises NotFiniteDimensional when some variable has no pure power among
    the leading terms (infinite staircase), CapExceeded past dim_cap.
    """
    if not basis:
        raise NotFiniteDimensional("zero ideal is not Artinian")
    nvars = len(basis[0].vars)
    leads = [g.leading(order)[0] for g in basis]
    if any(sum(e) == 0 for e in leads):
        return []  # unit ideal
    bounds = []
    for i in range(nvars):
        pure = [e[i] for e in leads if all(x == 0 for j, x in enumerate(e) if j != i)]
        if not pure:
            raise NotFiniteDimensional(f"no pure power of variable {i} in the staircase")
        bounds.append(min(pure))
    total = 1
    for b in bounds:
        total *= b
    if total > dim_cap * 64:
        raise CapExceeded("staircase bounding box too large")
    monos = []
    for e in product(*(range(b) for b in bounds)):
        if not any(_divides(le, e) for le in leads):
            monos.append(e)
            if len(monos) > dim_cap:
                raise CapExceeded(f"standard monomial count exceeds {dim_cap}")
    monos.sort(key=ORDERS[order])
    return monos


def is_zero_dimensional(basis: list[Polynomial], order: str = "grevlex") -> bool:
    try:
        staircase(basis, order, dim_cap=1 << 20)
        return True
    except NotFiniteDimensional:
        return False
