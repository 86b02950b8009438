"""Universal addition/multiplication polynomials for p-typical Witt vectors.

The polynomials are computed over the integers through the ghost-component
recursion; every division by a power of p is checked to be exact.  Results
are cached on disk as versioned text files with a checksum, keyed by (p, n).

Internally a polynomial in x_0..x_{n-1}, y_0..y_{n-1} is a dict mapping a
packed exponent key (16 bits per variable) to an integer coefficient.
"""

from __future__ import annotations

import hashlib
import os
import warnings
from dataclasses import dataclass
from pathlib import Path

from filelock import FileLock

from .errors import CacheCorrupt, CapExceeded

P_CAP = 13
N_CAP = 5
CACHE_VERSION = 1
CACHE_ENV = "WITTSPLIT_CACHE_DIR"

_BITS = 16
_MASK = (1 << _BITS) - 1

IntPoly = dict


def _pack(exps) -> int:
    key = 0
    for i, e in enumerate(exps):
        key |= int(e) << (_BITS * i)
    return key


def _unpack(key: int, nvars: int) -> tuple[int, ...]:
    return tuple((key >> (_BITS * i)) & _MASK for i in range(nvars))


def _var(i: int) -> IntPoly:
    return {1 << (_BITS * i): 1}


def poly_add(a: IntPoly, b: IntPoly) -> IntPoly:
    out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) + c
        if v:
            out[k] = v
        else:
            del out[k]
    return out


def poly_scale(a: IntPoly, c: int) -> IntPoly:
    if c == 0:
        return {}
    return {k: v * c for k, v in a.items()}


def poly_mul(a: IntPoly, b: IntPoly) -> IntPoly:
    if len(a) > len(b):
        a, b = b, a
    out: IntPoly = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            v = out.get(k, 0) + ca * cb
            if v:
                out[k] = v
            else:
                del out[k]
    return out


def poly_pow(a: IntPoly, n: int) -> IntPoly:
    result = {0: 1}
    base = a
    while n:
        if n & 1:
            result = poly_mul(result, base)
        n >>= 1
        if n:
            base = poly_mul(base, base)
    return result


def poly_exact_div(a: IntPoly, d: int) -> IntPoly:
    out = {}
    for k, c in a.items():
        q, r = divmod(c, d)
        if r:
            raise ArithmeticError(f"inexact division by {d} in ghost recursion")
        out[k] = q
    return out


def ghost_poly(coords: list[IntPoly], i: int, p: int) -> IntPoly:
    """w_i = sum_{j<=i} p^j * coords[j]^(p^(i-j))."""
    acc: IntPoly = {}
    for j in range(i + 1):
        acc = poly_add(acc, poly_scale(poly_pow(coords[j], p ** (i - j)), p ** j))
    return acc


@dataclass
class WittStructurePolys:
    p: int
    n: int
    sum_polys: list      # IntPoly over Z, S_0..S_{n-1}
    prod_polys: list     # IntPoly over Z, P_0..P_{n-1}

    def modp_terms(self, which: str):
        """Terms reduced mod p as [(coeff, ((slot, exp), ...)), ...] per index."""
        polys = self.sum_polys if which == "sum" else self.prod_polys
        out = []
        for poly in polys:
            terms = []
            for key, c in poly.items():
                c %= self.p
                if not c:
                    continue
                exps = _unpack(key, 2 * self.n)
                terms.append((c, tuple((s, e) for s, e in enumerate(exps) if e)))
            out.append(terms)
        return out


def _compute(p: int, n: int) -> WittStructurePolys:
    xs = [_var(i) for i in range(n)]
    ys = [_var(n + i) for i in range(n)]
    sums: list[IntPoly] = []
    prods: list[IntPoly] = []
    for i in range(n):
        target_s = poly_add(ghost_poly(xs, i, p), ghost_poly(ys, i, p))
        target_p = poly_mul(ghost_poly(xs, i, p), ghost_poly(ys, i, p))
        for j in range(i):
            target_s = poly_add(target_s, poly_scale(poly_pow(sums[j], p ** (i - j)), -(p ** j)))
            target_p = poly_add(target_p, poly_scale(poly_pow(prods[j], p ** (i - j)), -(p ** j)))
        sums.append(poly_exact_div(target_s, p ** i))
        prods.append(poly_exact_div(target_p, p ** i))
    return WittStructurePolys(p, n, sums, prods)


def ghost_check(sp: WittStructurePolys) -> bool:
    """Exact symbolic verification of ghost compatibility over Z."""
    p, n = sp.p, sp.n
    xs = [_var(i) for i in range(n)]
    ys = [_var(n + i) for i in range(n)]
    for i in range(n):
        lhs = ghost_poly(sp.sum_polys, i, p)
        rhs = poly_add(ghost_poly(xs, i, p), ghost_poly(ys, i, p))
        if lhs != rhs:
            return False
        lhs = ghost_poly(sp.prod_polys, i, p)
        rhs = poly_mul(ghost_poly(xs, i, p), ghost_poly(ys, i, p))
        if lhs != rhs:
            return False
    if not sp.sum_polys or sp.sum_polys[0] != poly_add(_var(0), _var(n)):
        return False
    if sp.prod_polys[0] != poly_mul(_var(0), _var(n)):
        return False
    return True


def _subst_second_block(poly: IntPoly, n: int, subs: list) -> IntPoly:
    """Substitute y_j -> subs[j] (polynomials in x_0..x_{n-1}); x-vars fixed."""
    out: IntPoly = {}
    for key, c in poly.items():
        exps = _unpack(key, 2 * n)
        term: IntPoly = {_pack(exps[:n] + (0,) * n): c}
        for j in range(n):
            e = exps[n + j]
            if e:
                term = poly_mul(term, poly_pow(subs[j], e))
        out = poly_add(out, term)
    return out


def negation_polys(p: int, n: int) -> list:
    """N_0..N_{n-1} with x + (N_0(x), ..., N_{n-1}(x)) = 0 in W_n.

    Solved slot by slot from S_i(x, y) = x_i + y_i + G_i(lower slots);
    each N_i is isobaric of weight p^i, so pole schedules that scale with
    the slot weight are preserved.
    """
    sp = structure_polys(p, n)
    negs: list[IntPoly] = []
    for i in range(n):
        g = dict(sp.sum_polys[i])
        for pos in (i, n + i):
            key = 1 << (_BITS * pos)
            val = g.get(key, 0) - 1
            if val:
                g[key] = val
            else:
                g.pop(key, None)
        g_sub = _subst_second_block(g, n, negs)
        xi: IntPoly = {1 << (_BITS * i): -1}
        negs.append(poly_add(xi, poly_scale(g_sub, -1)))
    return negs


def negation_modp_terms(p: int, n: int) -> list:
    """Negation polynomials as mod-p term lists [(coeff, ((slot, exp), ...))]."""
    out = []
    for poly in negation_polys(p, n):
        terms = []
        for key, c in poly.items():
            c %= p
            if not c:
                continue
            exps = _unpack(key, 2 * n)
            terms.append((c, tuple((s, e) for s, e in enumerate(exps[:n]) if e)))
        out.append(terms)
    return out


# disk cache

_stats = {"hits": 0, "misses": 0, "corrupt": 0}


def cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "wittsplit"


def _cache_path(p: int, n: int) -> Path:
    return cache_dir() / f"wittpoly_p{p}_n{n}.txt"


def _serialize(sp: WittStructurePolys) -> str:
    lines = [f"vars {2 * sp.n}"]
    for tag, polys in (("S", sp.sum_polys), ("P", sp.prod_polys)):
        for i, poly in enumerate(polys):
            terms = []
            for key in sorted(poly):
                exps = _unpack(key, 2 * sp.n)
                terms.append(",".join(map(str, exps)) + ":" + str(poly[key]))
            lines.append(f"{tag} {i} " + " ".join(terms))
    return "\n".join(lines) + "\n"


def _deserialize(body: str, p: int, n: int) -> WittStructurePolys:
    lines = body.strip().split("\n")
    if not lines or lines[0] != f"vars {2 * n}":
        raise CacheCorrupt("unexpected variable count")
    sums = [None] * n
    prods = [None] * n
    for line in lines[1:]:
        parts = line.split(" ")
        tag, idx = parts[0], int(parts[1])
        poly: IntPoly = {}
        for item in parts[2:]:
            if not item:
                continue
            epart, cpart = item.split(":")
            exps = tuple(int(x) for x in epart.split(","))
            poly[_pack(exps)] = int(cpart)
        if tag == "S":
            sums[idx] = poly
        elif tag == "P":
            prods[idx] = poly
        else:
            raise CacheCorrupt(f"unknown tag {tag!r}")
    if any(s is None for s in sums) or any(q is None for q in prods):
        raise CacheCorrupt("missing polynomial line")
    return WittStructurePolys(p, n, sums, prods)


def _write_cache(sp: WittStructurePolys) -> None:
    path = _cache_path(sp.p, sp.n)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = _serialize(sp)
    digest = hashlib.sha256(body.encode()).hexdigest()
    header = f"wittsplit-cache {CACHE_VERSION} p={sp.p} n={sp.n} sha256={digest}\n"
    lock = FileLock(str(path) + ".lock")
    with lock:
        tmp = path.with_suffix(".tmp")
        tmp.write_text(header + body)
        tmp.replace(path)


def _read_cache(p: int, n: int) -> WittStructurePolys | None:
    path = _cache_path(p, n)
    if not path.exists():
        return None
    text = path.read_text()
    nl = text.find("\n")
    header, body = text[:nl], text[nl + 1:]
    fields = header.split(" ")
    try:
        if fields[0] != "wittsplit-cache" or int(fields[1]) != CACHE_VERSION:
            raise CacheCorrupt("bad header")
        digest = dict(f.split("=") for f in fields[2:])["sha256"]
        if hashlib.sha256(body.encode()).hexdigest() != digest:
            raise CacheCorrupt("checksum mismatch")
        return _deserialize(body, p, n)
    except CacheCorrupt as exc:
        _stats["corrupt"] += 1
        warnings.warn(f"witt polynomial cache {path} corrupt ({exc}); recomputing")
        return None


def structure_polys(p: int, n: int, use_cache: bool = True) -> WittStructurePolys:
    """Addition/multiplication polynomials for W_n in characteristic-free form."""
    if p > P_CAP or n > N_CAP or n < 1:
        raise CapExceeded(f"(p={p}, n={n}) outside cache caps (p<={P_CAP}, n<={N_CAP})")
    cacheable = use_cache and n >= 2
    if cacheable:
        cached = _read_cache(p, n)
        if cached is not None:
            _stats["hits"] += 1
            return cached
        _stats["misses"] += 1
    sp = _compute(p, n)
    if cacheable:
        _write_cache(sp)
    return sp


def cache_entries() -> list[tuple[int, int]]:
    d = cache_dir()
    if not d.exists():
        return []
    out = []
    for f in sorted(d.glob("wittpoly_p*_n*.txt")):
        stem = f.stem.replace("wittpoly_p", "")
        ps, ns = stem.split("_n")
        out.append((int(ps), int(ns)))
    return out


def clear_cache() -> int:
    d = cache_dir()
    if not d.exists():
        return 0
    count = 0
    for f in list(d.glob("wittpoly_p*_n*.txt")) + list(d.glob("wittpoly_p*_n*.txt.lock")):
        f.unlink()
        if not f.name.endswith(".lock"):
            count += 1
    return count


def warm_cache(pmax: int, nmax: int) -> int:
    from .linalg import SMALL_PRIMES
    count = 0
    for p in SMALL_PRIMES:
        if p > pmax:
            break
        for n in range(2, nmax + 1):
            structure_polys(p, n)
            count += 1
    return count


def cache_stats() -> dict:
    return dict(_stats)
