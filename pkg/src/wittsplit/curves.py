"""Plane curves over small finite fields: point counts, supersingularity,
the Hasse invariant, coefficient-criterion formal-group heights, and the
closed-form height of products of elliptic curves by p-rank.

Supersingularity decisions triangulate: the trace from a point count over
F_q, the trace equation re-checked over F_{q^2}, and (over prime fields)
the Hasse invariant; any disagreement is a hard error, never a fallback.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

import numpy as np

from .errors import CapExceeded, InvalidRank, NotSmooth, Uncatalogued
from .groebner import groebner_basis, staircase
from .linalg import check_prime
from .polys import Polynomial, parse_poly
from .splitting import HeightReport

FIELD_CAP = 1 << 14
POINT_ENUM_CAP = 10 ** 7

VARS3 = ("x", "y", "z")
VARS4 = ("x", "y", "z", "w")


class SmallField:
    """F_{p^e} with Zech-style log/exp tables; elements are ints in [0, p^e).

    Encoding: the element sum(c_i u^i) is the integer sum(c_i p^i) for the
    chosen irreducible modulus of degree e.
    """

    def __init__(self, p: int, e: int):
        check_prime(p)
        q = p ** e
        if q > FIELD_CAP:
            raise CapExceeded(f"field size {q} exceeds cap {FIELD_CAP}")
        self.p, self.e, self.q = p, e, q
        from .algebra import find_irreducible
        self.modulus = None if e == 1 else find_irreducible(p, e)
        self._digits = np.zeros((q, e), dtype=np.int64)
        rem = np.arange(q)
        for i in range(e):
            self._digits[:, i] = rem % p
            rem //= p
        self._weights = p ** np.arange(e, dtype=np.int64)
        self._build_log_tables()

    def _poly_mul_one(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        if e == 1:
            return (a * b) % p
        da = [(a // p ** i) % p for i in range(e)]
        db = [(b // p ** i) % p for i in range(e)]
        prod = [0] * (2 * e - 1)
        for i, ca in enumerate(da):
            if ca:
                for j, cb in enumerate(db):
                    prod[i + j] = (prod[i + j] + ca * cb) % p
        mod = {exp[0]: c for exp, c in self.modulus.terms.items()}
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k]
            if not c:
                continue
            prod[k] = 0
            for i, cf in mod.items():
                if i < e:
                    prod[k - e + i] = (prod[k - e + i] - c * cf) % p
        return sum(prod[i] * self.p ** i for i in range(e))

    def _build_log_tables(self):
        q = self.q
        self.exp = np.zeros(q, dtype=np.int64)       # exp[i] = g^i for i < q-1
        self.log = np.full(q, -1, dtype=np.int64)
        order = q - 1
        factors = _prime_factors(order)
        gen = 1
        for g in range(1, q):
            if all(self._pow_int(g, order // f) != 1 for f in factors):
                gen = g
                break
        cur = 1
        for i in range(order):
            self.exp[i] = cur
            self.log[cur] = i
            cur = self._poly_mul_one(cur, gen)

    def _pow_int(self, a: int, k: int) -> int:
        out = 1
        base = a
        while k:
            if k & 1:
                out = self._poly_mul_one(out, base)
            k >>= 1
            if k:
                base = self._poly_mul_one(base, base)
        return out

    # vectorized element ops on int arrays

    def add(self, a, b):
        da = self._digits[a] + self._digits[b]
        return (da % self.p) @ self._weights

    def mul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        nz = (a != 0) & (b != 0)
        la = self.log[np.broadcast_to(a, out.shape)[nz]]
        lb = self.log[np.broadcast_to(b, out.shape)[nz]]
        out[nz] = self.exp[(la + lb) % (self.q - 1)]
        return out

    def pow(self, a, k: int):
        a = np.asarray(a)
        if k == 0:
            return np.ones(a.shape, dtype=np.int64)
        out = np.zeros(a.shape, dtype=np.int64)
        nz = a != 0
        out[nz] = self.exp[(self.log[a[nz]] * k) % (self.q - 1)]
        return out

    def from_base_int(self, c: int):
        """Embed an integer residue (element of F_p) into the field."""
        return c % self.p

    def embed_root(self, modulus: Polynomial) -> int:
        """A root in this field of the given irreducible over F_p."""
        codes = np.arange(self.q)
        acc = np.zeros(self.q, dtype=np.int64)
        for exp, c in modulus.terms.items():
            term = self.mul(np.full(self.q, c % self.p), self.pow(codes, exp[0]))
            acc = self.add(acc, term)
        roots = np.nonzero(acc == 0)[0]
        if roots.size == 0:
            raise ValueError("modulus has no root in this field")
        return int(roots[0])


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class PlaneCurve:
    """Homogeneous plane curve of degree 3 or 4 over F_{p^e}.

    Coefficients are field elements in SmallField integer encoding (plain
    residues when e = 1), keyed by exponent triples.
    """
    p: int
    e: int
    degree: int
    coeffs: tuple
    name: str = ""

    @classmethod
    def from_poly(cls, f: Polynomial, name: str = "") -> "PlaneCurve":
        deg = f.total_degree()
        if not f.is_homogeneous(deg) or len(f.vars) != 3:
            raise ValueError("need a homogeneous polynomial in x, y, z")
        items = tuple(sorted((e, c) for e, c in f.terms.items()))
        return cls(p=f.p, e=1, degree=deg, coeffs=items, name=name)

    @classmethod
    def from_string(cls, text: str, p: int, name: str = "") -> "PlaneCurve":
        return cls.from_poly(parse_poly(text, VARS3, p), name=name)

    def polynomial(self) -> Polynomial:
        if self.e != 1:
            raise ValueError("polynomial form available over prime fields only")
        return Polynomial(VARS3, dict(self.coeffs), self.p)

    @property
    def q(self) -> int:
        return self.p ** self.e

    def label(self) -> str:
        if self.name:
            return self.name
        try:
            return str(self.polynomial())
        except ValueError:
            return f"curve(p={self.p},e={self.e})"


def fermat_cubic(p: int) -> PlaneCurve:
    return PlaneCurve.from_string("x^3+y^3+z^3", p, name=f"fermat_p{p}")


def is_smooth(curve: PlaneCurve) -> bool:
    """Jacobian criterion over the algebraic closure.

    Over a prime field this is exact: the curve is smooth iff the ideal
    (f, df/dx, df/dy, df/dz) has a finite staircase, i.e. its projective
    zero locus is empty.  Over extensions it falls back to a bounded
    point search for singular points.
    """
    if curve.e == 1:
        from .errors import NotFiniteDimensional
        f = curve.polynomial()
        gens = [f] + [f.partial(v) for v in VARS3]
        gens = [g for g in gens if g]
        if not gens:
            return False
        try:
            staircase(groebner_basis(gens), dim_cap=1 << 14)
            return True
        except NotFiniteDimensional:
            return False
    return _smooth_by_search(curve)


def _smooth_by_search(curve: PlaneCurve, m_cap: int = 3) -> bool:
    for m in range(1, m_cap + 1):
        if curve.q ** m > FIELD_CAP:
            break
        K = SmallField(curve.p, curve.e * m)
        coeffs = _embed_coeffs(curve, K)
        pts = _projective_points(K)
        vals = _eval_curve(coeffs, K, pts, curve.degree)
        on_curve = pts[:, vals == 0]
        if on_curve.shape[1] == 0:
            continue
        sing = np.ones(on_curve.shape[1], dtype=bool)
        for pc in _jacobian_coeffs(curve):
            pc_emb = _embed_coeffs(curve, K, coeffs=pc)
            v = _eval_curve(pc_emb, K, on_curve, curve.degree - 1)
            sing &= v == 0
        if sing.any():
            return False
    return True


def _jacobian_coeffs(curve: PlaneCurve):
    """Formal partial derivatives of the coefficient dict, any base field."""
    p = curve.p
    out = []
    for axis in range(3):
        d = {}
        for e, c in curve.coeffs:
            if e[axis] == 0:
                continue
            e2 = list(e)
            e2[axis] -= 1
            mult = e[axis] % p
            if not mult:
                continue
            # scalar from the prime subfield acts digit-wise on the encoding
            digits = [((c // p ** i) % p) * mult % p for i in range(curve.e)]
            d[tuple(e2)] = sum(di * p ** i for i, di in enumerate(digits))
        out.append(d)
    return out


class _Embedding:
    """Cache the root-based embedding F_q -> F_{q^m} for one target field."""

    def __init__(self, curve: PlaneCurve, K: SmallField):
        self.curve = curve
        self.K = K
        if curve.e == 1:
            self.root_powers = None
        else:
            base = SmallField(curve.p, curve.e)
            root = K.embed_root(base.modulus)
            self.root_powers = [int(K.pow(np.array([root]), i)[0])
                                for i in range(curve.e)]

    def one(self, c: int) -> int:
        p = self.curve.p
        if self.root_powers is None:
            return c % p
        acc = 0
        for i in range(self.curve.e):
            d = (c // p ** i) % p
            if d:
                term = int(self.K.mul(np.array([d]), np.array([self.root_powers[i]]))[0])
                acc = int(self.K.add(np.array([acc]), np.array([term]))[0])
        return acc


def _embed_coeffs(curve: PlaneCurve, K: SmallField, coeffs=None) -> dict:
    emb = _Embedding(curve, K)
    items = coeffs if coeffs is not None else dict(curve.coeffs)
    return {e: emb.one(c) for e, c in items.items()}


def _projective_points(K: SmallField) -> np.ndarray:
    """Normalized representatives: (x:y:1), (x:1:0), (1:0:0); shape (3, N)."""
    q = K.q
    xs, ys = np.meshgrid(np.arange(q), np.arange(q), indexing="ij")
    aff = np.stack([xs.ravel(), ys.ravel(), np.ones(q * q, dtype=np.int64)])
    line = np.stack([np.arange(q), np.ones(q, dtype=np.int64), np.zeros(q, dtype=np.int64)])
    pt = np.array([[1], [0], [0]])
    return np.concatenate([aff, line, pt], axis=1)


def _eval_curve(coeffs: dict, K: SmallField, pts: np.ndarray, degree: int) -> np.ndarray:
    total = np.zeros(pts.shape[1], dtype=np.int64)
    for e, c in (coeffs.items() if isinstance(coeffs, dict) else coeffs):
        if c == 0:
            continue
        term = np.full(pts.shape[1], c, dtype=np.int64)
        for axis in range(3):
            if e[axis]:
                term = K.mul(term, K.pow(pts[axis], e[axis]))
        total = K.add(total, term)
    return total


def count_points(curve: PlaneCurve, m: int = 1) -> int:
    """Exact projective point count over F_{q^m}."""
    qm = curve.q ** m
    if qm * qm + qm + 1 > POINT_ENUM_CAP:
        raise CapExceeded(f"{qm}^2 points exceed enumeration cap")
    K = SmallField(curve.p, curve.e * m)
    coeffs = _embed_coeffs(curve, K)
    pts = _projective_points(K)
    vals = _eval_curve(coeffs, K, pts, curve.degree)
    return int((vals == 0).sum())


def frobenius_trace(curve: PlaneCurve) -> int:
    """Trace a with #X(F_q) = q + 1 - a, re-verified over F_{q^2}."""
    if curve.degree != 3:
        raise ValueError("trace over the elliptic cover needs a cubic")
    if not is_smooth(curve):
        raise NotSmooth(curve.label())
    q = curve.q
    n1 = count_points(curve, 1)
    a = q + 1 - n1
    if a * a > 4 * q:
        raise RuntimeError(f"count {n1} violates the Hasse bound for q={q}")
    n2 = count_points(curve, 2)
    if n2 != q * q + 1 - (a * a - 2 * q):
        raise RuntimeError("trace equation failed over the quadratic extension")
    return a


def hasse_invariant(f: Polynomial | PlaneCurve, p: int | None = None) -> int:
    """Coefficient of (xyz)^(p-1) in f^(p-1) for a plane cubic over F_p."""
    if isinstance(f, PlaneCurve):
        f = f.polynomial()
    p = p or f.p
    fp = Polynomial(f.vars, f.terms, p)
    power = fp ** (p - 1)
    return power.coefficient((p - 1, p - 1, p - 1))


def p_rank_elliptic(curve: PlaneCurve) -> int:
    """0 (supersingular) or 1 (ordinary), by trace mod p with Hasse cross-check."""
    a = frobenius_trace(curve)
    rank = 0 if a % curve.p == 0 else 1
    if curve.e == 1:
        h = hasse_invariant(curve.polynomial())
        if (h != 0) != (rank == 1):
            raise RuntimeError(
                f"supersingularity methods disagree on {curve.label()}: "
                f"trace={a}, hasse={h}")
    return rank


def am_height_cy(f: Polynomial, p: int, h_max: int = 4):
    """Formal-group height oracle by the coefficient criterion.

    For a cubic the answer is exact: 1 when the Hasse invariant is nonzero,
    else 2 (elliptic heights never exceed 2).  For a quartic the levels use
    the coefficient of (xyzw)^(p^m - 1) in f^(p^m - 1); level 1 is the
    classical criterion, higher levels are exploratory output.
    """
    if h_max > 4:
        raise CapExceeded("h_max capped at 4")
    deg = f.total_degree()
    nv = len(f.vars)
    if not f.is_homogeneous(deg) or deg != nv:
        raise ValueError("need a degree-(N+1) hypersurface in N+1 variables")
    fp = Polynomial(f.vars, f.terms, p)
    if deg == 3:
        h1 = (fp ** (p - 1)).coefficient((p - 1,) * 3)
        return 1 if h1 != 0 else 2
    for m in range(1, h_max + 1):
        k = p ** m - 1
        if k * deg > 120:
            raise CapExceeded("quartic power too large for the coefficient oracle")
        coeff = (fp ** k).coefficient((k,) * nv)
        if coeff != 0:
            return m
    return f">{h_max}"


def abelian_height(g: int, p_rank: int):
    """Quasi-F-split height of a g-dimensional abelian variety by p-rank."""
    if not 0 <= p_rank <= g:
        raise InvalidRank(f"p-rank {p_rank} outside [0, {g}]")
    if p_rank == g:
        return 1
    if p_rank == g - 1:
        return 2
    return "infinity"


def product_height_report(factors: list[PlaneCurve], subject: str = "") -> HeightReport:
    """Height of a product of elliptic curves: sum the p-ranks, apply the formula.

    Consistency with the product theorems is checked on the way out: height
    2 requires exactly one supersingular factor, infinite height at least two.
    """
    ranks = [p_rank_elliptic(c) for c in factors]
    g = len(factors)
    f_total = sum(ranks)
    h = abelian_height(g, f_total)
    n_ss = ranks.count(0)
    if h == 1 and n_ss != 0:
        raise RuntimeError("height 1 with a supersingular factor")
    if h == 2 and n_ss != 1:
        raise RuntimeError("height 2 requires exactly one supersingular factor")
    if h == "infinity" and n_ss < 2:
        raise RuntimeError("infinite height requires two supersingular factors")
    name = subject or " x ".join(c.label() for c in factors)
    return HeightReport(
        subject=name, height=h, method="p-rank-formula", n_max=0,
        details={"g": g, "p_rank": f_total, "factor_p_ranks": ranks})


@dataclass(frozen=True)
class ClassificationRow:
    subject: str
    p: str
    ordinary: str           # "yes" | "no" | "n/a"
    hodge_witt: str
    qfs_status: str
    note: str = ""

    def to_jsonable(self):
        return {"subject": self.subject, "p": self.p, "ordinary": self.ordinary,
                "hodge_witt": self.hodge_witt, "qfs_status": self.qfs_status,
                "note": self.note}


_CLASSIFICATION: dict[tuple[str, str], ClassificationRow] = {}


def _row(subject, p, ordinary, hodge_witt, qfs, note=""):
    _CLASSIFICATION[(subject, p)] = ClassificationRow(subject, p, ordinary,
                                                      hodge_witt, qfs, note)


_row("enriques-classical", "2", "yes", "yes", "not quasi-F-split",
     "char-2 Enriques, classical type")
_row("enriques-singular", "2", "yes", "yes", "F-split",
     "char-2 Enriques, singular type; trivial canonical bundle")
_row("enriques-supersingular", "2", "no", "yes", "not quasi-F-split",
     "char-2 Enriques, supersingular type; not ordinary but Hodge-Witt; "
     "trivial canonical bundle")
_row("enriques", "odd", "yes", "yes",
     "quasi-F-split iff the K3 cover is not supersingular",
     "Enriques surfaces in odd characteristic are ordinary")
_row("k3", "any", "n/a", "iff finite formal-group height",
     "quasi-F-split iff Hodge-Witt iff finite formal-group height",
     "for K3 surfaces the three finiteness conditions coincide")
_row("abelian-variety", "any", "iff p-rank = g", "iff p-rank >= g-1",
     "height 1 if p-rank = g, 2 if p-rank = g-1, else infinite",
     "g-dimensional abelian varieties")
_row("rational-threefold-blowup", "any", "yes", "yes", "not quasi-F-split",
     "blowup of P^3 at all rational points, then all rational lines; "
     "ordinary but not liftable mod p^2")
_row("p4-blowup-supersingular-quartic", "any", "n/a", "no", "F-split",
     "blowup of P^4 along a supersingular quartic surface inside a hyperplane")


def classification_lookup(subject: str, p: int | str) -> ClassificationRow:
    """Catalogue rows for global subjects; data, not computation."""
    key = str(p)
    subject = subject.lower()
    if subject.startswith("enriques") and subject != "enriques":
        if key != "2":
            raise Uncatalogued(f"{subject} is a char-2 type")
        return _CLASSIFICATION[(subject, "2")]
    if subject == "enriques":
        if key == "2":
            raise Uncatalogued("char-2 Enriques needs a type: classical/singular/supersingular")
        return _CLASSIFICATION[(subject, "odd")]
    for probe in (key, "any"):
        if (subject, probe) in _CLASSIFICATION:
            return _CLASSIFICATION[(subject, probe)]
    raise Uncatalogued(subject)


def scan_smooth_cubics(p: int, count: int, seed: int = 0,
                       max_draws: int = 100000) -> list[PlaneCurve]:
    """Deterministic sample of distinct smooth plane cubics over F_p.

    Starts from the fermat cubic when it is smooth, then draws coefficient
    vectors from a seeded generator and keeps smooth curves.
    """
    monos = sorted(e for e in iproduct(range(4), repeat=3) if sum(e) == 3)
    rng = np.random.default_rng((seed, p))
    out: list[PlaneCurve] = []
    seen: set = set()

    def consider(curve: PlaneCurve) -> None:
        if curve.coeffs in seen:
            return
        seen.add(curve.coeffs)
        if is_smooth(curve):
            out.append(curve)

    if p % 3 != 0:
        consider(fermat_cubic(p))
    draws = 0
    while len(out) < count:
        draws += 1
        if draws > max_draws:
            raise RuntimeError(f"scan exhausted after {len(out)} smooth curves")
        vec = rng.integers(0, p, size=len(monos))
        terms = {m: int(c) for m, c in zip(monos, vec) if c}
        if not terms:
            continue
        f = Polynomial(VARS3, terms, p)
        if f.total_degree() != 3:
            continue
        consider(PlaneCurve.from_poly(f))
    return out[:count]


def find_ordinary_and_supersingular(p: int, seed: int = 0) -> tuple[PlaneCurve, PlaneCurve]:
    """One ordinary and one supersingular smooth cubic over F_p."""
    ordinary = None
    supersingular = None
    batch = 0
    while ordinary is None or supersingular is None:
        for curve in scan_smooth_cubics(p, 24, seed=seed + batch):
            r = p_rank_elliptic(curve)
            if r == 1 and ordinary is None:
                ordinary = curve
            if r == 0 and supersingular is None:
                supersingular = curve
            if ordinary is not None and supersingular is not None:
                break
        batch += 1
        if batch > 8:
            raise RuntimeError(f"no ordinary/supersingular pair found over F_{p}")
    return ordinary, supersingular
