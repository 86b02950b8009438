"""Sparse multivariate polynomials over Z or F_p.

Terms map exponent tuples to nonzero integer coefficients.  A polynomial
with ``p is None`` lives over the integers (used for Witt structure
polynomials, where divisions by powers of p must be exact); otherwise all
coefficients are kept reduced in [0, p).
"""

from __future__ import annotations

import re
from typing import Callable, Iterable

from .errors import ParseError

Expvec = tuple[int, ...]


def grevlex_key(e: Expvec):
    return (sum(e), tuple(-x for x in reversed(e)))


def lex_key(e: Expvec):
    return e


ORDERS: dict[str, Callable[[Expvec], object]] = {
    "grevlex": grevlex_key,
    "lex": lex_key,
}


class Polynomial:
    __slots__ = ("vars", "terms", "p")

    def __init__(self, variables: Iterable[str], terms: dict[Expvec, int] | None = None,
                 p: int | None = None, _clean: bool = True):
        self.vars = tuple(variables)
        self.p = p
        if terms is None:
            self.terms = {}
        elif _clean:
            out = {}
            for e, c in terms.items():
                if p is not None:
                    c %= p
                if c:
                    out[tuple(e)] = c
            self.terms = out
        else:
            self.terms = terms

    # construction helpers

    @classmethod
    def zero(cls, variables, p=None):
        return cls(variables, {}, p, _clean=False)

    @classmethod
    def constant(cls, variables, c, p=None):
        variables = tuple(variables)
        e = (0,) * len(variables)
        return cls(variables, {e: c}, p)

    @classmethod
    def variable(cls, variables, name, p=None):
        variables = tuple(variables)
        i = variables.index(name)
        e = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls(variables, {e: 1}, p)

    def _compat(self, other: "Polynomial"):
        if self.vars != other.vars or self.p != other.p:
            raise ValueError("polynomials from different rings")

    # arithmetic

    def __add__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(self.vars, other, self.p)
        self._compat(other)
        out = dict(self.terms)
        p = self.p
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if p is not None:
                v %= p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial(self.vars, out, p, _clean=False)

    def __neg__(self):
        p = self.p
        if p is not None:
            return Polynomial(self.vars, {e: (-c) % p for e, c in self.terms.items()},
                              p, _clean=False)
        return Polynomial(self.vars, {e: -c for e, c in self.terms.items()},
                          p, _clean=False)

    def __sub__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(self.vars, other, self.p)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._compat(other)
        out: dict[Expvec, int] = {}
        p = self.p
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                v = out.get(e, 0) + ca * cb
                if p is not None:
                    v %= p
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Polynomial(self.vars, out, p, _clean=False)

    __rmul__ = __mul__

    def scale(self, c: int):
        p = self.p
        if p is not None:
            c %= p
        if c == 0:
            return Polynomial.zero(self.vars, p)
        out = {}
        for e, v in self.terms.items():
            w = v * c
            if p is not None:
                w %= p
                if not w:
                    continue
            out[e] = w
        return Polynomial(self.vars, out, p, _clean=False)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.vars, 1, self.p)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    def exact_div_int(self, k: int):
        """Divide every coefficient by k; raises if any division is inexact."""
        out = {}
        for e, c in self.terms.items():
            q, r = divmod(c, k)
            if r:
                raise ArithmeticError(f"inexact division of {c} by {k}")
            out[e] = q
        return Polynomial(self.vars, out, self.p, _clean=False)

    def reduce_mod(self, p: int):
        return Polynomial(self.vars, self.terms, p)

    # queries

    def __eq__(self, other):
        return (isinstance(other, Polynomial) and self.vars == other.vars
                and self.p == other.p and self.terms == other.terms)

    def __hash__(self):
        return hash((self.vars, self.p, tuple(sorted(self.terms.items()))))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        if d is None:
            return len(degs) == 1
        return degs == {d}

    def coefficient(self, e: Expvec) -> int:
        return self.terms.get(tuple(e), 0)

    def leading(self, order: str = "grevlex") -> tuple[Expvec, int]:
        key = ORDERS[order]
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def monic(self, order: str = "grevlex"):
        if not self.terms or self.p is None:
            return self
        _, c = self.leading(order)
        return self.scale(pow(c, self.p - 2, self.p))

    def partial(self, name: str):
        i = self.vars.index(name)
        out = {}
        p = self.p
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            v = c * e[i]
            if p is not None:
                v %= p
                if not v:
                    continue
            e2 = list(e)
            e2[i] -= 1
            e2 = tuple(e2)
            out[e2] = out.get(e2, 0) + v
        return Polynomial(self.vars, out, p)

    def substitute_linear(self, mat) -> "Polynomial":
        """Apply x_i -> sum_j mat[i][j] x_j (for coordinate-change tests)."""
        n = len(self.vars)
        images = []
        for i in range(n):
            img_terms = {}
            for j in range(n):
                e = tuple(1 if k == j else 0 for k in range(n))
                img_terms[e] = int(mat[i][j])
            images.append(Polynomial(self.vars, img_terms, self.p))
        out = Polynomial.zero(self.vars, self.p)
        for e, c in self.terms.items():
            term = Polynomial.constant(self.vars, c, self.p)
            for i, ei in enumerate(e):
                if ei:
                    term = term * (images[i] ** ei)
            out = out + term
        return out

    def evaluate(self, values: dict[str, int]) -> int:
        """Evaluate at integer points (mod p when applicable)."""
        total = 0
        for e, c in self.terms.items():
            v = c
            for name, ei in zip(self.vars, e):
                if ei:
                    base = values[name]
                    v *= base ** ei
            total += v
        if self.p is not None:
            total %= self.p
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms, key=grevlex_key, reverse=True):
            c = self.terms[e]
            factors = []
            for name, ei in zip(self.vars, e):
                if ei == 1:
                    factors.append(name)
                elif ei > 1:
                    factors.append(f"{name}^{ei}")
            body = "*".join(factors)
            if not body:
                bits.append(str(c))
            elif c == 1:
                bits.append(body)
            else:
                bits.append(f"{c}*{body}")
        return " + ".join(bits)


_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*|\d+|\^|\*\*|[*+()-])")


def parse_poly(text: str, variables: Iterable[str], p: int | None = None) -> Polynomial:
    """Parse '+'/'-' separated products like ``x^2*y - 3*z + 1``.

    Supports parentheses-free sums of monomial terms, which is all the
    corpus format needs.
    """
    variables = tuple(variables)
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"bad polynomial syntax at {text[pos:pos+10]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append("$")

    result = Polynomial.zero(variables, p)
    i = 0
    sign = 1
    if tokens[i] in "+-":
        sign = -1 if tokens[i] == "-" else 1
        i += 1
    while tokens[i] != "$":
        coeff = sign
        exps = [0] * len(variables)
        expect_factor = True
        while True:
            tok = tokens[i]
            if tok.isdigit():
                val = int(tok)
                i += 1
            elif re.match(r"[A-Za-z_]", tok or " "):
                if tok not in variables:
                    raise ParseError(f"unknown variable {tok!r}")
                val = tok
                i += 1
            else:
                raise ParseError(f"expected a factor, got {tok!r}")
            power = 1
            if tokens[i] in ("^", "**"):
                if not tokens[i + 1].isdigit():
                    raise ParseError("exponent must be an integer")
                power = int(tokens[i + 1])
                i += 2
            if isinstance(val, int):
                coeff *= val ** power
            else:
                exps[variables.index(val)] += power
            if tokens[i] == "*":
                i += 1
                continue
            break
        result = result + Polynomial(variables, {tuple(exps): coeff}, p)
        if tokens[i] == "$":
            break
        if tokens[i] not in "+-":
            raise ParseError(f"expected + or -, got {tokens[i]!r}")
        sign = -1 if tokens[i] == "-" else 1
        i += 1
    return result
