"""Exact multivariate (Laurent) polynomials over the rationals.

A :class:`Poly` lives in a fixed chart of dimension ``n`` with coordinates
``x1..xn``.  Coefficients are :class:`fractions.Fraction`; exponents are
integers and may be negative, so frames whose determinant is a monomial
unit still have polynomial inverses.  Equal polynomials have equal term
dictionaries, so "is this identically zero" is a representation check.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

Exp = tuple  # exponent multi-index


class ParseError(ValueError):
    """Raised for malformed polynomial strings."""


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as a rational coefficient")


class Poly:
    __slots__ = ("n", "_t", "_h")

    def __init__(self, n: int, terms: Mapping[Exp, object] | None = None, *, _clean=False):
        if n < 1:
            raise ValueError("chart dimension must be positive")
        self.n = n
        self._h = None
        if not terms:
            self._t = {}
        elif _clean:
            self._t = terms  # trusted: exps are n-tuples, coeffs nonzero Fractions
        else:
            t = {}
            for e, c in terms.items():
                e = tuple(int(v) for v in e)
                if len(e) != n:
                    raise ValueError(f"exponent {e} does not match dimension {n}")
                c = _as_fraction(c)
                if c:
                    t[e] = t.get(e, 0) + c
                    if not t[e]:
                        del t[e]
            self._t = t

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls(n)

    @classmethod
    def const(cls, n: int, c) -> "Poly":
        c = _as_fraction(c)
        return cls(n, {(0,) * n: c}, _clean=True) if c else cls(n)

    @classmethod
    def var(cls, n: int, j: int) -> "Poly":
        """The coordinate function x_j (1-based)."""
        if not 1 <= j <= n:
            raise IndexError(f"coordinate x{j} out of range for n={n}")
        e = [0] * n
        e[j - 1] = 1
        return cls(n, {tuple(e): Fraction(1)}, _clean=True)

    @classmethod
    def monomial(cls, n: int, exp: Sequence[int], c=1) -> "Poly":
        return cls(n, {tuple(exp): c})

    @classmethod
    def parse(cls, s: str, n: int) -> "Poly":
        return parse_poly(s, n)

    # -- inspection -------------------------------------------------------

    def terms(self) -> list:
        """Terms in canonical (graded lexicographic, descending) order."""
        return sorted(self._t.items(), key=lambda it: (sum(it[0]), it[0]), reverse=True)

    def items(self):
        return self._t.items()

    def coeff(self, exp: Sequence[int]) -> Fraction:
        return self._t.get(tuple(exp), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._t.get((0,) * self.n, Fraction(0))

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and (0,) * self.n in self._t)

    def degree(self) -> int:
        """Total degree (max over terms); -1 for the zero polynomial."""
        return max((sum(e) for e in self._t), default=-1)

    def min_exponent(self) -> int:
        return min((min(e) for e in self._t), default=0)

    def is_laurent(self) -> bool:
        return self.min_exponent() < 0

    def is_unit(self) -> bool:
        """Units of the Laurent ring: nonzero constant times a monomial."""
        return len(self._t) == 1

    def unit_inverse(self) -> "Poly":
        if not self.is_unit():
            raise ZeroDivisionError("polynomial is not a unit")
        ((e, c),) = self._t.items()
        return Poly(self.n, {tuple(-v for v in e): 1 / c}, _clean=True)

    def __bool__(self):
        return bool(self._t)

    def __len__(self):
        return len(self._t)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self._t == other._t
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self._t
            return self._t == {(0,) * self.n: other}
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.n, frozenset(self._t.items())))
        return self._h

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.n != self.n:
                raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.n, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._t:
            return self
        if not self._t:
            return other
        t = dict(self._t)
        for e, c in other._t.items():
            v = t.get(e)
            if v is None:
                t[e] = c
            else:
                v += c
                if v:
                    t[e] = v
                else:
                    del t[e]
        return Poly(self.n, t, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.n, {e: -c for e, c in self._t.items()}, _clean=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly(self.n)
            return Poly(self.n, {e: c * other for e, c in self._t.items()}, _clean=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._t or not other._t:
            return Poly(self.n)
        t: dict = {}
        for e1, c1 in self._t.items():
            for e2, c2 in other._t.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = t.get(e)
                t[e] = c1 * c2 if v is None else v + c1 * c2
        return Poly(self.n, {e: c for e, c in t.items() if c}, _clean=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.unit_inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.unit_inverse() ** (-k)
        out = Poly.const(self.n, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- calculus ---------------------------------------------------------

    def diff(self, j: int) -> "Poly":
        """Partial derivative with respect to x_j (1-based)."""
        if not 1 <= j <= self.n:
            raise IndexError(f"coordinate x{j} out of range for n={self.n}")
        k = j - 1
        t = {}
        for e, c in self._t.items():
            p = e[k]
            if p:
                e2 = e[:k] + (p - 1,) + e[k + 1:]
                t[e2] = c * p
        return Poly(self.n, t, _clean=True)

    def eval(self, point: Sequence) -> Fraction:
        if len(point) != self.n:
            raise ValueError(f"point has {len(point)} coordinates, chart has {self.n}")
        pt = [_as_fraction(v) for v in point]
        total = Fraction(0)
        for e, c in self._t.items():
            v = c
            for x, p in zip(pt, e):
                if p:
                    if p < 0 and not x:
                        raise ZeroDivisionError("Laurent term evaluated on a coordinate hyperplane")
                    v *= x ** p
            total += v
        return total

    def taylor(self, point: Sequence, order: int) -> "Poly":
        """Taylor polynomial at ``point`` in shifted variables u = x - point.

        Total degree is truncated at ``order``.  Negative exponents are
        expanded with generalized binomial coefficients, so the point must
        lie off the coordinate hyperplanes they involve.
        """
        pt = [_as_fraction(v) for v in point]
        if len(pt) != self.n:
            raise ValueError("point dimension mismatch")
        out = Poly(self.n)
        for e, c in self._t.items():
            factors = []
            for k, (x, p) in enumerate(zip(pt, e)):
                factors.append(_shift_power(self.n, k, x, p, order))
            term = Poly.const(self.n, c)
            for f in factors:
                term = (term * f).truncate(order)
            out = out + term
        return out

    def truncate(self, order: int) -> "Poly":
        return Poly(self.n, {e: c for e, c in self._t.items() if sum(e) <= order}, _clean=True)

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly(self.n, {e: c for e, c in self._t.items() if sum(e) == d}, _clean=True)

    def shift(self, point: Sequence) -> "Poly":
        """Exact substitution x -> x - point (inverse of re-centering at ``point``).

        Only for genuine polynomials; Laurent terms have no finite shift.
        """
        if self.is_laurent():
            raise ValueError("cannot shift a Laurent polynomial exactly")
        pt = [-_as_fraction(v) for v in point]
        return self.taylor(pt, max(self.degree(), 0))

    # -- display ----------------------------------------------------------

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({self.n}, {format_poly(self)!r})"


def _shift_power(n: int, k: int, x: Fraction, p: int, order: int) -> Poly:
    """(x + u_k)^p as a polynomial in u, truncated at ``order``."""
    if p == 0:
        return Poly.const(n, 1)
    if p > 0:
        top = p
    else:
        if not x:
            raise ZeroDivisionError("Laurent expansion at a coordinate hyperplane")
        top = order
    t = {}
    for m in range(0, min(top, order) + 1):
        if p > 0:
            b = comb(p, m)
        else:
            b = _gen_binom(p, m)
        c = b * x ** (p - m) if (p - m) else Fraction(b)
        if c:
            e = [0] * n
            e[k] = m
            t[tuple(e)] = Fraction(c)
    return Poly(n, t, _clean=True)


def _gen_binom(p: int, m: int) -> Fraction:
    num = Fraction(1)
    for i in range(m):
        num *= p - i
    for i in range(1, m + 1):
        num /= i
    return num


# -- grammar ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)(?:/(\d+))?|x(\d+)|(\^)\s*(-?\d+)|([+\-*]))")


def parse_poly(s: str, n: int) -> Poly:
    """Parse the text grammar ``term (('+'|'-') term)*`` with
    ``term := coeff ('*' var ('^' int)?)*``, ``coeff := int | int '/' uint``.

    A leading coefficient of 1 may be omitted (``-x3``), and exponents may be
    negative for Laurent terms (``x2^-1``).
    """
    if not isinstance(s, str):
        raise ParseError(f"expected a polynomial string, got {type(s).__name__}")
    pos = 0
    s = s.strip()
    if not s:
        raise ParseError("empty polynomial")
    toks = []
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {s!r}")
        pos = m.end()
        if m.group(1) is not None:
            num = int(m.group(1))
            den = int(m.group(2)) if m.group(2) is not None else 1
            if den == 0:
                raise ParseError(f"zero denominator in {s!r}")
            toks.append(("num", Fraction(num, den)))
        elif m.group(3) is not None:
            j = int(m.group(3))
            if not 1 <= j <= n:
                raise ParseError(f"variable x{j} out of range for n={n}")
            toks.append(("var", j))
        elif m.group(4) is not None:
            toks.append(("pow", int(m.group(5))))
        else:
            toks.append(("op", m.group(6)))

    out = Poly(n)
    i = 0
    sign = 1
    expect_term = True
    while i < len(toks):
        kind, val = toks[i]
        if expect_term:
            if kind == "op" and val in "+-":
                sign = -sign if val == "-" else sign
                i += 1
                continue
            coeff = Fraction(sign)
            exp = [0] * n
            seen_factor = False
            need_factor = True
            while i < len(toks):
                kind, val = toks[i]
                if need_factor:
                    if kind == "num":
                        coeff *= val
                    elif kind == "var":
                        e = 1
                        if i + 1 < len(toks) and toks[i + 1][0] == "pow":
                            e = toks[i + 1][1]
                            i += 1
                        exp[val - 1] += e
                    else:
                        raise ParseError(f"expected a factor in {s!r}")
                    seen_factor = True
                    need_factor = False
                    i += 1
                elif kind == "op" and val == "*":
                    need_factor = True
                    i += 1
                else:
                    break
            if need_factor or not seen_factor:
                raise ParseError(f"dangling operator in {s!r}")
            out = out + Poly(n, {tuple(exp): coeff})
            sign = 1
            expect_term = False
        else:
            if kind == "op" and val in "+-":
                sign = -1 if val == "-" else 1
                expect_term = True
                i += 1
            else:
                raise ParseError(f"expected '+' or '-' in {s!r}")
    if expect_term:
        raise ParseError(f"trailing operator in {s!r}")
    return out


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    if not p:
        return "0"
    parts = []
    for k, (e, c) in enumerate(p.terms()):
        neg = c < 0
        a = -c if neg else c
        factors = []
        for j, v in enumerate(e, start=1):
            if v == 1:
                factors.append(f"x{j}")
            elif v:
                factors.append(f"x{j}^{v}")
        if factors and a == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_fmt_coeff(a)] + factors)
        if k == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def const_like(p, c):
    """A constant of the same ring as ``p`` (Poly, TJet or plain rational)."""
    if isinstance(p, Poly):
        return Poly.const(p.n, c)
    if hasattr(p, "const_like"):
        return p.const_like(c)
    return Fraction(c)


def polys(strings: Iterable[str], n: int) -> list:
    return [parse_poly(s, n) for s in strings]
