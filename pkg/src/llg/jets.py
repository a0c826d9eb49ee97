"""Truncated power series in the deformation parameter t.

``TJet`` coefficients can be any exact ring element (``Poly``, ``Fraction``);
the class exposes the same arithmetic surface as ``Poly`` (``+ - *``,
``diff``, ``eval``, truthiness) so the tensor code runs on jets unchanged.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .poly import Poly


def _zero_like(c):
    if isinstance(c, Poly):
        return Poly(c.n)
    if isinstance(c, TJet):
        return c * 0
    return Fraction(0)


class TJet:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        if not coeffs:
            raise ValueError("a jet needs at least the t^0 coefficient")
        self.coeffs = tuple(coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, c, order: int) -> "TJet":
        z = _zero_like(c)
        return cls((c,) + (z,) * order)

    def const_like(self, c) -> "TJet":
        base = self.coeffs[0]
        if isinstance(base, Poly):
            c0 = Poly.const(base.n, c)
        else:
            c0 = Fraction(c)
        return TJet.constant(c0, self.order)

    def __getitem__(self, m: int):
        return self.coeffs[m]

    def _lift(self, other):
        if isinstance(other, TJet):
            if other.order != self.order:
                raise ValueError(f"jet order mismatch: {self.order} vs {other.order}")
            return other
        return TJet.constant(other if not isinstance(other, int) else self.coeffs[0] * 0 + other,
                             self.order)

    def __add__(self, other):
        o = self._lift(other)
        return TJet([a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return TJet([-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._lift(other)
        return TJet([a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TJet([a * other for a in self.coeffs])
        o = self._lift(other)
        K = self.order
        out = []
        for m in range(K + 1):
            acc = None
            for p in range(m + 1):
                a, b = self.coeffs[p], o.coeffs[m - p]
                if not a or not b:
                    continue
                term = a * b
                acc = term if acc is None else acc + term
            out.append(acc if acc is not None else _zero_like(self.coeffs[0]))
        return TJet(out)

    __rmul__ = __mul__

    def __bool__(self):
        return any(bool(c) for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, TJet):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)) and not other:
            return not self
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def diff(self, j: int) -> "TJet":
        return TJet([c.diff(j) for c in self.coeffs])

    def eval(self, point) -> "TJet":
        return TJet([c.eval(point) if isinstance(c, Poly) else c for c in self.coeffs])

    def dt(self) -> "TJet":
        """d/dt; the top coefficient is unknown after differentiation so the
        result keeps order K with a zero in the last slot (valid mod t^K)."""
        z = _zero_like(self.coeffs[0])
        return TJet([c * m for m, c in enumerate(self.coeffs)][1:] + [z])

    def vanishing_order(self) -> int:
        """Largest m with self == 0 mod t^(m+1); -1 if the t^0 term is nonzero."""
        for m, c in enumerate(self.coeffs):
            if c:
                return m - 1
        return self.order

    def __repr__(self):
        return "TJet(" + ", ".join(str(c) for c in self.coeffs) + ")"


def tjet_arith(a: TJet, b: TJet, op: str) -> TJet:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


# -- matrix-valued jets ------------------------------------------------------
# A matrix jet is a list of K+1 square matrices (lists of rows).


def mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = None
            for k in range(m):
                a, b = A[i][k], B[k][j]
                if not a or not b:
                    continue
                acc = a * b if acc is None else acc + a * b
            row.append(acc if acc is not None else A[i][0] * 0)
        out.append(row)
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def is_identity(M) -> bool:
    return all((M[i][j] == (1 if i == j else 0)) for i in range(len(M)) for j in range(len(M)))


def mat_jet_mul(F: list, G: list) -> list:
    K = len(F) - 1
    out = []
    for m in range(K + 1):
        acc = None
        for p in range(m + 1):
            term = mat_mul(F[p], G[m - p])
            acc = term if acc is None else mat_add(acc, term)
        out.append(acc)
    return out


def tjet_invert(F: list) -> list:
    """Inverse of a matrix jet whose t^0 coefficient is the identity.

    Uses g_0 = I and g_m = -sum_{p=1..m} F_p g_{m-p}, exact to order K.
    """
    if not is_identity(F[0]):
        raise ValueError("matrix jet must start at the identity")
    G = [F[0]]
    for m in range(1, len(F)):
        acc = None
        for p in range(1, m + 1):
            term = mat_mul(F[p], G[m - p])
            acc = term if acc is None else mat_add(acc, term)
        G.append([[-v for v in row] for row in acc])
    return G


def matrix_of_jets(F: list) -> list:
    """Convert a list of coefficient matrices into a matrix of TJet entries."""
    n = len(F[0])
    return [[TJet([F[m][i][j] for m in range(len(F))]) for j in range(n)] for i in range(n)]
