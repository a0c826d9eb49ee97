"""Component tables for tensor fields and vector-valued forms.

A :class:`TensorField` of valence (r, s) stores components indexed by
``(i1..ir, j1..js)`` with 0-based indices.  Entries are any exact ring
element (``Poly``, ``TJet`` or ``Fraction``); zero entries are not stored.
``antisym`` records the size of the trailing block of lower indices in
which the table is skew (a vector-valued k-form has valence (1, k) and
``antisym == k``).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Callable, Iterator, Mapping


class AntisymmetryError(ValueError):
    """A table that should be skew in a block of indices is not."""


class TensorField:
    __slots__ = ("n", "upper", "lower", "comps", "zero", "antisym")

    def __init__(self, n: int, upper: int, lower: int, comps: Mapping, zero, antisym: int = 0):
        if antisym > lower:
            raise ValueError("antisymmetric block longer than the lower indices")
        self.n = n
        self.upper = upper
        self.lower = lower
        self.zero = zero
        self.antisym = antisym
        self.comps = {k: v for k, v in comps.items() if v}

    @classmethod
    def build(cls, n, upper, lower, fn: Callable, zero, antisym=0) -> "TensorField":
        comps = {}
        for idx in product(range(n), repeat=upper + lower):
            v = fn(idx)
            if v:
                comps[idx] = v
        return cls(n, upper, lower, comps, zero, antisym)

    @property
    def valence(self):
        return (self.upper, self.lower)

    def __getitem__(self, idx):
        return self.comps.get(tuple(idx), self.zero)

    def indices(self) -> Iterator[tuple]:
        return product(range(self.n), repeat=self.upper + self.lower)

    def _check_shape(self, other):
        if (self.n, self.upper, self.lower) != (other.n, other.upper, other.lower):
            raise ValueError(
                f"shape mismatch: {(self.n, self.upper, self.lower)} vs {(other.n, other.upper, other.lower)}"
            )

    def __add__(self, other: "TensorField") -> "TensorField":
        self._check_shape(other)
        c = dict(self.comps)
        for k, v in other.comps.items():
            c[k] = c[k] + v if k in c else v
        return TensorField(self.n, self.upper, self.lower, c, self.zero, min(self.antisym, other.antisym))

    def __neg__(self):
        return TensorField(self.n, self.upper, self.lower, {k: -v for k, v in self.comps.items()},
                           self.zero, self.antisym)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TensorField":
        return TensorField(self.n, self.upper, self.lower, {k: v * c for k, v in self.comps.items()},
                           self.zero, self.antisym)

    def map(self, fn: Callable, zero=None) -> "TensorField":
        z = self.zero if zero is None else zero
        return TensorField(self.n, self.upper, self.lower, {k: fn(v) for k, v in self.comps.items()},
                           z, self.antisym)

    def is_zero(self) -> bool:
        return not self.comps

    def __bool__(self):
        return bool(self.comps)

    def __eq__(self, other):
        if not isinstance(other, TensorField):
            return NotImplemented
        return (self.n, self.upper, self.lower) == (other.n, other.upper, other.lower) and \
            self.comps == other.comps

    def eval_at(self, point) -> "TensorField":
        return self.map(lambda v: v.eval(point), zero=Fraction(0))

    def nonzero_items(self):
        return sorted(self.comps.items())

    def with_antisym(self, k: int) -> "TensorField":
        return TensorField(self.n, self.upper, self.lower, self.comps, self.zero, k)

    def __repr__(self):
        return f"TensorField(n={self.n}, valence={self.valence}, nonzero={len(self.comps)})"


def constant_tensor(n, upper, lower, comps: Mapping, zero=Fraction(0), antisym=0) -> TensorField:
    return TensorField(n, upper, lower, {tuple(k): v for k, v in comps.items()}, zero, antisym)


def is_antisymmetric(T: TensorField, block: int) -> bool:
    """Exhaustive swap check on the trailing ``block`` lower indices."""
    if block <= 1:
        return True
    start = T.upper + T.lower - block
    for idx in T.indices():
        for a, b in combinations(range(start, start + block), 2):
            sw = list(idx)
            sw[a], sw[b] = sw[b], sw[a]
            if idx[a] == idx[b]:
                if T[idx]:
                    return False
            elif T[idx] != -T[tuple(sw)]:
                return False
    return True


def alternate_first(T: TensorField, check: bool = True) -> TensorField:
    """First-index alternation over the whole lower block.

    For lower indices (r, j1, ..., jk) the result is
    X_{r j1..jk} - sum_p X_{j1..r..jk} where the p-th swap exchanges the
    first lower index with the one in position p.  The input must be skew in
    its trailing k lower indices; the output is then skew in all k+1.
    """
    k1 = T.lower
    if k1 < 1:
        raise ValueError("need at least one lower index")
    if check and not is_antisymmetric(T, k1 - 1):
        raise AntisymmetryError("input is not skew in its trailing lower indices")
    u = T.upper
    # only stored keys and their first-index swaps can give nonzero output
    candidates = set()
    for idx in T.comps:
        candidates.add(idx)
        for p in range(u + 1, u + k1):
            sw = list(idx)
            sw[u], sw[p] = sw[p], sw[u]
            candidates.add(tuple(sw))
    out = {}
    for idx in sorted(candidates):
        acc = T[idx]
        for p in range(u + 1, u + k1):
            sw = list(idx)
            sw[u], sw[p] = sw[p], sw[u]
            v = T[tuple(sw)]
            if v:
                acc = acc - v
        if acc:
            out[idx] = acc
    return TensorField(T.n, T.upper, T.lower, out, T.zero, antisym=k1)


def sorted_index_sets(n: int, k: int):
    return list(combinations(range(n), k))


def form_from_sorted(n: int, upper: int, k: int, values: Mapping, zero) -> TensorField:
    """Expand components given on increasing lower multi-indices to a full skew table."""
    comps = {}
    for key, v in values.items():
        if not v:
            continue
        up, low = tuple(key[:upper]), tuple(key[upper:])
        for perm, sign in _signed_permutations(low):
            comps[up + perm] = v if sign > 0 else -v
    return TensorField(n, upper, k, comps, zero, antisym=k)


def _signed_permutations(seq):
    seq = tuple(seq)
    k = len(seq)
    for perm in permutations(range(k)):
        inv = sum(1 for a in range(k) for b in range(a + 1, k) if perm[a] > perm[b])
        yield tuple(seq[i] for i in perm), (-1 if inv % 2 else 1)


def permutation_sign(seq) -> int:
    """Sign of the permutation sorting ``seq``; 0 if an entry repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return -1 if inv % 2 else 1
