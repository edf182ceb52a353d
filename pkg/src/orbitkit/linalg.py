"""Exact linear algebra over F_p on tuples of ints.

Subspaces are stored in reduced row echelon form, so two equal subspaces
have identical bases and the :class:`Subspace` objects compare (and hash)
equal.  Coordinates of a vector with respect to such a basis are simply its
entries at the pivot columns.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

Vector = tuple


def rref(rows: Iterable[Sequence[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form of ``rows``; returns (nonzero rows, pivots)."""
    mat = [[x % p for x in r] for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][c]:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = pow(mat[r][c], -1, p)
        row = [x * inv % p for x in mat[r]]
        mat[r] = row
        for i in range(len(mat)):
            if i != r:
                f = mat[i][c]
                if f:
                    mat[i] = [(x - f * y) % p for x, y in zip(mat[i], row)]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows: Iterable[Sequence[int]], p: int) -> int:
    return len(rref(rows, p)[1])


def nullspace(rows: Sequence[Sequence[int]], ncols: int, p: int) -> Subspace:
    """The subspace ``{x in F_p^ncols : row . x = 0 for every row}``."""
    red, pivots = rref(rows, p)
    pivset = set(pivots)
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [0] * ncols
        v[f] = 1
        for row, c in zip(red, pivots):
            v[c] = (-row[f]) % p
        out.append(v)
    return Subspace.span(out, p, ncols)


def dot(u: Sequence[int], v: Sequence[int], p: int) -> int:
    return sum(a * b for a, b in zip(u, v)) % p


class Subspace:
    """A subspace of F_p^n with canonical (RREF) basis."""

    __slots__ = ("p", "n", "basis", "pivots", "dim", "_hash")

    def __init__(self, p: int, n: int, basis: tuple, pivots: tuple):
        self.p = p
        self.n = n
        self.basis = basis
        self.pivots = pivots
        self.dim = len(basis)
        self._hash = hash((p, n, basis))

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], p: int, n: int) -> Subspace:
        red, pivots = rref(vectors, p)
        for row in red:
            if len(row) != n:
                raise ValueError(f"vector of length {len(row)} in F_{p}^{n}")
        return cls(p, n, tuple(tuple(r) for r in red), tuple(pivots))

    @classmethod
    def zero(cls, p: int, n: int) -> Subspace:
        return cls(p, n, (), ())

    @classmethod
    def full(cls, p: int, n: int) -> Subspace:
        return cls.span([[int(i == j) for j in range(n)] for i in range(n)], p, n)

    @property
    def size(self) -> int:
        return self.p**self.dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.p == other.p and self.n == other.n and self.basis == other.basis

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Subspace(p={self.p}, n={self.n}, basis={list(self.basis)})"

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.basis)

    def reduce(self, v: Sequence[int]) -> Vector:
        """Remainder of ``v`` after clearing the pivot columns; zero iff ``v`` is inside."""
        p = self.p
        w = [x % p for x in v]
        for row, c in zip(self.basis, self.pivots):
            f = w[c]
            if f:
                w = [(x - f * y) % p for x, y in zip(w, row)]
        return tuple(w)

    def __contains__(self, v) -> bool:
        return not any(self.reduce(v))

    def coords(self, v: Sequence[int]) -> Vector:
        c = tuple(v[i] % self.p for i in self.pivots)
        if any(self.reduce(v)):
            raise ValueError(f"{tuple(v)} is not in the subspace")
        return c

    def combine(self, coords: Sequence[int]) -> Vector:
        p = self.p
        out = [0] * self.n
        for c, row in zip(coords, self.basis):
            if c:
                out = [(x + c * y) % p for x, y in zip(out, row)]
        return tuple(out)

    def extend(self, vectors: Iterable[Sequence[int]]) -> Subspace:
        return Subspace.span(list(self.basis) + [tuple(v) for v in vectors], self.p, self.n)

    def __add__(self, other: Subspace) -> Subspace:
        return self.extend(other.basis)

    def __le__(self, other: Subspace) -> bool:
        return all(v in other for v in self.basis)

    def intersect(self, other: Subspace) -> Subspace:
        # x = sum a_i s_i with x in other  <=>  sum a_i reduce_other(s_i) = 0
        p = self.p
        cols = [other.reduce(s) for s in self.basis]
        rows = [[cols[i][k] for i in range(self.dim)] for k in range(self.n)]
        ker = nullspace(rows, self.dim, p)
        return Subspace.span([self.combine(a) for a in ker.basis], p, self.n)

    def complement_indices(self) -> tuple[int, ...]:
        piv = set(self.pivots)
        return tuple(i for i in range(self.n) if i not in piv)

    def annihilator(self) -> Subspace:
        """``{f : f . v = 0 for v in self}`` in dual coordinates."""
        return nullspace(self.basis, self.n, self.p)

    def elements(self) -> Iterator[Vector]:
        for c in product(range(self.p), repeat=self.dim):
            yield self.combine(c)


def enumerate_subspaces(p: int, n: int, k: int) -> Iterator[Subspace]:
    """All ``k``-dimensional subspaces of F_p^n, each exactly once (by RREF shape)."""
    for pivots in combinations(range(n), k):
        free = [(r, c) for r in range(k) for c in range(pivots[r] + 1, n) if c not in pivots]
        for vals in product(range(p), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for r, c in enumerate(pivots):
                rows[r][c] = 1
            for (r, c), x in zip(free, vals):
                rows[r][c] = x
            yield Subspace(p, n, tuple(tuple(r) for r in rows), tuple(pivots))
