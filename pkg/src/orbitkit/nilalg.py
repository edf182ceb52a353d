"""Nilpotent matrix Lie algebras inside ut(N, F_p) and their groups.

Matrix positions ``(i, j)`` with ``i < j`` are flattened superdiagonal by
superdiagonal: first ``(0,1), (1,2), ...``, then ``(0,2), (1,3), ...`` and so
on up to ``(0, N-1)``.  A :class:`LieAlgebra` keeps its basis in reduced row
echelon form with respect to this order, so for ut(3) the basis reads
``E12, E23, E13`` and coordinates of an element are read off at the pivots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

from .field import check_prime
from .linalg import Subspace, nullspace

Mat = tuple  # tuple of row tuples


@lru_cache(maxsize=None)
def positions(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, i + k) for k in range(1, n) for i in range(n - k))


def _zero(n: int) -> Mat:
    return tuple((0,) * n for _ in range(n))


def _eye(n: int) -> Mat:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _mm(a: Mat, b: Mat, p: int) -> Mat:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) % p for col in cols) for row in a)


def _add(a: Mat, b: Mat, p: int, s: int = 1) -> Mat:
    return tuple(tuple((x + s * y) % p for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _scale(a: Mat, c: int, p: int) -> Mat:
    return tuple(tuple(x * c % p for x in r) for r in a)


def _is_zero(a: Mat) -> bool:
    return not any(any(r) for r in a)


def _normalize(entries, n: int, p: int) -> Mat:
    try:
        rows = tuple(tuple(int(x) % p for x in row) for row in entries)
    except TypeError as exc:
        raise ValueError(f"malformed matrix: {entries!r}") from exc
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"expected a {n}x{n} matrix")
    return rows


@dataclass(frozen=True)
class NilMatrix:
    """A strictly upper triangular ``n x n`` matrix over F_p."""

    n: int
    p: int
    entries: Mat

    def __post_init__(self):
        rows = _normalize(self.entries, self.n, self.p)
        if any(rows[i][j] for i in range(self.n) for j in range(i + 1)):
            raise ValueError("matrix is not strictly upper triangular")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def zero(cls, n: int, p: int) -> NilMatrix:
        return cls(n, p, _zero(n))

    @classmethod
    def unit(cls, i: int, j: int, n: int, p: int) -> NilMatrix:
        """``E_ij`` with 1-based indices, so ``unit(1, 2, ...)`` is E12."""
        rows = [[0] * n for _ in range(n)]
        rows[i - 1][j - 1] = 1
        return cls(n, p, rows)

    @classmethod
    def from_vector(cls, v: Sequence[int], n: int, p: int) -> NilMatrix:
        rows = [[0] * n for _ in range(n)]
        for (i, j), x in zip(positions(n), v):
            rows[i][j] = x
        return cls(n, p, rows)

    def vector(self) -> tuple[int, ...]:
        return tuple(self.entries[i][j] for i, j in positions(self.n))

    def _same(self, other: NilMatrix):
        if not isinstance(other, NilMatrix) or other.n != self.n or other.p != self.p:
            raise ValueError("matrix size or modulus mismatch")

    def __add__(self, other: NilMatrix) -> NilMatrix:
        self._same(other)
        return NilMatrix(self.n, self.p, _add(self.entries, other.entries, self.p))

    def __sub__(self, other: NilMatrix) -> NilMatrix:
        self._same(other)
        return NilMatrix(self.n, self.p, _add(self.entries, other.entries, self.p, -1))

    def __neg__(self) -> NilMatrix:
        return NilMatrix(self.n, self.p, _scale(self.entries, -1, self.p))

    def __mul__(self, c: int) -> NilMatrix:
        return NilMatrix(self.n, self.p, _scale(self.entries, int(c), self.p))

    __rmul__ = __mul__

    def __matmul__(self, other: NilMatrix) -> NilMatrix:
        self._same(other)
        return NilMatrix(self.n, self.p, _mm(self.entries, other.entries, self.p))

    def is_zero(self) -> bool:
        return _is_zero(self.entries)

    def __repr__(self):
        return f"NilMatrix({[list(r) for r in self.entries]}, p={self.p})"


@dataclass(frozen=True)
class GroupElement:
    """A unitriangular ``n x n`` matrix over F_p."""

    n: int
    p: int
    entries: Mat

    def __post_init__(self):
        rows = _normalize(self.entries, self.n, self.p)
        for i in range(self.n):
            if rows[i][i] != 1 or any(rows[i][j] for j in range(i)):
                raise ValueError("matrix is not unitriangular")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def identity(cls, n: int, p: int) -> GroupElement:
        return cls(n, p, _eye(n))

    def __matmul__(self, other: GroupElement) -> GroupElement:
        if not isinstance(other, GroupElement) or other.n != self.n or other.p != self.p:
            raise ValueError("matrix size or modulus mismatch")
        return GroupElement(self.n, self.p, _mm(self.entries, other.entries, self.p))

    def inverse(self) -> GroupElement:
        # g = I - y with y nilpotent, so g^-1 = I + y + y^2 + ...
        n, p = self.n, self.p
        y = _add(_eye(n), self.entries, p, -1)
        out, power = _eye(n), _eye(n)
        while True:
            power = _mm(power, y, p)
            if _is_zero(power):
                break
            out = _add(out, power, p)
        return GroupElement(n, p, out)

    def __repr__(self):
        return f"GroupElement({[list(r) for r in self.entries]}, p={self.p})"


def _inv_factorial(k: int, p: int) -> int:
    if k >= p:
        raise ValueError(f"{k}! is not invertible modulo {p}; need p > {k}")
    return pow(math.factorial(k), -1, p)


def bracket(x: NilMatrix, y: NilMatrix) -> NilMatrix:
    x._same(y)
    p = x.p
    return NilMatrix(x.n, p, _add(_mm(x.entries, y.entries, p), _mm(y.entries, x.entries, p), p, -1))


def _exp_raw(x: Mat, p: int) -> Mat:
    n = len(x)
    out, power = _eye(n), _eye(n)
    for k in range(1, n):
        power = _mm(power, x, p)
        if _is_zero(power):
            break
        out = _add(out, _scale(power, _inv_factorial(k, p), p), p)
    return out


def _log_raw(g: Mat, p: int) -> Mat:
    n = len(g)
    y = _add(g, _eye(n), p, -1)
    out, power = _zero(n), _eye(n)
    for k in range(1, n):
        power = _mm(power, y, p)
        if _is_zero(power):
            break
        if k >= p:
            raise ValueError(f"{k} is not invertible modulo {p}")
        c = pow(k, -1, p) * (1 if k % 2 else -1)
        out = _add(out, _scale(power, c, p), p)
    return out


def exp(x: NilMatrix) -> GroupElement:
    """Truncated exponential series ``sum_k x^k / k!``."""
    return GroupElement(x.n, x.p, _exp_raw(x.entries, x.p))


def log(g: GroupElement) -> NilMatrix:
    """Truncated logarithm ``sum_k (-1)^(k+1) (g - 1)^k / k``."""
    return NilMatrix(g.n, g.p, _log_raw(g.entries, g.p))


def adjoint(g: GroupElement, x: NilMatrix) -> NilMatrix:
    """``g x g^-1``."""
    if g.n != x.n or g.p != x.p:
        raise ValueError("matrix size or modulus mismatch")
    p = g.p
    return NilMatrix(x.n, p, _mm(_mm(g.entries, x.entries, p), g.inverse().entries, p))


class LieAlgebra:
    """A bracket-closed subspace of ut(n, F_p) with canonical basis.

    ``space`` holds the basis as flattened position vectors (see
    :func:`positions`).  ``nil_bound`` is an upper bound for the nilpotency
    index of every element, and the exponential needs ``p >= nil_bound``.
    Instances are immutable; equality is equality of the underlying subspace.
    """

    def __init__(self, p: int, n: int, space: Subspace, nil_bound: int | None = None):
        self.p = p
        self.n = n
        self.space = space
        self.nil_bound = n if nil_bound is None else nil_bound
        self.dim = space.dim
        self.order = p**self.dim  # |g| = |G| = |g*|
        self._hash = hash((p, n, space))
        if p < self.nil_bound:
            raise ValueError(f"p = {p} is too small for exp/log; need p >= {self.nil_bound}")

    def __eq__(self, other):
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self.p == other.p and self.n == other.n and self.space == other.space

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"LieAlgebra(p={self.p}, N={self.n}, dim={self.dim})"

    @cached_property
    def basis(self) -> tuple[NilMatrix, ...]:
        return tuple(NilMatrix.from_vector(v, self.n, self.p) for v in self.space.basis)

    @cached_property
    def structure(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """``structure[i][j]`` = coordinates of ``[b_i, b_j]``."""
        b = self.basis
        return tuple(tuple(self.coords(bracket(b[i], b[j])) for j in range(self.dim)) for i in range(self.dim))

    def coords(self, x: NilMatrix) -> tuple[int, ...]:
        if x.n != self.n or x.p != self.p:
            raise ValueError("matrix size or modulus mismatch")
        try:
            return self.space.coords(x.vector())
        except ValueError:
            raise ValueError(f"{x!r} is not in the algebra") from None

    def __contains__(self, x: NilMatrix) -> bool:
        return x.n == self.n and x.p == self.p and x.vector() in self.space

    def element(self, coords: Sequence[int]) -> NilMatrix:
        return NilMatrix.from_vector(self.space.combine(coords), self.n, self.p)

    def bracket_coords(self, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
        p, d, c = self.p, self.dim, self.structure
        out = [0] * d
        for i, ui in enumerate(u):
            if not ui:
                continue
            ci = c[i]
            for j, vj in enumerate(v):
                if vj:
                    f = ui * vj
                    for k, x in enumerate(ci[j]):
                        if x:
                            out[k] += f * x
        return tuple(x % p for x in out)

    def code(self, coords: Sequence[int]) -> int:
        """Pack coordinates base p, most significant first (lexicographic order)."""
        out = 0
        for c in coords:
            out = out * self.p + (c % self.p)
        return out

    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.dim):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(reversed(out))

    def iter_coords(self) -> Iterator[tuple[int, ...]]:
        """All elements in lexicographic coordinate order (code order)."""
        return product(range(self.p), repeat=self.dim)

    def group_element(self, coords: Sequence[int]) -> GroupElement:
        return exp(self.element(coords))

    def group_code(self, g: GroupElement) -> int:
        return self.code(self.coords(log(g)))

    def subspace(self, vectors: Iterable[Sequence[int]]) -> Subspace:
        """Span of coordinate vectors, as a subspace of F_p^dim."""
        return Subspace.span(list(vectors), self.p, self.dim)

    def is_subalgebra(self, s: Subspace) -> bool:
        return _closed(self, s)

    def is_ideal(self, s: Subspace, within: Subspace | None = None) -> bool:
        """``[within, s] <= s`` (``within`` defaults to the whole algebra)."""
        return _normalizes(self, within or self.full, s)

    @cached_property
    def full(self) -> Subspace:
        return Subspace.full(self.p, self.dim)

    def restrict(self, s: Subspace) -> LieAlgebra:
        """The subalgebra with coordinate span ``s``, as a LieAlgebra of its own."""
        if not self.is_subalgebra(s):
            raise ValueError("subspace is not closed under the bracket")
        vecs = [self.space.combine(v) for v in s.basis]
        return LieAlgebra(self.p, self.n, Subspace.span(vecs, self.p, self.space.n), self.nil_bound)

    def embed(self, sub: LieAlgebra) -> SubalgebraEmbedding:
        return SubalgebraEmbedding.of(self, sub)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "N": self.n,
            "dim": self.dim,
            "basis": [[list(r) for r in b.entries] for b in self.basis],
            "structure": [[list(c) for c in row] for row in self.structure],
        }


@lru_cache(maxsize=None)
def _closed(a: LieAlgebra, s: Subspace) -> bool:
    b = s.basis
    return all(a.bracket_coords(b[i], b[j]) in s for i in range(len(b)) for j in range(i + 1, len(b)))


@lru_cache(maxsize=None)
def _normalizes(a: LieAlgebra, outer: Subspace, s: Subspace) -> bool:
    return all(a.bracket_coords(x, y) in s for x in outer.basis for y in s.basis)


@dataclass(frozen=True)
class SubalgebraEmbedding:
    """``sub`` sitting inside ``ambient``; ``inclusion[k]`` = ambient coords of sub basis ``k``."""

    ambient: LieAlgebra
    sub: LieAlgebra
    inclusion: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, ambient: LieAlgebra, sub: LieAlgebra) -> SubalgebraEmbedding:
        if sub.p != ambient.p or sub.n != ambient.n:
            raise ValueError("sub and ambient algebras live in different matrix spaces")
        try:
            inc = tuple(ambient.coords(b) for b in sub.basis)
        except ValueError:
            raise ValueError("sub is not contained in the ambient algebra") from None
        return cls(ambient, sub, inc)

    def __post_init__(self):
        a = self.ambient
        if len(self.inclusion) != self.sub.dim:
            raise ValueError("inclusion must have one row per sub basis element")
        img = a.subspace(self.inclusion)
        if img.dim != self.sub.dim:
            raise ValueError("inclusion does not have full row rank")
        if not a.is_subalgebra(img):
            raise ValueError("embedded span is not closed under the bracket")

    @cached_property
    def image(self) -> Subspace:
        return self.ambient.subspace(self.inclusion)

    @property
    def codim(self) -> int:
        return self.ambient.dim - self.sub.dim

    def pull(self, x: Sequence[int]) -> tuple[int, ...]:
        """Ambient coordinates of an element of the image to sub coordinates."""
        return self.sub.coords(self.ambient.element(x))

    def push(self, coords: Sequence[int]) -> tuple[int, ...]:
        """Sub coordinates to ambient coordinates."""
        p, d = self.ambient.p, self.ambient.dim
        out = [0] * d
        for c, row in zip(coords, self.inclusion):
            if c:
                for k, x in enumerate(row):
                    out[k] += c * x
        return tuple(x % p for x in out)


def _as_matrix(g, n: int, p: int) -> NilMatrix:
    if isinstance(g, NilMatrix):
        if g.n != n or g.p != p:
            raise ValueError("generator has the wrong size or modulus")
        return g
    return NilMatrix(n, p, g)


def build_algebra(p: int, N: int, generators: Iterable = ()) -> LieAlgebra:
    """Smallest bracket-closed subspace of ut(N, F_p) containing ``generators``."""
    check_prime(p)
    if not isinstance(N, int) or N < 1:
        raise ValueError(f"matrix size must be a positive integer, got {N!r}")
    if p < N:
        raise ValueError(f"need p >= N, got p = {p}, N = {N}")
    gens = [_as_matrix(g, N, p) for g in generators]
    npos = len(positions(N))
    space = Subspace.span([g.vector() for g in gens], p, npos)
    while True:
        mats = [NilMatrix.from_vector(v, N, p) for v in space.basis]
        new = [bracket(x, y).vector() for i, x in enumerate(mats) for y in mats[i + 1:]]
        grown = space.extend(new)
        if grown.dim == space.dim:
            break
        space = grown
    return LieAlgebra(p, N, space)


def generated_subalgebra(a: LieAlgebra, vectors: Iterable[Sequence[int]]) -> Subspace:
    """Bracket closure inside ``a`` of vectors given in algebra coordinates."""
    space = a.subspace(vectors)
    while True:
        b = space.basis
        grown = space.extend(a.bracket_coords(b[i], b[j]) for i in range(len(b)) for j in range(i + 1, len(b)))
        if grown.dim == space.dim:
            return space
        space = grown


def ut(N: int, p: int) -> LieAlgebra:
    """The full algebra of strictly upper triangular matrices."""
    gens = [NilMatrix.unit(i, i + 1, N, p) for i in range(1, N)]
    return build_algebra(p, N, gens)


def heisenberg(N: int, p: int) -> LieAlgebra:
    """span{E_1j, E_jN : 1 < j < N} + K E_1N, of dimension 2N - 3."""
    if N < 2:
        raise ValueError("heisenberg algebra needs N >= 2")
    gens = [NilMatrix.unit(1, j, N, p) for j in range(2, N)] + [NilMatrix.unit(j, N, N, p) for j in range(2, N)]
    if N == 2:
        gens = [NilMatrix.unit(1, 2, N, p)]
    return build_algebra(p, N, gens)


def center(a: LieAlgebra) -> Subspace:
    """Coordinates of the center ``{x : [x, g] = 0}``."""
    d, c = a.dim, a.structure
    rows = [[c[i][j][k] for i in range(d)] for j in range(d) for k in range(d)]
    return nullspace(rows, d, a.p)


def center_mod(a: LieAlgebra, s: Subspace, k: Subspace) -> Subspace:
    """Preimage in ``s`` of the center of ``s / k`` (``k`` an ideal of ``s``)."""
    return _center_mod(a, s, k)


@lru_cache(maxsize=None)
def _center_mod(a: LieAlgebra, s: Subspace, k: Subspace) -> Subspace:
    b = s.basis
    m = len(b)
    reds = [[k.reduce(a.bracket_coords(b[i], b[j])) for j in range(m)] for i in range(m)]
    rows = [[reds[i][j][t] for i in range(m)] for j in range(m) for t in range(a.dim)]
    sol = nullspace(rows, m, a.p)
    return a.subspace([s.combine(v) for v in sol.basis]) + k


def ideal_chain(e: SubalgebraEmbedding) -> list[LieAlgebra]:
    """g = g_0 > g_1 > ... > g_k = h, each a codimension-one ideal of the previous.

    The construction takes a central element z of g (modulo what has been
    factored out so far), recurses on g / Kz, pulls the chain back and closes
    it with ``h`` itself when z is not in ``h``.
    """
    a = e.ambient
    h = e.image
    if not a.is_subalgebra(h):
        raise ValueError("h is not a subalgebra")
    chain = _chain(a, a.full, Subspace.zero(a.p, a.dim), h)
    return [a.restrict(s) for s in chain]


def ideal_chain_spaces(e: SubalgebraEmbedding) -> list[Subspace]:
    """Same chain as :func:`ideal_chain`, in ambient coordinates."""
    a = e.ambient
    if not a.is_subalgebra(e.image):
        raise ValueError("h is not a subalgebra")
    return _chain(a, a.full, Subspace.zero(a.p, a.dim), e.image)


def _chain(a: LieAlgebra, s: Subspace, k: Subspace, h: Subspace) -> list[Subspace]:
    # All of s, h contain k; everything is a preimage from s / k.
    if s.dim == h.dim:
        return [s]
    z_space = center_mod(a, s, k)
    # deepest central direction not yet factored out
    z = next(v for v in reversed(z_space.basis) if v not in k)
    k2 = k.extend([z])
    sub = _chain(a, s, k2, h.extend([z]))
    if z in h:
        return sub
    return sub + [h]


def codim_one_subalgebras(a: LieAlgebra) -> list[Subspace]:
    """Every subalgebra of codimension one, found by scanning all hyperplanes."""
    out = []
    for f in _projective_points(a.p, a.dim):
        hyper = nullspace([f], a.dim, a.p)
        if a.is_subalgebra(hyper):
            out.append(hyper)
    return out


def _projective_points(p: int, n: int) -> Iterator[tuple[int, ...]]:
    # nonzero vectors whose first nonzero entry is 1
    for lead in range(n):
        for tail in product(range(p), repeat=n - lead - 1):
            yield (0,) * lead + (1,) + tail


def direct_sum(a: LieAlgebra, b: LieAlgebra) -> LieAlgebra:
    """Block-diagonal sum ``a + b`` inside ut(N_a + N_b).

    Elements are ``diag(x, y)``; nilpotency is governed by the blocks, so
    the modulus only has to dominate ``max(N_a, N_b)``.
    """
    if a.p != b.p:
        raise ValueError("direct sum needs a common modulus")
    p, n = a.p, a.n + b.n
    vecs = []
    for x in a.basis:
        vecs.append(_block(x.entries, None, a.n, b.n, p).vector())
    for y in b.basis:
        vecs.append(_block(None, y.entries, a.n, b.n, p).vector())
    space = Subspace.span(vecs, p, len(positions(n)))
    return LieAlgebra(p, n, space, max(a.nil_bound, b.nil_bound))


def _block(x, y, na: int, nb: int, p: int) -> NilMatrix:
    n = na + nb
    rows = [[0] * n for _ in range(n)]
    if x is not None:
        for i in range(na):
            for j in range(na):
                rows[i][j] = x[i][j]
    if y is not None:
        for i in range(nb):
            for j in range(nb):
                rows[na + i][na + j] = y[i][j]
    return NilMatrix(n, p, rows)


def split_block(z: NilMatrix, na: int) -> tuple[NilMatrix, NilMatrix]:
    """Inverse of the block-diagonal packing used by :func:`direct_sum`."""
    n, p = z.n, z.p
    x = [row[:na] for row in z.entries[:na]]
    y = [row[na:] for row in z.entries[na:]]
    return NilMatrix(na, p, x), NilMatrix(n - na, p, y)


def diagonal(a: LieAlgebra) -> SubalgebraEmbedding:
    """The diagonal copy ``{diag(x, x)}`` of ``a`` inside ``a + a``."""
    s = direct_sum(a, a)
    vecs = [_block(x.entries, x.entries, a.n, a.n, a.p).vector() for x in a.basis]
    sub = LieAlgebra(a.p, s.n, Subspace.span(vecs, a.p, len(positions(s.n))), s.nil_bound)
    return SubalgebraEmbedding.of(s, sub)
