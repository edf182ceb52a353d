"""Reference representations built by hand, as an independent oracle.

Nothing here looks at coadjoint orbits.  Given a polarization ``p`` of
``lam`` we form the linear character ``xi(exp x) = zeta^{lam(x)}`` of
``P = exp(p)``, induce it to G on explicit coset representatives, and read
characters off as traces.  Group elements are unitriangular matrices; their
index ("group code") is the code of ``log g`` in the algebra, which for an
element ``exp(x)`` is just the code of ``x``.

Induced matrices are monomial and stored as two integer arrays per group
element: ``perm[i]`` is the row of the nonzero entry in column ``i`` and
``exps[i]`` is its exponent ``t`` (the entry is ``zeta^t``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product

import numpy as np

from .characters import ClassFunction, _shrink, inner_product
from .errors import InternalConsistencyError, VerificationError
from .field import CyclotomicNumber
from .linalg import Subspace
from .nilalg import LieAlgebra, SubalgebraEmbedding, _inv_factorial, positions
from .polarization import Polarization


def _matmul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    # batched product of small integer matrices; beats np.matmul's per-matrix int loops
    return (x[:, :, :, None] * y[:, None, :, :]).sum(axis=2)


class UnipotentGroup:
    """All elements of ``G = exp(a)`` as matrices, indexed by group code."""

    def __init__(self, a: LieAlgebra):
        self.algebra = a
        p, n, d = a.p, a.n, a.dim
        coords = np.array(list(product(range(p), repeat=d)), dtype=np.int64).reshape(a.order, d)
        self.coords = coords
        basis = np.array([b.entries for b in a.basis], dtype=np.int64).reshape(d, n, n)
        x = np.einsum("gk,kij->gij", coords, basis) % p
        g = np.broadcast_to(np.eye(n, dtype=np.int64), x.shape).copy()
        power = np.broadcast_to(np.eye(n, dtype=np.int64), x.shape).copy()
        for k in range(1, n):
            power = power @ x % p
            g = (g + power * _inv_factorial(k, p)) % p
        self.mats = g
        self.mats.setflags(write=False)
        self._pos = tuple(zip(*positions(n))) if n > 1 else ((), ())
        keys = self._keys(g)
        self._order = np.argsort(keys)
        self._sorted_keys = keys[self._order]
        if np.unique(keys).size != a.order:
            raise InternalConsistencyError("exp is not injective on the algebra")

    @property
    def order(self) -> int:
        return self.algebra.order

    def _keys(self, mats: np.ndarray) -> np.ndarray:
        p = self.algebra.p
        ent = mats[:, self._pos[0], self._pos[1]]
        w = np.array([p ** (ent.shape[1] - 1 - i) for i in range(ent.shape[1])], dtype=np.int64)
        return (ent * w).sum(axis=1)

    def index(self, mats: np.ndarray) -> np.ndarray:
        """Group codes of an array of matrices; raises if one is outside G."""
        mats = np.asarray(mats, dtype=np.int64)
        keys = self._keys(mats)
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, len(self._sorted_keys) - 1)
        codes = self._order[pos]
        # keys only see the strictly upper entries
        if not (self._sorted_keys[pos] == keys).all() or not np.array_equal(self.mats[codes], mats):
            raise ValueError("matrix is not an element of the group")
        return codes

    def mul(self, left, right) -> np.ndarray:
        """Codes of the products ``left[i] @ right[i]`` (codes broadcast)."""
        left, right = np.broadcast_arrays(np.asarray(left), np.asarray(right))
        prod = _matmul(self.mats[left.ravel()], self.mats[right.ravel()]) % self.algebra.p
        return self.index(prod).reshape(left.shape)

    @cached_property
    def inverses(self) -> np.ndarray:
        """``inverses[c]`` = code of the inverse of element ``c``."""
        p, n = self.algebra.p, self.algebra.n
        # (I + u)^-1 = sum (-u)^k for nilpotent u
        u = (self.mats - np.eye(n, dtype=np.int64)) % p
        acc = np.broadcast_to(np.eye(n, dtype=np.int64), u.shape).copy()
        power = acc.copy()
        for _ in range(1, n):
            power = -power @ u % p
            acc = (acc + power) % p
        return self.index(acc)

    def subgroup_codes(self, s: Subspace) -> np.ndarray:
        """Codes of ``exp(s)`` for a subalgebra given in algebra coordinates."""
        a = self.algebra
        return np.array(sorted(a.code(v) for v in s.elements()), dtype=np.int64)


@lru_cache(maxsize=64)
def unipotent_group(a: LieAlgebra) -> UnipotentGroup:
    return UnipotentGroup(a)


@dataclass(frozen=True)
class LinearCharacter:
    """``xi(exp x) = zeta^{lam(x)}`` on ``P = exp(p)``; ``exps[c]`` is -1 off P."""

    group: UnipotentGroup
    subgroup: np.ndarray
    exps: np.ndarray

    def value(self, code: int) -> CyclotomicNumber:
        p = self.group.algebra.p
        t = int(self.exps[code])
        if t < 0:
            raise ValueError("element is outside the subgroup")
        counts = [0] * p
        counts[t] = 1
        return CyclotomicNumber.from_exponent_counts(p, counts)

    def check_multiplicative(self) -> bool:
        """``xi(uv) = xi(u) xi(v)`` for all u, v in P (exhaustive)."""
        g, p = self.group, self.group.algebra.p
        u, v = np.meshgrid(self.subgroup, self.subgroup, indexing="ij")
        uv = g.mul(u, v)
        return bool(((self.exps[u] + self.exps[v]) % p == self.exps[uv]).all())


def linear_character(pol: Polarization, check: bool = True) -> LinearCharacter:
    a, lam = pol.ambient, pol.lam
    g = unipotent_group(a)
    sub = g.subgroup_codes(pol.space)
    exps = np.full(a.order, -1, dtype=np.int64)
    lam_vec = np.array(lam.coords, dtype=np.int64)
    exps[sub] = g.coords[sub] @ lam_vec % a.p
    xi = LinearCharacter(g, sub, exps)
    if check and sub.size**2 <= 1 << 22 and not xi.check_multiplicative():
        raise VerificationError(f"xi is not multiplicative; {list(lam.coords)} is not isotropic on p")
    return xi


@dataclass(frozen=True)
class MonomialMatrix:
    perm: tuple[int, ...]
    exps: tuple[int, ...]
    p: int

    @property
    def dim(self) -> int:
        return len(self.perm)

    def __matmul__(self, other: MonomialMatrix) -> MonomialMatrix:
        # (A B) e_i = zeta^{b_i + a_{sB(i)}} e_{sA(sB(i))}
        perm = tuple(self.perm[j] for j in other.perm)
        exps = tuple((other.exps[i] + self.exps[other.perm[i]]) % self.p for i in range(other.dim))
        return MonomialMatrix(perm, exps, self.p)

    def trace(self) -> CyclotomicNumber:
        counts = [0] * self.p
        for i, (j, t) in enumerate(zip(self.perm, self.exps)):
            if i == j:
                counts[t] += 1
        return CyclotomicNumber.from_exponent_counts(self.p, counts)

    def dense(self) -> list[list[CyclotomicNumber]]:
        zero = CyclotomicNumber.zero(self.p)
        rows = [[zero] * self.dim for _ in range(self.dim)]
        for i, (j, t) in enumerate(zip(self.perm, self.exps)):
            counts = [0] * self.p
            counts[t] = 1
            rows[j][i] = CyclotomicNumber.from_exponent_counts(self.p, counts)
        return rows


class Representation:
    """A monomial representation of G, materialized on every element."""

    def __init__(self, group: UnipotentGroup, perm: np.ndarray, exps: np.ndarray):
        self.group = group
        self.perm = perm
        self.exps = exps
        for arr in (self.perm, self.exps):
            arr.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.perm.shape[1]

    def __getitem__(self, code: int) -> MonomialMatrix:
        return MonomialMatrix(tuple(int(v) for v in self.perm[code]), tuple(int(v) for v in self.exps[code]), self.group.algebra.p)

    def check_homomorphism(self) -> bool:
        """``rho(gh) = rho(g) rho(h)`` for all pairs and ``rho(1) = I`` (exhaustive)."""
        p, d = self.group.algebra.p, self.dim
        if not (np.array_equal(self.perm[0], np.arange(d)) and not self.exps[0].any()):
            return False
        codes = np.arange(self.group.order)
        for g in codes:
            gh = self.group.mul(np.full_like(codes, g), codes)
            # column i of rho(g) rho(h): row perm_g[perm_h[i]], exponent exps_h[i] + exps_g[perm_h[i]]
            perm = self.perm[g][self.perm]
            exps = (self.exps + self.exps[g][self.perm]) % p
            if not (np.array_equal(perm, self.perm[gh]) and np.array_equal(exps, self.exps[gh])):
                return False
        return True

    def tensor(self, other: Representation) -> Representation:
        if other.group is not self.group:
            raise ValueError("representations of different groups")
        p, d2 = self.group.algebra.p, other.dim
        perm = (self.perm[:, :, None] * d2 + other.perm[:, None, :]).reshape(self.group.order, -1)
        exps = ((self.exps[:, :, None] + other.exps[:, None, :]) % p).reshape(self.group.order, -1)
        return Representation(self.group, perm, exps)


def coset_representatives(group: UnipotentGroup, sub: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Minimal-code representative of each left coset gP, and the coset index of every g."""
    which = np.full(group.order, -1, dtype=np.int64)
    reps = []
    # scanning codes upward, the first unassigned element is the least of its coset
    for g in range(group.order):
        if which[g] >= 0:
            continue
        which[group.mul(np.full_like(sub, g), sub)] = len(reps)
        reps.append(g)
    return np.array(reps, dtype=np.int64), which


def induce(xi: LinearCharacter) -> Representation:
    """``ind(xi, P, G)`` on the space of functions on G/P, in monomial form.

    With coset representatives ``r_i`` and ``g r_i = r_j h`` (h in P), the
    column ``i`` of ``rho(g)`` has the single entry ``xi(h)`` in row ``j``.
    """
    group = xi.group
    p = group.algebra.p
    reps, which = coset_representatives(group, xi.subgroup)
    inv = group.inverses
    codes = np.arange(group.order)
    g_r = group.mul(codes[:, None], reps[None, :])  # (|G|, dim)
    perm = which[g_r]
    h = group.mul(inv[reps[perm]], g_r)
    exps = xi.exps[h]
    if (exps < 0).any():
        raise InternalConsistencyError("coset bookkeeping left the subgroup")
    return Representation(group, perm.astype(np.int64), exps % p)


def trace_character(rho: Representation) -> ClassFunction:
    """``chi(g) = Tr rho(g)`` exactly."""
    a = rho.group.algebra
    p = a.p
    fixed = rho.perm == np.arange(rho.dim)[None, :]
    rows = np.nonzero(fixed)[0]
    counts = np.zeros((a.order, p), dtype=np.int64)
    np.add.at(counts, (rows, rho.exps[fixed]), 1)
    return ClassFunction.from_counts(a, counts)


def induced_character(pol: Polarization) -> ClassFunction:
    """Shortcut for ``trace_character(induce(linear_character(pol)))``."""
    return trace_character(induce(linear_character(pol)))


def restrict(f: ClassFunction, e: SubalgebraEmbedding) -> ClassFunction:
    """Restriction of a class function on G to ``H = exp(h)``."""
    if f.algebra != e.ambient:
        raise ValueError("class function is not on the ambient group")
    h = e.sub
    codes = np.array([e.ambient.code(e.push(y)) for y in product(range(h.p), repeat=h.dim)], dtype=np.int64)
    return ClassFunction(h, np.asarray(f.coeffs)[codes], f.den)


def induce_class_function(f: ClassFunction, e: SubalgebraEmbedding) -> ClassFunction:
    """Frobenius formula ``ind f(g) = (1/|H|) sum_{x in G} f'(x^-1 g x)``, f' = f extended by 0."""
    if f.algebra != e.sub:
        raise ValueError("class function is not on the subgroup")
    g_alg, h = e.ambient, e.sub
    group = unipotent_group(g_alg)
    p = g_alg.p
    sub_codes = np.array([g_alg.code(e.push(y)) for y in product(range(h.p), repeat=h.dim)], dtype=np.int64)
    ext = np.zeros((g_alg.order, p), dtype=object)
    ext[sub_codes, : p - 1] = np.asarray(f.coeffs, dtype=object)
    codes = np.arange(group.order)
    inv = group.inverses
    total = np.zeros((g_alg.order, p), dtype=object)
    for x in codes:
        conj = group.mul(group.mul(np.full_like(codes, inv[x]), codes), np.full_like(codes, x))
        total += ext[conj]
    red = total[:, : p - 1] - total[:, p - 1 :]
    den = f.den * h.order
    return ClassFunction(g_alg, _shrink(red), den)


def regular_character(a: LieAlgebra) -> ClassFunction:
    coeffs = np.zeros((a.order, a.p - 1), dtype=np.int64)
    coeffs[0, 0] = a.order
    return ClassFunction(a, coeffs)


def multiplicity_oracle(f: ClassFunction, chi: ClassFunction) -> int:
    """``(f, chi)`` for irreducible ``chi``; must be a non-negative integer."""
    norm = inner_product(chi, chi)
    if norm != 1:
        raise VerificationError(f"(chi, chi) = {norm}, not an irreducible character")
    m = inner_product(f, chi)
    if m.denominator != 1 or m < 0:
        raise VerificationError(f"multiplicity {m} is not a non-negative integer")
    return int(m)
