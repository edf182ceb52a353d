"""Exact characters of G = exp(g) from coadjoint orbits.

A :class:`ClassFunction` is stored as an integer array ``coeffs`` of shape
``(|G|, p - 1)`` and a positive denominator: the value at the element with
group code ``c`` (the code of ``log g``) is
``(1 / den) * sum_i coeffs[c, i] * zeta^i`` in the reduced power basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coadjoint import (
    DualVector,
    Orbit,
    _unit_vectors,
    all_coords,
    check_budget,
    encode,
    exp_coadjoint_matrix,
    orbit_partition,
)
from .errors import InternalConsistencyError
from .field import CyclotomicNumber
from .nilalg import GroupElement, LieAlgebra

_CHUNK = 1 << 22
_FLOAT_EXACT = 1 << 53


def _reduce_counts(counts: np.ndarray) -> np.ndarray:
    # (m, p) exponent counts -> (m, p-1) power-basis coefficients
    return counts[:, :-1] - counts[:, -1:]


def _pad(coeffs: np.ndarray) -> np.ndarray:
    return np.concatenate([coeffs, np.zeros((coeffs.shape[0], 1), dtype=coeffs.dtype)], axis=1)


class ClassFunction:
    """A function on G with values in Q(zeta_p), materialized on every element."""

    def __init__(self, algebra: LieAlgebra, coeffs: np.ndarray, den: int = 1):
        if coeffs.shape != (algebra.order, algebra.p - 1):
            raise ValueError(f"expected shape {(algebra.order, algebra.p - 1)}, got {coeffs.shape}")
        if den <= 0:
            raise ValueError("denominator must be positive")
        self.algebra = algebra
        self.coeffs = coeffs
        self.coeffs.setflags(write=False)
        self.den = int(den)

    @classmethod
    def from_counts(cls, algebra: LieAlgebra, counts: np.ndarray, den: int = 1) -> ClassFunction:
        """From ``counts[c, t]`` = multiplicity of ``zeta^t`` at group code ``c``."""
        return cls(algebra, _reduce_counts(np.asarray(counts, dtype=np.int64)), den)

    @property
    def p(self) -> int:
        return self.algebra.p

    def _index(self, g) -> int:
        if isinstance(g, GroupElement):
            return self.algebra.group_code(g)
        return int(g)

    def __getitem__(self, g) -> CyclotomicNumber:
        """Value at a :class:`GroupElement` or at a group code."""
        row = self.coeffs[self._index(g)]
        return CyclotomicNumber(self.p, (Fraction(int(x), self.den) for x in row))

    def values(self) -> list[CyclotomicNumber]:
        return [self[c] for c in range(self.algebra.order)]

    @property
    def degree(self) -> Fraction:
        """Value at the identity (group code 0); must be rational."""
        return self[0].to_rational()

    def __eq__(self, other):
        if not isinstance(other, ClassFunction):
            return NotImplemented
        if self.algebra != other.algebra:
            return False
        a = self.coeffs.astype(object) * other.den
        b = other.coeffs.astype(object) * self.den
        return bool((a == b).all())

    __hash__ = None

    def __mul__(self, other: ClassFunction) -> ClassFunction:
        """Pointwise product (the character of a tensor product)."""
        if self.algebra != other.algebra:
            raise ValueError("class functions on different groups")
        p = self.p
        a, b = _pad(self.coeffs).astype(object), _pad(other.coeffs).astype(object)
        out = np.zeros((a.shape[0], p), dtype=object)
        for s in range(p):
            for t in range(p):
                out[:, (s + t) % p] += a[:, s] * b[:, t]
        red = _reduce_counts(out)
        return ClassFunction(self.algebra, _shrink(red), self.den * other.den)

    def __add__(self, other: ClassFunction) -> ClassFunction:
        if self.algebra != other.algebra:
            raise ValueError("class functions on different groups")
        c = self.coeffs.astype(object) * other.den + other.coeffs.astype(object) * self.den
        return ClassFunction(self.algebra, _shrink(c), self.den * other.den)

    def scaled(self, k: int) -> ClassFunction:
        return ClassFunction(self.algebra, _shrink(self.coeffs.astype(object) * int(k)), self.den)

    def is_conjugation_invariant(self) -> bool:
        """Exhaustive check of ``f(h^-1 g h) = f(g)`` for the generators ``h = exp(b_i)``."""
        a = self.algebra
        x = all_coords(a)
        for v in _unit_vectors(a.dim):
            # coords of h^-1 x h are x @ A_h
            perm = encode(a, x @ exp_coadjoint_matrix(a, v) % a.p)
            if not np.array_equal(self.coeffs[perm], self.coeffs):
                return False
        return True

    def to_json(self, approx: bool = False) -> dict:
        out = {
            "p": self.p,
            "den": self.den,
            "values": [[int(v) for v in row] for row in self.coeffs],
        }
        if approx:
            out["approx"] = [[round(z.real, 12), round(z.imag, 12)] for z in (v.to_complex() for v in self.values())]
        return out


def _shrink(arr: np.ndarray) -> np.ndarray:
    """Object array of ints to int64 when it fits, else keep Python ints."""
    if arr.size == 0:
        return arr.astype(np.int64)
    hi = max(abs(int(arr.max())), abs(int(arr.min())))
    return arr.astype(np.int64) if hi < (1 << 62) else arr


def pairing_counts(a: LieAlgebra, functionals: np.ndarray) -> np.ndarray:
    """``counts[c, t] = #{mu : mu(x_c) = t}`` for every x in g, with x_c of code c."""
    p = a.p
    x = all_coords(a)
    m = np.asarray(functionals, dtype=np.int64)
    counts = np.zeros((a.order, p), dtype=np.int64)
    step = max(1, _CHUNK // max(1, len(m)))
    for lo in range(0, a.order, step):
        vals = x[lo : lo + step] @ m.T % p
        rows = np.arange(vals.shape[0], dtype=np.int64)[:, None] * p + vals
        counts[lo : lo + step] = np.bincount(rows.ravel(), minlength=vals.shape[0] * p).reshape(-1, p)
    return counts


def kirillov_character(omega: Orbit) -> ClassFunction:
    """``chi(g) = |Omega|^(-1/2) sum_{mu in Omega} zeta^{mu(log g)}`` on all of G."""
    a = omega.algebra
    return ClassFunction.from_counts(a, pairing_counts(a, omega.coords_array()), omega.sqrt_size)


def kirillov_value(omega: Orbit, g: GroupElement | int) -> CyclotomicNumber:
    """One value of the orbit character, without materializing the rest."""
    a = omega.algebra
    x = a.decode(a.group_code(g)) if isinstance(g, GroupElement) else a.decode(int(g))
    vals = omega.coords_array() @ np.array(x, dtype=np.int64) % a.p
    return CyclotomicNumber.from_exponent_counts(a.p, np.bincount(vals, minlength=a.p), omega.sqrt_size)


def additive_sum(eta: DualVector) -> CyclotomicNumber:
    """``sum_{x in g} zeta^{eta(x)}``; equals |G| when eta = 0 and 0 otherwise."""
    a = eta.algebra
    counts = pairing_counts(a, np.array([eta.coords], dtype=np.int64)).sum(axis=0)
    return CyclotomicNumber.from_exponent_counts(a.p, counts)


def _gram(ca: np.ndarray, cb: np.ndarray) -> np.ndarray:
    """``ca.T @ cb`` exactly; float64 BLAS is used when every partial sum stays below 2^53."""
    if ca.dtype != object and cb.dtype != object:
        bound = ca.shape[0] * max(1, int(np.abs(ca).max(initial=0))) * max(1, int(np.abs(cb).max(initial=0)))
        if bound < _FLOAT_EXACT:
            return np.rint(ca.T.astype(np.float64) @ cb.astype(np.float64)).astype(np.int64)
    return _shrink(ca.astype(object).T @ cb.astype(object))


def _circular_sums(m: np.ndarray, p: int) -> list[int]:
    # s[r] = sum_t m[(t + r) % p, t]: the coefficient of zeta^r in sum f1 * conj(f2)
    return [sum(int(m[(t + r) % p, t]) for t in range(p)) for r in range(p)]


def inner_product(f1: ClassFunction, f2: ClassFunction) -> Fraction:
    """``(1/|G|) sum_u f1(u) conj(f2(u))``; the result is asserted to be rational."""
    if f1.algebra != f2.algebra:
        raise ValueError("class functions on different groups")
    a = f1.algebra
    s = _circular_sums(_gram(_pad(f1.coeffs), _pad(f2.coeffs)), a.p)
    if any(v != s[1] for v in s[1:]):
        raise InternalConsistencyError(f"inner product is not rational: zeta-coefficients {s}")
    return Fraction(s[0] - s[1], a.order * f1.den * f2.den)


def inner_product_matrix(fs: list[ClassFunction], gs: list[ClassFunction]) -> list[list[Fraction]]:
    """All inner products ``(f_i, g_j)`` from one stacked product."""
    if not fs or not gs:
        return [[] for _ in fs]
    a = fs[0].algebra
    p = a.p
    big = _gram(np.concatenate([_pad(f.coeffs) for f in fs], axis=1), np.concatenate([_pad(g.coeffs) for g in gs], axis=1))
    blocks = big.reshape(len(fs), p, len(gs), p)
    sums = np.zeros((len(fs), len(gs), p), dtype=big.dtype)
    for r in range(p):
        for t in range(p):
            sums[:, :, r] += blocks[:, (t + r) % p, :, t]
    if (sums[:, :, 1:] != sums[:, :, 1:2]).any():
        raise InternalConsistencyError("an inner product is not rational")
    out = []
    for i, f in enumerate(fs):
        out.append([Fraction(int(sums[i, j, 0] - sums[i, j, 1]), a.order * f.den * g.den) for j, g in enumerate(gs)])
    return out


@dataclass
class CharacterTable:
    algebra: LieAlgebra
    orbits: list[Orbit]
    characters: list[ClassFunction]

    @property
    def degrees(self) -> list[int]:
        return [int(c.degree) for c in self.characters]

    def check(self) -> dict[str, bool]:
        gram = inner_product_matrix(self.characters, self.characters)
        n = len(self.characters)
        return {
            "degrees_are_sqrt_orbit_size": all(c.degree == o.sqrt_size for c, o in zip(self.characters, self.orbits)),
            "sum_of_squared_degrees": sum(d * d for d in self.degrees) == self.algebra.order,
            "orthonormal": all(gram[i][j] == (i == j) for i in range(n) for j in range(n)),
        }

    def to_json(self, approx: bool = False) -> dict:
        return {
            "algebra": self.algebra.to_json(),
            "group_order": self.algebra.order,
            "characters": [
                {"orbit": o.to_json(), "degree": d, "character": c.to_json(approx)}
                for o, d, c in zip(self.orbits, self.degrees, self.characters)
            ],
        }

    def csv_rows(self, approx: bool = False) -> list[list[str]]:
        """Header plus one row per character; cells are ``num/den`` coefficient lists ``a0;a1;...``."""
        a = self.algebra
        header = ["orbit_rep", "degree"] + [str(c) for c in range(a.order)]
        rows = [header]
        for o, d, ch in zip(self.orbits, self.degrees, self.characters):
            cells = []
            for c in range(a.order):
                if approx:
                    z = ch[c].to_complex()
                    cells.append(f"{z.real:.6f}{z.imag:+.6f}j")
                else:
                    cells.append(";".join(str(v) for v in ch[c].coeffs))
            rows.append([" ".join(str(v) for v in o.rep.coords), str(d)] + cells)
        return rows


def character_table(a: LieAlgebra, budget: int | None = None, check: bool = True) -> CharacterTable:
    """One Kirillov character per orbit, in orbit-representative order."""
    check_budget(a.order, budget)
    orbits = orbit_partition(a, budget)
    table = CharacterTable(a, orbits, [kirillov_character(o) for o in orbits])
    if check:
        result = table.check()
        if not all(result.values()):
            raise InternalConsistencyError(f"character table checks failed: {result}")
    return table
