"""Prime-field residues and exact values in the cyclotomic field Q(zeta_p).

Character values of a unipotent group over F_p are sums of p-th roots of
unity, so they live in Q(zeta_p).  A :class:`CyclotomicNumber` stores the
coordinates in the power basis ``1, zeta, ..., zeta^(p-2)``; the relation
``zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2))`` is applied on construction,
which makes the representation unique.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
        raise ValueError(f"modulus must be a prime integer, got {p!r}")
    return p


@dataclass(frozen=True)
class FieldElement:
    """A residue ``value`` modulo the prime ``p``."""

    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * fe_inv(FieldElement(o, self.p))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0


def fe_inv(a: FieldElement) -> FieldElement:
    if a.value == 0:
        raise ZeroDivisionError(f"0 has no inverse modulo {a.p}")
    return FieldElement(pow(a.value, -1, a.p), a.p)


def _reduce(full: Sequence, p: int) -> tuple:
    # full has p entries (coefficients of zeta^0..zeta^(p-1)).
    top = full[p - 1]
    return tuple(Fraction(full[i] - top) for i in range(p - 1))


class CyclotomicNumber:
    """An element of Q(zeta_p) stored in the reduced power basis.

    ``coeffs[i]`` is the rational coefficient of ``zeta^i`` for
    ``0 <= i <= p-2``.  Instances are immutable and hashable.
    """

    __slots__ = ("p", "coeffs", "_hash")

    def __init__(self, p: int, coeffs: Iterable):
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) == p:
            coeffs = _reduce(coeffs, p)
        elif len(coeffs) != p - 1:
            raise ValueError(f"expected {p - 1} (or {p}) coefficients, got {len(coeffs)}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_hash", hash((p, coeffs)))

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicNumber is immutable")

    @classmethod
    def from_exponent_counts(cls, p: int, counts: Sequence[int], den: int = 1) -> CyclotomicNumber:
        """Return ``(1/den) * sum_t counts[t] * zeta^t`` for ``t`` in ``0..p-1``."""
        if len(counts) != p:
            raise ValueError("counts must have one entry per residue")
        top = counts[p - 1]
        return cls(p, (Fraction(int(counts[i]) - int(top), den) for i in range(p - 1)))

    @classmethod
    def rational(cls, p: int, value) -> CyclotomicNumber:
        return cls(p, (Fraction(value),) + (Fraction(0),) * (p - 2))

    @classmethod
    def zero(cls, p: int) -> CyclotomicNumber:
        return cls(p, (Fraction(0),) * (p - 1))

    @classmethod
    def one(cls, p: int) -> CyclotomicNumber:
        return cls.rational(p, 1)

    def _full(self) -> list:
        return list(self.coeffs) + [Fraction(0)]

    def _check(self, other: CyclotomicNumber):
        if other.p != self.p:
            raise ValueError(f"cannot combine Q(zeta_{self.p}) with Q(zeta_{other.p})")

    def _lift(self, other):
        if isinstance(other, CyclotomicNumber):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.rational(self.p, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return CyclotomicNumber(self.p, (a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.p, (-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return CyclotomicNumber(self.p, (a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.p, (a * other for a in self.coeffs))
        o = self._lift(other)
        if o is None:
            return NotImplemented
        p = self.p
        a, b = self._full(), o._full()
        out = [Fraction(0)] * p
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    out[(i + j) % p] += x * y
        return CyclotomicNumber(p, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.p, (a / other for a in self.coeffs))
        return NotImplemented

    def conj(self) -> CyclotomicNumber:
        """Complex conjugation, i.e. the automorphism ``zeta -> zeta^-1``."""
        p = self.p
        full = self._full()
        return CyclotomicNumber(p, [full[(-t) % p] for t in range(p)])

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return self._hash

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def to_complex(self) -> complex:
        """Floating-point value under ``zeta = exp(2 pi i / p)``; display only."""
        w = cmath.exp(2j * math.pi / self.p)
        return complex(sum(float(c) * w**i for i, c in enumerate(self.coeffs)))

    def to_json(self) -> dict:
        return {"p": self.p, "coeffs": [[str(c.numerator), str(c.denominator)] for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> CyclotomicNumber:
        p = int(obj["p"])
        return cls(p, (Fraction(int(n), int(d)) for n, d in obj["coeffs"]))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if i == 0 else f"{c}*z^{i}")
        return f"CyclotomicNumber(p={self.p}: {' + '.join(terms) or '0'})"


def zeta_power(t: FieldElement | int, p: int | None = None) -> CyclotomicNumber:
    """The fixed additive character ``e^t = zeta_p^t``."""
    if isinstance(t, FieldElement):
        p, t = t.p, t.value
    elif p is None:
        raise TypeError("p is required when t is a plain int")
    counts = [0] * p
    counts[t % p] = 1
    return CyclotomicNumber.from_exponent_counts(p, counts)
