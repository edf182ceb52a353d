"""Polarizations: maximal isotropic subalgebras for the form lam([x, y]).

:func:`polarize` runs the classical induction on ``dim g``.  Quotients are
represented by preimages: the recursion state is a pair ``(s, k)`` of
subspaces of g (in algebra coordinates) standing for the algebra ``s / k``,
with ``k`` an ideal of ``s`` on which ``lam`` vanishes.  A polarization of
``s / k`` is returned as its preimage in ``s``.

* center of ``s / k`` of dimension > 1, or ``lam`` zero on it:
  factor out the kernel of ``lam`` on the center and recurse;
* center ``Kz`` with ``lam(z) != 0``: take ``y`` spanning the second center
  modulo ``z``, let ``g_0 = {u : [u, y] = 0 mod k}`` (the kernel of the
  character ``u -> alpha(u)`` with ``[u, y] = alpha(u) z``) and return the
  polarization of ``lam|_{g_0}`` unchanged.

Everything except the scalar tests on ``lam`` depends only on ``(s, k)``
and is cached.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .coadjoint import (
    DualVector,
    Orbit,
    _generator_stack,
    all_coords,
    closure,
    fiber,
    form_array,
    orbit,
    project,
    stabilizer_basis,
    subgroup_components,
)
from .errors import InternalConsistencyError, VerificationError
from .linalg import Subspace, enumerate_subspaces, nullspace
from .nilalg import LieAlgebra, NilMatrix, SubalgebraEmbedding, center_mod


@lru_cache(maxsize=4096)
def _sub_embedding(a: LieAlgebra, s: Subspace) -> SubalgebraEmbedding:
    return SubalgebraEmbedding.of(a, a.restrict(s))


@dataclass(frozen=True)
class Polarization:
    """A polarization ``space`` (algebra coordinates) of ``lam`` in ``ambient``."""

    ambient: LieAlgebra
    lam: DualVector
    space: Subspace

    @classmethod
    def from_basis(cls, ambient: LieAlgebra, lam: DualVector, vectors, check: bool = True) -> Polarization:
        """Wrap a hand-picked subspace; matrices or coordinate vectors are accepted."""
        vecs = [ambient.coords(v) if isinstance(v, NilMatrix) else tuple(v) for v in vectors]
        pol = cls(ambient, lam, ambient.subspace(vecs))
        if check:
            pol.certify()
        return pol

    @property
    def dim(self) -> int:
        return self.space.dim

    @cached_property
    def embedding(self) -> SubalgebraEmbedding:
        return _sub_embedding(self.ambient, self.space)

    @property
    def subalg(self) -> LieAlgebra:
        return self.embedding.sub

    @property
    def basis(self) -> tuple[NilMatrix, ...]:
        return tuple(self.ambient.element(v) for v in self.space.basis)

    def checks(self) -> dict[str, bool]:
        a = self.ambient
        stab = stabilizer_basis(self.lam)
        return {
            "subalgebra": a.is_subalgebra(self.space),
            "isotropic": is_isotropic(self.space, self.lam),
            "dim_formula": 2 * self.dim == a.dim + stab.dim,
            "contains_stabilizer": stab <= self.space,
        }

    def certify(self) -> Polarization:
        checks = self.checks()
        if not all(checks.values()):
            failed = [k for k, v in checks.items() if not v]
            raise VerificationError(f"not a polarization of {list(self.lam.coords)}: {failed}", checks)
        return self

    def to_json(self) -> dict:
        return {
            "lambda": list(self.lam.coords),
            "polarization_basis": [[list(r) for r in b.entries] for b in self.basis],
            "polarization_coords": [list(v) for v in self.space.basis],
            "dim": self.dim,
            "checks": self.checks(),
        }


def is_isotropic(s: Subspace, lam: DualVector) -> bool:
    """``lam([x, y]) = 0`` for all basis pairs of ``s``."""
    if s.dim == 0:
        return True
    b = np.array(s.basis, dtype=np.int64)
    return not (b @ form_array(lam) @ b.T % lam.algebra.p).any()


def is_maximal_isotropic(s: Subspace, lam: DualVector) -> bool:
    """Scan every vector of g: none outside ``s`` may extend it isotropically."""
    a = lam.algebra
    if not is_isotropic(s, lam):
        return False
    if s.dim == 0:
        w = np.zeros((a.dim, 0), dtype=np.int64)
    else:
        w = form_array(lam) @ np.array(s.basis, dtype=np.int64).T % a.p  # column k: B(., s_k)
    orth = ~((all_coords(a) @ w % a.p).any(axis=1))
    return int(orth.sum()) == s.size


def _lam_on(s: Subspace, vals: tuple, x) -> int:
    return sum(x[c] * v for c, v in zip(s.pivots, vals)) % s.p


def _vals_on(s: Subspace, lam: DualVector) -> tuple:
    return tuple(lam(v) for v in s.basis)


@dataclass(frozen=True)
class HeisenbergStep:
    """Witnesses for the case of a one-dimensional center not killed by lam."""

    z: tuple
    y: tuple
    x: tuple
    g0: Subspace


def heisenberg_step(a: LieAlgebra, s: Subspace, k: Subspace) -> HeisenbergStep:
    """``z`` central, ``y`` in the second center, ``x`` with ``[x, y] = z`` mod ``k``, ``g_0 = ker alpha``."""
    return _heisenberg_step(a, s, k)


@lru_cache(maxsize=None)
def _heisenberg_step(a: LieAlgebra, s: Subspace, k: Subspace) -> HeisenbergStep:
    p = a.p
    zs = center_mod(a, s, k)
    z = next(v for v in zs.basis if v not in k)
    z2 = center_mod(a, s, zs)
    y = next(v for v in z2.basis if v not in zs)
    reds = [k.reduce(a.bracket_coords(u, y)) for u in s.basis]
    rows = [[r[t] for r in reds] for t in range(a.dim)]
    ker = nullspace(rows, s.dim, p)
    g0 = a.subspace([s.combine(c) for c in ker.basis])
    zr = k.reduce(z)
    piv = next(i for i, v in enumerate(zr) if v)
    x = None
    for u, r in zip(s.basis, reds):
        if any(r):
            alpha = r[piv] * pow(zr[piv], -1, p) % p
            x = tuple(c * pow(alpha, -1, p) % p for c in u)
            break
    if x is None or g0.dim != s.dim - 1:
        raise InternalConsistencyError("second center element is central; algebra not nilpotent?")
    return HeisenbergStep(z, y, x, g0)


def _projective(v: list, p: int) -> tuple:
    # scale so the first nonzero entry is 1; only the kernel matters
    j = next((i for i, x in enumerate(v) if x), None)
    if j is None:
        return tuple(v)
    f = pow(v[j], -1, p)
    return tuple(x * f % p for x in v)


@lru_cache(maxsize=None)
def _kernel_on(a: LieAlgebra, zs: Subspace, k: Subspace, lz: tuple) -> Subspace:
    """Kernel of the functional with values ``lz`` on the basis of ``zs`` (contains ``k``)."""
    if not any(lz):
        return zs
    j = lz.index(1)
    zj = zs.basis[j]
    gens = [
        tuple((u - lz[i] * w) % a.p for u, w in zip(zs.basis[i], zj))
        for i in range(zs.dim)
        if i != j
    ]
    return a.subspace(gens) + k


@lru_cache(maxsize=200_000)
def _polarize(a: LieAlgebra, s: Subspace, k: Subspace, vals: tuple) -> Subspace:
    if s.dim - k.dim <= 1:
        return s
    zs = center_mod(a, s, k)
    lz = [_lam_on(s, vals, v) for v in zs.basis]
    if zs.dim - k.dim > 1 or not any(lz):
        return _polarize(a, s, _kernel_on(a, zs, k, _projective(lz, a.p)), vals)
    step = _heisenberg_step(a, s, k)
    vals0 = tuple(_lam_on(s, vals, v) for v in step.g0.basis)
    return _polarize(a, step.g0, k, vals0)


def polarize(a: LieAlgebra, lam: DualVector, check: bool = True) -> Polarization:
    """A polarization of ``lam``; all four defining properties are checked before return."""
    if lam.algebra != a:
        raise ValueError("functional does not live on this algebra")
    full = a.full
    space = _polarize(a, full, Subspace.zero(a.p, a.dim), _vals_on(full, lam))
    pol = Polarization(a, lam, space)
    if check:
        try:
            pol.certify()
        except VerificationError as exc:
            raise InternalConsistencyError(f"polarize produced an invalid answer: {exc}") from exc
    return pol


def enumerate_polarizations(a: LieAlgebra, lam: DualVector) -> list[Polarization]:
    """Every polarization of ``lam``, by exhaustive search over subspaces containing g^lam."""
    stab = stabilizer_basis(lam)
    comp = stab.complement_indices()
    half = (a.dim + stab.dim) // 2 - stab.dim
    out = []
    for w in enumerate_subspaces(a.p, len(comp), half):
        vecs = []
        for row in w.basis:
            v = [0] * a.dim
            for c, x in zip(comp, row):
                v[c] = x
            vecs.append(v)
        cand = stab.extend(vecs)
        if is_isotropic(cand, lam) and a.is_subalgebra(cand):
            out.append(Polarization(a, lam, cand))
    return out


@dataclass
class LagrangianReport:
    fiber_size: int
    p_orbit_size: int
    orbit_size: int
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


_COMPONENT_LIMIT = 1 << 20


def p_orbit(a: LieAlgebra, s: Subspace, lam: DualVector) -> np.ndarray:
    """Sorted codes of ``Ad*_P lam`` for ``P = exp(s)``."""
    # exp(p) is generated by exp(v) for v running over a basis of p
    if a.order <= _COMPONENT_LIMIT:
        return subgroup_components(a, s.basis).component(lam.code)
    return closure(a, np.array([lam.code]), _generator_stack(a, s.basis, all_t=False))


def verify_lagrangian_fiber(pol: Polarization, omega: Orbit | None = None) -> LagrangianReport:
    """Check ``pi^-1 pi(lam) = Ad*_P lam`` and ``|pi^-1 pi(lam)|^2 = |Omega(lam)|``.

    ``omega`` may be passed when the orbit of ``lam`` is already known.
    """
    a, lam = pol.ambient, pol.lam
    e = pol.embedding
    fib = fiber(project(lam, e), e)
    porb = p_orbit(a, pol.space, lam)
    if omega is None:
        omega = orbit(lam)
    report = LagrangianReport(int(fib.size), int(porb.size), omega.size)
    report.checks["fiber_equals_P_orbit"] = bool(np.array_equal(fib, porb))
    report.checks["fiber_size_is_sqrt"] = fib.size * fib.size == omega.size
    report.checks["fiber_in_orbit"] = bool(omega.contains_codes(fib).all())
    if not report.ok:
        raise VerificationError(f"Lagrangian fiber check failed for {list(lam.coords)}", report)
    return report
