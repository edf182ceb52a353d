"""The dual space g*, coadjoint orbits and projections to subalgebra duals.

A functional is stored by its values on the algebra basis.  The coadjoint
action is ``(Ad*_g lam)(x) = lam(g^-1 x g)``, which in coordinates is the
matrix ``A_g`` with rows ``coords(g^-1 b_i g)``: ``Ad*_g lam = A_g lam``.

Bulk work (orbit closure, partitions, projections) runs on numpy arrays of
coordinates; orbit elements are kept as sorted integer codes (coordinates
packed base p, see :meth:`LieAlgebra.code`).
"""

from __future__ import annotations

import os
from itertools import product
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import BudgetExceeded, InternalConsistencyError
from .linalg import Subspace, nullspace, rank, rref
from .nilalg import (
    GroupElement,
    LieAlgebra,
    SubalgebraEmbedding,
    _exp_raw,
    _mm,
    adjoint,
    log,
    positions,
)

DEFAULT_BUDGET = 20_000_000


def default_budget() -> int:
    env = os.environ.get("ORBITKIT_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class DualVector:
    """``lam`` in g*, given by ``coords[i] = lam(b_i)``."""

    algebra: LieAlgebra
    coords: tuple[int, ...]

    def __post_init__(self):
        a = self.algebra
        if len(self.coords) != a.dim:
            raise ValueError(f"dual vector needs {a.dim} coordinates, got {len(self.coords)}")
        object.__setattr__(self, "coords", tuple(int(c) % a.p for c in self.coords))

    @classmethod
    def zero(cls, a: LieAlgebra) -> DualVector:
        return cls(a, (0,) * a.dim)

    @classmethod
    def from_code(cls, a: LieAlgebra, code: int) -> DualVector:
        return cls(a, a.decode(int(code)))

    @property
    def code(self) -> int:
        return self.algebra.code(self.coords)

    def __call__(self, x: Sequence[int]) -> int:
        """Evaluate on an element given by algebra coordinates."""
        return sum(c * v for c, v in zip(self.coords, x)) % self.algebra.p

    def _other(self, other: DualVector):
        if not isinstance(other, DualVector) or other.algebra != self.algebra:
            raise ValueError("dual vectors of different algebras")

    def __add__(self, other: DualVector) -> DualVector:
        self._other(other)
        return DualVector(self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: DualVector) -> DualVector:
        self._other(other)
        return DualVector(self.algebra, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> DualVector:
        return DualVector(self.algebra, tuple(-a for a in self.coords))

    def __mul__(self, c: int) -> DualVector:
        return DualVector(self.algebra, tuple(c * a for a in self.coords))

    __rmul__ = __mul__

    def __repr__(self):
        return f"DualVector({list(self.coords)})"


# -- coordinate helpers -------------------------------------------------------


@lru_cache(maxsize=None)
def _weights(a: LieAlgebra) -> np.ndarray:
    w = np.array([a.p ** (a.dim - 1 - i) for i in range(a.dim)], dtype=np.int64)
    w.setflags(write=False)
    return w


def encode(a: LieAlgebra, coords: np.ndarray) -> np.ndarray:
    """Row-wise codes of an ``(m, dim)`` coordinate array."""
    if a.dim == 0:
        return np.zeros(len(coords), dtype=np.int64)
    return np.asarray(coords, dtype=np.int64) @ _weights(a)


def decode(a: LieAlgebra, codes: np.ndarray) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    out = np.empty((len(codes), a.dim), dtype=np.int64)
    rest = codes.copy()
    for i in range(a.dim - 1, -1, -1):
        rest, out[:, i] = np.divmod(rest, a.p)
    return out


def all_coords(a: LieAlgebra) -> np.ndarray:
    return decode(a, np.arange(a.order, dtype=np.int64))


# -- the action ---------------------------------------------------------------


def coadjoint_matrix(a: LieAlgebra, g: GroupElement) -> np.ndarray:
    """``A_g`` with ``Ad*_g lam = A_g @ lam``; rejects ``g`` outside exp(a)."""
    if g.n != a.n or g.p != a.p:
        raise ValueError("group element has the wrong size or modulus")
    try:
        a.coords(log(g))
    except ValueError:
        raise ValueError("group element is not in exp of the algebra") from None
    ginv = g.inverse()
    rows = [a.coords(adjoint(ginv, b)) for b in a.basis]
    return np.array(rows, dtype=np.int64).reshape(a.dim, a.dim)


@lru_cache(maxsize=None)
def _exp_coadjoint(a: LieAlgebra, x: tuple[int, ...]) -> tuple:
    # rows of A_{exp(x)}: coords of exp(-x) b_i exp(x)
    p = a.p
    xm = a.element(x).entries
    g = _exp_raw(xm, p)
    ginv = _exp_raw(tuple(tuple(-v % p for v in r) for r in xm), p)
    rows = []
    for b in a.basis:
        m = _mm(_mm(ginv, b.entries, p), g, p)
        v = tuple(m[i][j] for i, j in positions(a.n))
        rows.append(a.space.coords(v))
    return tuple(rows)


def exp_coadjoint_matrix(a: LieAlgebra, x: Sequence[int]) -> np.ndarray:
    """``A_{exp(x)}`` for ``x`` given in algebra coordinates (cached)."""
    rows = _exp_coadjoint(a, tuple(int(c) % a.p for c in x))
    return np.array(rows, dtype=np.int64).reshape(a.dim, a.dim)


def coadjoint_act(g: GroupElement, lam: DualVector) -> DualVector:
    a = lam.algebra
    mu = (coadjoint_matrix(a, g) @ np.array(lam.coords, dtype=np.int64)) % a.p
    return DualVector(a, tuple(int(v) for v in mu))


def _generator_stack(a: LieAlgebra, directions: Sequence[Sequence[int]], all_t: bool) -> np.ndarray:
    """Stack the transposed matrices of exp(t x) side by side: shape (dim, k*dim)."""
    p, d = a.p, a.dim
    mats = []
    for x in directions:
        ts = range(1, p) if all_t else (1,)
        for t in ts:
            mats.append(exp_coadjoint_matrix(a, [t * c for c in x]).T)
    if not mats:
        return np.zeros((d, 0), dtype=np.int64)
    return np.concatenate(mats, axis=1)


def _unit_vectors(d: int):
    return [tuple(int(i == j) for j in range(d)) for i in range(d)]


_MASK_LIMIT = 1 << 22


def closure(a: LieAlgebra, seeds: np.ndarray, stack: np.ndarray) -> np.ndarray:
    """Sorted codes of the closure of ``seeds`` (codes) under the stacked generators."""
    p, d = a.p, a.dim
    seen_codes = np.unique(np.asarray(seeds, dtype=np.int64))
    k = stack.shape[1] // d if d else 0
    if not k:
        return seen_codes
    small = a.order <= _MASK_LIMIT
    if small:
        mask = np.zeros(a.order, dtype=bool)
        mask[seen_codes] = True
    pts = decode(a, seen_codes)
    while len(pts):
        imgs = (pts @ stack % p).reshape(len(pts) * k, d)
        codes = encode(a, imgs)
        if small:
            fresh = ~mask[codes]
            codes, imgs = codes[fresh], imgs[fresh]
            codes, idx = np.unique(codes, return_index=True)
            mask[codes] = True
        else:
            codes, idx = np.unique(codes, return_index=True)
            fresh = ~np.isin(codes, seen_codes, assume_unique=True)
            codes, idx = codes[fresh], idx[fresh]
            seen_codes = np.union1d(seen_codes, codes)
        pts = imgs[idx]
    return np.flatnonzero(mask) if small else seen_codes


# -- stabilizers and orbits ---------------------------------------------------


@lru_cache(maxsize=None)
def _structure_tensor(a: LieAlgebra) -> np.ndarray:
    t = np.array(a.structure, dtype=np.int64).reshape(a.dim, a.dim, a.dim)
    t.setflags(write=False)
    return t


def form_array(lam: DualVector) -> np.ndarray:
    """``M[i, j] = lam([b_i, b_j])`` as an int64 array."""
    a = lam.algebra
    return _structure_tensor(a) @ np.array(lam.coords, dtype=np.int64) % a.p


def form_matrix(lam: DualVector) -> list[list[int]]:
    """``M[i][j] = lam([b_i, b_j])``, the matrix of the alternating form B_lam."""
    return form_array(lam).tolist()


def stabilizer_basis(lam: DualVector) -> Subspace:
    """The radical ``{x : lam([x, g]) = 0}`` of B_lam, in algebra coordinates."""
    a = lam.algebra
    m = form_matrix(lam)
    return nullspace(m, a.dim, a.p)


def stabilizer_dim(lam: DualVector) -> int:
    return lam.algebra.dim - rank(form_matrix(lam), lam.algebra.p)


class Orbit:
    """A coadjoint orbit, stored as the sorted codes of its elements."""

    def __init__(self, algebra: LieAlgebra, codes: np.ndarray, stab_dim: int):
        self.algebra = algebra
        self.codes = np.asarray(codes, dtype=np.int64)
        self.codes.setflags(write=False)
        self.stab_dim = stab_dim

    @property
    def size(self) -> int:
        return int(self.codes.size)

    def __len__(self):
        return self.size

    @property
    def rep_code(self) -> int:
        return int(self.codes[0])

    @property
    def rep(self) -> DualVector:
        return DualVector.from_code(self.algebra, self.rep_code)

    @property
    def half_dim(self) -> int:
        """``k`` with ``|Omega| = q^(2k)``; ``q^k`` is the degree of its representation."""
        return (self.algebra.dim - self.stab_dim) // 2

    @property
    def sqrt_size(self) -> int:
        return self.algebra.p**self.half_dim

    def elements(self) -> list[DualVector]:
        return [DualVector.from_code(self.algebra, c) for c in self.codes]

    def coords_array(self) -> np.ndarray:
        return decode(self.algebra, self.codes)

    def contains_codes(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        idx = np.searchsorted(self.codes, codes)
        idx = np.minimum(idx, self.size - 1)
        return self.codes[idx] == codes

    def __contains__(self, lam: DualVector) -> bool:
        if lam.algebra != self.algebra:
            return False
        return bool(self.contains_codes(np.array([lam.code]))[0])

    def __eq__(self, other):
        if not isinstance(other, Orbit):
            return NotImplemented
        return self.algebra == other.algebra and np.array_equal(self.codes, other.codes)

    def __hash__(self):
        return hash((self.algebra, self.rep_code, self.size))

    def __repr__(self):
        return f"Orbit(rep={list(self.rep.coords)}, size={self.size})"

    def to_json(self, elements: bool = False) -> dict:
        out = {"rep": list(self.rep.coords), "size": self.size, "stab_dim": self.stab_dim}
        if elements:
            out["elements"] = [list(map(int, r)) for r in self.coords_array()]
        return out


def _expected_size(a: LieAlgebra, stab_dim: int) -> int:
    return a.p ** (a.dim - stab_dim)


def orbit(lam: DualVector) -> Orbit:
    """Breadth-first closure of ``{lam}`` under ``exp(t b_i)``, all t and i.

    The result is checked against ``|Omega| = q^(dim g - dim g^lam)``.
    """
    a = lam.algebra
    stack = _generator_stack(a, _unit_vectors(a.dim), all_t=True)
    codes = closure(a, np.array([lam.code]), stack)
    sd = stabilizer_dim(lam)
    if codes.size != _expected_size(a, sd):
        raise InternalConsistencyError(
            f"orbit of {list(lam.coords)} has {codes.size} points but the stabilizer "
            f"predicts {_expected_size(a, sd)}"
        )
    return Orbit(a, codes, sd)


def check_budget(count: int, budget: int | None):
    budget = default_budget() if budget is None else budget
    if count > budget:
        raise BudgetExceeded(count, budget)


def orbit_partition(a: LieAlgebra, budget: int | None = None) -> list[Orbit]:
    """All coadjoint orbits, ordered by canonical (minimal) representative.

    Orbits are the connected components of the graph on g* whose edges are
    ``lam -> Ad*_{exp(b_i)} lam``.  ``exp(t b_i) = exp(b_i)^t``, so these
    generators reach the same points as the full one-parameter subgroups.
    """
    check_budget(a.order, budget)
    return list(_partition(a))


class Components:
    """Orbits of the subgroup generated by some exp(x), as a labelling of all of g*."""

    def __init__(self, labels: np.ndarray):
        self.labels = labels
        self.order = np.argsort(labels, kind="stable")
        sorted_labels = labels[self.order]
        self.starts = np.concatenate(([0], np.flatnonzero(np.diff(sorted_labels)) + 1, [labels.size]))
        for arr in (self.labels, self.order, self.starts):
            arr.setflags(write=False)

    def __len__(self):
        return self.starts.size - 1

    def groups(self) -> list[np.ndarray]:
        # stable argsort keeps every group sorted by code
        return [self.order[self.starts[i] : self.starts[i + 1]] for i in range(len(self))]

    def component(self, code: int) -> np.ndarray:
        i = self.labels[code]
        return self.order[self.starts[i] : self.starts[i + 1]]


@lru_cache(maxsize=512)
def subgroup_components(a: LieAlgebra, directions: tuple[tuple[int, ...], ...]) -> Components:
    """Connected components of g* under the maps Ad*_{exp(x)}, x in ``directions``."""
    n = a.order
    if a.dim == 0 or not directions:
        return Components(np.arange(n, dtype=np.int64))
    pts = all_coords(a)
    codes = np.arange(n, dtype=np.int64)
    src, dst = [], []
    for x in directions:
        src.append(codes)
        dst.append(encode(a, pts @ exp_coadjoint_matrix(a, x).T % a.p))
    src = np.concatenate(src)
    dst = np.concatenate(dst)
    graph = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(n, n))
    _, labels = connected_components(graph, directed=True, connection="weak")
    return Components(labels.astype(np.int64))


@lru_cache(maxsize=32)
def _partition(a: LieAlgebra) -> tuple[Orbit, ...]:
    n = a.order
    if a.dim == 0:
        return (Orbit(a, np.zeros(1, dtype=np.int64), 0),)
    groups = subgroup_components(a, tuple(_unit_vectors(a.dim))).groups()
    orbits = []
    for grp in groups:
        rep = DualVector.from_code(a, int(grp[0]))
        sd = stabilizer_dim(rep)
        if grp.size != _expected_size(a, sd):
            raise InternalConsistencyError(
                f"orbit of {list(rep.coords)} has {grp.size} points, expected {_expected_size(a, sd)}"
            )
        orbits.append(Orbit(a, grp, sd))
    orbits.sort(key=lambda o: o.rep_code)
    total = sum(o.size for o in orbits)
    if total != n:
        raise InternalConsistencyError(f"orbits cover {total} of {n} functionals")
    return tuple(orbits)


def orbit_labels(orbits: Sequence[Orbit]) -> np.ndarray:
    """``labels[code]`` = index of the orbit containing that functional."""
    a = orbits[0].algebra
    labels = np.full(a.order, -1, dtype=np.int64)
    for i, o in enumerate(orbits):
        labels[o.codes] = i
    return labels


# -- projections --------------------------------------------------------------


def _inclusion(e: SubalgebraEmbedding) -> np.ndarray:
    return np.array(e.inclusion, dtype=np.int64).reshape(e.sub.dim, e.ambient.dim)


def project(lam: DualVector, e: SubalgebraEmbedding) -> DualVector:
    """Restriction ``lam -> lam|_h``."""
    if lam.algebra != e.ambient:
        raise ValueError("functional does not live on the ambient algebra")
    p = e.ambient.p
    coords = tuple(sum(r * c for r, c in zip(row, lam.coords)) % p for row in e.inclusion)
    return DualVector(e.sub, coords)


def project_codes(e: SubalgebraEmbedding, coords: np.ndarray) -> np.ndarray:
    """Codes on h of the restrictions of an ``(m, dim g)`` coordinate array."""
    return encode(e.sub, coords @ _inclusion(e).T % e.ambient.p)


def fiber_intersection(omega: Orbit, Omega: Orbit, e: SubalgebraEmbedding) -> int:
    """``|{mu in Omega : mu|_h in omega}|``."""
    if omega.algebra != e.sub or Omega.algebra != e.ambient:
        raise ValueError("orbits do not match the embedding")
    return int(omega.contains_codes(project_codes(e, Omega.coords_array())).sum())


@lru_cache(maxsize=4096)
def _fiber_data(e: SubalgebraEmbedding) -> tuple[np.ndarray, np.ndarray]:
    # column i of the first array extends the i-th unit functional of h;
    # the second holds the codes of ann(h), the fiber over 0
    a = e.ambient
    p, d, k = a.p, a.dim, e.sub.dim
    inc = [list(r) for r in e.inclusion]
    sections = np.zeros((d, k), dtype=np.int64)
    for i in range(k):
        aug = [row + [int(j == i)] for j, row in enumerate(inc)]
        red, piv = rref(aug, p)
        if d in piv:
            raise InternalConsistencyError("restriction map is not onto")
        for row, c in zip(red, piv):
            sections[c, i] = row[d]
    ann = Subspace.span(inc, p, d).annihilator()
    if ann.dim == 0:
        offsets = np.zeros((1, d), dtype=np.int64)
    else:
        combos = np.array(list(product(range(p), repeat=ann.dim)), dtype=np.int64)
        offsets = combos @ np.array(ann.basis, dtype=np.int64) % p
    sections.setflags(write=False)
    offsets.setflags(write=False)
    return sections, offsets


def fiber(lam0: DualVector, e: SubalgebraEmbedding) -> np.ndarray:
    """Sorted codes of ``pi^-1(lam0)``: every extension of ``lam0`` to the ambient algebra."""
    a = e.ambient
    if lam0.algebra != e.sub:
        raise ValueError("functional does not live on the subalgebra")
    sections, offsets = _fiber_data(e)
    base = sections @ np.array(lam0.coords, dtype=np.int64)
    return np.sort(encode(a, (offsets + base) % a.p))


# -- the codimension-one dichotomy -----------------------------------------------


@dataclass
class DichotomyReport:
    case: int
    lam0: tuple[int, ...]
    stabilizer: Subspace
    omega_size: int
    orbit_sizes: list[int] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "lambda0": list(self.lam0),
            "stabilizer_dim": self.stabilizer.dim,
            "omega_size": self.omega_size,
            "orbit_sizes": self.orbit_sizes,
            "checks": self.checks,
        }


def relative_stabilizer(lam0: DualVector, e: SubalgebraEmbedding) -> Subspace:
    """``{x in g : lam0([x, g_0]) = 0}`` for an ideal ``g_0`` of ``g``."""
    a = e.ambient
    units = _unit_vectors(a.dim)
    # one linear form x -> lam0([x, y]) per basis element y of g_0
    rows = [[lam0(e.pull(a.bracket_coords(x, y))) for x in units] for y in e.inclusion]
    return nullspace(rows, a.dim, a.p)


def _ideal_coadjoint_matrix(e: SubalgebraEmbedding, x: Sequence[int]) -> np.ndarray:
    # action of exp(x) in G on g_0* (g_0 an ideal): rows = sub coords of exp(-x) y exp(x)
    a, h = e.ambient, e.sub
    g = a.group_element(x)
    ginv = g.inverse()
    rows = [h.coords(adjoint(ginv, y)) for y in h.basis]
    return np.array(rows, dtype=np.int64).reshape(h.dim, h.dim)


def projection_dichotomy(lam0: DualVector, e: SubalgebraEmbedding) -> DichotomyReport:
    """Classify ``lam0`` on a codimension-one subalgebra ``g_0`` and verify the claims.

    Case 1 (``g^lam0`` inside ``g_0``): the fiber over ``lam0`` lies in a single
    orbit Omega, ``|Omega| = q^2 |omega|``, and Omega is the disjoint union of the
    fibers over the translates ``Ad*_{exp(tu)} omega``.  Case 2: every orbit
    meeting the fiber projects bijectively onto ``omega``.
    """
    a, h = e.ambient, e.sub
    if e.codim != 1:
        raise ValueError(f"expected a codimension-one subalgebra, got codimension {e.codim}")
    if lam0.algebra != h:
        raise ValueError("lam0 must live on the subalgebra")
    if not a.is_ideal(e.image):
        raise InternalConsistencyError("codimension-one subalgebra is not an ideal")
    p = a.p
    stab = relative_stabilizer(lam0, e)
    omega = orbit(lam0)
    case = 1 if stab <= e.image else 2
    report = DichotomyReport(case, lam0.coords, stab, omega.size)
    fib = fiber(lam0, e)
    hit = []
    seen = np.zeros(0, dtype=np.int64)
    for c in fib:
        if seen.size and np.isin(c, seen):
            continue
        Om = orbit(DualVector.from_code(a, int(c)))
        hit.append(Om)
        seen = np.union1d(seen, Om.codes)
    report.orbit_sizes = [o.size for o in hit]
    if case == 1:
        report.checks["fiber_in_one_orbit"] = len(hit) == 1
        Om = hit[0]
        report.checks["size_q2"] = Om.size == p * p * omega.size
        u = tuple(int(k == e.image.complement_indices()[0]) for k in range(a.dim))
        parts = []
        for t in range(p):
            m = _ideal_coadjoint_matrix(e, [t * c for c in u])
            wt = np.unique(encode(h, omega.coords_array() @ m.T % p))
            parts.append(wt)
        allw = np.concatenate(parts)
        report.checks["translates_disjoint"] = np.unique(allw).size == allw.size
        proj = project_codes(e, Om.coords_array())
        report.checks["union_is_orbit"] = bool(np.isin(proj, allw).all()) and Om.size == allw.size * p
    else:
        ok_bij, ok_single = True, True
        for Om in hit:
            proj = project_codes(e, Om.coords_array())
            ok_bij &= Om.size == omega.size and np.array_equal(np.sort(proj), omega.codes)
            ok_single &= int((proj == lam0.code).sum()) == 1
        report.checks["bijection"] = bool(ok_bij)
        report.checks["single_point_in_fiber"] = bool(ok_single)
    return report
