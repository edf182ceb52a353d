"""Multiplicities read off from orbit geometry.

For ``h`` inside ``g`` with restriction map ``pi: g* -> h*``, the
multiplicity of the G-irreducible attached to ``Omega`` in the induced
representation from the H-irreducible attached to ``omega`` is
``|pi^-1(omega) & Omega| / sqrt(|omega| |Omega|)``.  Tensor products are the
special case of the diagonal inside ``g + g``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coadjoint import (
    DualVector,
    Orbit,
    encode,
    fiber_intersection,
    orbit_labels,
    orbit_partition,
    project_codes,
)
from .errors import InternalConsistencyError
from .nilalg import LieAlgebra, SubalgebraEmbedding, diagonal, direct_sum, split_block

_PAIR_CHUNK = 1 << 21


def _exact_root(n: int) -> int:
    r = math.isqrt(n)
    if r * r != n:
        raise InternalConsistencyError(f"{n} is not a perfect square")
    return r


def _divide(count: int, omega: Orbit, Omega: Orbit, extra: int = 1) -> int:
    root = _exact_root(omega.size * Omega.size * extra)
    if count % root:
        raise InternalConsistencyError(
            f"non-integral multiplicity {count}/{root}: omega rep {list(omega.rep.coords)} (size {omega.size}), "
            f"Omega rep {list(Omega.rep.coords)} (size {Omega.size})"
        )
    return count // root


def _label(o: Orbit) -> str:
    return " ".join(str(c) for c in o.rep.coords)


@dataclass
class MultiplicityTable:
    """``entries[i, j] = m(row_i, col_j)``; rows are H-orbits (or pairs of G-orbits)."""

    row_labels: list[str]
    col_labels: list[str]
    entries: np.ndarray
    checks: dict[str, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "rows": self.row_labels,
            "cols": self.col_labels,
            "entries": [[int(v) for v in row] for row in self.entries],
            "checks": self.checks,
        }

    def csv_rows(self) -> list[list[str]]:
        rows = [["row\\col"] + self.col_labels]
        for lab, row in zip(self.row_labels, self.entries):
            rows.append([lab] + [str(int(v)) for v in row])
        return rows


def restriction_multiplicity(omega: Orbit, Omega: Orbit, e: SubalgebraEmbedding) -> int:
    """``|pi^-1(omega) & Omega| / sqrt(|omega| |Omega|)``, asserted integral."""
    return _divide(fiber_intersection(omega, Omega, e), omega, Omega)


def _fiber_counts(e: SubalgebraEmbedding, h_orbits: list[Orbit], Omega: Orbit, h_labels: np.ndarray):
    """Per H-orbit counts of ``pi^-1(omega) & Omega``, and which H-orbits lie inside ``pi(Omega)``."""
    proj = project_codes(e, Omega.coords_array())
    counts = np.bincount(h_labels[proj], minlength=len(h_orbits))
    image = np.unique(proj)
    inside = np.array([bool(np.isin(o.codes, image, assume_unique=True).all()) for o in h_orbits])
    return counts, inside


def branching_table(e: SubalgebraEmbedding, budget: int | None = None) -> MultiplicityTable:
    """All ``m(omega, Omega)``; support and both sum rules are checked."""
    g_orbits = orbit_partition(e.ambient, budget)
    h_orbits = orbit_partition(e.sub, budget)
    h_labels = orbit_labels(h_orbits)
    index = e.ambient.p**e.codim
    m = np.zeros((len(h_orbits), len(g_orbits)), dtype=np.int64)
    support_ok = True
    for j, Om in enumerate(g_orbits):
        counts, inside = _fiber_counts(e, h_orbits, Om, h_labels)
        for i, om in enumerate(h_orbits):
            m[i, j] = _divide(int(counts[i]), om, Om)
        # m > 0 exactly when omega is contained in pi(Omega)
        support_ok &= bool(((m[:, j] > 0) == inside).all())
    h_roots = np.array([o.sqrt_size for o in h_orbits], dtype=np.int64)
    g_roots = np.array([o.sqrt_size for o in g_orbits], dtype=np.int64)
    checks = {
        "support": support_ok,
        "column_sums": bool((h_roots @ m == g_roots).all()),
        "row_sums": bool((m @ g_roots == index * h_roots).all()),
        "non_negative": bool((m >= 0).all()),
    }
    table = MultiplicityTable([_label(o) for o in h_orbits], [_label(o) for o in g_orbits], m, checks)
    if not all(checks.values()):
        raise InternalConsistencyError(f"branching table checks failed: {checks}")
    return table


def induction_support(omega: Orbit, e: SubalgebraEmbedding, budget: int | None = None) -> list[tuple[Orbit, int]]:
    """Every G-orbit meeting ``pi^-1(omega)`` with its multiplicity."""
    if omega.algebra != e.sub:
        raise ValueError("omega is not an orbit of the subalgebra")
    out = []
    for Om in orbit_partition(e.ambient, budget):
        count = fiber_intersection(omega, Om, e)
        if count:
            m = _divide(count, omega, Om)
            if m <= 0:
                raise InternalConsistencyError("orbit meets the fiber but has multiplicity zero")
            out.append((Om, m))
    total = sum(m * Om.sqrt_size for Om, m in out)
    expected = e.ambient.p**e.codim * omega.sqrt_size
    if total != expected:
        raise InternalConsistencyError(f"induced dimension {total} != [G:H] sqrt|omega| = {expected}")
    return out


def _pair_sums(a: LieAlgebra, o1: Orbit, o2: Orbit):
    """Yield chunks of codes of ``lam1 + lam2`` over ``o1 x o2``."""
    small, big = (o1, o2) if o1.size <= o2.size else (o2, o1)
    xs, ys = small.coords_array(), big.coords_array()
    step = max(1, _PAIR_CHUNK // max(1, ys.shape[0]))
    for lo in range(0, xs.shape[0], step):
        sums = (xs[lo : lo + step, None, :] + ys[None, :, :]) % a.p
        yield encode(a, sums.reshape(-1, a.dim))


def tensor_multiplicity(Omega: Orbit, o1: Orbit, o2: Orbit) -> int:
    """``|{(l1, l2) in o1 x o2 : l1 + l2 in Omega}| / sqrt(|Omega| |o1| |o2|)``."""
    a = Omega.algebra
    if o1.algebra != a or o2.algebra != a:
        raise ValueError("orbits of different algebras")
    count = sum(int(Omega.contains_codes(c).sum()) for c in _pair_sums(a, o1, o2))
    return _divide(count, Omega, o1, o2.size)


def tensor_decomposition(o1: Orbit, o2: Orbit, budget: int | None = None) -> list[tuple[Orbit, int]]:
    """Multiplicity of every irreducible in the tensor product (all orbits, zeros included)."""
    a = o1.algebra
    orbits = orbit_partition(a, budget)
    labels = orbit_labels(orbits)
    counts = np.zeros(len(orbits), dtype=np.int64)
    for c in _pair_sums(a, o1, o2):
        counts += np.bincount(labels[c], minlength=len(orbits))
    out = [(Om, _divide(int(k), Om, o1, o2.size)) for Om, k in zip(orbits, counts)]
    if sum(m * Om.sqrt_size for Om, m in out) != o1.sqrt_size * o2.sqrt_size:
        raise InternalConsistencyError("tensor decomposition does not add up to the product dimension")
    return out


def tensor_table(a: LieAlgebra, budget: int | None = None) -> MultiplicityTable:
    """Rows: unordered pairs of orbits; columns: orbits."""
    orbits = orbit_partition(a, budget)
    rows, labels = [], []
    for i, o1 in enumerate(orbits):
        for o2 in orbits[i:]:
            rows.append([m for _, m in tensor_decomposition(o1, o2, budget)])
            labels.append(f"{_label(o1)} | {_label(o2)}")
    m = np.array(rows, dtype=np.int64).reshape(len(rows), len(orbits))
    return MultiplicityTable(labels, [_label(o) for o in orbits], m, {"row_sums": True})


# -- the diagonal reduction ---------------------------------------------------


def _block_maps(a: LieAlgebra, s: LieAlgebra) -> tuple[np.ndarray, np.ndarray]:
    # column k of the i-th map: coords of the i-th block of the k-th basis element of s
    x = np.zeros((a.dim, s.dim), dtype=np.int64)
    y = np.zeros((a.dim, s.dim), dtype=np.int64)
    for k, z in enumerate(s.basis):
        u, v = split_block(z, a.n)
        x[:, k] = a.coords(u)
        y[:, k] = a.coords(v)
    return x, y


def pair_functional(lam1: DualVector, lam2: DualVector) -> DualVector:
    """``(lam1, lam2)`` on ``g + g``: ``diag(x, y) -> lam1(x) + lam2(y)``."""
    a = lam1.algebra
    s = direct_sum(a, a)
    x, y = _block_maps(a, s)
    vals = (np.array(lam1.coords) @ x + np.array(lam2.coords) @ y) % a.p
    return DualVector(s, tuple(int(v) for v in vals))


def product_orbit(o1: Orbit, o2: Orbit) -> Orbit:
    """The G x G orbit ``o1 x o2`` as an orbit on ``g + g``."""
    a = o1.algebra
    s = direct_sum(a, a)
    x, y = _block_maps(a, s)
    l1 = o1.coords_array() @ x
    l2 = o2.coords_array() @ y
    pts = (l1[:, None, :] + l2[None, :, :]).reshape(-1, s.dim) % a.p
    return Orbit(s, np.sort(encode(s, pts)), o1.stab_dim + o2.stab_dim)


def diagonal_orbit(Omega: Orbit, e: SubalgebraEmbedding) -> Orbit:
    """``Omega`` transported to the diagonal subalgebra ``{diag(x, x)}``."""
    a = Omega.algebra
    h = e.sub
    # h basis k is diag(x_k, x_k); a functional takes value lam(x_k) on it
    x = np.zeros((a.dim, h.dim), dtype=np.int64)
    for k, z in enumerate(h.basis):
        u, _ = split_block(z, a.n)
        x[:, k] = a.coords(u)
    pts = Omega.coords_array() @ x % a.p
    return Orbit(h, np.sort(encode(h, pts)), Omega.stab_dim)


def tensor_via_diagonal(Omega: Orbit, o1: Orbit, o2: Orbit) -> int:
    """Tensor multiplicity through restriction from G x G to the diagonal copy of G."""
    e = diagonal(Omega.algebra)
    return restriction_multiplicity(diagonal_orbit(Omega, e), product_orbit(o1, o2), e)
