"""End-to-end checks comparing orbit geometry with the explicit oracle.

Every function returns plain dictionaries (JSON-ready) with a boolean
``pass`` entry; :func:`verify_all` aggregates them.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .characters import inner_product_matrix, kirillov_character
from .coadjoint import DualVector, orbit_partition, projection_dichotomy, stabilizer_basis
from .errors import OrbitkitError
from .linalg import Subspace
from .multiplicity import branching_table
from .nilalg import LieAlgebra, SubalgebraEmbedding, codim_one_subalgebras, ideal_chain_spaces
from .polarization import enumerate_polarizations, polarize, verify_lagrangian_fiber
from .repox import induce_class_function, induced_character, restrict

# exhaustive searches (polarization enumeration, hyperplane scans) stay below this many candidates
_SEARCH_LIMIT = 20_000


def _item(ok: bool, **details) -> dict:
    return {"pass": bool(ok), **details}


def check_orbits(a: LieAlgebra, budget: int | None = None) -> dict:
    orbits = orbit_partition(a, budget)
    sizes_ok = all(o.size == a.p ** (a.dim - o.stab_dim) for o in orbits)
    total = sum(o.size for o in orbits)
    return _item(sizes_ok and total == a.order, orbits=len(orbits), total=total, group_order=a.order)


def check_polarizations(a: LieAlgebra, budget: int | None = None, every_functional: bool = False) -> dict:
    """Certificate plus Lagrangian fiber for orbit representatives (or every functional)."""
    checked, failures = 0, []
    for o in orbit_partition(a, budget):
        lams = o.elements() if every_functional else [o.rep]
        for lam in lams:
            try:
                pol = polarize(a, lam)
                verify_lagrangian_fiber(pol, o)
            except OrbitkitError as exc:
                failures.append({"lambda": list(lam.coords), "error": str(exc)})
            checked += 1
    return _item(not failures, checked=checked, failures=failures[:10])


def _search_size(a: LieAlgebra, lam: DualVector) -> int:
    r = stabilizer_basis(lam).dim
    n, k = a.dim - r, (a.dim - r) // 2
    # number of k-dimensional subspaces of F_p^n (Gaussian binomial)
    num, den = 1, 1
    for i in range(k):
        num *= a.p ** (n - i) - 1
        den *= a.p ** (i + 1) - 1
    return num // den


def second_polarization(a: LieAlgebra, lam: DualVector):
    """A polarization different from ``polarize(a, lam)``, or None (none exists or search too large)."""
    first = polarize(a, lam).space
    if _search_size(a, lam) > _SEARCH_LIMIT:
        return None
    for pol in enumerate_polarizations(a, lam):
        if pol.space != first:
            return pol
    return None


def check_characters(a: LieAlgebra, budget: int | None = None) -> dict:
    """Orbit characters against induced-representation traces, degrees, independence of p."""
    orbits = orbit_partition(a, budget)
    chars = [kirillov_character(o) for o in orbits]
    formula_ok, degree_ok, indep_ok, indep_tested = True, True, True, 0
    for o, chi in zip(orbits, chars):
        formula_ok &= induced_character(polarize(a, o.rep)) == chi
        degree_ok &= chi.degree == o.sqrt_size
        other = second_polarization(a, o.rep)
        if other is not None:
            indep_tested += 1
            indep_ok &= induced_character(other) == chi
    gram = inner_product_matrix(chars, chars)
    n = len(chars)
    ortho = all(gram[i][j] == (i == j) for i in range(n) for j in range(n))
    squares = sum(c.degree**2 for c in chars) == a.order
    return {
        "character_formula": _item(formula_ok, orbits=n),
        "degree_is_sqrt_orbit_size": _item(degree_ok),
        "polarization_independence": _item(indep_ok, orbits_with_two_polarizations=indep_tested),
        "orthonormality": _item(ortho),
        "sum_of_squared_degrees": _item(squares, value=int(sum(c.degree**2 for c in chars)), group_order=a.order),
    }


def oracle_tables(e: SubalgebraEmbedding, budget: int | None = None) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """Oracle multiplicities, rows H-orbits and columns G-orbits, computed by restriction and by induction."""
    g, h = e.ambient, e.sub
    g_chars = [induced_character(polarize(g, o.rep)) for o in orbit_partition(g, budget)]
    h_chars = [induced_character(polarize(h, o.rep)) for o in orbit_partition(h, budget)]
    by_res = inner_product_matrix(h_chars, [restrict(chi, e) for chi in g_chars])
    by_ind = inner_product_matrix([induce_class_function(psi, e) for psi in h_chars], g_chars)
    return by_res, by_ind


def check_multiplicities(e: SubalgebraEmbedding, budget: int | None = None) -> dict:
    table = branching_table(e, budget)
    by_res, by_ind = oracle_tables(e, budget)
    geo = [[Fraction(int(v)) for v in row] for row in table.entries]
    integral = all(v.denominator == 1 and v >= 0 for row in by_res + by_ind for v in row)
    return _item(
        geo == by_res == by_ind and integral and all(table.checks.values()),
        shape=list(table.entries.shape),
        table_checks=table.checks,
        agrees_with_restriction=geo == by_res,
        agrees_with_induction=geo == by_ind,
    )


def check_chain(e: SubalgebraEmbedding) -> dict:
    """Each step of the ideal chain from g down to h is a codimension-one ideal."""
    a = e.ambient
    chain = ideal_chain_spaces(e)
    steps = []
    for big, small in zip(chain, chain[1:]):
        steps.append(small <= big and big.dim - small.dim == 1 and a.is_ideal(small, within=big))
    ends = chain[0] == a.full and chain[-1] == e.image
    return _item(all(steps) and ends, dims=[s.dim for s in chain])


def check_codim_one_ideals(a: LieAlgebra) -> dict:
    """Every codimension-one subalgebra found by a full hyperplane scan is an ideal."""
    subs = codim_one_subalgebras(a)
    return _item(all(a.is_ideal(s) for s in subs), found=len(subs))


def random_dichotomy_instances(algebras: list[LieAlgebra], count: int, seed: int = 0):
    """Seeded ``(lam0, embedding)`` pairs with ``g_0`` of codimension one in ``g``."""
    rng = random.Random(seed)
    pools = [(a, codim_one_subalgebras(a)) for a in algebras]
    out = []
    for _ in range(count):
        a, subs = rng.choice(pools)
        s = rng.choice(subs)
        e = SubalgebraEmbedding.of(a, a.restrict(s))
        lam0 = DualVector(e.sub, tuple(rng.randrange(a.p) for _ in range(e.sub.dim)))
        out.append((lam0, e))
    return out


def check_dichotomy(instances) -> dict:
    reports = [projection_dichotomy(lam0, e) for lam0, e in instances]
    cases = [r.case for r in reports]
    return _item(
        all(r.consistent for r in reports),
        instances=len(reports),
        case_counts={"1": cases.count(1), "2": cases.count(2)},
    )


def verify_all(a: LieAlgebra, sub: Subspace | None = None, budget: int | None = None, seed: int = 0) -> dict:
    """Every check that applies to ``a`` (and to ``h`` when given)."""
    items = {"orbit_partition": check_orbits(a, budget), "polarizations": check_polarizations(a, budget)}
    items.update(check_characters(a, budget))
    if sub is not None:
        e = SubalgebraEmbedding.of(a, a.restrict(sub))
        items["multiplicities"] = check_multiplicities(e, budget)
        items["ideal_chain"] = check_chain(e)
    if a.dim and a.p ** a.dim <= _SEARCH_LIMIT:
        items["codim_one_ideals"] = check_codim_one_ideals(a)
        if a.dim > 1:
            items["dichotomy"] = check_dichotomy(random_dichotomy_instances([a], 20, seed))
    return {"algebra": {"p": a.p, "N": a.n, "dim": a.dim}, "items": items, "pass": all(v["pass"] for v in items.values())}

