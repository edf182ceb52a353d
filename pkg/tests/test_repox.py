from itertools import product

import numpy as np
import pytest

from orbitkit.characters import inner_product, kirillov_character
from orbitkit.coadjoint import DualVector, orbit, orbit_partition
from orbitkit.errors import VerificationError
from orbitkit.field import CyclotomicNumber, zeta_power
from orbitkit.nilalg import SubalgebraEmbedding, exp, heisenberg
from orbitkit.polarization import Polarization, polarize
from orbitkit.repox import (
    coset_representatives,
    induce,
    induce_class_function,
    induced_character,
    linear_character,
    multiplicity_oracle,
    regular_character,
    restrict,
    trace_character,
    unipotent_group,
)


def test_group_tables_match_matrices(ut33):
    a = ut33
    g = unipotent_group(a)
    elems = [a.group_element(x) for x in a.iter_coords()]
    assert [list(map(list, m)) for m in g.mats] == [[list(r) for r in e.entries] for e in elems]
    for i, j in product(range(0, 27, 4), range(0, 27, 5)):
        assert int(g.mul(i, j)) == a.group_code(elems[i] @ elems[j])
    assert [int(c) for c in g.inverses] == [a.group_code(e.inverse()) for e in elems]
    with pytest.raises(ValueError):
        g.index(np.array([[[1, 0, 0], [0, 2, 0], [0, 0, 1]]]))


def test_zero_functional(ut33):
    pol = polarize(ut33, DualVector.zero(ut33))
    xi = linear_character(pol)
    assert (xi.exps == 0).all()
    rho = induce(xi)
    assert rho.dim == 1
    assert all(v == 1 for v in trace_character(rho).values())


def test_linear_character_example(ut33, E):
    lam = DualVector(ut33, (0, 0, 1))
    pol = Polarization.from_basis(ut33, lam, [E(2, 3), E(1, 3)])
    xi = linear_character(pol)
    assert xi.value(0) == 1
    for b, c in product(range(3), repeat=2):
        code = ut33.group_code(exp(E(2, 3) * b + E(1, 3) * c))
        assert xi.value(code) == zeta_power(c, 3)
    assert xi.check_multiplicative()
    with pytest.raises(ValueError):
        xi.value(ut33.code((1, 0, 0)))


def test_non_isotropic_subgroup_rejected(ut33):
    lam = DualVector(ut33, (0, 0, 1))
    bad = Polarization(ut33, lam, ut33.full)
    with pytest.raises(VerificationError):
        linear_character(bad)


def test_induced_representation_ut3(ut33):
    lam = DualVector(ut33, (0, 0, 1))
    rho = induce(linear_character(polarize(ut33, lam)))
    assert rho.dim == 3 == orbit(lam).sqrt_size
    assert rho.check_homomorphism()
    chi = trace_character(rho)
    assert chi.degree == 3
    assert chi == kirillov_character(orbit(lam))


def test_coset_representatives_are_minimal(ut33):
    g = unipotent_group(ut33)
    pol = polarize(ut33, DualVector(ut33, (0, 0, 1)))
    sub = g.subgroup_codes(pol.space)
    reps, which = coset_representatives(g, sub)
    assert len(reps) == 3
    for i, r in enumerate(reps):
        coset = np.flatnonzero(which == i)
        assert r == coset.min() and len(coset) == 9
        assert sorted(g.mul(np.full_like(sub, r), sub)) == sorted(coset)


def test_monomial_algebra(ut33):
    rho = induce(linear_character(polarize(ut33, DualVector(ut33, (0, 0, 2)))))
    g = unipotent_group(ut33)
    for i, j in ((1, 5), (7, 20), (13, 26)):
        prod = rho[i] @ rho[j]
        assert prod == rho[int(g.mul(i, j))]
        da, db = rho[i].dense(), rho[j].dense()
        dense = [[sum((da[r][k] * db[k][c] for k in range(3)), CyclotomicNumber.zero(3)) for c in range(3)] for r in range(3)]
        assert dense == prod.dense()
        assert sum((dense[k][k] for k in range(3)), CyclotomicNumber.zero(3)) == prod.trace()


def test_tensor_trace_is_product(ut33):
    r1 = induce(linear_character(polarize(ut33, DualVector(ut33, (0, 0, 1)))))
    r2 = induce(linear_character(polarize(ut33, DualVector(ut33, (1, 2, 0)))))
    t = r1.tensor(r2)
    assert t.dim == 3
    assert t.check_homomorphism()
    assert trace_character(t) == trace_character(r1) * trace_character(r2)


def test_multiplicity_oracle_examples(ut33):
    chars = [kirillov_character(o) for o in orbit_partition(ut33)]
    reg = regular_character(ut33)
    for chi in chars:
        assert multiplicity_oracle(chi, chi) == 1
        assert multiplicity_oracle(reg, chi) == chi.degree
    with pytest.raises(VerificationError):
        multiplicity_oracle(chars[0], reg)


def test_frobenius_reciprocity(ut33):
    a = ut33
    h = a.restrict(a.subspace([(0, 1, 0), (0, 0, 1)]))
    e = SubalgebraEmbedding.of(a, h)
    g_chars = [kirillov_character(o) for o in orbit_partition(a)]
    h_chars = [kirillov_character(o) for o in orbit_partition(h)]
    for psi in h_chars[::2]:
        ind = induce_class_function(psi, e)
        assert ind.degree == 3 * psi.degree
        for chi in g_chars:
            assert inner_product(ind, chi) == inner_product(psi, restrict(chi, e))


def test_oracle_on_heisenberg_orbits():
    a = heisenberg(4, 5)
    for o in orbit_partition(a)[::40]:
        assert induced_character(polarize(a, o.rep)) == kirillov_character(o)


def test_restrict_rejects_wrong_group(ut33, ut35):
    e = SubalgebraEmbedding.of(ut33, ut33.restrict(ut33.subspace([(0, 0, 1)])))
    with pytest.raises(ValueError):
        restrict(kirillov_character(orbit(DualVector.zero(ut35))), e)
    with pytest.raises(ValueError):
        induce_class_function(kirillov_character(orbit(DualVector.zero(ut33))), e)
