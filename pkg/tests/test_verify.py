from orbitkit.coadjoint import DualVector
from orbitkit.nilalg import SubalgebraEmbedding, heisenberg, ut
from orbitkit.verify import (
    check_chain,
    check_characters,
    check_codim_one_ideals,
    check_dichotomy,
    check_multiplicities,
    check_orbits,
    check_polarizations,
    random_dichotomy_instances,
    second_polarization,
    verify_all,
)


def test_verify_all_ut3_with_subalgebra(ut33):
    report = verify_all(ut33, ut33.subspace([(0, 1, 0), (0, 0, 1)]))
    assert report["pass"], report
    assert set(report["items"]) >= {
        "orbit_partition",
        "polarizations",
        "character_formula",
        "orthonormality",
        "multiplicities",
        "ideal_chain",
        "dichotomy",
    }


def test_individual_checks(ut35):
    assert check_orbits(ut35)["pass"]
    assert check_polarizations(ut35)["checked"] == 29
    assert all(item["pass"] for item in check_characters(ut35).values())
    assert check_codim_one_ideals(ut35)["found"] == 6


def test_second_polarization(ut33):
    lam = DualVector(ut33, (0, 0, 1))
    other = second_polarization(ut33, lam)
    assert other is not None and all(other.checks().values())
    assert second_polarization(ut33, DualVector.zero(ut33)) is None


def test_multiplicity_and_chain_checks(ut33):
    for vecs in ([(0, 0, 1)], [(1, 0, 0), (0, 0, 1)], [(0, 1, 0)]):
        e = SubalgebraEmbedding.of(ut33, ut33.restrict(ut33.subspace(vecs)))
        assert check_multiplicities(e)["pass"]
        assert check_chain(e)["pass"]


def test_dichotomy_instances_are_seeded():
    algebras = [ut(3, 3), heisenberg(4, 5)]
    a = random_dichotomy_instances(algebras, 10, seed=3)
    b = random_dichotomy_instances(algebras, 10, seed=3)
    assert [(x.coords, e.image) for x, e in a] == [(x.coords, e.image) for x, e in b]
    result = check_dichotomy(a)
    assert result["pass"] and result["instances"] == 10
