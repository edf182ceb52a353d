from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitkit.linalg import Subspace, enumerate_subspaces
from orbitkit.nilalg import (
    GroupElement,
    NilMatrix,
    SubalgebraEmbedding,
    adjoint,
    bracket,
    build_algebra,
    center,
    codim_one_subalgebras,
    diagonal,
    direct_sum,
    exp,
    generated_subalgebra,
    heisenberg,
    ideal_chain,
    ideal_chain_spaces,
    log,
    split_block,
    ut,
)


def unit(i, j, n=3, p=5):
    return NilMatrix.unit(i, j, n, p)


@st.composite
def nil_matrices(draw, n=None, p=None):
    n = n or draw(st.integers(2, 4))
    p = p or draw(st.sampled_from([q for q in (5, 7) if q >= n]))
    rows = [[draw(st.integers(0, p - 1)) if j > i else 0 for j in range(n)] for i in range(n)]
    return NilMatrix(n, p, rows)


@st.composite
def matrix_pairs(draw):
    x = draw(nil_matrices())
    return x, draw(nil_matrices(x.n, x.p)), draw(nil_matrices(x.n, x.p))


def test_bracket_examples():
    assert bracket(unit(1, 2), unit(2, 3)) == unit(1, 3)
    assert bracket(unit(1, 2), unit(1, 3)).is_zero()
    with pytest.raises(ValueError):
        bracket(unit(1, 2), unit(1, 2, 4))


def test_matrix_validation():
    with pytest.raises(ValueError):
        NilMatrix(2, 3, [[1, 0], [0, 0]])
    with pytest.raises(ValueError):
        GroupElement(2, 3, [[1, 0], [1, 1]])


@given(matrix_pairs())
def test_bracket_is_a_lie_bracket(xyz):
    x, y, z = xyz
    assert bracket(x, x).is_zero()
    assert bracket(x, y) == -bracket(y, x)
    jac = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
    assert jac.is_zero()


def test_exp_log_examples():
    assert exp(NilMatrix.zero(3, 5)) == GroupElement.identity(3, 5)
    assert log(GroupElement.identity(3, 5)).is_zero()
    assert adjoint(GroupElement.identity(3, 5), unit(2, 3)) == unit(2, 3)
    assert adjoint(exp(unit(1, 2)), unit(2, 3)) == unit(2, 3) + unit(1, 3)
    assert adjoint(exp(unit(1, 2) + unit(2, 3)), unit(1, 3)) == unit(1, 3)


@given(nil_matrices())
def test_log_inverts_exp(x):
    g = exp(x)
    assert log(g) == x
    assert exp(log(g)) == g
    assert g @ g.inverse() == GroupElement.identity(x.n, x.p)


@given(nil_matrices(), st.integers(-3, 3), st.integers(-3, 3))
def test_one_parameter_subgroup(x, s, t):
    # exp(sx) exp(tx) = exp((s + t) x)
    assert exp(x * s) @ exp(x * t) == exp(x * (s + t))


@given(matrix_pairs())
def test_adjoint_is_an_automorphism(xyz):
    x, y, z = xyz
    g = exp(z)
    assert adjoint(g, bracket(x, y)) == bracket(adjoint(g, x), adjoint(g, y))


def test_build_algebra_examples():
    a = build_algebra(5, 3, [unit(1, 2), unit(2, 3)])
    assert a.dim == 3
    assert set(a.basis) == {unit(1, 2), unit(1, 3), unit(2, 3)}
    assert build_algebra(5, 3, []).dim == 0
    assert build_algebra(5, 4, [unit(i, i + 1, 4) for i in (1, 2, 3)]).dim == 6


def test_build_algebra_errors():
    with pytest.raises(ValueError):
        build_algebra(4, 3, [])
    with pytest.raises(ValueError):
        build_algebra(3, 4, [])
    with pytest.raises(ValueError):
        build_algebra(5, 3, [[[1, 0, 0], [0, 0, 0], [0, 0, 0]]])


def test_basis_order_is_level_major():
    a = ut(3, 5)
    assert a.basis == (unit(1, 2), unit(2, 3), unit(1, 3))


def test_generated_subalgebra_inside_ambient():
    a = ut(4, 5)
    s = generated_subalgebra(a, [a.coords(unit(1, 2, 4)), a.coords(unit(2, 3, 4))])
    assert s.dim == 3 and a.is_subalgebra(s)


@pytest.mark.parametrize("N, p", [(3, 3), (3, 5), (4, 5)])
def test_structure_constants_against_matrices(N, p):
    a = ut(N, p)
    for i, j in product(range(a.dim), repeat=2):
        assert a.element(a.structure[i][j]) == bracket(a.basis[i], a.basis[j])


def test_codes_round_trip(ut33):
    assert [ut33.decode(ut33.code(c)) for c in ut33.iter_coords()] == list(ut33.iter_coords())
    assert [ut33.code(c) for c in ut33.iter_coords()] == list(range(27))
    g = ut33.group_element((1, 2, 0))
    assert ut33.group_code(g) == ut33.code((1, 2, 0))


def test_center_examples():
    assert center(ut(3, 5)) == ut(3, 5).subspace([(0, 0, 1)])
    a4 = ut(4, 5)
    assert center(a4) == a4.subspace([a4.coords(unit(1, 4, 4))])
    ab = build_algebra(5, 3, [unit(1, 2), unit(1, 3)])
    assert center(ab) == ab.full


def test_heisenberg_presets():
    h = heisenberg(4, 5)
    assert h.dim == 5
    assert center(h) == h.subspace([h.coords(unit(1, 4, 4))])
    assert heisenberg(3, 3) == ut(3, 3)


def _embedding(a, vecs):
    return SubalgebraEmbedding.of(a, a.restrict(a.subspace(vecs)))


def test_ideal_chain_examples(ut33):
    a = ut33
    assert ideal_chain_spaces(_embedding(a, a.full.basis)) == [a.full]
    chain = ideal_chain_spaces(_embedding(a, [(0, 0, 1)]))
    assert chain == [a.full, a.subspace([(0, 1, 0), (0, 0, 1)]), a.subspace([(0, 0, 1)])]
    assert len(ideal_chain(_embedding(a, []))) == 4


@pytest.mark.parametrize("vecs", [[], [(1, 0, 0)], [(0, 1, 0)], [(1, 1, 0)], [(1, 0, 0), (0, 0, 1)], [(1, 2, 1), (0, 0, 1)]])
def test_ideal_chain_steps(ut33, vecs):
    a = ut33
    e = _embedding(a, vecs)
    chain = ideal_chain_spaces(e)
    assert chain[0] == a.full and chain[-1] == e.image
    for big, small in zip(chain, chain[1:]):
        assert big.dim - small.dim == 1
        assert small <= big and a.is_ideal(small, within=big)


def test_ideal_chain_ut4(E):
    a = ut(4, 5)
    e = _embedding(a, [a.coords(unit(1, 2, 4))])
    chain = ideal_chain_spaces(e)
    assert [s.dim for s in chain] == list(range(6, 0, -1))
    assert all(a.is_ideal(s, within=b) for b, s in zip(chain, chain[1:]))


def _brute_codim_one(a):
    """Hyperplanes closed under the matrix bracket, from an independent subspace enumeration."""
    out = []
    for s in enumerate_subspaces(a.p, a.dim, a.dim - 1):
        mats = [a.element(v) for v in s.basis]
        if all(bracket(x, y) in a and a.coords(bracket(x, y)) in s for x in mats for y in mats):
            out.append(s)
    return set(out)


@pytest.mark.parametrize("N, p", [(3, 3), (3, 5), (4, 5)])
def test_codim_one_subalgebras(N, p):
    a = ut(N, p)
    found = codim_one_subalgebras(a)
    assert set(found) == _brute_codim_one(a)
    # every such subalgebra is an ideal
    assert all(a.is_ideal(s) for s in found)


def test_direct_sum_and_diagonal():
    a = ut(3, 3)
    s = direct_sum(a, a)
    assert s.dim == 6 and s.n == 6
    e = diagonal(a)
    assert e.sub.dim == 3 and e.codim == 3
    for z in e.sub.basis:
        x, y = split_block(z, 3)
        assert x == y and x in a
    with pytest.raises(ValueError):
        direct_sum(ut(3, 3), ut(3, 5))


def test_embedding_push_pull(ut33):
    e = _embedding(ut33, [(0, 1, 0), (0, 0, 1)])
    for y in product(range(3), repeat=2):
        assert e.pull(e.push(y)) == y
    with pytest.raises(ValueError):
        ut33.restrict(ut33.subspace([(1, 0, 0), (0, 1, 0)]))


@settings(max_examples=30)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)), max_size=3))
def test_generated_subalgebra_is_smallest(vecs):
    a = ut(3, 5)
    s = generated_subalgebra(a, vecs)
    assert a.is_subalgebra(s)
    assert all(v in s for v in vecs)
    assert s == generated_subalgebra(a, list(s.basis))
