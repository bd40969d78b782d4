import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wedgelab import DomainError, PreconditionError
from wedgelab.modular import (
    ModularPair,
    ModularRep,
    RealSubspace,
    bgl_net,
    compatibility_residual,
    intersect,
    is_cyclic,
    is_separating,
    is_standard,
    kms_membership,
    polar_modular,
    random_modular_pair,
    random_standard_subspace,
    rep_from_standard,
    rep_roundtrip,
    standard_from_pair,
    subspace_distance,
    subspace_sum,
    symplectic_complement,
    tomita_operator,
    validate_modular_dict,
)

seeds = st.integers(0, 2**32 - 1)


def test_real_line_is_standard_in_c1():
    v = RealSubspace(1, [np.array([1.0])])
    assert is_standard(v)
    assert not is_standard(RealSubspace(1, [np.array([1.0]), np.array([1j])]))
    assert not is_cyclic(RealSubspace.zero(2))
    assert not is_separating(RealSubspace.full(1))


def test_tomita_operator_is_conjugation_on_real_vectors():
    v = RealSubspace(2, [np.array([1.0, 0.0]), np.array([0.0, 1.0])])
    s = tomita_operator(v)
    assert np.allclose(s, np.diag([1.0, 1.0, -1.0, -1.0]))
    pair = polar_modular(s)
    assert np.allclose(pair.lambdas, 1.0)


def test_tomita_requires_standard_subspace():
    with pytest.raises(PreconditionError):
        tomita_operator(RealSubspace(2, [np.array([1.0, 0.0])]))


@given(seeds)
def test_roundtrip_recovers_subspace(seed):
    rng = np.random.default_rng(seed)
    v = random_standard_subspace(int(rng.integers(1, 7)), rng)
    pair = polar_modular(tomita_operator(v))
    assert pair.compatibility_residual() <= 1e-9
    assert subspace_distance(v, standard_from_pair(pair)) <= 1e-9


@given(seeds)
def test_polar_decomposition_reassembles_tomita(seed):
    rng = np.random.default_rng(seed)
    v = random_standard_subspace(int(rng.integers(1, 5)), rng)
    s = tomita_operator(v)
    pair = polar_modular(s)
    assert np.allclose(pair.j_real @ pair.delta_real(0.5), s, atol=1e-8 * np.abs(s).max())


@given(seeds)
def test_double_complement(seed):
    rng = np.random.default_rng(seed)
    v = random_standard_subspace(int(rng.integers(1, 7)), rng)
    assert subspace_distance(v, symplectic_complement(symplectic_complement(v))) <= 1e-9


@given(seeds)
def test_complement_is_fix_of_inverse_modular_operator(seed):
    rng = np.random.default_rng(seed)
    pair = random_modular_pair(int(rng.integers(1, 7)), rng)
    v = standard_from_pair(pair)
    inverted = ModularPair(1.0 / pair.lambdas, pair.pairing, pair.frame)
    assert subspace_distance(symplectic_complement(v), standard_from_pair(inverted)) <= 1e-9


@given(seeds)
def test_pair_constructions_agree(seed):
    rng = np.random.default_rng(seed)
    pair = random_modular_pair(int(rng.integers(1, 6)), rng)
    a = standard_from_pair(pair)
    b = standard_from_pair(pair.j_real, pair.delta_real())
    assert subspace_distance(a, b) <= 1e-8


def test_incompatible_pair_is_rejected():
    j = ModularPair(np.ones(3), np.arange(3)).j_real
    delta = np.kron(np.eye(2), np.diag([4.0, 0.5, 1.0]))
    assert compatibility_residual(j, delta) > 0.1
    with pytest.raises(PreconditionError):
        standard_from_pair(j, delta)


def test_modular_pair_validation():
    with pytest.raises((DomainError, PreconditionError)):
        ModularPair(np.array([2.0, 2.0]), np.array([1, 0]))
    with pytest.raises((DomainError, PreconditionError)):
        ModularPair(np.array([-1.0]), np.array([0]))
    good = {"n": 2, "lambdas": [2.0, 0.5], "pairing": [1, 0]}
    assert validate_modular_dict(good) == []
    assert validate_modular_dict({"n": 2, "lambdas": [2.0, 2.0], "pairing": [1, 0]})
    assert validate_modular_dict({"lambdas": [1.0]})


def test_modular_pair_json_roundtrip(rng):
    pair = random_modular_pair(4, rng)
    back = ModularPair.from_json(pair.to_json())
    assert np.allclose(back.lambdas, pair.lambdas)
    assert np.allclose(back.frame, pair.frame)
    assert subspace_distance(standard_from_pair(back), standard_from_pair(pair)) < 1e-12


def test_kms_membership_separates_v_from_iv(rng):
    pair = random_modular_pair(4, rng)
    v = standard_from_pair(pair)
    xi = v.complex_basis()[0]
    assert kms_membership(xi, pair)[0]
    assert not kms_membership(1j * xi, pair)[0]


def test_modular_rep_unitary_group(rng):
    rep = rep_from_standard(random_standard_subspace(3, rng))
    u1, u2 = rep.unitary(0.3), rep.unitary(0.5)
    assert np.allclose(u1 @ u2, rep.unitary(0.8))
    assert np.allclose(u1.conj().T @ u1, np.eye(3))
    v = rep.standard_subspace()
    # U(e^t) preserves V
    moved = RealSubspace(3, [rep.unitary(0.7) @ b for b in v.complex_basis()])
    assert subspace_distance(moved, v) < 1e-9
    assert isinstance(rep, ModularRep)


def test_rep_roundtrip_from_pair(rng):
    pair = random_modular_pair(5, rng)
    assert subspace_distance(rep_roundtrip(pair), standard_from_pair(pair)) < 1e-9


def test_subspace_lattice_operations():
    e1 = RealSubspace(2, [np.array([1.0, 0.0])])
    e2 = RealSubspace(2, [np.array([0.0, 1.0])])
    s = subspace_sum(e1, e2)
    assert s.dim == 2
    assert intersect(e1, e2).dim == 0
    assert intersect(s, e1).dim == 1
    assert s.times_i().dim == 2


def test_subspace_csv_roundtrip(rng):
    v = random_standard_subspace(3, rng)
    back = RealSubspace.from_csv(v.to_csv())
    assert subspace_distance(v, back) < 1e-14


def test_bgl_net_intersections_and_empty_cover(rng):
    pair = random_modular_pair(3, rng)
    other = random_modular_pair(3, rng)
    net = bgl_net([pair, other], {"W": [0], "O": [0, 1], "far": []})
    assert net["W"].defined
    assert subspace_distance(net["W"].subspace, standard_from_pair(pair)) < 1e-12
    assert net["O"].subspace.dim <= net["W"].subspace.dim
    assert net["W"].subspace.contains_subspace(net["O"].subspace)
    assert not net["far"].defined and net["far"].subspace is None
