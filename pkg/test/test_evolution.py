import math
import logging

import numpy as np
import pytest

from unitaryscaling.dynamics import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    LindbladGenerator,
    SuperopMatrix,
    BlochVector,
    DynamicalMatrix,
    HomogeneousMatrix,
    InvalidDimensionError,
    InvalidParameterError,
    build_basis,
    state_from_bloch,
    propagator,
    superop_matrix,
    translation_vector,
    dynamical_matrix,
    evolve,
    homogeneous_matrix,
    family_semigroup_defect,
    semigroup_defect,
    is_contractive,
    evolve_trace,
)
from unitaryscaling.linalg import expm

logger = logging.getLogger('UNITARYSCALING-TEST')
logger.setLevel(logging.DEBUG)

LOWERING = np.array([[0, 1], [0, 0]], dtype=complex)

def random_hermitian(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (a + a.conj().T) / 2

def random_generator(rng, d, unital=False):
    if unital:
        jumps = [0.5 * random_hermitian(rng, d) for _ in range(2)]
    else:
        jumps = [0.5 * (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d,
            d))) for _ in range(2)]
    return LindbladGenerator(random_hermitian(rng, d), jumps)

def rotation_sup(omega):
    return superop_matrix(LindbladGenerator(-(omega / 2) * PAULI_Z),
        build_basis(2))

def damping_sup(g):
    return superop_matrix(LindbladGenerator(np.zeros((2, 2)),
        [math.sqrt(g) * LOWERING]), build_basis(2))

def test_time_zero_is_identity():
    rng = np.random.default_rng(1)
    sup = superop_matrix(random_generator(rng, 3), build_basis(3))
    dm = dynamical_matrix(sup, 0.0)
    assert np.array_equal(dm.matrix, np.eye(8))
    assert np.array_equal(dm.translation, np.zeros(8))

def test_rotation_about_z():
    omega, t = 1.3, 0.9
    dm = dynamical_matrix(rotation_sup(omega), t)
    c, s = math.cos(omega * t), math.sin(omega * t)
    assert np.allclose(dm.matrix, [[c, s, 0], [-s, c, 0], [0, 0, 1]],
        atol=1e-14)

def test_full_pauli_semigroup_is_scalar():
    gamma, t = 0.25, 1.7
    gen = LindbladGenerator(np.zeros((2, 2)), [math.sqrt(gamma) * s
        for s in (PAULI_X, PAULI_Y, PAULI_Z)])
    dm = dynamical_matrix(superop_matrix(gen, build_basis(2)), t)
    assert np.allclose(dm.matrix, math.exp(-2 * gamma * t) * np.eye(3),
        atol=1e-14)

def test_negative_time_rejected():
    with pytest.raises(InvalidParameterError):
        dynamical_matrix(rotation_sup(1.0), -1.0)
    with pytest.raises(InvalidParameterError):
        translation_vector(rotation_sup(1.0), -1e-3)

def test_translation_vanishes_for_unital_generators():
    rng = np.random.default_rng(2)
    sup = superop_matrix(random_generator(rng, 3, unital=True),
        build_basis(3))
    assert np.allclose(translation_vector(sup, 2.0), 0, atol=1e-10)
    assert np.array_equal(translation_vector(damping_sup(0.5), 0.0),
        np.zeros(3))

def test_damping_translation_closed_form():
    g = 0.6
    for t in [0.1, 1.0, 5.0, 40.0]:
        c = translation_vector(damping_sup(g), t)
        expected = (1 - math.exp(-g * t / 2)) / math.sqrt(2)
        assert np.allclose(c, [0, 0, expected], atol=1e-12)

def test_translation_for_singular_generator():
    drift = np.array([0.3, -0.2, 0.1])
    sup = SuperopMatrix(2, np.diag([0.0, -1.0, -2.0]), 2 * drift)
    for t in [0.0, 0.5, 3.0, 30.0]:
        expected = [t * drift[0], (1 - math.exp(-t)) * drift[1],
            (1 - math.exp(-2 * t)) / 2 * drift[2]]
        assert np.allclose(translation_vector(sup, t), expected,
            atol=1e-12)

def test_singular_and_inverse_routes_agree_near_singularity():
    drift = np.array([0.1, 0.2, 0.3])
    t = 1.5
    tiny = SuperopMatrix(2, np.diag([-1e-11, -0.5, -1.0]), 2 * drift)
    small = SuperopMatrix(2, np.diag([-1e-6, -0.5, -1.0]), 2 * drift)
    assert np.allclose(translation_vector(tiny, t),
        translation_vector(small, t), atol=1e-6)

@pytest.mark.parametrize("t", [20.0, 40.0, 100.0])
def test_singular_qutrit_translation_at_long_times(t):
    gen = LindbladGenerator(np.zeros((3, 3)), [2 * np.array([[0, 1, 0],
        [0, 0, 0], [0, 0, 0]], dtype=complex)])
    basis = build_basis(3)
    sup = superop_matrix(gen, basis)
    assert np.linalg.svd(sup.lam, compute_uv=False)[-1] < 1e-10
    x0 = BlochVector(3, np.zeros(8))
    rho = state_from_bloch(evolve(dynamical_matrix(sup, t), x0), basis)
    expected = (propagator(gen, t) @ (np.eye(3) / 3).reshape(-1)).reshape(3,
        3)
    assert np.allclose(rho, expected, atol=1e-10)
    assert np.allclose(np.diag(rho).real, [2 / 3, math.exp(-2 * t) / 3,
        1 / 3], atol=1e-10)
    assert np.linalg.eigvalsh(rho)[0] > -1e-10

def test_evolve_examples():
    x0 = BlochVector(2, [0.1, -0.2, 0.3])
    identity = DynamicalMatrix(2, 0.0, np.eye(3))
    assert np.array_equal(evolve(identity, x0).coords, x0.coords)
    p = 0.3
    depolarized = DynamicalMatrix(2, None, (1 - p) * np.eye(3))
    assert np.allclose(evolve(depolarized, x0).coords, (1 - p) * x0.coords)
    rng = np.random.default_rng(3)
    sup = superop_matrix(random_generator(rng, 2, unital=True),
        build_basis(2))
    mixed = BlochVector(2, np.zeros(3))
    assert np.allclose(evolve(dynamical_matrix(sup, 1.2), mixed).coords, 0,
        atol=1e-12)
    with pytest.raises(InvalidDimensionError):
        evolve(identity, BlochVector(3, np.zeros(8)))

def test_homogeneous_matrix_layout():
    g, t = 0.4, 0.8
    dm = dynamical_matrix(damping_sup(g), t)
    hm = homogeneous_matrix(dm)
    assert hm.matrix.shape == (4, 4)
    assert np.array_equal(hm.matrix[0], [1, 0, 0, 0])
    assert np.array_equal(hm.linear_part, dm.matrix)
    assert np.array_equal(hm.translation, dm.translation)
    identity = homogeneous_matrix(DynamicalMatrix(2, 0.0, np.eye(3)))
    assert np.array_equal(identity.matrix, np.eye(4))

def test_homogeneous_action_equals_affine_action():
    rng = np.random.default_rng(4)
    dm = dynamical_matrix(superop_matrix(random_generator(rng, 3),
        build_basis(3)), 0.7)
    hm = homogeneous_matrix(dm)
    for _ in range(1000):
        x = rng.normal(size=8)
        lifted = hm.matrix @ np.concatenate([[1.0], x])
        assert lifted[0] == 1.0
        assert np.max(np.abs(lifted[1:] - dm.apply(x))) < 1e-12

def test_homogeneous_composition():
    rng = np.random.default_rng(5)
    sup = superop_matrix(random_generator(rng, 2), build_basis(2))
    t, s = 0.4, 1.1
    composed = homogeneous_matrix(dynamical_matrix(sup, t)).compose(
        homogeneous_matrix(dynamical_matrix(sup, s)))
    x = BlochVector(2, [0.2, 0.1, -0.3])
    stepwise = evolve(dynamical_matrix(sup, t), evolve(dynamical_matrix(sup,
        s), x))
    assert np.allclose(composed.to_dynamical().apply(x.coords),
        stepwise.coords, atol=1e-12)
    squared = homogeneous_matrix(dynamical_matrix(sup, t)).power(2)
    assert np.allclose(squared.matrix, homogeneous_matrix(
        dynamical_matrix(sup, 2 * t)).matrix, atol=1e-12)
    assert np.array_equal(squared.power(0).matrix, np.eye(4))

def test_homogeneous_matrix_validation():
    with pytest.raises(InvalidParameterError):
        HomogeneousMatrix(2, np.ones((4, 4)))
    with pytest.raises(InvalidDimensionError):
        HomogeneousMatrix(2, np.eye(3))
    with pytest.raises(InvalidParameterError):
        HomogeneousMatrix(2, np.eye(4)).power(-1)
    with pytest.raises(InvalidParameterError):
        HomogeneousMatrix(2, np.eye(4)).power(1.5)

@pytest.mark.parametrize("d", [2, 3])
def test_semigroup_law(d):
    rng = np.random.default_rng(30 + d)
    sup = superop_matrix(random_generator(rng, d), build_basis(d))
    assert semigroup_defect(sup, 0.3, 0.7) < 1e-10
    assert semigroup_defect(sup, 0.0, 0.0) == 0.0

def test_non_semigroup_family_has_defect():
    lam = rotation_sup(1.0).lam
    def family(t):
        return DynamicalMatrix(2, t, expm(lam, t * t))
    defect = family_semigroup_defect(family, 1.0, 1.0)
    assert defect == pytest.approx(2 * math.sqrt(2) * abs(math.sin(1.0)),
        abs=1e-10)
    assert defect > 0.01

@pytest.mark.parametrize("d", [2, 3])
def test_unital_semigroups_are_contractive(d):
    rng = np.random.default_rng(40 + d)
    sup = superop_matrix(random_generator(rng, d, unital=True),
        build_basis(d))
    for t in np.linspace(0.1, 10, 25):
        ok, largest = is_contractive(dynamical_matrix(sup, t))
        assert ok
        assert largest <= 1 + 1e-8

@pytest.mark.parametrize("d", [2, 3])
def test_determinant_is_exponential_of_trace(d):
    rng = np.random.default_rng(50 + d)
    sup = superop_matrix(random_generator(rng, d), build_basis(d))
    for t in [0.1, 0.5, 1.0]:
        det = np.linalg.det(dynamical_matrix(sup, t).matrix)
        expected = math.exp(t * np.trace(sup.lam))
        assert det == pytest.approx(expected, rel=1e-8)

@pytest.mark.parametrize("threads", [1, 2, 4])
def test_evolve_trace_keeps_time_order(threads):
    rng = np.random.default_rng(6)
    sup = superop_matrix(random_generator(rng, 3), build_basis(3))
    x0 = BlochVector(3, 0.1 * np.ones(8))
    times = np.linspace(0, 3, 17)
    trace = evolve_trace(sup, x0, times, threads)
    assert len(trace) == len(times)
    for t, x in zip(times, trace):
        assert np.array_equal(x.coords, evolve(dynamical_matrix(sup, t),
            x0).coords)
