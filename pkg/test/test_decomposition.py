import math
import logging

import numpy as np
import pytest
import scipy.linalg

from unitaryscaling.dynamics import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    LindbladGenerator,
    SuperopMatrix,
    NmrParams,
    NormalityError,
    OrientationError,
    InvalidDimensionError,
    InvalidParameterError,
    Isotropy,
    Spheroid,
    build_basis,
    superop_matrix,
    dynamical_matrix,
    polar,
    canonical_form,
    classify_isotropy,
    spheroid_class,
    generator_canonical_form,
    block_parameters,
    angle_difference,
    fit_rates,
    two_parameter_split,
    bit_flip,
    phase_flip,
    depolarizing,
    nmr_generator,
    nmr_matrix,
    nmr_rates,
    isotropic_generator,
)
from unitaryscaling.linalg import expm

logger = logging.getLogger('UNITARYSCALING-TEST')
logger.setLevel(logging.DEBUG)

LOWERING = np.array([[0, 1], [0, 0]], dtype=complex)

def rotation(theta):
    return np.array([[math.cos(theta), -math.sin(theta)],
        [math.sin(theta), math.cos(theta)]])

def z_rotation(theta):
    return scipy.linalg.block_diag(rotation(theta), [[1.0]])

def random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] *= -1
    return q

def random_unitary(rng, d):
    q, r = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d,
        d)))
    return q * (np.diag(r) / np.abs(np.diag(r)))

def random_normal_unital_generator(rng, d, depolarizing_rate=0.0):
    """Hamiltonian and Hermitian jumps sharing one eigenbasis, plus an
       optional isotropic part"""
    u = random_unitary(rng, d)
    h = u @ np.diag(rng.normal(size=d)) @ u.conj().T
    jumps = [u @ np.diag(0.6 * rng.normal(size=d)) @ u.conj().T
        for _ in range(2)]
    if depolarizing_rate > 0:
        scale = math.sqrt(2 * depolarizing_rate / d)
        jumps += [scale * f for f in build_basis(d).traceless]
    return LindbladGenerator(h, jumps)

def synthesized(k, params, fixed=None):
    blocks = [math.exp(-lam) * rotation(theta) for theta, lam in params]
    if fixed is not None:
        blocks.append([[math.exp(-fixed)]])
    return k @ scipy.linalg.block_diag(*blocks) @ k.T

@pytest.mark.parametrize(
    "m, rotation_part, scaling",
    [
    (np.diag([0.5, 0.5, 1.0]), np.eye(3), np.diag([0.5, 0.5, 1.0])),
    (z_rotation(0.8), z_rotation(0.8), np.eye(3)),
    ]
)
def test_polar_examples(m, rotation_part, scaling):
    parts = polar(m)
    assert np.allclose(parts.rotation, rotation_part, atol=1e-12)
    assert np.allclose(parts.scaling, scaling, atol=1e-12)
    assert parts.orientation == 1
    assert not parts.singular

def test_polar_of_nmr_matrix():
    params = NmrParams(1.0, 0.3, 0.3, 0.2)
    r1, r2 = nmr_rates(params)
    parts = polar(nmr_matrix(params, 1.0).linear_part)
    expected = scipy.linalg.block_diag(rotation(-1.0), [[1.0]])
    assert np.allclose(parts.rotation, expected, atol=1e-12)
    assert np.allclose(parts.scaling, np.diag([math.exp(-r2),
        math.exp(-r2), math.exp(-r1)]), atol=1e-12)
    assert parts.commute_defect < 1e-12

@pytest.mark.parametrize("n", [3, 8, 15])
def test_polar_roundtrip_on_random_contractions(n):
    rng = np.random.default_rng(n)
    for i in range(1000):
        if i % 2:
            m = rng.normal(size=(n, n))
            m = m / (1.1 * np.linalg.norm(m, 2))
        else:
            k = random_orthogonal(rng, n)
            params = [(rng.uniform(-math.pi, math.pi), rng.uniform(0, 2))
                for _ in range(n // 2)]
            m = synthesized(k, params, rng.uniform(0, 2) if n % 2 else None)
        parts = polar(m)
        assert np.linalg.norm(parts.reconstruct() - m) < 1e-10
        assert parts.orthogonality_defect() < 1e-10
        assert np.max(np.abs(parts.scaling - parts.scaling.T)) < 1e-12
        assert np.linalg.eigvalsh(parts.scaling)[0] >= -1e-10
        if i % 2 == 0:
            assert parts.commute_defect < 1e-9

def test_polar_flags_singular_input():
    parts = polar(np.diag([1.0, 0.5, 0.0]))
    assert parts.singular
    assert np.linalg.norm(parts.reconstruct() - np.diag([1.0, 0.5, 0.0])) \
        < 1e-12

def test_canonical_form_isotropic_identity():
    lam = 0.4
    cf = canonical_form(polar(math.exp(-lam) * np.eye(3)))
    assert cf.sizes == [2, 1]
    assert cf.has_fixed_block
    assert cf.thetas == pytest.approx([0.0, 0.0])
    assert cf.lams == pytest.approx([lam, lam])

def test_canonical_form_qubit_rotation():
    m = np.diag([0.5, 0.5, 0.8]) @ z_rotation(1.2)
    cf = canonical_form(polar(m))
    assert cf.sizes == [2, 1]
    assert cf.blocks[0].theta == pytest.approx(1.2)
    assert cf.blocks[0].lam == pytest.approx(math.log(2))
    assert cf.blocks[1].lam == pytest.approx(-math.log(0.8))

def test_canonical_form_recovers_known_blocks():
    rng = np.random.default_rng(11)
    k0 = random_orthogonal(rng, 4)
    m = synthesized(k0, [(0.4, 0.2), (1.1, 0.7)])
    cf = canonical_form(polar(m))
    assert cf.sizes == [2, 2]
    assert not cf.has_fixed_block
    assert cf.thetas == pytest.approx([1.1, 0.4], abs=1e-8)
    assert cf.lams == pytest.approx([0.7, 0.2], abs=1e-8)

@pytest.mark.parametrize("n", [4, 5, 7])
def test_canonical_form_roundtrip(n):
    rng = np.random.default_rng(100 + n)
    for _ in range(200):
        k = random_orthogonal(rng, n)
        lams = rng.permutation(np.linspace(0.1, 2.0, n // 2 + 1))
        params = [(rng.uniform(0.05, math.pi - 0.05), lams[i])
            for i in range(n // 2)]
        fixed = lams[-1] if n % 2 else None
        parts = polar(synthesized(k, params, fixed))
        cf = canonical_form(parts)
        expected = sorted([(lam, theta, 2) for theta, lam in params]
            + ([(fixed, 0.0, 1)] if fixed is not None else []),
            key=lambda e: -e[0])
        assert cf.sizes == [e[2] for e in expected]
        for block, (lam, theta, size) in zip(cf.blocks, expected):
            assert block.lam == pytest.approx(lam, abs=1e-8)
            assert angle_difference(block.theta, theta) < 1e-8
        k_found = cf.conjugation
        assert np.allclose(k_found.T @ k_found, np.eye(n), atol=1e-10)
        rotated = k_found.T @ parts.rotation @ k_found
        scaled = k_found.T @ parts.scaling @ k_found
        offset = 0
        for block in cf.blocks:
            sl = slice(offset, offset + block.size)
            if block.size == 2:
                assert np.allclose(rotated[sl, sl], rotation(block.theta),
                    atol=1e-8)
            assert np.allclose(scaled[sl, sl], math.exp(-block.lam)
                * np.eye(block.size), atol=1e-8)
            offset += block.size
        off_diagonal = rotated.copy()
        offset = 0
        for block in cf.blocks:
            off_diagonal[offset:offset + block.size,
                offset:offset + block.size] = 0
            offset += block.size
        assert np.max(np.abs(off_diagonal)) < 1e-8

def test_canonical_form_rejects_non_normal():
    m = np.array([[0.9, 0.5, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.3]])
    parts = polar(m)
    with pytest.raises(NormalityError) as excinfo:
        canonical_form(parts)
    assert excinfo.value.defect == pytest.approx(parts.commute_defect)
    assert excinfo.value.defect > 1e-3

def test_canonical_form_rejects_reflections():
    parts = polar(np.diag([-0.5, 0.5, 0.5]))
    assert parts.orientation == -1
    with pytest.raises(OrientationError):
        canonical_form(parts)

def test_identity_rotation_may_split_scaling():
    cf = canonical_form(polar(np.diag([0.9, 0.6, 0.3])))
    assert cf.sizes == [1, 1, 1]
    assert cf.lams == pytest.approx([-math.log(0.3), -math.log(0.6),
        -math.log(0.9)])

def test_half_turn_blocks():
    m = np.diag([-0.5, -0.5, 0.9])
    cf = canonical_form(polar(m))
    assert cf.sizes == [2, 1]
    assert cf.blocks[0].theta == pytest.approx(math.pi)

@pytest.mark.parametrize(
    "m, isotropy",
    [
    (depolarizing(0.3)[1].matrix, Isotropy.ISOTROPIC),
    (bit_flip(0.25)[1].matrix, Isotropy.ANISOTROPIC),
    (z_rotation(0.6), Isotropy.ISOTROPIC),
    (np.diag([1.0, 1.0, 0.0]), Isotropy.ANISOTROPIC),
    ]
)
def test_classify_isotropy(m, isotropy):
    assert classify_isotropy(canonical_form(polar(m))) == isotropy

@pytest.mark.parametrize(
    "m, shape",
    [
    (bit_flip(0.25)[1].matrix, Spheroid.PROLATE),
    (phase_flip(0.25)[1].matrix, Spheroid.PROLATE),
    (depolarizing(0.3)[1].matrix, Spheroid.BALL),
    (np.diag([0.9, 0.9, 0.5]), Spheroid.OBLATE),
    (np.diag([0.9, 0.7, 0.5]), Spheroid.TRIAXIAL),
    ]
)
def test_spheroid_class(m, shape):
    assert spheroid_class(canonical_form(polar(m))) == shape

def test_bit_flip_invariant_axis_is_x():
    cf = canonical_form(polar(bit_flip(0.25)[1].matrix))
    axis = cf.conjugation[:, cf.sizes.index(1) + 1]
    assert abs(abs(axis[0]) - 1) < 1e-12
    plane = cf.conjugation[:, :2]
    assert np.allclose(plane[0], 0, atol=1e-12)

def test_spheroid_needs_qubit():
    with pytest.raises(InvalidDimensionError):
        spheroid_class(canonical_form(polar(0.5 * np.eye(8))))

def test_generator_form_of_full_pauli_generator():
    gamma = 0.35
    gen = LindbladGenerator(np.zeros((2, 2)), [math.sqrt(gamma) * s
        for s in (PAULI_X, PAULI_Y, PAULI_Z)])
    fit = fit_rates(superop_matrix(gen, build_basis(2)),
        np.linspace(0.1, 5, 20))
    assert fit.gammas == pytest.approx([2 * gamma, 2 * gamma])
    assert fit.omegas == pytest.approx([0, 0], abs=1e-12)
    assert fit.residual < 1e-10
    assert fit.per_dimension_gammas() == pytest.approx([2 * gamma] * 3)

def test_generator_form_of_pure_hamiltonian():
    gen = LindbladGenerator(np.diag([0.0, 1.0, 2.5]))
    fit = fit_rates(superop_matrix(gen, build_basis(3)),
        np.linspace(0.2, 4, 10))
    assert fit.gammas == pytest.approx([0, 0, 0, 0], abs=1e-12)
    assert sorted(fit.omegas) == pytest.approx([0, 1.0, 1.5, 2.5])
    assert list(fit.sizes) == [2, 2, 2, 2]
    assert fit.residual < 1e-10

def test_nmr_rate_fit():
    params = NmrParams(2.0, 0.4, 0.4, 0.3)
    r1, r2 = nmr_rates(params)
    fit = fit_rates(superop_matrix(nmr_generator(params), build_basis(2)),
        np.linspace(0.1, 6, 50))
    assert fit.gammas == pytest.approx([r2, r1])
    assert fit.omegas == pytest.approx([2.0, 0.0])
    assert list(fit.sizes) == [2, 1]
    assert sorted(fit.per_dimension_gammas()) == pytest.approx(
        sorted([r2, r2, r1]))
    assert fit.residual < 1e-8

def test_fit_rates_rejects_bad_input():
    sup = superop_matrix(nmr_generator(NmrParams(1.0, 0.2, 0.2, 0.1)),
        build_basis(2))
    for times in [[], [0.0, 1.0], [2.0, 1.0], [-1.0]]:
        with pytest.raises(InvalidParameterError):
            fit_rates(sup, times)
    jordan = SuperopMatrix(2, [[-1, 1, 0], [0, -1, 0], [0, 0, -1]])
    with pytest.raises(NormalityError):
        fit_rates(jordan, [1.0])
    with pytest.raises(NormalityError):
        generator_canonical_form(jordan)

def additivity_defect(sup, times):
    form = generator_canonical_form(sup)
    def params(t):
        return block_parameters(form.conjugation, form.sizes,
            expm(sup.lam, t))
    worst = 0.0
    for t1 in times:
        for t2 in times:
            for (a1, l1), (a2, l2), (a12, l12) in zip(params(t1),
                    params(t2), params(t1 + t2)):
                worst = max(worst, abs(l12 - l1 - l2),
                    angle_difference(a12, a1 + a2))
    return worst

def test_nmr_scaling_and_rotation_are_additive():
    params = NmrParams(1.5, 0.5, 0.5, 0.2)
    sup = superop_matrix(nmr_generator(params), build_basis(2))
    assert additivity_defect(sup, np.linspace(0.1, 5, 8)) < 1e-8

def test_random_normal_generator_is_additive():
    rng = np.random.default_rng(12)
    sup = superop_matrix(random_normal_unital_generator(rng, 3, 0.1),
        build_basis(3))
    assert sup.is_unital()
    times = np.linspace(0.1, 5, 50)
    assert fit_rates(sup, times).residual < 1e-8
    assert additivity_defect(sup, times[::7]) < 1e-8

def test_isotropic_rate_is_additive_over_partitions():
    gamma = 0.8
    sup = superop_matrix(isotropic_generator(build_basis(3), gamma),
        build_basis(3))
    t = 2.0
    whole = canonical_form(polar(dynamical_matrix(sup, t).matrix)).lams
    for parts in ([1.0, 1.0], [0.5, 0.25, 1.25], [0.1] * 20):
        total = np.zeros(len(whole))
        for tau in parts:
            total += canonical_form(polar(dynamical_matrix(sup,
                tau).matrix)).lams
        assert np.allclose(total, whole, atol=1e-8)
    assert whole == pytest.approx([gamma * t] * len(whole))

def test_two_parameter_split_unitary():
    sup = superop_matrix(LindbladGenerator(0.7 * PAULI_X + 0.2 * PAULI_Y),
        build_basis(2))
    for t in [0.5, 2.0]:
        split = two_parameter_split(sup, t)
        assert np.allclose(split.scaling, np.eye(3), atol=1e-12)
        assert split.rotation_norm == pytest.approx(1.0)

def test_two_parameter_split_depolarizing():
    gamma, t = 0.3, 1.5
    gen = LindbladGenerator(np.zeros((2, 2)), [math.sqrt(gamma) * s
        for s in (PAULI_X, PAULI_Y, PAULI_Z)])
    split = two_parameter_split(superop_matrix(gen, build_basis(2)), t)
    assert np.allclose(split.rotation, np.eye(3), atol=1e-12)
    assert split.scaling_norm == pytest.approx(math.exp(-2 * gamma * t))
    assert split.s == t

def test_two_parameter_split_marginals_are_semigroups():
    sup = superop_matrix(nmr_generator(NmrParams(1.2, 0.3, 0.3, 0.1)),
        build_basis(2))
    t1, t2 = 0.4, 1.3
    a = two_parameter_split(sup, t1)
    b = two_parameter_split(sup, t2)
    ab = two_parameter_split(sup, t1 + t2)
    assert np.allclose(a.rotation @ b.rotation, ab.rotation, atol=1e-10)
    assert np.allclose(a.scaling @ b.scaling, ab.scaling, atol=1e-10)
    assert np.allclose(ab.scaling @ ab.rotation,
        dynamical_matrix(sup, t1 + t2).matrix, atol=1e-10)

def test_two_parameter_split_reparameterization_and_errors():
    sup = superop_matrix(nmr_generator(NmrParams(1.2, 0.3, 0.3, 0.1)),
        build_basis(2))
    split = two_parameter_split(sup, 1.0, lambda t: 2 * t)
    assert split.s == 2.0
    assert np.allclose(split.scaling, two_parameter_split(sup, 2.0).scaling,
        atol=1e-12)
    damping = superop_matrix(LindbladGenerator(np.zeros((2, 2)),
        [LOWERING]), build_basis(2))
    with pytest.raises(InvalidParameterError):
        two_parameter_split(damping, 1.0)
    with pytest.raises(NormalityError):
        two_parameter_split(SuperopMatrix(2, [[-1, 1, 0], [0, -1, 0],
            [0, 0, -1]]), 1.0)
