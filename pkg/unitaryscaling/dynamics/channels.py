import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from unitaryscaling.dynamics.bloch import (
    UnitaryScalingError,
    InvalidDimensionError,
    InvalidParameterError,
    IDENTITY_2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    bloch_coords,
    check_square,
    frozen_array,
)
from unitaryscaling.dynamics.lindblad import LindbladGenerator
from unitaryscaling.dynamics.evolution import (
    NumericalError,
    DynamicalMatrix,
    HomogeneousMatrix,
    check_time,
)

#qubit channel gallery and the NMR relaxation model, Bloch coordinates in
# the orthonormal Pauli basis sigma/sqrt(2) ordered (x, y, z)

TRACE_PRESERVATION_TOL = 1e-10
FIXED_POINT_TOL = 1e-10

class TracePreservationError(UnitaryScalingError):
    pass

@dataclass(frozen=True, eq=False)
class KrausChannel:
    dim: int
    kraus: tuple

    def __post_init__(self):
        kraus = tuple(check_square(frozen_array(k, complex), self.dim)
            for k in self.kraus)
        if not kraus:
            raise InvalidParameterError("channel needs at least one Kraus "
                + "operator")
        defect = float(np.max(np.abs(sum(k.conj().T @ k for k in kraus)
            - np.eye(self.dim))))
        if defect > TRACE_PRESERVATION_TOL:
            raise TracePreservationError("Kraus operators are not trace "
                + "preserving, max |sum K^H K - I| = " + repr(defect))
        object.__setattr__(self, "kraus", kraus)

    def apply(self, rho):
        rho = np.asarray(rho, dtype=complex)
        return sum(k @ rho @ k.conj().T for k in self.kraus)

def compose(outer, inner):
    """Channel applying inner first, then outer"""
    if outer.dim != inner.dim:
        raise InvalidDimensionError("cannot compose channels of dimension "
            + str(outer.dim) + " and " + str(inner.dim))
    return KrausChannel(outer.dim, [a @ b for a in outer.kraus
        for b in inner.kraus])

def check_probability(p):
    if not 0 <= p <= 1:
        raise InvalidParameterError("channel parameter must lie in [0, 1], "
            + "got " + repr(p))
    if p == 0 or p == 1:
        logging.getLogger('UNITARYSCALING').warning("channel parameter on "
            + "the boundary, p = " + repr(p))

def bit_flip(p):
    check_probability(p)
    channel = KrausChannel(2, [math.sqrt(1 - p) * IDENTITY_2,
        math.sqrt(p) * PAULI_X])
    return channel, DynamicalMatrix(2, None, np.diag([1, 1 - 2 * p,
        1 - 2 * p]))

def phase_flip(p):
    check_probability(p)
    channel = KrausChannel(2, [math.sqrt(1 - p) * IDENTITY_2,
        math.sqrt(p) * PAULI_Z])
    return channel, DynamicalMatrix(2, None, np.diag([1 - 2 * p, 1 - 2 * p,
        1]))

def depolarizing(p):
    """rho -> (1-p) rho + (p/2) I"""
    check_probability(p)
    channel = KrausChannel(2, [math.sqrt(1 - 3 * p / 4) * IDENTITY_2]
        + [math.sqrt(p / 4) * s for s in (PAULI_X, PAULI_Y, PAULI_Z)])
    return channel, DynamicalMatrix(2, None, (1 - p) * np.eye(3))

def amplitude_damping(p, basis):
    check_probability(p)
    k0 = np.array([[1, 0], [0, math.sqrt(1 - p)]])
    k1 = np.array([[0, math.sqrt(p)], [0, 0]])
    channel = KrausChannel(2, [k0, k1])
    return channel, affine_matrix(channel, basis)

def channel_to_affine(ch, basis):
    """
    Real affine representation x -> T x + c of a trace preserving channel,
    T[a][b] = Tr(f_a Phi(f_b)) and c = x(Phi(I/d)).
    """
    if ch.dim != basis.dim:
        raise InvalidDimensionError("channel has d=" + str(ch.dim)
            + " but basis has d=" + str(basis.dim))
    d = ch.dim
    translation = bloch_coords(ch.apply(np.eye(d) / d), basis)
    images = np.array([ch.apply(f) for f in basis.traceless])
    #T[a][b] = sum_ij f_a[i,j] Phi(f_b)[j,i]
    linear = np.einsum("aij,bji->ab", basis.traceless, images)
    return linear.real, translation

def homogeneous_from_affine(d, linear, translation):
    n = d * d
    matrix = np.zeros((n, n))
    matrix[0, 0] = 1.0
    matrix[1:, 0] = translation
    matrix[1:, 1:] = linear
    return HomogeneousMatrix(d, matrix)

def affine_matrix(ch, basis):
    linear, translation = channel_to_affine(ch, basis)
    return homogeneous_from_affine(ch.dim, linear, translation)

def affine_fixed_point(linear, translation):
    """Bloch vector x with T x + c = x, minimum norm when not unique"""
    linear = np.asarray(linear, dtype=float)
    n = linear.shape[0]
    x, _, _, _ = scipy.linalg.lstsq(np.eye(n) - linear, translation)
    residual = float(np.linalg.norm(linear @ x + translation - x))
    if residual > FIXED_POINT_TOL:
        raise NumericalError("affine map has no fixed point, residual "
            + repr(residual))
    return x

@dataclass(frozen=True)
class NmrParams:
    omega: float
    gamma_plus: float = 0.0
    gamma_minus: float = 0.0
    gamma_z: float = 0.0

    def __post_init__(self):
        for name in ("gamma_plus", "gamma_minus", "gamma_z"):
            if not getattr(self, name) >= 0:
                raise InvalidParameterError("NMR rate " + name + " must be "
                    + "non-negative, got " + repr(getattr(self, name)))

def nmr_rates(params):
    """
    Longitudinal and transverse relaxation RATES (r1, r2) of the NMR
    generator, with the 1/2 in front of the dissipator,
    r1 = (G+ + G-)/2 and r2 = r1/2 + Gz. Times are T1 = 1/r1, T2 = 1/r2.
    """
    r1 = (params.gamma_plus + params.gamma_minus) / 2
    return r1, r1 / 2 + params.gamma_z

def equilibrium_polarization(params):
    """Stationary z Bloch coordinate, (G+ - G-)/((G+ + G-) sqrt(2))"""
    total = params.gamma_plus + params.gamma_minus
    if total == 0:
        return 0.0
    return (params.gamma_plus - params.gamma_minus) / total / math.sqrt(2)

def nmr_generator(params):
    hamiltonian = -(params.omega / 2) * PAULI_Z
    raising = np.array([[0, 1], [0, 0]], dtype=complex)
    jumps = []
    for rate, op in ((params.gamma_plus, raising),
            (params.gamma_minus, raising.T), (params.gamma_z, PAULI_Z)):
        if rate > 0:
            jumps.append(math.sqrt(rate) * op)
    return LindbladGenerator(hamiltonian, tuple(jumps))

def nmr_matrix(params, t):
    """Closed form homogeneous matrix of the NMR semigroup at time t"""
    check_time(t)
    r1, r2 = nmr_rates(params)
    e1 = math.exp(-r1 * t)
    e2 = math.exp(-r2 * t)
    cos = math.cos(params.omega * t)
    sin = math.sin(params.omega * t)
    matrix = np.array([
        [1, 0, 0, 0],
        [0, e2 * cos, e2 * sin, 0],
        [0, -e2 * sin, e2 * cos, 0],
        [equilibrium_polarization(params) * (1 - e1), 0, 0, e1]])
    return HomogeneousMatrix(2, matrix)
