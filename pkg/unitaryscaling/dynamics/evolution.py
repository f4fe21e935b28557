import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from unitaryscaling.dynamics.bloch import (
    UnitaryScalingError,
    InvalidDimensionError,
    InvalidParameterError,
    BlochVector,
    frozen_array,
)
from unitaryscaling.linalg import expm

#x_t = M_t x_0 + c_t with M_t = exp(t lam) and
# c_t = (exp(t lam) - I) lam^-1 (ell/d), the homogeneous form of which is
#   [[1, 0], [c_t, M_t]] acting on (1, x)

INVERSE_TOL = 1e-10
CONTRACTION_TOL = 1e-8

class NumericalError(UnitaryScalingError):
    pass

def check_time(t):
    if not t >= 0:
        raise InvalidParameterError("time must be non-negative, got "
            + repr(t))

@dataclass(frozen=True, eq=False)
class DynamicalMatrix:
    dim: int
    t: float
    matrix: np.ndarray
    translation: np.ndarray = None

    def __post_init__(self):
        n = self.dim * self.dim - 1
        matrix = frozen_array(self.matrix, float)
        translation = frozen_array(np.zeros(n) if self.translation is None
            else self.translation, float)
        if matrix.shape != (n, n) or translation.shape != (n,):
            raise InvalidDimensionError("dynamical matrix of a d="
                + str(self.dim) + " system must be " + str(n) + "x" + str(n)
                + ", got " + str(matrix.shape) + " and "
                + str(translation.shape))
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "translation", translation)

    def apply(self, coords):
        return self.matrix @ coords + self.translation

@dataclass(frozen=True, eq=False)
class HomogeneousMatrix:
    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        n = self.dim * self.dim
        matrix = frozen_array(self.matrix, float)
        if matrix.shape != (n, n):
            raise InvalidDimensionError("homogeneous matrix of a d="
                + str(self.dim) + " system must be " + str(n) + "x" + str(n)
                + ", got " + str(matrix.shape))
        if matrix[0, 0] != 1.0 or np.any(matrix[0, 1:] != 0.0):
            raise InvalidParameterError("first row of a homogeneous matrix "
                + "must be (1, 0, ..., 0)")
        object.__setattr__(self, "matrix", matrix)

    @property
    def linear_part(self):
        return self.matrix[1:, 1:]

    @property
    def translation(self):
        return self.matrix[1:, 0]

    def compose(self, other):
        """self after other"""
        product = self.matrix @ other.matrix
        #row products keep (1, 0, ..., 0) up to exact zeros
        product[0, :] = 0.0
        product[0, 0] = 1.0
        return HomogeneousMatrix(self.dim, product)

    def power(self, k):
        if int(k) != k or k < 0:
            raise InvalidParameterError("number of applications must be a "
                + "non-negative integer, got " + repr(k))
        product = np.array(np.linalg.matrix_power(self.matrix, int(k)))
        product[0, :] = 0.0
        product[0, 0] = 1.0
        return HomogeneousMatrix(self.dim, product)

    def to_dynamical(self, t=None):
        return DynamicalMatrix(self.dim, t, self.linear_part,
            self.translation)

def translation_vector(sup, t):
    check_time(t)
    logger = logging.getLogger('UNITARYSCALING')
    drift = sup.drift
    if t == 0 or not np.any(drift):
        return np.zeros(sup.size)
    lam = sup.lam
    smallest = scipy.linalg.svdvals(lam)[-1]
    if smallest > INVERSE_TOL:
        logger.debug("translation vector via inverse, sigma_min = "
            + repr(float(smallest)))
        growth = expm(lam, t) - np.eye(sup.size)
        return growth @ scipy.linalg.solve(lam, drift)
    logger.debug("translation vector via augmented exponential, "
        + "sigma_min = " + repr(float(smallest)))
    #exp(t [[lam, drift], [0, 0]]) carries c_t in its last column
    n = sup.size
    augmented = np.zeros((n + 1, n + 1))
    augmented[:n, :n] = lam
    augmented[:n, n] = drift
    translation = expm(augmented, t)[:n, n]
    if not np.all(np.isfinite(translation)):
        raise NumericalError("translation vector is not finite at t="
            + repr(t))
    return translation

def dynamical_matrix(sup, t):
    check_time(t)
    return DynamicalMatrix(sup.dim, t, expm(sup.lam, t),
        translation_vector(sup, t))

def evolve(dm, x0):
    if dm.dim != x0.dim:
        raise InvalidDimensionError("dynamical matrix has d=" + str(dm.dim)
            + " but state has d=" + str(x0.dim))
    return BlochVector(dm.dim, dm.apply(x0.coords))

def homogeneous_matrix(dm):
    n = dm.dim * dm.dim
    matrix = np.zeros((n, n))
    matrix[0, 0] = 1.0
    matrix[1:, 0] = dm.translation
    matrix[1:, 1:] = dm.matrix
    return HomogeneousMatrix(dm.dim, matrix)

def family_semigroup_defect(family, t, s):
    """
    Frobenius norm of H(t+s) - H(t) H(s) for a family t -> DynamicalMatrix,
    covering the linear parts and the translations at once.
    """
    check_time(t)
    check_time(s)
    joint = homogeneous_matrix(family(t + s)).matrix
    product = (homogeneous_matrix(family(t)).matrix
        @ homogeneous_matrix(family(s)).matrix)
    return float(np.linalg.norm(joint - product))

def semigroup_defect(sup, t, s):
    return family_semigroup_defect(lambda tau: dynamical_matrix(sup, tau),
        t, s)

def is_contractive(dm, tol=CONTRACTION_TOL):
    """Returns (is_contractive, largest singular value of M)"""
    largest = float(scipy.linalg.svdvals(dm.matrix)[0]) if dm.matrix.size \
        else 0.0
    return largest <= 1 + tol, largest

def evolve_trace(sup, x0, times, threads=1):
    """
    Bloch vectors at every time of the grid. Grid points are independent
    and may be spread over worker threads; the output order is always the
    order of times.
    """
    for t in times:
        check_time(t)
    def evolve_at(t):
        return evolve(dynamical_matrix(sup, t), x0)
    if threads is None or threads <= 1:
        return [evolve_at(t) for t in times]
    logger = logging.getLogger('UNITARYSCALING')
    logger.debug("evolving " + str(len(times)) + " time points on "
        + str(threads) + " threads")
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(evolve_at, times))
