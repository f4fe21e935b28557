import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

from unitaryscaling.dynamics.bloch import (
    UnitaryScalingError,
    InvalidParameterError,
    InvalidDimensionError,
    frozen_array,
)
from unitaryscaling.dynamics.evolution import NumericalError
from unitaryscaling.linalg import (
    SINGULAR_TOL,
    expm,
    normality_defect,
    polar_svd,
    is_singular,
    commuting_blocks,
)

#a dynamical matrix M = S R splits into an orthogonal part R and a symmetric
# positive scaling part S. when M is normal the two commute and a single
# orthogonal K brings both to blocks
#   K^T R K = diag(rot(theta_1), .., rot(theta_m) [, 1])
#   K^T S K = diag(exp(-lam_1) I_2, .., exp(-lam_m) I_2 [, exp(-lam_f)])
#for a Lindblad semigroup lam_k = gamma_k t and theta_k = omega_k t

CANONICAL_TOL = 1e-8
SPHEROID_TOL = 1e-9
SPLIT_NORM_TOL = 1e-10

class NormalityError(UnitaryScalingError):
    def __init__(self, message, defect):
        super().__init__(message)
        self.defect = defect

class OrientationError(UnitaryScalingError):
    pass

class Isotropy(Enum):
    ISOTROPIC = "isotropic"
    ANISOTROPIC = "anisotropic"

class Spheroid(Enum):
    PROLATE = "prolate"
    OBLATE = "oblate"
    BALL = "ball"
    #three distinct scalings, no rotation plane
    TRIAXIAL = "triaxial"

@dataclass(frozen=True, eq=False)
class PolarParts:
    rotation: np.ndarray
    scaling: np.ndarray
    commute_defect: float
    #sign of det R, +1 for proper rotations
    orientation: int
    #orthogonal part not unique
    singular: bool

    def orthogonality_defect(self):
        n = self.rotation.shape[0]
        return float(np.linalg.norm(self.rotation.T @ self.rotation
            - np.eye(n)))

    def reconstruct(self):
        return self.scaling @ self.rotation

@dataclass(frozen=True)
class CanonicalBlock:
    theta: float
    lam: float
    size: int

@dataclass(frozen=True, eq=False)
class CanonicalForm:
    conjugation: np.ndarray
    blocks: tuple
    has_fixed_block: bool

    @property
    def sizes(self):
        return [b.size for b in self.blocks]

    @property
    def thetas(self):
        return [b.theta for b in self.blocks]

    @property
    def lams(self):
        return [b.lam for b in self.blocks]

@dataclass(frozen=True, eq=False)
class GeneratorForm:
    """Shared conjugation K of a normal lam, with K^T lam K made of
       blocks [[-gamma, -omega], [omega, -gamma]] and 1x1 blocks [-gamma]"""
    conjugation: np.ndarray
    gammas: tuple
    omegas: tuple
    sizes: tuple

@dataclass(frozen=True, eq=False)
class RateFit:
    gammas: tuple
    omegas: tuple
    sizes: tuple
    conjugation: np.ndarray
    residual: float

    def per_dimension_gammas(self):
        """Decay rate of every Bloch direction, one entry per dimension"""
        return [g for g, size in zip(self.gammas, self.sizes)
            for _ in range(size)]

@dataclass(frozen=True, eq=False)
class TwoParameterSplit:
    t: float
    s: float
    rotation: np.ndarray
    scaling: np.ndarray
    rotation_norm: float
    scaling_norm: float

def polar(m):
    logger = logging.getLogger('UNITARYSCALING')
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidDimensionError("polar decomposition needs a square "
            + "matrix, got shape " + str(m.shape))
    rotation, scaling, singular_values = polar_svd(m)
    singular = bool(is_singular(singular_values))
    if singular:
        logger.warning("singular matrix, orthogonal part is not unique, "
            + "sigma_min = " + repr(float(singular_values[-1])))
    orientation = 1 if np.linalg.det(rotation) > 0 else -1
    commute_defect = float(np.linalg.norm(rotation @ scaling
        - scaling @ rotation))
    return PolarParts(frozen_array(rotation, float),
        frozen_array(scaling, float), commute_defect, orientation, singular)

def _scaling_rate(value):
    if value <= SINGULAR_TOL:
        return math.inf
    return -math.log(value)

def _sort_key(indexed_block):
    index, block = indexed_block
    return (-block.lam, abs(block.theta), index)

def canonical_form(parts, tol=CANONICAL_TOL):
    """
    Block-diagonal form of a commuting polar pair. Angles are in [0, pi]
    and every block carries the rate lam = -log of its scaling eigenvalue.
    Blocks are ordered by descending lam, then ascending |theta|.
    """
    if parts.commute_defect >= tol:
        raise NormalityError("rotation and scaling parts do not commute, "
            + "|RS - SR|_F = " + repr(parts.commute_defect),
            parts.commute_defect)
    if parts.orientation < 0:
        raise OrientationError("orthogonal part reverses orientation "
            + "(det R = -1), no rotation canonical form")
    invariant = commuting_blocks(parts.scaling, parts.rotation, tol)
    indexed = []
    for index, inv in enumerate(invariant):
        lam = _scaling_rate(inv.value)
        if inv.block.shape == (2, 2):
            theta = math.atan2(inv.block[1, 0], inv.block[0, 0])
            indexed.append((index, CanonicalBlock(theta, lam, 2),
                inv.columns))
        else:
            theta = 0.0 if inv.block[0, 0] > 0 else math.pi
            indexed.append((index, CanonicalBlock(theta, lam, 1),
                inv.columns))
    indexed.sort(key=lambda entry: _sort_key(entry[:2]))
    n = parts.rotation.shape[0]
    conjugation = (np.column_stack([entry[2] for entry in indexed])
        if indexed else np.zeros((n, 0)))
    blocks = tuple(entry[1] for entry in indexed)
    return CanonicalForm(frozen_array(conjugation, float), blocks,
        any(b.size == 1 for b in blocks))

def classify_isotropy(cf, tol=CANONICAL_TOL):
    lams = cf.lams
    if not lams:
        return Isotropy.ISOTROPIC
    if all(math.isinf(l) for l in lams):
        return Isotropy.ISOTROPIC
    if any(math.isinf(l) for l in lams):
        return Isotropy.ANISOTROPIC
    if max(lams) - min(lams) < tol:
        return Isotropy.ISOTROPIC
    return Isotropy.ANISOTROPIC

def spheroid_class(cf, tol=SPHEROID_TOL):
    """Shape of the image of the qubit Bloch ball under the scaling part"""
    if cf.conjugation.shape != (3, 3):
        raise InvalidDimensionError("spheroid classes exist for qubit "
            + "(3 dimensional) Bloch spaces only, got "
            + str(cf.conjugation.shape[0]))
    planes = [b for b in cf.blocks if b.size == 2]
    fixed = [b for b in cf.blocks if b.size == 1]
    if len(planes) != 1:
        return Spheroid.TRIAXIAL
    lam_plane = planes[0].lam
    lam_axis = fixed[0].lam
    if lam_plane > lam_axis + tol:
        return Spheroid.PROLATE
    if lam_plane < lam_axis - tol:
        return Spheroid.OBLATE
    return Spheroid.BALL

def check_normal_generator(sup, tol):
    defect = normality_defect(sup.lam)
    if defect >= tol:
        raise NormalityError("superoperator matrix is not normal, "
            + "|lam lam^T - lam^T lam|_F = " + repr(defect), defect)
    return defect

def generator_canonical_form(sup, tol=CANONICAL_TOL):
    check_normal_generator(sup, tol)
    lam = sup.lam
    symmetric = 0.5 * (lam + lam.T)
    skew = 0.5 * (lam - lam.T)
    invariant = commuting_blocks(symmetric, skew, tol)
    entries = []
    for index, inv in enumerate(invariant):
        gamma = -inv.value
        omega = float(inv.block[1, 0]) if inv.block.shape == (2, 2) else 0.0
        entries.append((-gamma, abs(omega), index, gamma, omega,
            inv.block.shape[0], inv.columns))
    entries.sort(key=lambda e: e[:3])
    conjugation = (np.column_stack([e[6] for e in entries]) if entries
        else np.zeros((sup.size, 0)))
    return GeneratorForm(frozen_array(conjugation, float),
        tuple(e[3] for e in entries), tuple(e[4] for e in entries),
        tuple(e[5] for e in entries))

def block_parameters(conjugation, sizes, m):
    """(theta, lam) of every block of K^T M K, for a fixed conjugation K"""
    conjugated = conjugation.T @ np.asarray(m, dtype=float) @ conjugation
    params = []
    offset = 0
    for size in sizes:
        sub = conjugated[offset:offset + size, offset:offset + size]
        if size == 2:
            scale = math.sqrt(abs(np.linalg.det(sub)))
            theta = math.atan2(sub[1, 0] - sub[0, 1], sub[0, 0] + sub[1, 1])
        else:
            scale = abs(sub[0, 0])
            theta = 0.0 if sub[0, 0] >= 0 else math.pi
        params.append((theta, _scaling_rate(scale)))
        offset += size
    return params

def angle_difference(a, b):
    """|a - b| reduced modulo 2 pi into [0, pi]"""
    return abs(math.remainder(a - b, 2 * math.pi))

def fit_rates(sup, times, tol=CANONICAL_TOL):
    times = list(times)
    if not times:
        raise InvalidParameterError("rate fit needs at least one time")
    if any(t <= 0 for t in times) or any(b <= a for a, b in zip(times,
            times[1:])):
        raise InvalidParameterError("rate fit times must be positive and "
            + "strictly increasing")
    form = generator_canonical_form(sup, tol)
    residual = 0.0
    for t in times:
        params = block_parameters(form.conjugation, form.sizes,
            expm(sup.lam, t))
        for (theta, lam), gamma, omega in zip(params, form.gammas,
                form.omegas):
            residual = max(residual, abs(lam - gamma * t),
                angle_difference(theta, omega * t))
    logging.getLogger('UNITARYSCALING').debug("fitted "
        + str(len(form.gammas)) + " blocks over " + str(len(times))
        + " times, residual = " + repr(residual))
    return RateFit(form.gammas, form.omegas, form.sizes, form.conjugation,
        residual)

def two_parameter_split(sup, t, reparameterization=None):
    """
    Splits M_t of a normal unital semigroup into the marginal semigroups
    R_t = exp(t A) and S_s = exp(s B) where A and B are the antisymmetric
    and symmetric parts of lam. s = t unless a monotone reparameterization
    s(t) is supplied.
    """
    if t < 0:
        raise InvalidParameterError("time must be non-negative, got "
            + repr(t))
    check_normal_generator(sup, CANONICAL_TOL)
    if not sup.is_unital():
        raise InvalidParameterError("two parameter split needs a unital "
            + "semigroup")
    s = t if reparameterization is None else reparameterization(t)
    if s < 0:
        raise InvalidParameterError("reparameterized time must be "
            + "non-negative, got " + repr(s))
    lam = sup.lam
    rotation = expm(0.5 * (lam - lam.T), t)
    scaling = expm(0.5 * (lam + lam.T), s)
    rotation_norm = float(scipy.linalg.norm(rotation, 2)) if rotation.size \
        else 1.0
    scaling_norm = float(scipy.linalg.norm(scaling, 2)) if scaling.size \
        else 1.0
    if abs(rotation_norm - 1) > SPLIT_NORM_TOL:
        raise NumericalError("rotation marginal is not norm preserving, "
            + "|R_t| = " + repr(rotation_norm))
    if reparameterization is None and scaling.size:
        m_norm = float(scipy.linalg.norm(expm(lam, t), 2))
        if abs(scaling_norm - m_norm) > SPLIT_NORM_TOL:
            raise NumericalError("scaling marginal norm " + repr(scaling_norm)
                + " differs from |M_t| = " + repr(m_norm))
    return TwoParameterSplit(t, s, frozen_array(rotation, float),
        frozen_array(scaling, float), rotation_norm, scaling_norm)
