import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg
import scipy.special

from unitaryscaling.dynamics.bloch import (
    InvalidDimensionError,
    InvalidParameterError,
    check_square,
    check_hermitian,
    frozen_array,
)

#entropies are in nats. linear entropy in Bloch coordinates is
# S_L = 1 - Tr rho^2 = (d-1)/d - |x|^2

DENSITY_TRACE_TOL = 1e-8
EIGENVALUE_CLAMP_TOL = 1e-10
SUPPORT_TOL = 1e-12
MONOTONE_SLACK = 1e-10
#fitted zero rates come out as -1e-17 or so
RATE_TOL = 1e-12

class EntropyKind(Enum):
    LINEAR = "linear"
    VON_NEUMANN = "von_neumann"

@dataclass(frozen=True, eq=False)
class EntropyTrace:
    times: np.ndarray
    values: np.ndarray
    kind: EntropyKind

    def __post_init__(self):
        times = frozen_array(self.times, float)
        values = frozen_array(self.values, float)
        if times.shape != values.shape:
            raise InvalidDimensionError("entropy trace has "
                + str(len(times)) + " times and " + str(len(values))
                + " values")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "kind", EntropyKind(self.kind))

    def is_non_decreasing(self, slack=MONOTONE_SLACK):
        return bool(np.all(np.diff(self.values) >= -slack))

    def is_bounded(self, d, slack=1e-12):
        """Linear entropies lie in [0, (d-1)/d], von Neumann in [0, ln d]"""
        upper = (d - 1) / d if self.kind == EntropyKind.LINEAR else \
            math.log(d)
        return bool(np.all(self.values >= -slack)
            and np.all(self.values <= upper + slack))

@dataclass(frozen=True, eq=False)
class SubspaceWeights:
    """|x_k|^2 of the Bloch vector restricted to every canonical block"""
    weights: np.ndarray

    def __post_init__(self):
        weights = frozen_array(self.weights, float)
        if np.any(weights < 0):
            raise InvalidParameterError("subspace weights must be "
                + "non-negative")
        object.__setattr__(self, "weights", weights)

    def total(self):
        return float(np.sum(self.weights))

@dataclass(frozen=True)
class EntropySplit:
    delta_s: float
    #production, S(rho_in | sigma) - S(rho_out | sigma)
    delta_p: float
    #exchange, -Tr((rho_out - rho_in) ln sigma)
    delta_e: float

def check_density(rho, tol=DENSITY_TRACE_TOL):
    rho = check_square(np.asarray(rho, dtype=complex))
    check_hermitian(rho)
    trace = float(np.trace(rho).real)
    if abs(trace - 1) > tol:
        raise InvalidParameterError("density matrix must have unit trace, "
            + "got " + repr(trace))
    return rho

def _probabilities(rho):
    values = scipy.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if values[0] < -EIGENVALUE_CLAMP_TOL:
        raise InvalidParameterError("density matrix has negative "
            + "eigenvalue " + repr(float(values[0])))
    return np.clip(values, 0.0, None)

def linear_entropy(rho):
    rho = check_density(rho)
    return float(1.0 - np.real(np.trace(rho @ rho)))

def linear_entropy_from_bloch(x):
    if not x.is_in_ball():
        raise InvalidParameterError("Bloch vector outside the ball of "
            + "states, |x|^2 = " + repr(x.norm_squared()))
    return x.max_norm_squared - x.norm_squared()

def predicted_linear_entropy(weights, gammas, d, t):
    """(d-1)/d - sum_k exp(-2 gamma_k t) w_k"""
    w = weights.weights
    gammas = np.asarray(gammas, dtype=float)
    if len(w) != len(gammas):
        raise InvalidDimensionError("got " + str(len(w)) + " weights but "
            + str(len(gammas)) + " rates")
    if np.any(gammas < -RATE_TOL):
        raise InvalidParameterError("scaling rates must be non-negative")
    gammas = np.clip(gammas, 0.0, None)
    if t < 0:
        raise InvalidParameterError("time must be non-negative, got "
            + repr(t))
    return float((d - 1) / d - np.sum(np.exp(-2 * gammas * t) * w))

def isotropic_entropy_curve(gamma, d, s0, times):
    if gamma < 0:
        raise InvalidParameterError("scaling rate must be non-negative")
    ceiling = (d - 1) / d
    if not 0 <= s0 <= ceiling:
        raise InvalidParameterError("initial linear entropy must lie in "
            + "[0, " + repr(ceiling) + "], got " + repr(s0))
    times = np.asarray(times, dtype=float)
    decay = np.exp(-2 * gamma * times)
    return EntropyTrace(times, ceiling * (1 - decay) + decay * s0,
        EntropyKind.LINEAR)

def von_neumann_entropy(rho):
    p = _probabilities(check_density(rho))
    return float(-np.sum(scipy.special.xlogy(p, p)))

def qubit_entropy_from_radius(r):
    """Entropy of a qubit whose eigenvalues are (1 +- r)/2"""
    p = np.array([(1 + r) / 2, (1 - r) / 2])
    return float(-np.sum(scipy.special.xlogy(p, p)))

def qubit_vn_isotropic_curve(gamma, r0, times):
    if not 0 <= r0 <= 1:
        raise InvalidParameterError("initial radius must lie in [0, 1], "
            + "got " + repr(r0))
    if gamma < 0:
        raise InvalidParameterError("scaling rate must be non-negative")
    times = np.asarray(times, dtype=float)
    values = [qubit_entropy_from_radius(math.exp(-gamma * t) * r0)
        for t in times]
    return EntropyTrace(times, values, EntropyKind.VON_NEUMANN)

def _log_overlap(rho, sigma):
    """
    Splits Tr(rho ln sigma) over the eigenbasis of sigma into the finite
    part on the support of sigma and the weight rho puts on its kernel.
    """
    values, vectors = scipy.linalg.eigh(0.5 * (sigma + sigma.conj().T))
    overlaps = np.real(np.einsum("ia,ij,ja->a", vectors.conj(), rho,
        vectors))
    support = values > SUPPORT_TOL
    finite = float(np.sum(overlaps[support] * np.log(values[support])))
    kernel_weight = float(np.sum(overlaps[~support]))
    return finite, kernel_weight

def relative_entropy(rho, sigma):
    """S(rho | sigma) = Tr(rho ln rho - rho ln sigma), inf when the support
       of rho is not inside the support of sigma"""
    rho = check_density(rho)
    sigma = check_density(sigma)
    if rho.shape != sigma.shape:
        raise InvalidDimensionError("states have shapes " + str(rho.shape)
            + " and " + str(sigma.shape))
    finite, kernel_weight = _log_overlap(rho, sigma)
    if kernel_weight > SUPPORT_TOL:
        return math.inf
    return -von_neumann_entropy(rho) - finite

def entropy_production_exchange(rho_in, rho_out, sigma):
    """
    Splits the entropy change of rho_in -> rho_out under a channel with
    fixed point sigma into production and exchange, delta_s = delta_p +
    delta_e. The exchange term is delta_e = -Tr((rho_out - rho_in) ln sigma),
    which keeps delta_p = S(rho_in|sigma) - S(rho_out|sigma) >= 0; with
    the opposite sign the two only agree for unital maps. When sigma is
    singular and the kernel weights of the two states differ, the exchange
    term diverges and is returned as +-inf.
    """
    logger = logging.getLogger('UNITARYSCALING')
    rho_in = check_density(rho_in)
    rho_out = check_density(rho_out)
    sigma = check_density(sigma)
    if not rho_in.shape == rho_out.shape == sigma.shape:
        raise InvalidDimensionError("states must share one dimension")
    delta_s = von_neumann_entropy(rho_out) - von_neumann_entropy(rho_in)
    finite_in, kernel_in = _log_overlap(rho_in, sigma)
    finite_out, kernel_out = _log_overlap(rho_out, sigma)
    excess = kernel_out - kernel_in
    if abs(excess) <= SUPPORT_TOL:
        delta_e = -(finite_out - finite_in)
    else:
        logger.warning("fixed point is singular and the kernel weight "
            + "changes by " + repr(excess) + ", exchange entropy diverges")
        delta_e = math.inf if excess > 0 else -math.inf
    return EntropySplit(delta_s, delta_s - delta_e, delta_e)

def subspace_weights(x, conjugation, sizes):
    rotated = np.asarray(conjugation, dtype=float).T @ x.coords
    if sum(sizes) != len(rotated):
        raise InvalidDimensionError("block sizes cover " + str(sum(sizes))
            + " of " + str(len(rotated)) + " dimensions")
    offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    return SubspaceWeights([float(rotated[a:b] @ rotated[a:b])
        for a, b in zip(offsets, offsets[1:])])

def entropy_trace(states, times, kind=EntropyKind.LINEAR):
    kind = EntropyKind(kind)
    fn = linear_entropy if kind == EntropyKind.LINEAR else \
        von_neumann_entropy
    return EntropyTrace(times, [fn(rho) for rho in states], kind)
