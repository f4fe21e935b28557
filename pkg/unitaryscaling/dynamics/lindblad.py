import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.linalg

from unitaryscaling.dynamics.bloch import (
    InvalidDimensionError,
    InvalidParameterError,
    HermiticityError,
    IMAGINARY_TOL,
    check_square,
    check_hermitian,
    frozen_array,
)
from unitaryscaling.linalg import normality_defect

#L(rho) = -i[H, rho] + 1/2 sum_k (h_k rho h_k^H - 1/2 {K_k, rho})
#with K_k = h_k^H h_k (standard GKSL ordering) or K_k = h_k h_k^H (the
# reversed ordering). The two agree
# whenever sum_k h_k h_k^H = sum_k h_k^H h_k, e.g. for normal or
# adjoint-closed jump sets. Only the standard ordering preserves the trace.

UNITAL_TOL = 1e-10
CHOI_TOL = 1e-8
NULLITY_TOL = 1e-10

class Convention(Enum):
    STANDARD = "standard"
    REVERSED = "reversed"

@dataclass(frozen=True, eq=False)
class LindbladGenerator:
    hamiltonian: np.ndarray
    jumps: tuple = ()
    convention: Convention = Convention.STANDARD

    def __post_init__(self):
        hamiltonian = check_square(frozen_array(self.hamiltonian, complex))
        check_hermitian(hamiltonian)
        jumps = tuple(check_square(frozen_array(h, complex), hamiltonian.shape[0])
            for h in self.jumps)
        convention = Convention(self.convention)
        if jumps:
            total = sum(h.conj().T @ h for h in jumps)
            if not np.all(np.isfinite(total)):
                raise InvalidParameterError("sum of h^H h over the jump "
                    + "operators overflows")
        object.__setattr__(self, "hamiltonian", hamiltonian)
        object.__setattr__(self, "jumps", jumps)
        object.__setattr__(self, "convention", convention)

    @property
    def dim(self):
        return self.hamiltonian.shape[0]

    def adjoint_closed_operators(self):
        """Jumps, their adjoints and the Hamiltonian"""
        ops = list(self.jumps)
        ops.extend(h.conj().T for h in self.jumps)
        ops.append(self.hamiltonian)
        return ops

@dataclass(frozen=True, eq=False)
class SuperopMatrix:
    """Real matrix lam[a][b] = Tr(f_a L(f_b)) and translation generator
       ell[a] = Tr(L(I) f_a) over the traceless basis elements"""
    dim: int
    lam: np.ndarray
    ell: np.ndarray = field(default=None)

    def __post_init__(self):
        n = self.dim * self.dim - 1
        lam = frozen_array(self.lam, float)
        ell = frozen_array(np.zeros(n) if self.ell is None else self.ell,
            float)
        if lam.shape != (n, n) or ell.shape != (n,):
            raise InvalidDimensionError("superoperator of a d="
                + str(self.dim) + " system must be " + str(n) + "x" + str(n)
                + ", got " + str(lam.shape) + " and " + str(ell.shape))
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "ell", ell)

    @property
    def size(self):
        return self.dim * self.dim - 1

    @property
    def drift(self):
        """Constant term of dx/dt = lam x + ell/d for trace-one states"""
        return self.ell / self.dim

    def is_unital(self, tol=UNITAL_TOL):
        return float(np.linalg.norm(self.ell)) < tol

def apply_generator(gen, rho):
    rho = check_square(np.asarray(rho, dtype=complex), gen.dim)
    h0 = gen.hamiltonian
    result = -1j * (h0 @ rho - rho @ h0)
    for h in gen.jumps:
        hd = h.conj().T
        if gen.convention == Convention.STANDARD:
            k = hd @ h
        else:
            k = h @ hd
        result = result + 0.5 * (h @ rho @ hd - 0.5 * (k @ rho + rho @ k))
    return result

def liouvillian(gen):
    """
    Matrix of L acting on row-major vectorised d x d matrices, built
    column by column from the action on the matrix units E_ij.
    """
    d = gen.dim
    columns = []
    for i in range(d):
        for j in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[i, j] = 1
            columns.append(apply_generator(gen, unit).reshape(-1))
    return np.array(columns).T

def _real_part(values, what):
    residue = float(np.max(np.abs(values.imag))) if values.size else 0.0
    if residue > IMAGINARY_TOL:
        raise HermiticityError(what + " has imaginary residue "
            + repr(residue))
    return values.real

def superop_matrix(gen, basis):
    if gen.dim != basis.dim:
        raise InvalidDimensionError("generator has d=" + str(gen.dim)
            + " but basis has d=" + str(basis.dim))
    fs = basis.traceless
    images = np.array([apply_generator(gen, f) for f in fs])
    #lam[a][b] = Tr(f_a L(f_b)) = sum_ij f_a[i,j] L(f_b)[j,i]
    lam = np.einsum("aij,bji->ab", fs, images)
    image_of_identity = apply_generator(gen, np.eye(gen.dim))
    ell = np.einsum("aij,ji->a", fs, image_of_identity)
    return SuperopMatrix(gen.dim, _real_part(lam, "superoperator matrix"),
        _real_part(ell, "translation generator"))

def is_unital(gen, tol=UNITAL_TOL):
    image = apply_generator(gen, np.eye(gen.dim))
    return float(np.max(np.abs(image))) < tol

def choi_matrix(channel_fn, d):
    """Block matrix sum_ij E_ij (x) Phi(E_ij), unnormalised"""
    choi = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[i, j] = 1
            choi[i * d:(i + 1) * d, j * d:(j + 1) * d] = channel_fn(unit)
    return choi

def is_completely_positive_map(channel_fn, d, tol=CHOI_TOL):
    """Returns (is_cp, minimum Choi eigenvalue)"""
    choi = choi_matrix(channel_fn, d)
    choi = 0.5 * (choi + choi.conj().T)
    min_eigenvalue = float(np.linalg.eigvalsh(choi)[0])
    return min_eigenvalue >= -tol, min_eigenvalue

def propagator(gen, t):
    """exp(t L) on row-major vectorised matrices"""
    if t < 0:
        raise InvalidParameterError("time must be non-negative, got "
            + repr(t))
    return scipy.linalg.expm(t * liouvillian(gen))

def is_completely_positive_semigroup(gen, t, tol=CHOI_TOL):
    prop = propagator(gen, t)
    d = gen.dim
    return is_completely_positive_map(
        lambda unit: (prop @ unit.reshape(-1)).reshape(d, d), d, tol)

def is_normal_superop(sup, tol):
    """Returns (is_normal, |lam lam^T - lam^T lam|_F)"""
    if tol <= 0:
        raise InvalidParameterError("tolerance must be positive")
    defect = normality_defect(sup.lam)
    return defect < tol, defect

def commutant_dimension(ops, dim=None, tol=NULLITY_TOL):
    """Dimension of {X : [X, A] = 0 for every A in ops}"""
    ops = [np.asarray(a, dtype=complex) for a in ops]
    if not ops:
        if dim is None:
            raise InvalidDimensionError("dimension needed for an empty "
                + "operator list")
        return dim * dim
    d = ops[0].shape[0]
    for a in ops:
        check_square(a, d)
    identity = np.eye(d)
    #row-major vec(A X - X A) = (A (x) I - I (x) A^T) vec(X)
    stacked = np.vstack([np.kron(a, identity) - np.kron(identity, a.T)
        for a in ops])
    singular_values = scipy.linalg.svd(stacked, compute_uv=False)
    return d * d - int(np.sum(singular_values > tol))

def kernel_dimension(gen, tol=NULLITY_TOL):
    singular_values = scipy.linalg.svd(liouvillian(gen), compute_uv=False)
    return int(np.sum(singular_values < tol))

def steady_state(gen, tol=NULLITY_TOL):
    """Trace-one Hermitian element of the kernel of L"""
    logger = logging.getLogger('UNITARYSCALING')
    d = gen.dim
    kernel = scipy.linalg.null_space(liouvillian(gen), rcond=tol)
    if kernel.shape[1] == 0:
        raise InvalidParameterError("generator has no stationary state")
    if kernel.shape[1] > 1:
        logger.warning("stationary state is not unique, kernel dimension "
            + str(kernel.shape[1]))
    candidate = kernel[:, 0].reshape(d, d)
    trace = np.trace(candidate)
    if abs(trace) < tol:
        raise InvalidParameterError("kernel element has vanishing trace")
    candidate = candidate / trace
    return 0.5 * (candidate + candidate.conj().T)
