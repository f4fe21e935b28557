from dataclasses import dataclass

import numpy as np

#the real-vector (Bloch) representation of d x d Hermitian matrices
# a = Tr(a)/d * I + sum_alpha x_alpha f_alpha, x_alpha = Tr(a f_alpha)
#in the orthonormal generalized Gell-Mann basis f_0 = I/sqrt(d), f_1, ...
#for qubits f_alpha = sigma_alpha/sqrt(2), ordered (x, y, z)

HERMITIAN_TOL = 1e-10
IMAGINARY_TOL = 1e-10
POSITIVITY_TOL = 1e-10
TRACE_TOL = 1e-10
BALL_TOL = 1e-10

IDENTITY_2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

class UnitaryScalingError(ValueError):
    pass

class InvalidDimensionError(UnitaryScalingError):
    pass

class HermiticityError(UnitaryScalingError):
    pass

class InvalidParameterError(UnitaryScalingError):
    pass

def frozen_array(values, dtype):
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array

def check_square(a, d=None):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidDimensionError("expected a square matrix, got shape "
            + str(a.shape))
    if d is not None and a.shape[0] != d:
        raise InvalidDimensionError("expected a " + str(d) + "x" + str(d)
            + " matrix, got shape " + str(a.shape))
    return a

def hermiticity_defect(a):
    a = np.asarray(a)
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0

def check_hermitian(a, tol=HERMITIAN_TOL):
    defect = hermiticity_defect(a)
    if defect > tol:
        raise HermiticityError("matrix is not Hermitian, max |a - a^H| = "
            + repr(defect))

@dataclass(frozen=True, eq=False)
class HermitianBasis:
    """Orthonormal basis f_0..f_{d^2-1} of the d x d Hermitian matrices,
       stored as an array of shape (d^2, d, d)"""
    dim: int
    elements: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "elements", frozen_array(self.elements,
            complex))

    @property
    def size(self):
        return self.dim * self.dim - 1

    @property
    def traceless(self):
        return self.elements[1:]

    def gram(self):
        return np.einsum("aij,bij->ab", self.elements.conj(), self.elements)

@dataclass(frozen=True, eq=False)
class BlochVector:
    dim: int
    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", frozen_array(self.coords, float))
        if self.coords.shape != (self.dim * self.dim - 1,):
            raise InvalidDimensionError("Bloch vector of a d=" + str(self.dim)
                + " system needs " + str(self.dim * self.dim - 1)
                + " coordinates, got shape " + str(self.coords.shape))

    def norm_squared(self):
        return float(self.coords @ self.coords)

    @property
    def max_norm_squared(self):
        #squared radius of the ball holding every density matrix
        return (self.dim - 1) / self.dim

    def is_in_ball(self, slack=BALL_TOL):
        return self.norm_squared() <= self.max_norm_squared + slack

@dataclass(frozen=True, eq=False)
class HermitianDecomp:
    trace: float
    bloch: BlochVector

    @property
    def dim(self):
        return self.bloch.dim

def build_basis(d):
    """
    Generalized Gell-Mann basis normalised so that Tr(f_a f_b) = delta_ab.
    Order: I/sqrt(d), the symmetric pairs j<k, the antisymmetric pairs j<k,
    then the d-1 diagonal elements.
    """
    if int(d) != d or d < 2:
        raise InvalidDimensionError("basis dimension must be an integer >= 2,"
            + " got " + repr(d))
    d = int(d)
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    elements = [np.eye(d, dtype=complex) / np.sqrt(d)]
    for j, k in pairs:
        f = np.zeros((d, d), dtype=complex)
        f[j, k] = f[k, j] = 1 / np.sqrt(2)
        elements.append(f)
    for j, k in pairs:
        f = np.zeros((d, d), dtype=complex)
        f[j, k] = -1j / np.sqrt(2)
        f[k, j] = 1j / np.sqrt(2)
        elements.append(f)
    for l in range(1, d):
        diagonal = np.zeros(d)
        diagonal[:l] = 1
        diagonal[l] = -l
        elements.append(np.diag(diagonal / np.sqrt(l * (l + 1))).astype(
            complex))
    return HermitianBasis(d, np.array(elements))

def bloch_coords(a, basis):
    """x_alpha = Tr(a f_alpha) for alpha >= 1, imaginary residue checked"""
    coords = np.einsum("aij,ji->a", basis.traceless, a)
    residue = float(np.max(np.abs(coords.imag))) if coords.size else 0.0
    if residue > IMAGINARY_TOL:
        raise HermiticityError("Bloch coordinates have imaginary residue "
            + repr(residue))
    return coords.real

def vectorize(a, basis):
    a = check_square(np.asarray(a, dtype=complex), basis.dim)
    check_hermitian(a)
    trace = float(np.trace(a).real)
    return HermitianDecomp(trace, BlochVector(basis.dim, bloch_coords(a,
        basis)))

def reconstruct(decomp, basis):
    if decomp.dim != basis.dim:
        raise InvalidDimensionError("decomposition has d=" + str(decomp.dim)
            + " but basis has d=" + str(basis.dim))
    d = basis.dim
    return (decomp.trace / d * np.eye(d, dtype=complex)
        + np.tensordot(decomp.bloch.coords, basis.traceless, axes=1))

def state_from_bloch(x, basis):
    """Trace-one Hermitian matrix with Bloch vector x"""
    return reconstruct(HermitianDecomp(1.0, x), basis)

def is_physical_state(decomp, basis):
    """Returns (is_positive, minimum_eigenvalue) of the reconstruction"""
    if abs(decomp.trace - 1) > TRACE_TOL:
        raise InvalidParameterError("state must have unit trace, got "
            + repr(decomp.trace))
    min_eigenvalue = float(np.linalg.eigvalsh(reconstruct(decomp,
        basis))[0])
    return min_eigenvalue >= -POSITIVITY_TOL, min_eigenvalue

def bloch_radius(x):
    """Radius scaled so that pure states sit at 1, for qubits sqrt(2)|x|"""
    return float(np.sqrt(x.norm_squared() / x.max_norm_squared))
