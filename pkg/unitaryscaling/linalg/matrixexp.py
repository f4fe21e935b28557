import logging

import numpy as np
import scipy.linalg

#a matrix is treated as normal when the Frobenius norm of its self-commutator
# is below this
NORMAL_TOL = 1e-10

def normality_defect(a):
    """Frobenius norm of A A^H - A^H A, zero exactly for normal matrices"""
    a = np.asarray(a)
    ah = a.conj().T
    return float(np.linalg.norm(a @ ah - ah @ a, "fro"))

def is_normal(a, tol=NORMAL_TOL):
    return normality_defect(a) < tol

def expm_normal(a):
    """
    Exponential of a normal matrix through its complex Schur form, which
    for a normal matrix is diagonal with a unitary Schur basis.
    """
    a = np.asarray(a)
    t, z = scipy.linalg.schur(a.astype(complex), output="complex")
    result = (z * np.exp(np.diag(t))) @ z.conj().T
    if np.isrealobj(a):
        return result.real
    return result

def expm(a, t=1.0, normal_tol=NORMAL_TOL):
    """
    Returns exp(t*a). Normal inputs go through an exact unitary
    diagonalisation, everything else through scipy's Pade scaling and
    squaring.
    """
    a = np.asarray(a)
    if a.shape == (0, 0):
        return np.zeros((0, 0), dtype=a.dtype)
    ta = t * a
    if not np.any(ta):
        return np.eye(a.shape[0], dtype=ta.dtype)
    logger = logging.getLogger('UNITARYSCALING')
    if is_normal(ta, normal_tol):
        logger.debug("matrix exponential via normal fast path")
        return expm_normal(ta)
    logger.debug("matrix exponential via pade scaling and squaring")
    return scipy.linalg.expm(ta)
