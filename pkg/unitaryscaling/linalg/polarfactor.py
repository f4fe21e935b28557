import numpy as np
import scipy.linalg

#smallest singular value at or below which the orthogonal factor is not unique
SINGULAR_TOL = 1e-12

def polar_svd(m):
    """
    Left polar decomposition M = S R of a real square matrix through its
    singular value decomposition M = U diag(s) V^T, with R = U V^T and
    S = U diag(s) U^T. Returns (R, S, singular_values). For singular M
    the factor R is taken with det R = +1.
    """
    m = np.asarray(m, dtype=float)
    u, s, vt = scipy.linalg.svd(m)
    if is_singular(s) and np.linalg.det(u @ vt) < 0:
        #the null direction is free, pick the proper rotation
        u[:, -1] *= -1
    rotation = u @ vt
    scaling = (u * s) @ u.T
    scaling = 0.5 * (scaling + scaling.T)
    return rotation, scaling, s

def is_singular(singular_values, tol=SINGULAR_TOL):
    return len(singular_values) > 0 and singular_values[-1] <= tol
