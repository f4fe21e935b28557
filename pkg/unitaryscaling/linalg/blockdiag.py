import logging
from collections import namedtuple

import numpy as np
import scipy.linalg

#basis columns spanning one invariant block, the eigenvalue of the symmetric
# matrix on it, and the 1x1 or 2x2 restriction of the partner matrix
InvariantBlock = namedtuple("InvariantBlock", ["columns", "value", "block"])

def cluster_eigenvalues(values, tol):
    """Splits ascending eigenvalues into runs whose neighbours differ
       by no more than tol, returns (start, end) index pairs"""
    clusters = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[i - 1] > tol:
            clusters.append((start, i))
            start = i
    return clusters

def _pair_singles(singles, value, tol):
    #1x1 blocks of the partner with equal entries are merged into 2x2 blocks
    # (rotation by 0 or pi, or a zero skew block), leftovers stay 1x1
    singles = sorted(singles, key=lambda s: s[0])
    result = []
    i = 0
    while i < len(singles):
        if (i + 1 < len(singles)
                and abs(singles[i + 1][0] - singles[i][0]) <= tol):
            entry = 0.5 * (singles[i][0] + singles[i + 1][0])
            columns = np.column_stack([singles[i][1], singles[i + 1][1]])
            result.append(InvariantBlock(columns, value,
                np.diag([entry, entry])))
            i += 2
        else:
            result.append(InvariantBlock(singles[i][1].reshape(-1, 1), value,
                np.array([[singles[i][0]]])))
            i += 1
    return result

def commuting_blocks(symmetric, partner, tol):
    """
    Simultaneously block-diagonalises a real symmetric matrix and a real
    normal matrix commuting with it (an orthogonal or antisymmetric one).

    The symmetric matrix is diagonalised first and its eigenvalues are
    clustered with tolerance tol; the partner is restricted to every
    cluster and brought to real Schur form there. 2x2 blocks are oriented
    so that their (2,1) entry is non-negative.

    Returns a list of InvariantBlock in cluster order (ascending
    eigenvalue of the symmetric matrix).
    """
    logger = logging.getLogger('UNITARYSCALING')
    symmetric = 0.5 * (symmetric + symmetric.T)
    values, vectors = scipy.linalg.eigh(symmetric)
    blocks = []
    for start, end in cluster_eigenvalues(values, tol):
        basis = vectors[:, start:end]
        value = float(np.mean(values[start:end]))
        restricted = basis.T @ partner @ basis
        schur_form, schur_basis = scipy.linalg.schur(restricted,
            output="real")
        columns = basis @ schur_basis
        size = end - start
        singles = []
        i = 0
        while i < size:
            if i + 1 < size and schur_form[i + 1, i] != 0.0:
                block = schur_form[i:i + 2, i:i + 2].copy()
                pair = columns[:, i:i + 2].copy()
                if block[1, 0] < 0:
                    #flipping the second basis vector reverses the sense
                    pair[:, 1] *= -1
                    block[0, 1] *= -1
                    block[1, 0] *= -1
                blocks.append(InvariantBlock(pair, value, block))
                i += 2
            else:
                singles.append((float(schur_form[i, i]), columns[:, i]))
                i += 1
        if len(singles) > 1:
            logger.debug("pairing " + str(len(singles)) + " degenerate "
                + "one-dimensional blocks at eigenvalue " + repr(value))
        blocks.extend(_pair_singles(singles, value, tol))
    return blocks
