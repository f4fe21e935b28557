from unitaryscaling.linalg.matrixexp import (
    NORMAL_TOL,
    normality_defect,
    is_normal,
    expm_normal,
    expm,
)
from unitaryscaling.linalg.polarfactor import (
    SINGULAR_TOL,
    polar_svd,
    is_singular,
)
from unitaryscaling.linalg.blockdiag import (
    InvariantBlock,
    cluster_eigenvalues,
    commuting_blocks,
)
