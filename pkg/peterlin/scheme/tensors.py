"""Small-tensor algebra of 2x2 matrices, vectorized over leading axes."""

import numpy as np


IDENTITY = np.eye(2)

# Basis of symmetric matrices matching the stored components (C11, C12, C22):
# a tensor with stored components c is sum_m c_m SYM_BASIS[m].
SYM_BASIS = np.array(
    [
        [[1.0, 0.0], [0.0, 0.0]],
        [[0.0, 1.0], [1.0, 0.0]],
        [[0.0, 0.0], [0.0, 1.0]],
    ]
)
SYM_BASIS_TRACE = np.array([1.0, 0.0, 1.0])


def trace(matrix):
    return matrix[..., 0, 0] + matrix[..., 1, 1]


def determinant(matrix):
    return matrix[..., 0, 0] * matrix[..., 1, 1] - matrix[..., 0, 1] * matrix[..., 1, 0]


def frobenius(first, second):
    """``A : B = sum_ij A_ij B_ij`` over the two last axes."""
    return np.einsum("...ij,...ij->...", first, second)


def adjugate(matrix):
    """Adjugate ``[[d22, -d12], [-d21, d11]]`` of (..., 2, 2) matrices.

    Linear in its argument; ``D adj(D) = det(D) I``.

    Examples
    --------

    >>> adjugate(np.array([[2.0, 1.0], [1.0, 3.0]]))
    array([[ 3., -1.],
           [-1.,  2.]])
    """
    matrix = np.asarray(matrix, dtype=float)
    result = np.empty(matrix.shape)
    result[..., 0, 0] = matrix[..., 1, 1]
    result[..., 1, 1] = matrix[..., 0, 0]
    result[..., 0, 1] = -matrix[..., 0, 1]
    result[..., 1, 0] = -matrix[..., 1, 0]
    return result


SYM_BASIS_ADJUGATE = adjugate(SYM_BASIS)


def cancellation_residual(e, d, adjugate=adjugate):
    """Left side of the cancellation identity
    ``(tr D) D : E - E D : D - 1/2 (tr E) adj(D) : D``, zero for every matrix
    ``E`` and symmetric ``D``.

    Parameters
    ----------

    e, d : numpy.ndarray
      (..., 2, 2) arrays, ``d`` symmetric.

    adjugate : callable, optional
      Adjugate implementation under test.
    """
    e = np.asarray(e, dtype=float)
    d = np.asarray(d, dtype=float)
    return (
        trace(d) * frobenius(d, e)
        - frobenius(e @ d, d)
        - 0.5 * trace(e) * frobenius(adjugate(d), d)
    )


def project_sym(matrix):
    """Products ``X : S_m`` with the symmetric basis, (..., 2, 2) -> (..., 3):
    ``(X11, X12 + X21, X22)``.
    """
    return np.stack(
        [matrix[..., 0, 0], matrix[..., 0, 1] + matrix[..., 1, 0], matrix[..., 1, 1]],
        axis=-1,
    )
