"""Sparse matrices in compressed row layout and the direct solver used inside
every Newton step.
"""

import numpy as np
import scipy.sparse as sparse
import scipy.sparse.linalg as sparse_linalg

from peterlin import config


RESIDUAL_TOLERANCE = 1e-10

# Rounds of iterative refinement attempted before giving up on the residual.
REFINEMENT_STEPS = 3


class LinearSolveError(RuntimeError):
    """Raised when a linear system could not be solved to the required residual.

    Attributes
    ----------

    residual : float
      Achieved ``||Ax - b||_2`` (``inf`` when the factorization failed).
    """

    def __init__(self, message, residual):
        self.residual = float(residual)
        super().__init__(f"{message} (residual {self.residual:.3e})")


class CooBuilder:
    """Collects (row, col, value) triplets before building a SparseMatrix.

    Parameters
    ----------

    n_rows, n_cols : int
      Shape of the matrix being built.

    Examples
    --------

    >>> builder = CooBuilder(1, 1)
    >>> builder.add(0, 0, 1.0)
    >>> builder.add(0, 0, 2.0)
    >>> finalize(builder).toarray()
    array([[3.]])
    """

    def __init__(self, n_rows, n_cols):
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        self._rows = []
        self._cols = []
        self._values = []

    def add(self, rows, cols, values):
        """Appends triplets. Scalars or arrays of matching shapes are accepted.

        Raises
        ------

        ValueError
          When an index falls outside the matrix.
        """
        rows, cols, values = np.broadcast_arrays(
            np.asarray(rows, dtype=np.int64),
            np.asarray(cols, dtype=np.int64),
            np.asarray(values, dtype=float),
        )
        rows, cols, values = rows.ravel(), cols.ravel(), values.ravel()
        if rows.size:
            if rows.min() < 0 or rows.max() >= self.n_rows:
                raise ValueError(
                    "Row index out of range for a %dx%d matrix"
                    % (self.n_rows, self.n_cols)
                )
            if cols.min() < 0 or cols.max() >= self.n_cols:
                raise ValueError(
                    "Column index out of range for a %dx%d matrix"
                    % (self.n_rows, self.n_cols)
                )
        self._rows.append(rows)
        self._cols.append(cols)
        self._values.append(values)

    def add_block(self, row_dofs, col_dofs, blocks):
        """Scatters a batch of element matrices.

        ``row_dofs`` is (K, r), ``col_dofs`` is (K, c) and ``blocks`` is (K, r, c).
        """
        row_dofs = np.asarray(row_dofs)
        col_dofs = np.asarray(col_dofs)
        rows = np.broadcast_to(row_dofs[:, :, None], blocks.shape)
        cols = np.broadcast_to(col_dofs[:, None, :], blocks.shape)
        self.add(rows, cols, blocks)

    def triplets(self):
        if not self._rows:
            empty = np.zeros(0)
            return empty.astype(np.int64), empty.astype(np.int64), empty
        return (
            np.concatenate(self._rows),
            np.concatenate(self._cols),
            np.concatenate(self._values),
        )


class SparseMatrix:
    """General sparse real matrix in compressed row layout.

    Column indices within each row are strictly increasing and no duplicate
    entries are stored. Instances are immutable: arithmetic returns new matrices.

    Parameters
    ----------

    csr : scipy.sparse matrix
      Any scipy sparse matrix; it is converted to canonical CSR form.
    """

    def __init__(self, csr):
        csr = sparse.csr_matrix(csr, dtype=float, copy=True)
        csr.sum_duplicates()
        csr.sort_indices()
        self.csr = csr

    @property
    def n_rows(self):
        return self.csr.shape[0]

    @property
    def n_cols(self):
        return self.csr.shape[1]

    @property
    def shape(self):
        return self.csr.shape

    @property
    def row_offsets(self):
        return self.csr.indptr

    @property
    def column_indices(self):
        return self.csr.indices

    @property
    def values(self):
        return self.csr.data

    @property
    def nnz(self):
        return self.csr.nnz

    @property
    def T(self):
        return SparseMatrix(self.csr.T)

    def toarray(self):
        return self.csr.toarray()

    def to_builder(self):
        """Triplets of the stored entries, as a CooBuilder."""
        coo = self.csr.tocoo()
        builder = CooBuilder(*self.shape)
        builder.add(coo.row, coo.col, coo.data)
        return builder

    def submatrix(self, rows, cols=None):
        """Restriction to the index arrays ``rows`` x ``cols`` (``cols``
        defaults to ``rows``), as used to eliminate Dirichlet dofs.
        """
        cols = rows if cols is None else cols
        return SparseMatrix(self.csr[rows][:, cols])

    def dot(self, vector):
        return self.csr @ np.asarray(vector, dtype=float)

    def __matmul__(self, other):
        if isinstance(other, SparseMatrix):
            return SparseMatrix(self.csr @ other.csr)
        return self.dot(other)

    def __add__(self, other):
        return SparseMatrix(self.csr + _as_csr(other))

    def __sub__(self, other):
        return SparseMatrix(self.csr - _as_csr(other))

    def __mul__(self, scalar):
        return SparseMatrix(self.csr * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return SparseMatrix(-self.csr)

    def __repr__(self):
        return "SparseMatrix(%dx%d, nnz=%d)" % (self.n_rows, self.n_cols, self.nnz)


def _as_csr(matrix):
    return matrix.csr if isinstance(matrix, SparseMatrix) else matrix


def finalize(builder):
    """Sums duplicate triplets of ``builder`` and returns the sorted CSR matrix."""
    rows, cols, values = builder.triplets()
    coo = sparse.coo_matrix(
        (values, (rows, cols)), shape=(builder.n_rows, builder.n_cols)
    )
    return SparseMatrix(coo)


def block_matrix(blocks):
    """Assembles a SparseMatrix from a nested list of SparseMatrix (or ``None``)
    blocks, as ``scipy.sparse.bmat`` does.
    """
    return SparseMatrix(
        sparse.bmat(
            [
                [None if block is None else _as_csr(block) for block in row]
                for row in blocks
            ],
            format="csr",
        )
    )


def factorize(matrix):
    """SuperLU factorization of a square SparseMatrix, with the column ordering
    and diagonal pivot threshold of ``peterlin.config``.

    Raises LinearSolveError when the matrix is found singular.
    """
    try:
        return sparse_linalg.splu(
            _as_csr(matrix).tocsc(),
            permc_spec=config.PERMC_SPEC,
            diag_pivot_thresh=config.DIAG_PIVOT_THRESH,
        )
    except RuntimeError as err:
        raise LinearSolveError(f"Sparse LU factorization failed: {err}", np.inf)


def solve(matrix, rhs, tolerance=RESIDUAL_TOLERANCE):
    """Solves ``matrix @ x = rhs`` with a sparse LU factorization.

    SuperLU with threshold pivoting is used, so indefinite (saddle point)
    systems are handled. Pivots off the diagonal are only taken when the
    diagonal is small, and a few rounds of iterative refinement recover the
    accuracy when the first residual misses the target.

    Parameters
    ----------

    matrix : SparseMatrix
      Square nonsingular matrix.

    rhs : numpy.ndarray
      Right-hand side.

    tolerance : float, optional
      Target relative residual, ``||Ax - b||_2 <= tolerance * (1 + ||b||_2)``.

    Returns
    -------

    numpy.ndarray
      The solution.

    Raises
    ------

    LinearSolveError
      When the matrix is singular or the residual target is not met. The
      achieved residual is attached.
    """
    csr = _as_csr(matrix)
    rhs = np.asarray(rhs, dtype=float)
    if csr.shape[0] != csr.shape[1]:
        raise ValueError("Cannot solve a non-square %dx%d system" % csr.shape)
    if rhs.shape[0] != csr.shape[0]:
        raise ValueError(
            "Right-hand side of length %d for a %dx%d system"
            % ((rhs.shape[0],) + csr.shape)
        )

    factor = factorize(csr)

    target = tolerance * (1.0 + np.linalg.norm(rhs))
    solution = factor.solve(rhs)
    residual = rhs - csr @ solution
    residual_norm = np.linalg.norm(residual)
    for _ in range(REFINEMENT_STEPS):
        if residual_norm <= target:
            break
        solution = solution + factor.solve(residual)
        residual = rhs - csr @ solution
        residual_norm = np.linalg.norm(residual)

    if not np.isfinite(residual_norm) or residual_norm > target:
        raise LinearSolveError(
            "Linear system singular or ill-conditioned beyond tolerance",
            residual_norm if np.isfinite(residual_norm) else np.inf,
        )
    return solution
