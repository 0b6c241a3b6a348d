from peterlin.linalg.SparseMatrix import (
    CooBuilder,
    LinearSolveError,
    SparseMatrix,
    block_matrix,
    factorize,
    finalize,
    solve,
)


__all__ = [
    "CooBuilder",
    "SparseMatrix",
    "LinearSolveError",
    "block_matrix",
    "factorize",
    "finalize",
    "solve",
]
