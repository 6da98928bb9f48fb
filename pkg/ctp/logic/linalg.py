from __future__ import annotations
from typing import List, Sequence
import sympy
from sympy.matrices.normalforms import hermite_normal_form

__all__ = ["integer_kernel", "lattice_basis", "in_lattice"]

def _columns(M: sympy.Matrix) -> List[List[int]]:
    return [[int(x) for x in M.col(j)] for j in range(M.cols)]

def _hermite_columns(vectors: Sequence[Sequence[int]], dim: int) -> List[List[int]]:
    # Hermite basis of the span of the vectors. Each basis column ends in its
    # positive pivot and the pivot rows increase along the basis.
    cols = [[int(x) for x in v] for v in vectors if any(x != 0 for x in v)]
    if len(cols) == 0:
        return []
    M = sympy.Matrix(dim, len(cols), lambda i, j: cols[j][i])
    return _columns(hermite_normal_form(M))

def integer_kernel(A: Sequence[Sequence[int]], ncols: int = 0) -> List[List[int]]:
    """
    A basis of the integer vectors ``x`` with ``A x = 0``.

    Arguments
    ---------
    * A: Sequence[Sequence[int]]
        The ``m x n`` matrix as a list of rows.
    * ncols: int
        The number of columns, only used when ``A`` has no rows.

    Returns
    -------
    * List[List[int]]
        ``n - rank(A)`` vectors spanning the kernel in ``Z^n``.
    """
    n = len(A[0]) if len(A) > 0 else ncols
    rows = [[int(x) for x in row] for row in A if any(x != 0 for x in row)]
    if n == 0:
        return []
    if len(rows) == 0:
        return [[int(i == j) for i in range(n)] for j in range(n)]
    # the columns (e_j ; A e_j) span the graph of A, and the Hermite columns
    # pivoting on the identity rows vanish on the rows of A
    M = sympy.Matrix.vstack(sympy.eye(n), sympy.Matrix(rows))
    return [col[:n] for col in _columns(hermite_normal_form(M))
            if all(x == 0 for x in col[n:])]

def lattice_basis(vectors: Sequence[Sequence[int]], dim: int) -> List[List[int]]:
    """
    The Hermite basis of the lattice spanned by ``vectors`` in ``Z^dim``:
    each basis vector has its first nonzero entry positive, at a position
    increasing along the basis.
    """
    # reversing the coordinates puts the pivots at the first nonzero entries
    rev = [list(v)[::-1] for v in vectors]
    return [col[::-1] for col in _hermite_columns(rev, dim)][::-1]

def in_lattice(basis: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    # the Hermite form is unique, so v is in the lattice exactly when adding
    # it leaves the form unchanged
    dim = len(v)
    if all(x == 0 for x in v):
        return True
    return _hermite_columns(basis, dim) == _hermite_columns(list(basis) + [v], dim)
