"""Fixed-size dense linear algebra for the dynamics hot path.

Vectors are tuples of floats, matrices are tuples of row tuples. The
systems here are at most 4x4 and the solver sits inside the integration
loop, where per-call overhead dominates, so plain Python floats beat a
general array library.
"""

from __future__ import annotations

import math

Vec = tuple[float, ...]
Mat = tuple[tuple[float, ...], ...]

# Relative tolerance for the symmetry pre-check in cholesky_solve.
SYMMETRY_RTOL = 1e-12


class NotPositiveDefinite(ValueError):
    """A Cholesky pivot was not strictly positive.

    For a mass matrix this means the physical parameters are invalid,
    not that the solver hit a numerical corner case.
    """


def mat_vec(a: Mat, x: Vec) -> Vec:
    """Multiply ``a @ x``, summing each row left to right in index order."""
    if len(a) != len(x):
        raise ValueError(f"dimension mismatch: {len(a)}x matrix, {len(x)}-vector")
    out = []
    for row in a:
        s = 0.0
        for aij, xj in zip(row, x):
            s += aij * xj
        out.append(s)
    return tuple(out)


def cholesky_solve(a: Mat, b: Vec) -> Vec:
    """Solve ``a @ x = b`` for symmetric positive-definite ``a``.

    The input must be symmetric to within ``SYMMETRY_RTOL`` relative to
    its largest entry; it is then symmetrized as (A + A^T)/2 so that
    round-off from assembling the matrix cannot leak into the factors.

    Raises:
        ValueError: if dimensions disagree or ``a`` is not symmetric.
        NotPositiveDefinite: if a pivot of the factorization is <= 0.
    """
    n = len(b)
    if len(a) != n:
        raise ValueError(f"dimension mismatch: {len(a)}x matrix, {n}-vector")

    scale = 1.0
    for row in a:
        for v in row:
            av = abs(v)
            if av > scale:
                scale = av
    tol = SYMMETRY_RTOL * scale
    for i in range(n):
        for j in range(i):
            if abs(a[i][j] - a[j][i]) > tol:
                raise ValueError(
                    f"matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = "
                    f"{abs(a[i][j] - a[j][i]):.3e} exceeds {tol:.3e}"
                )

    # Lower-triangular factor of the symmetrized matrix.
    low = [[0.0] * n for _ in range(n)]
    for i in range(n):
        li = low[i]
        for j in range(i + 1):
            s = 0.5 * (a[i][j] + a[j][i])
            lj = low[j]
            for k in range(j):
                s -= li[k] * lj[k]
            if i == j:
                if s <= 0.0 or math.isnan(s):
                    raise NotPositiveDefinite(
                        f"Cholesky pivot {i} is {s:.3e}; matrix is not positive-definite"
                    )
                li[j] = math.sqrt(s)
            else:
                li[j] = s / lj[j]

    # Forward substitution L y = b, then back substitution L^T x = y.
    y = [0.0] * n
    for i in range(n):
        s = b[i]
        li = low[i]
        for k in range(i):
            s -= li[k] * y[k]
        y[i] = s / li[i]
    x = [0.0] * n
    for i in range(n - 1, -1, -1):
        s = y[i]
        for k in range(i + 1, n):
            s -= low[k][i] * x[k]
        x[i] = s / low[i][i]
    return tuple(x)
