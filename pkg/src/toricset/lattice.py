"""Integer kernels through column-style Hermite normal form.

Matrices are plain lists of rows of Python ints.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exactmath import ext_gcd

IntMatrix = list[list[int]]


def identity(k: int) -> IntMatrix:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def matmul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def matvec(A: IntMatrix, v: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def transpose(A: IntMatrix) -> IntMatrix:
    return [list(col) for col in zip(*A)]


def determinant(A: IntMatrix) -> int:
    """Exact determinant by fraction elimination (square matrices only)."""
    n = len(A)
    M = [[Fraction(v) for v in row] for row in A]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                for k in range(c, n):
                    M[r][k] -= f * M[c][k]
    return int(det)


def _col_combine(A: IntMatrix, i: int, j: int, a: int, b: int, c: int, d: int) -> None:
    # (col_i, col_j) <- (a*col_i + b*col_j, c*col_i + d*col_j)
    for row in A:
        x, y = row[i], row[j]
        row[i] = a * x + b * y
        row[j] = c * x + d * y


def hnf(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, list[int]]:
    """Column-style Hermite normal form.

    Returns ``(H, U, pivot_rows)`` with ``H == M @ U``, ``U`` unimodular and
    ``H`` lower echelon: column ``c`` has its pivot in row ``pivot_rows[c]``,
    pivots are positive, and every entry to the left of a pivot lies in
    ``[0, pivot)``. Columns past ``len(pivot_rows)`` are zero.
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    H = [list(r) for r in M]
    U = identity(cols)
    pivots: list[int] = []
    c = 0
    for r in range(rows):
        if c >= cols:
            break
        for k in range(c + 1, cols):
            b = H[r][k]
            if b == 0:
                continue
            a = H[r][c]
            g, s, t = ext_gcd(a, b)
            _col_combine(H, c, k, s, t, -b // g, a // g)
            _col_combine(U, c, k, s, t, -b // g, a // g)
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            for A in (H, U):
                for row in A:
                    row[c] = -row[c]
        p = H[r][c]
        for k in range(c):
            q = H[r][k] // p
            if q:
                for A in (H, U):
                    for row in A:
                        row[k] -= q * row[c]
        pivots.append(r)
        c += 1
    return H, U, pivots


def rank(M: IntMatrix) -> int:
    return len(hnf(M)[2])


def kernel_basis(M: IntMatrix, ncols: int | None = None) -> list[tuple[int, ...]]:
    """A Z-basis of ``{v : M v = 0}``, read off the trailing columns of U.

    ``ncols`` is needed only when ``M`` has no rows.
    """
    if not M:
        k = ncols or 0
        return [tuple(r) for r in identity(k)]
    _, U, pivots = hnf(M)
    r = len(pivots)
    return [tuple(U[i][j] for i in range(len(U))) for j in range(r, len(U))]


def in_lattice_span(v: Sequence[int], basis: Sequence[Sequence[int]]) -> list[int] | None:
    """Integer coordinates of ``v`` in ``basis``, or None if v is outside the lattice."""
    if not basis:
        return [] if not any(v) else None
    B = transpose([list(b) for b in basis])  # len(v) x k, basis vectors as columns
    H, U, pivots = hnf(B)
    y = [0] * len(basis)
    resid = list(v)
    for c, r in enumerate(pivots):
        if resid[r] % H[r][c]:
            return None
        y[c] = resid[r] // H[r][c]
        if y[c]:
            for i in range(len(resid)):
                resid[i] -= y[c] * H[i][c]
    if any(resid):
        return None
    return matvec(U, y)


def check_relation(v: Sequence[int], params) -> bool:
    """Does ``v`` encode an integer relation among the semigroup generators?

    ``params`` is a :class:`~toricset.family.FamilyParams` or an exponent
    matrix.
    """
    from .family import FamilyParams, exponent_matrix

    M = exponent_matrix(params) if isinstance(params, FamilyParams) else params
    if len(v) != len(M[0]):
        raise ValueError(f"vector of length {len(v)}, expected {len(M[0])}")
    return not any(matvec(M, v))
