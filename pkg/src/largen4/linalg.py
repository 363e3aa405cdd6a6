"""Gaussian elimination over Q(zeta_N).

Matrices are lists of rows of ``Scalar``.  Only what the engine needs:
reduced row echelon form, null spaces, inverses and linear solves.
"""
from __future__ import annotations

from .scalars import Scalar


def rref(rows: list[list[Scalar]]) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    A = [list(r) for r in rows]
    if not A:
        return A, []
    ncols = len(A[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = A[r][c].inverse()
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A, pivots


def nullspace(rows: list[list[Scalar]], ncols: int, N: int) -> list[list[Scalar]]:
    """Basis of {x : A x = 0}, one vector per free column."""
    if not rows:
        return [[Scalar(1 if i == j else 0, N) for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Scalar(0, N)] * ncols
        v[fcol] = Scalar(1, N)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][fcol]
        basis.append(v)
    return basis


def solve(rows: list[list[Scalar]], rhs: list[Scalar]) -> list[Scalar] | None:
    """One solution of A x = b (free variables set to zero), or None."""
    N = rhs[0].N
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Scalar(0, N)] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = R[i][ncols]
    return x


def inverse(rows: list[list[Scalar]]) -> list[list[Scalar]]:
    n = len(rows)
    N = rows[0][0].N
    aug = [list(r) + [Scalar(1 if i == j else 0, N) for j in range(n)] for i, r in enumerate(rows)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in R]


def matvec(rows: list[list[Scalar]], v: list[Scalar]) -> list[Scalar]:
    out = []
    for r in rows:
        acc = Scalar(0, v[0].N)
        for a, b in zip(r, v):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return out


def rank(rows: list[list[Scalar]]) -> int:
    return len(rref(rows)[1]) if rows else 0
