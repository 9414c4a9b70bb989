"""Division-free determinants over any commutative ring, plus an exact rational solver."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def det(M: Sequence[Sequence]):
    """Determinant by dynamic programming over column subsets (no division).

    Works for Fractions, ints and series; cost O(2^k * k^2) ring operations.
    """
    k = len(M)
    if k == 0:
        return 1
    if k == 1:
        return M[0][0]
    if k == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    # dp maps a column mask of size r to the signed sum over placements of rows < r
    dp = {0: None}
    for r in range(k):
        row = M[r]
        nxt: dict = {}
        for mask, val in dp.items():
            for c in range(k):
                bit = 1 << c
                if mask & bit:
                    continue
                x = row[c]
                if _is_zero(x):
                    continue
                term = x if val is None else val * x
                if bin(mask >> (c + 1)).count("1") & 1:
                    term = -term
                nm = mask | bit
                nxt[nm] = term if nm not in nxt else nxt[nm] + term
        dp = nxt
        if not dp:
            return M[0][0] * 0
    full = (1 << k) - 1
    return dp.get(full, M[0][0] * 0)


def _is_zero(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return x == 0
    is_zero = getattr(x, "is_zero", None)
    return bool(is_zero()) if is_zero is not None else False


def columns(vectors: Sequence[Sequence]) -> list[list]:
    """Matrix whose columns are the given vectors."""
    k = len(vectors[0])
    return [[v[i] for v in vectors] for i in range(k)]


def det_cols(vectors: Sequence[Sequence]):
    return det(columns(vectors))


def solve_rational(A: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Exact Gaussian elimination for a square nonsingular rational system."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = None
            for l in range(m):
                a, b = A[i][l], B[l][j]
                if _is_zero(a) or _is_zero(b):
                    continue
                acc = a * b if acc is None else acc + a * b
            row.append(acc if acc is not None else A[0][0] * 0)
        out.append(row)
    return out


def adjugate(M):
    """Classical adjoint, division-free: M * adj(M) = det(M) * I."""
    k = len(M)
    if k == 1:
        return [[M[0][0] * 0 + 1]]
    adj = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            sub = [[M[r][c] for c in range(k) if c != j] for r in range(k) if r != i]
            v = det(sub)
            adj[j][i] = -v if (i + j) & 1 else v
    return adj
