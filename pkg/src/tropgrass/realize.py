"""Inverting charts: rebuild a matrix from rectangle-seed Plücker values and a flag
configuration from fan-triangulation coordinates.

Both reconstructions divide only by chart values (or ratios of them), so for
monomial lifts every intermediate quantity stays an exact Laurent polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .labels import FlagMonomial, Plucker
from .linalg import det
from .seeds import FlagConfig, _cyc, twisted_shift
from .semifield import GenSeries, one_like


def _zero(one):
    return one * 0


# --------------------------------------------------------------------------
# Grassmannian: rectangle seed -> [I | Y] scaled by P_{1..k}


def matrix_from_gr_chart(values: Mapping[Plucker, object], k: int, n: int):
    """k x n matrix whose Plücker coordinates at the rectangle-seed labels are ``values``."""
    p0 = values[Plucker(tuple(range(1, k + 1)))]
    one = one_like(p0)
    zero = _zero(one)
    Y = {}

    def full_matrix(extra=None):
        M = [[one if c == r else zero for c in range(k)] for r in range(k)]
        for r in range(k):
            for j in range(k + 1, n + 1):
                if extra is not None and (r + 1, j) == extra[0]:
                    val = extra[1]
                else:
                    val = Y.get((r + 1, j), zero)
                M[r].append(val)
        return M

    for a in range(k - 1, -1, -1):
        b = k - a
        for i in range(a + 1, n - b + 2):
            top = i + b - 1
            if top <= k:
                continue
            J = tuple(range(1, a + 1)) + tuple(range(i, top + 1))
            target = values[Plucker(J)] / p0
            cols = list(J)
            cell = (a + 1, top)
            M0 = full_matrix((cell, zero))
            M1 = full_matrix((cell, one))
            beta = det([[row[j - 1] for j in cols] for row in M0])
            alpha = det([[row[j - 1] for j in cols] for row in M1]) - beta
            Y[cell] = (target - beta) / alpha
    M = full_matrix()
    # scale the first row so that P_{1..k} = p0
    M[0] = [p0 * x for x in M[0]]
    return M


# --------------------------------------------------------------------------
# Conf_n A: fan chart -> flags


def pair_frame(F, G, one):
    """Frame g_1..g_k of F adapted to G: g_m in F^(m) and G^(k-m+1), wedges matching F.

    Computed in coordinates where F is the standard frame is not assumed; the
    general meet formula is used and g_m is normalized by its F-coordinate.
    """
    k = len(F)
    zero = _zero(one)
    # express G in F-coordinates would need an inverse; instead require F standard
    for m in range(k):
        for r in range(k):
            want = one if r == m else zero
            if F[m][r] != want:
                raise ValueError("pair_frame expects F to be the standard frame")
    g = []
    for m in range(1, k + 1):
        ncols = k - m + 1
        W = [[G[c][r] for c in range(ncols)] for r in range(m, k)]  # rows m+1..k
        beta = []
        for b in range(ncols):
            sub = [[row[c] for c in range(ncols) if c != b] for row in W]
            v = det(sub) if sub else one
            beta.append(v if b % 2 == 0 else -v)
        x = [zero] * k
        for b in range(ncols):
            for r in range(k):
                x[r] = x[r] + beta[b] * G[b][r]
        piv = x[m - 1]
        g.append([c / piv for c in x])
    return g


def _flags_from_fan1(values: Mapping[FlagMonomial, object], k: int, n: int) -> FlagConfig:
    some = next(iter(values.values()))
    one = one_like(some)
    zero = _zero(one)

    def val(m: dict):
        lab = FlagMonomial(tuple(m.items()))
        if lab.is_pure():
            return one
        return values[lab]

    F1 = [[one if r == c else zero for r in range(k)] for c in range(k)]
    lam = [one] + [val({1: k - b, 2: b}) for b in range(1, k)] + [one]
    F2 = []
    for m in range(1, k + 1):
        v = [zero] * k
        coef = lam[m] / lam[m - 1]
        v[k - m] = coef if (m - 1) % 2 == 0 else -coef
        F2.append(v)
    flags = [F1, F2]
    for i in range(2, n):
        Fi = flags[i - 1]
        g = pair_frame(F1, Fi, one)
        lam = [one] + [val({1: k - b, i: b}) for b in range(1, k)] + [one]
        X = [[zero] * k for _ in range(k)]

        def M_(a, c):
            b = k - a - c
            f = val({1: a, i: b, i + 1: c})
            v = f / lam[b]
            return -v if (b * c) % 2 else v

        for c in range(1, k + 1):
            for a in range(0, k - c + 1):
                row = a + c - 1
                target = M_(a, c)
                sub_rows = list(range(a, a + c))
                X[row][c - 1] = zero
                beta = det([[X[r][cc] for cc in range(c)] for r in sub_rows])
                alpha = det([[X[r][cc] for cc in range(c - 1)] for r in sub_rows[:-1]]) if c > 1 else one
                X[row][c - 1] = (target - beta) / alpha
        new = []
        for c in range(k):
            vec = [zero] * k
            for r in range(c, k):
                if X[r][c] != 0:
                    for t in range(k):
                        vec[t] = vec[t] + X[r][c] * g[r][t]
            new.append(vec)
        flags.append(new)
    return FlagConfig(flags)


def flags_from_fan_chart(values: Mapping[FlagMonomial, object], k: int, n: int, base: int = 1) -> FlagConfig:
    """A flag configuration realizing the given coordinates on the fan triangulation at ``base``."""
    if base != 1:
        shift = base - 1
        moved = {}
        for m, v in values.items():
            for _ in range(shift):
                m = twisted_shift("tau", m, n)
            moved[m] = v
        C = _flags_from_fan1(moved, k, n)
        # undo tau^(shift): tau^{-1}(F_1..F_n) = (s F_n, F_1, ..., F_{n-1})
        s = (-1) ** (k - 1)
        flags = list(C.flags)
        for _ in range(shift):
            last = [[s * x for x in v] for v in flags[-1]]
            flags = [last] + flags[:-1]
        return FlagConfig(flags)
    return _flags_from_fan1(values, k, n)
