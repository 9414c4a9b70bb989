"""Concrete seeds: the rectangle seed of Gr(k,n), triangulation seeds of Conf_n A,
diagonal flips, and evaluation of Plücker / flag-monomial functions."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .cluster import PointInChart, Seed
from .labels import FlagMonomial, Plucker, pi_pullback
from .linalg import det, det_cols
from .semifield import GenSeries


# --------------------------------------------------------------------------
# Grassmannian


def _cyc(i: int, n: int) -> int:
    return (i - 1) % n + 1


def is_cyclic_interval(J: Sequence[int], n: int) -> bool:
    s = set(J)
    return any(all(_cyc(i + t, n) in s for t in range(len(s))) for i in range(1, n + 1))


def grassmannian_seed(k: int, n: int) -> Seed:
    """Rectangle seed: labels {1..a} u {i..i+b-1}, frozen = cyclic intervals."""
    if not (2 <= k <= n - 2):
        raise ValueError("need 2 <= k <= n-2")
    m = n - k

    def lab(c, r):
        a, b = k - 1 - r, r + 1
        return Plucker(tuple(range(1, a + 1)) + tuple(range(n - c - b + 1, n - c + 1)))

    special = Plucker(tuple(range(1, k + 1)))
    nodes = [lab(c, r) for r in range(k) for c in range(m)] + [special]

    def node(c, r):
        return special if (c, r) == (m, 0) else lab(c, r)

    arrows = []
    for r in range(k):
        for c in range(m):
            if r <= k - 2:
                if c + 1 < m or r == 0:
                    arrows.append((node(c + 1, r), node(c, r)))  # leftward in the row
                arrows.append((node(c, r), node(c, r + 1)))  # down the column
            if r >= 1 and c <= m - 2:
                arrows.append((node(c, r), node(c + 1, r - 1)))  # diagonal
    arrows.append((node(m - 1, k - 1), special))  # wrap arrow

    pos = {lab_: i for i, lab_ in enumerate(nodes)}
    N = len(nodes)
    B = [[Fraction(0)] * N for _ in range(N)]
    for s, t in arrows:
        B[pos[t]][pos[s]] += 1
        B[pos[s]][pos[t]] -= 1
    frozen = [J for J in nodes if is_cyclic_interval(J.subset, n)]
    return Seed(nodes, frozen, B, None, nodes)


def pluecker_eval(M: Sequence[Sequence], J: Plucker | Sequence[int]):
    """Minor of the k x n matrix M on the (1-based) columns J."""
    cols = J.subset if isinstance(J, Plucker) else tuple(sorted(J))
    return det([[row[j - 1] for j in cols] for row in M])


def gr_chart_values(seed: Seed, M) -> PointInChart:
    return PointInChart(seed, [pluecker_eval(M, lab) for lab in seed.labels])


# --------------------------------------------------------------------------
# triangulations


@dataclass(frozen=True)
class Triangulation:
    n: int
    triangles: tuple

    def __post_init__(self):
        tris = tuple(sorted(tuple(sorted(t)) for t in self.triangles))
        object.__setattr__(self, "triangles", tris)
        self.validate()

    @staticmethod
    def fan(n: int, base: int = 1) -> "Triangulation":
        tris = [(base, _cyc(base + i, n), _cyc(base + i + 1, n)) for i in range(1, n - 1)]
        return Triangulation(n, tris)

    def edges(self) -> set:
        out = set()
        for a, b, c in self.triangles:
            out |= {(a, b), (a, c), (b, c)}
        return out

    def is_boundary(self, e) -> bool:
        a, b = sorted(e)
        return b - a == 1 or (a == 1 and b == self.n)

    @property
    def diagonals(self) -> list:
        return sorted(e for e in self.edges() if not self.is_boundary(e))

    def validate(self) -> None:
        n = self.n
        if n < 3 or len(self.triangles) != n - 2:
            raise ValueError("a triangulation of an n-gon has n-2 triangles")
        count: dict = {}
        for t in self.triangles:
            if len(set(t)) != 3 or not all(1 <= v <= n for v in t):
                raise ValueError(f"bad triangle {t}")
            a, b, c = t
            for e in ((a, b), (a, c), (b, c)):
                count[e] = count.get(e, 0) + 1
        for e, c in count.items():
            if c != (1 if self.is_boundary(e) else 2):
                raise ValueError(f"edge {e} used {c} times")
        for i in range(1, n + 1):
            e = tuple(sorted((i, _cyc(i + 1, n))))
            if e not in count:
                raise ValueError(f"boundary edge {e} missing")
        diags = self.diagonals
        for (a, b), (c, d) in combinations(diags, 2):
            if (a < c < b < d) or (c < a < d < b):
                raise ValueError("crossing diagonals")

    def quadrilateral(self, diagonal) -> tuple:
        """(A, B, C, D) in cyclic order with the given diagonal = AC."""
        a, c = sorted(diagonal)
        if (a, c) not in self.edges() or self.is_boundary((a, c)):
            raise ValueError(f"{diagonal} is not an internal diagonal")
        apexes = [next(v for v in t if v not in (a, c)) for t in self.triangles if a in t and c in t]
        b, d = sorted(apexes)
        # cyclic order a < b < c < d or the rotation d < a < b < c etc.
        quad = sorted((a, b, c, d))
        if quad[0] == a and quad[2] == c:
            return tuple(quad)
        return (quad[1], quad[2], quad[3], quad[0])

    def flip(self, diagonal) -> "Triangulation":
        A, B, C, D = self.quadrilateral(diagonal)
        tris = [t for t in self.triangles if set(t) not in ({A, B, C}, {A, C, D})]
        tris += [(A, B, D), (B, C, D)]
        return Triangulation(self.n, tris)

    def to_json(self):
        return {"n": self.n, "triangles": [list(t) for t in self.triangles]}

    @staticmethod
    def from_json(data) -> "Triangulation":
        return Triangulation(data["n"], [tuple(t) for t in data["triangles"]])


def all_triangulations(n: int) -> list[Triangulation]:
    @lru_cache(maxsize=None)
    def rec(verts: tuple) -> list:
        if len(verts) < 3:
            return [()]
        a, b = verts[0], verts[-1]
        out = []
        for i in range(1, len(verts) - 1):
            m = verts[i]
            for left in rec(verts[: i + 1]):
                for right in rec(verts[i:]):
                    out.append(left + right + ((a, m, b),))
        return out

    return [Triangulation(n, t) for t in rec(tuple(range(1, n + 1)))]


# --------------------------------------------------------------------------
# Conf_n A seeds


def triangle_points(k: int):
    """Lattice points (a, b, c), a+b+c = k, none equal to k."""
    return [(a, b, k - a - b) for a in range(k + 1) for b in range(k + 1 - a)
            if max(a, b, k - a - b) < k]


def _tri_label(tri, p) -> FlagMonomial:
    return FlagMonomial(tuple((v, e) for v, e in zip(tri, p) if e))


_STEPS = ((1, -1, 0), (0, 1, -1), (-1, 0, 1))


def confA_seed(k: int, n: int, T: Triangulation | None = None) -> Seed:
    """Triangulation seed for Conf_n A of SL_k, glued from the per-triangle quivers."""
    if T is None:
        T = Triangulation.fan(n)
    return _confA_seed(k, n, T)


@lru_cache(maxsize=4096)
def _confA_seed(k: int, n: int, T: Triangulation) -> Seed:
    if T.n != n:
        raise ValueError("triangulation has the wrong number of vertices")
    if k < 2:
        raise ValueError("need k >= 2")
    contrib: dict = {}
    labels = set()
    for tri in T.triangles:
        pts = set(triangle_points(k))
        for p in pts:
            labels.add(_tri_label(tri, p))
        for p in pts:
            for e in _STEPS:
                q = tuple(x + y for x, y in zip(p, e))
                if q not in pts:
                    continue
                same_side = any(p[i] == 0 and q[i] == 0 for i in range(3))
                w = Fraction(1, 2) if same_side else Fraction(1)
                lp, lq = _tri_label(tri, p), _tri_label(tri, q)
                # the pattern arrow p -> q contributes b[p][q] = +w
                contrib[(lp, lq)] = contrib.get((lp, lq), 0) + w
                contrib[(lq, lp)] = contrib.get((lq, lp), 0) - w
    ids = sorted(labels)
    pos = {lab: i for i, lab in enumerate(ids)}
    N = len(ids)
    B = [[Fraction(0)] * N for _ in range(N)]
    for (p, q), w in contrib.items():
        B[pos[p]][pos[q]] += w
    frozen = [m for m in ids if len(m.support) == 2 and T.is_boundary(m.support)]
    return Seed(ids, frozen, B, None, ids)


def confA_label_count(k: int, n: int) -> int:
    return (k - 1) * (2 * n - 3) + (k - 1) * (k - 2) * (n - 2) // 2


def quad_coords(m: FlagMonomial, quad) -> tuple | None:
    """(alpha, beta, gamma, delta) of m if its support lies in the quadrilateral."""
    if not set(m.support) <= set(quad):
        return None
    return tuple(m.exp(v) for v in quad)


def flip_sequence(T: Triangulation, diagonal, k: int = 2):
    """Flip a diagonal: returns (T', path, relabel).

    ``path`` lists seed ids of confA_seed(k, n, T) to mutate in order (ids may
    repeat); ``relabel`` maps each id to the flag monomial it carries in T'.
    Inside the quadrilateral ABCD with diagonal AC, a label (a, b, c, d) with
    a, c >= 1 becomes (a-1, b+1, c-1, d+1); mutations go by increasing b + d.
    """
    T2 = T.flip(diagonal)
    quad = T.quadrilateral(diagonal)
    seed = confA_seed(k, T.n, T)
    current = {}
    for m in seed.labels:
        q = quad_coords(m, quad)
        if q is not None and q[0] >= 1 and q[2] >= 1:
            current[m] = q
    start = dict(current)
    path = []
    while current:
        m = min(current, key=lambda x: (current[x][1] + current[x][3], current[x]))
        a, b, c, d = current[m]
        path.append(m)
        nq = (a - 1, b + 1, c - 1, d + 1)
        if nq[0] >= 1 and nq[2] >= 1:
            current[m] = nq
        else:
            del current[m]
    relabel = {}
    state = dict(start)
    for m in path:
        a, b, c, d = state[m]
        state[m] = (a - 1, b + 1, c - 1, d + 1)
    for m in seed.labels:
        if m in state:
            relabel[m] = FlagMonomial(tuple((v, e) for v, e in zip(quad, state[m]) if e))
        else:
            relabel[m] = m
    return T2, path, relabel


# --------------------------------------------------------------------------
# flag configurations


@dataclass(frozen=True)
class FlagConfig:
    """n principal flags in dimension k, each given by a frame of k vectors."""

    flags: tuple

    def __post_init__(self):
        object.__setattr__(self, "flags", tuple(tuple(tuple(v) for v in f) for f in self.flags))
        k = len(self.flags[0])
        for f in self.flags:
            if len(f) != k or any(len(v) != k for v in f):
                raise ValueError("each flag needs k vectors of length k")

    @property
    def k(self) -> int:
        return len(self.flags[0])

    @property
    def n(self) -> int:
        return len(self.flags)

    def first_vectors(self) -> list[list]:
        """k x n matrix of the first frame vectors."""
        return [[f[0][i] for f in self.flags] for i in range(self.k)]

    def map(self, fn) -> "FlagConfig":
        return FlagConfig([[[fn(x) for x in v] for v in f] for f in self.flags])

    def to_json(self, enc):
        return {"flags": [[[enc(x) for x in v] for v in f] for f in self.flags]}


def f_eval(C: FlagConfig, m: FlagMonomial):
    """det of the initial frame segments, vertices in increasing order."""
    if m.k != C.k:
        raise ValueError(f"exponents of {m} do not sum to k={C.k}")
    vecs = []
    for v, e in m.exps:
        vecs.extend(C.flags[v - 1][:e])
    return det_cols(vecs)


def confA_chart_values(seed: Seed, C: FlagConfig) -> PointInChart:
    return PointInChart(seed, [f_eval(C, lab) for lab in seed.labels])


# --------------------------------------------------------------------------
# twisted cyclic shifts


def twisted_shift(kind: str, x, n: int | None = None):
    """rho on matrices / Plücker labels, tau on flag configurations / flag labels.

    On labels indices move by -1 mod n, so that f_{shift(m)}(shift(C)) = f_m(C).
    """
    if kind not in ("rho", "tau"):
        raise ValueError(kind)
    if isinstance(x, Plucker):
        return Plucker(tuple(_cyc(j - 1, n) for j in x.subset))
    if isinstance(x, FlagMonomial):
        return FlagMonomial(tuple((_cyc(v - 1, n), e) for v, e in x.exps))
    if isinstance(x, FlagConfig):
        s = (-1) ** (x.k - 1)
        flags = list(x.flags[1:]) + [[[s * c for c in v] for v in x.flags[0]]]
        return FlagConfig(flags)
    # matrix: list of rows
    k = len(x)
    s = (-1) ** (k - 1)
    return [list(row[1:]) + [s * row[0]] for row in x]


def vectors_to_flags(blocks: Sequence[Sequence[Sequence]]) -> FlagConfig:
    """2n flags from n unimodular blocks of k vectors.

    F_{2i-1} = (v_i1, ..., v_ik) and F_{2i} = (v_ik, -v_i,k-1, v_i,k-2, ...):
    the alternating signs keep every frame unimodular and the configuration positive.
    """
    flags = []
    for blk in blocks:
        k = len(blk)
        d = det_cols(blk)
        # series blocks rescaled by a division are only known up to precision
        if not (d.agrees_with(1) if isinstance(d, GenSeries) else d == 1):
            raise ValueError("each block must have determinant 1")
        flags.append([list(v) for v in blk])
        flags.append([[(-1) ** m * c for c in blk[k - 1 - m]] for m in range(k)])
    return FlagConfig(flags)


# --------------------------------------------------------------------------
# random test configurations


def random_rational_flags(rng: random.Random, k: int, n: int, lo: int = -9, hi: int = 9) -> FlagConfig:
    """Generic rational flags with unimodular frames."""
    flags = []
    for _ in range(n):
        while True:
            vs = [[Fraction(rng.randint(lo, hi)) for _ in range(k)] for _ in range(k)]
            d = det_cols(vs)
            if d != 0:
                vs[-1] = [c / d for c in vs[-1]]
                flags.append(vs)
                break
    return FlagConfig(flags)


def random_positive_matrix(rng: random.Random, k: int, N: int, field: str = "rational"):
    """Totally positive k x N matrix: columns on the moment curve at increasing points.

    ``field`` is "rational" or "series" (points c*t^{-e} with strictly increasing e).
    """
    from .semifield import monomial

    if field == "rational":
        xs = sorted(rng.sample(range(1, 10 * N + 10), N))
        pts = [Fraction(x) for x in xs]
    else:
        es = sorted(rng.sample(range(-3 * N, 3 * N), N))
        pts = [monomial(rng.randint(1, 5), -e) for e in es]
    one = Fraction(1) if field == "rational" else monomial(1, 0)
    cols = []
    for x in pts:
        col = [one]
        for _ in range(k - 1):
            col.append(col[-1] * x)
        cols.append(col)
    return [[cols[j][i] for j in range(N)] for i in range(k)]


def unimodular_blocks(M, k: int) -> list:
    """Split the columns of a k x nk matrix into blocks and rescale each block's
    last vector so that its determinant is 1."""
    N = len(M[0])
    blocks = []
    for s in range(0, N, k):
        blk = [[M[i][j] for i in range(k)] for j in range(s, s + k)]
        d = det_cols(blk)
        blk[-1] = [c / d for c in blk[-1]]
        blocks.append(blk)
    return blocks


def label_set_pullbacks(k: int, n: int) -> set:
    return {pi_pullback(J) for J in grassmannian_seed(k, n).labels}
