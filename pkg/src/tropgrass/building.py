"""Lattices over the series field: coweight distances, tropical triangle functions
by brute force, the metric (minimizing) description, and lattices built from
positive flag configurations.

Everything here works on exact Laurent polynomials; a valuation is only ever
taken of an exact nonzero series, so no truncation enters a comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .labels import FlagMonomial
from .linalg import adjugate, det, mat_mul
from .seeds import FlagConfig, Triangulation, triangle_points
from .semifield import GenSeries, IndeterminateValuation, as_fraction, monomial

ZERO = Fraction(0)


def _S(x) -> GenSeries:
    if isinstance(x, GenSeries):
        return x
    x = as_fraction(x)
    return GenSeries({0: x}) if x else GenSeries()


def _is_zero(x) -> bool:
    return x == 0 if not isinstance(x, GenSeries) else x.is_zero()


def _val(x) -> Fraction:
    if _is_zero(x):
        raise IndeterminateValuation("valuation of zero")
    return x.valuation if isinstance(x, GenSeries) else ZERO


def omega_dot(j: int, mu: Sequence, k: int | None = None, trace: bool = True) -> Fraction:
    """omega_j . mu for a coweight written as a k-vector; trace-adjusted by default."""
    mu = [as_fraction(x) for x in mu]
    k = k or len(mu)
    s = sum(sorted(mu, reverse=True)[:j], ZERO)
    return s - Fraction(j, k) * sum(mu, ZERO) if trace else s


# --------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class LatticeRep:
    """O-span of k generator vectors in K^k. ``mode`` is "SL" or "PGL"."""

    gens: tuple
    mode: str = "PGL"

    def __post_init__(self):
        gens = tuple(tuple(_S(x) for x in v) for v in self.gens)
        object.__setattr__(self, "gens", gens)
        k = len(gens)
        if any(len(v) != k for v in gens):
            raise ValueError("a lattice in K^k needs k vectors of length k")
        if self.mode not in ("SL", "PGL"):
            raise ValueError(self.mode)
        d = self.det()
        if _is_zero(d):
            raise ValueError("generators are linearly dependent")
        if self.mode == "SL" and _val(d) != 0:
            raise ValueError("SL lattice needs a determinant of valuation 0")

    @property
    def k(self) -> int:
        return len(self.gens)

    def matrix(self) -> list[list]:
        """Generators as columns."""
        return [[v[i] for v in self.gens] for i in range(self.k)]

    def det(self):
        return det(self.matrix())

    def scaled(self, e) -> "LatticeRep":
        """t^e L (PGL mode only: this is the same building vertex)."""
        m = monomial(1, e)
        return LatticeRep([[m * x for x in v] for v in self.gens], "PGL")

    def to_json(self) -> dict:
        return {"mode": self.mode, "gens": [[x.to_json() for x in v] for v in self.gens]}

    @staticmethod
    def from_json(data) -> "LatticeRep":
        return LatticeRep([[GenSeries.from_json(x) for x in v] for v in data["gens"]], data.get("mode", "PGL"))

    @staticmethod
    def standard(k: int, mode: str = "PGL") -> "LatticeRep":
        return LatticeRep([[1 if i == j else 0 for i in range(k)] for j in range(k)], mode)

    @staticmethod
    def from_coweight(mu: Sequence, mode: str = "PGL") -> "LatticeRep":
        """t^mu: generated by t^{-mu_i} e_i."""
        k = len(mu)
        return LatticeRep([[monomial(1, -as_fraction(mu[j])) if i == j else 0 for i in range(k)]
                           for j in range(k)], mode)


# --------------------------------------------------------------------------
# distances


def _minor_vals(M: list[list], r: int) -> Fraction:
    best = None
    k = len(M)
    for rows in combinations(range(k), r):
        for cols in combinations(range(k), r):
            d = det([[M[i][j] for j in cols] for i in rows])
            if not _is_zero(d):
                v = _val(d)
                best = v if best is None or v < best else best
    if best is None:
        raise ValueError("change of basis matrix is singular")
    return best


def elementary_divisors(L1: LatticeRep, L2: LatticeRep) -> list[Fraction]:
    """Exponents d_1 <= ... <= d_k of the Smith form of L2's generators in L1's basis.

    nu_i = min valuation of an i x i minor, d_i = nu_i - nu_{i-1}. The change of
    basis is adj(L1) L2 / det(L1), so the i x i minors pick up det(L1)^(-i).
    """
    k = L1.k
    A = mat_mul(adjugate(L1.matrix()), L2.matrix())
    v1 = _val(L1.det())
    nu = [ZERO]
    for i in range(1, k + 1):
        nu.append(_minor_vals(A, i) - i * v1)
    return [nu[i] - nu[i - 1] for i in range(1, k + 1)]


def lattice_distance(L1: LatticeRep, L2: LatticeRep, mode: str | None = None) -> list[Fraction]:
    """Coweight d(L1, L2), sorted descending.

    ``mode`` "PGL" subtracts the mean; "GL" (or "SL") keeps the raw divisors.
    The default is PGL when either lattice is a PGL lattice.
    """
    if L1.k != L2.k:
        raise ValueError("lattices of different rank")
    mu = sorted((-d for d in elementary_divisors(L1, L2)), reverse=True)
    mode = mode or ("PGL" if "PGL" in (L1.mode, L2.mode) else "SL")
    if mode == "PGL":
        mean = sum(mu, ZERO) / len(mu)
        mu = [m - mean for m in mu]
    return mu


def same_lattice(L1: LatticeRep, L2: LatticeRep) -> bool:
    """Equality as O-modules (not up to scale)."""
    return all(d == 0 for d in elementary_divisors(L1, L2))


def dominates(mu: Sequence, nu: Sequence) -> bool:
    """mu >= nu in the dominance order: partial sums of mu - nu nonnegative, totals equal."""
    s = ZERO
    for a, b in zip(sorted(mu, reverse=True), sorted(nu, reverse=True)):
        s += as_fraction(a) - as_fraction(b)
        if s < 0:
            return False
    return s == 0


# --------------------------------------------------------------------------
# f^t by brute force


class Unconverged(RuntimeError):
    pass


@dataclass
class BruteForceResult:
    value: Fraction
    raw: Fraction  # before the PGL normalization term
    certificate: list  # per lattice, the generator indices achieving the max
    stable: bool
    search: list = field(default_factory=list)  # (bound, best raw value) of the combination search

    def to_json(self) -> dict:
        return {"value": str(self.value), "raw": str(self.raw), "certificate": self.certificate,
                "stable": self.stable, "search": [[b, str(v)] for b, v in self.search]}


def _neg_val_det(vectors) -> Fraction | None:
    d = det([[v[i] for v in vectors] for i in range(len(vectors))])
    return None if _is_zero(d) else -_val(d)


def _combination_vectors(L: LatticeRep, bound: int, coeffs=(0, 1, -1, 2, -2)):
    """Module elements sum_c a_c t^{e_c} g_c, a_c in coeffs, 0 <= e_c <= bound."""
    k = L.k
    out = []
    for a in product(coeffs, repeat=k):
        if not any(a):
            continue
        for e in product(range(bound + 1), repeat=k):
            vec = [GenSeries() for _ in range(k)]
            for c, (ac, ec) in enumerate(zip(a, e)):
                if ac:
                    m = monomial(ac, ec)
                    vec = [x + m * g for x, g in zip(vec, L.gens[c])]
            if any(not x.is_zero() for x in vec):
                out.append(vec)
    return out


def f_trop_bruteforce(lats: Sequence[LatticeRep], exps: Sequence[int], bound: int = 0,
                      coeffs=(0, 1, -1, 2, -2)) -> BruteForceResult:
    """max -val det(u's from L_1, v's from L_2, ...) plus sum_j e_j val(det L_j) / k.

    By multilinearity the maximum over the modules is attained on generators, so
    the maximum over generator subsets is exact and is the certificate. With
    ``bound`` > 0 a search over small combinations t^e * generator (0 <= e <= bound)
    is run as well; it can never beat the generator maximum, and the result is
    flagged stable once two consecutive bounds agree with it.
    """
    exps = [int(e) for e in exps]
    k = lats[0].k
    if sum(exps) != k or len(exps) != len(lats):
        raise ValueError("exponents must sum to k, one per lattice")
    best, cert = None, None
    for pick in product(*[[tuple(sorted(c)) for c in combinations(range(k), e)] if e else [()]
                          for e in exps]):
        vecs = [lats[j].gens[i] for j, idx in enumerate(pick) for i in idx]
        v = _neg_val_det(vecs)
        if v is not None and (best is None or v > best):
            best, cert = v, [list(idx) for idx in pick]
    if best is None:
        raise ValueError("all determinants vanish")
    search = []
    stable = True
    if bound > 0:
        prev = None
        stable = False
        for b in range(bound + 1):
            pools = [_combination_vectors(L, b, coeffs) if e else [] for L, e in zip(lats, exps)]
            top = None
            for pick in product(*[combinations(pool, e) if e else [()] for pool, e in zip(pools, exps)]):
                vecs = [v for grp in pick for v in grp]
                v = _neg_val_det(vecs)
                if v is not None and (top is None or v > top):
                    top = v
            if top is not None and top > best:
                raise AssertionError("combination search beat the generator maximum")
            search.append((b, top))
            if prev is not None and top == prev == best:
                stable = True
            prev = top
    norm = sum((Fraction(e) * _val(L.det()) for L, e in zip(lats, exps)), ZERO) / k
    return BruteForceResult(best + norm, best, cert, stable, search)


# --------------------------------------------------------------------------
# the metric description


def _candidate_vectors(lats: Sequence[LatticeRep], pairs: bool = True) -> list:
    vecs = [list(v) for L in lats for v in L.gens]
    if pairs:
        base = list(vecs)
        for a, b in combinations(base, 2):
            vecs.append([x + y for x, y in zip(a, b)])
            vecs.append([x - y for x, y in zip(a, b)])
    return vecs


def metric_f_min(lats: Sequence[LatticeRep], exps: Sequence[int], window: int = 2,
                 pairs: bool = True) -> tuple[Fraction, LatticeRep]:
    """min over candidate vertices p of sum_j omega_{e_j} . d(p, x_j) (PGL coweights).

    Candidates: lattices spanned by t^{e_c} b_c for bases b drawn from the inputs'
    generators (and their pairwise sums and differences), with e in the window
    [-window, window] around each base vector and e_1 = 0 (scale).
    """
    k = lats[0].k
    exps = [int(e) for e in exps]
    vecs = _candidate_vectors(lats, pairs)
    best, arg = None, None
    seen = set()
    for basis in combinations(range(len(vecs)), k):
        B = [vecs[i] for i in basis]
        if _is_zero(det([[v[i] for v in B] for i in range(k)])):
            continue
        for e in product(range(-window, window + 1), repeat=k - 1):
            gens = [B[0]] + [[monomial(1, ee) * x for x in v] for v, ee in zip(B[1:], e)]
            p = LatticeRep(gens, "PGL")
            key = tuple(tuple(tuple(x.terms) for x in v) for v in p.gens)
            if key in seen:
                continue
            seen.add(key)
            total = ZERO
            for L, j in zip(lats, exps):
                if j:
                    total += omega_dot(j, lattice_distance(p, L, "PGL"), k)
            if best is None or total < best:
                best, arg = total, p
    if best is None:
        raise Unconverged("no candidate vertices")
    return best, arg


# --------------------------------------------------------------------------
# lattices from a positive flag configuration


def _frame_coords(F: Sequence[Sequence]) -> list[list]:
    """Columns: the frame vectors of F."""
    k = len(F)
    return [[F[c][r] for c in range(k)] for r in range(k)]


def adapted_frame(F: Sequence[Sequence], G: Sequence[Sequence]) -> list[list]:
    """Frame w_1..w_k with w_m in F^(m) and G^(k-m+1), up to units of O.

    Each w_m is the meet vector rescaled by the leading monomial of its m-th
    F-coordinate, so partial wedges agree with F's forms up to units with
    leading coefficient 1. Only monomial divisions occur, so the result is exact.
    """
    k = len(F)
    P = _frame_coords(F)
    adjP = adjugate(P)
    # G's vectors in F-coordinates, up to the common factor det(P)
    Gc = [[sum((adjP[r][c] * _S(g[c]) for c in range(k)), GenSeries()) for r in range(k)] for g in G]
    out = []
    for m in range(1, k + 1):
        ncols = k - m + 1
        W = [[Gc[c][r] for c in range(ncols)] for r in range(m, k)]
        x = [GenSeries() for _ in range(k)]
        for b in range(ncols):
            sub = [[row[c] for c in range(ncols) if c != b] for row in W]
            beta = det(sub) if sub else GenSeries.const(1)
            if b % 2:
                beta = -beta
            x = [xi + beta * gi for xi, gi in zip(x, Gc[b])]
        piv = x[m - 1]
        if _is_zero(piv):
            raise ValueError("flags are not transverse")
        lead = monomial(piv.lead_coeff, piv.valuation)
        x = [xi / lead for xi in x]
        # back to the ambient basis
        out.append([sum((P[r][c] * x[c] for c in range(k)), GenSeries()) for r in range(k)])
    return out


@dataclass
class BuildingConfig:
    lattices: list
    bases: list  # bases[i][m] = m-th frame vector of lattice i
    choice: list  # the flag index used as transverse partner for each i
    independent: bool | None  # None when not checked
    warnings: list = field(default_factory=list)


def config_from_flags(C: FlagConfig, check_all: bool = False, mode: str = "SL") -> BuildingConfig:
    """Lattices x_1..x_n spanned by frames adapted to a transverse partner flag.

    The partner of F_i is F_{i+1} (cyclically). With ``check_all`` the frame is
    recomputed against every other flag and the lattices compared exactly.
    """
    n, k = C.n, C.k
    lats, bases, warnings = [], [], []
    independent = True if check_all else None
    for i in range(n):
        j = (i + 1) % n
        frame = adapted_frame(C.flags[i], C.flags[j])
        L = LatticeRep(frame, mode)
        if check_all:
            for jj in range(n):
                if jj in (i, j):
                    continue
                other = LatticeRep(adapted_frame(C.flags[i], C.flags[jj]), mode)
                if not same_lattice(L, other):
                    independent = False
                    warnings.append(f"x_{i + 1} depends on the partner flag ({j + 1} vs {jj + 1})")
        lats.append(L)
        bases.append(frame)
    return BuildingConfig(lats, bases, [(i + 1) % n + 1 for i in range(n)], independent, warnings)


def f_on_config(cfg: BuildingConfig, m: FlagMonomial, bound: int = 0) -> BruteForceResult:
    verts = list(m.support)
    return f_trop_bruteforce([cfg.lattices[v - 1] for v in verts], [m.exp(v) for v in verts], bound)


# --------------------------------------------------------------------------
# Definition of positive configurations


@dataclass
class PositivityReport:
    failures: list = field(default_factory=list)  # (triple, exps, kind, detail)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


def valuation_minimizing_check(lats: Sequence[LatticeRep], bases: Sequence, triples=None) -> PositivityReport:
    """For each triple p<q<r and split i1+i2+i3 = k: the first vectors of the bases
    achieve the brute-force maximum, and their determinant has positive leading
    coefficient. ``triples`` defaults to all triples (pass a triangulation's
    triangles to check only those)."""
    n = len(lats)
    k = lats[0].k
    if triples is None:
        triples = list(combinations(range(1, n + 1), 3)) if n >= 3 else [tuple(range(1, n + 1))]
    elif isinstance(triples, Triangulation):
        triples = list(triples.triangles)
    rep = PositivityReport()
    for tri in triples:
        tri = tuple(sorted(tri))
        for p in triangle_points(k):
            if len(tri) < len(p):
                continue
            vecs = [v for vert, e in zip(tri, p) for v in bases[vert - 1][:e]]
            d = det([[v[i] for v in vecs] for i in range(k)])
            rep.checked += 1
            if _is_zero(d):
                rep.failures.append((tri, p, "zero", None))
                continue
            ls = [lats[vert - 1] for vert, e in zip(tri, p) if e]
            es = [e for e in p if e]
            top = f_trop_bruteforce(ls, es).raw
            if -_val(d) != top:
                rep.failures.append((tri, p, "valuation", (str(-_val(d)), str(top))))
            if d.lead_coeff <= 0:
                rep.failures.append((tri, p, "sign", str(d.lead_coeff)))
    return rep


def lattice_json(lats: Sequence[LatticeRep]) -> list:
    return [L.to_json() for L in lats]
