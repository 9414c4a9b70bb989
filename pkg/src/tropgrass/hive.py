"""Hive inequalities, boundary distances, the reduction of flag monomials to Plücker
coordinates, the distinguished lift, the cone inequalities and the lineality
laminations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Mapping, Sequence

from .labels import FlagMonomial, Plucker
from .linalg import solve_rational
from .seeds import Triangulation, _cyc, confA_seed, triangle_points
from .semifield import as_fraction, frac_json
from .trop import TropPoint, act_H, act_T, chart_ref_confA, random_trop_point

ZERO = Fraction(0)


# --------------------------------------------------------------------------
# reports


@dataclass
class ConeReport:
    """(inequality id, left, right, slack) rows; member iff every slack >= 0."""

    rows: list = field(default_factory=list)

    def add(self, ident, left, right) -> None:
        self.rows.append((ident, left, right, left - right))

    @property
    def member(self) -> bool:
        return all(r[3] >= 0 for r in self.rows)

    @property
    def on_boundary(self) -> bool:
        """Member with at least one tight inequality."""
        return self.member and any(r[3] == 0 for r in self.rows)

    @property
    def violated(self) -> list:
        return [r for r in self.rows if r[3] < 0]

    def min_slack(self) -> Fraction | None:
        return min((r[3] for r in self.rows), default=None)

    def to_json(self, strict: bool = False) -> dict:
        """With ``strict``, members with a zero slack are reported separately as
        boundary members, together with the tight inequalities."""
        out = {
            "member": self.member,
            "boundary": self.on_boundary,
            "inequalities": [
                {"id": ident, "left": frac_json(l), "right": frac_json(r), "slack": frac_json(s)}
                for ident, l, r, s in self.rows
            ],
        }
        if strict:
            out["interior_member"] = self.member and not self.on_boundary
            out["boundary_member"] = self.on_boundary
            out["tight"] = [ident for ident, _, _, s in self.rows if s == 0]
        return out


# --------------------------------------------------------------------------
# boundary distances <-> frozen Plückers


def frozen_interval(i: int, k: int, n: int) -> Plucker:
    return Plucker(tuple(_cyc(i + j, n) for j in range(k)))


def frozen_plus(i: int, k: int, n: int) -> Plucker:
    """i, i+1, ..., i+k-2, i+k."""
    return Plucker(tuple(_cyc(i + j, n) for j in range(k - 1)) + (_cyc(i + k, n),))


def frozen_from_boundary(a: Sequence, k: int) -> list[Fraction]:
    """F_i = sum_{j=1}^{k-1} j * a_{i+j} / k (1-based, cyclic)."""
    a = [as_fraction(x) for x in a]
    n = len(a)
    return [sum((Fraction(j, k) * a[(i + j) % n] for j in range(1, k)), ZERO) for i in range(n)]


def _frozen_matrix(k: int, n: int) -> list[list[Fraction]]:
    M = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(1, k):
            M[i][(i + j) % n] += Fraction(j, k)
    return M


def boundary_from_frozen(F: Sequence, k: int) -> list[Fraction]:
    n = len(F)
    if not 1 <= k < n:
        raise ValueError("need 1 <= k < n")
    return solve_rational(_frozen_matrix(k, n), [as_fraction(x) for x in F])


def frozen_values(y: Mapping[Plucker, Fraction], k: int, n: int) -> list[Fraction]:
    return [y[frozen_interval(i, k, n)] for i in range(1, n + 1)]


def boundary_of(y: Mapping[Plucker, Fraction], k: int, n: int) -> list[Fraction]:
    return boundary_from_frozen(frozen_values(y, k, n), k)


# --------------------------------------------------------------------------
# reduction of flag monomials


class ReductionOverflow(ArithmeticError):
    pass


def reduce_to_plucker(m: FlagMonomial, a: Sequence, n: int) -> tuple[Plucker, Fraction]:
    """(J, offset) with m = P(J) + offset whenever the boundary distances are a.

    Repeatedly writes v^e = (v-1)^{e-1} v^1 - (e-1) a_v / k at the largest vertex
    with exponent >= 2.
    """
    k = m.k
    if k >= n:
        raise ValueError("need k < n")
    exps = m.as_dict()
    offset = ZERO
    for _ in range(k * n + 1):
        heavy = [v for v, e in exps.items() if e >= 2]
        if not heavy:
            return Plucker(tuple(exps)), offset
        v = max(heavy)
        e = exps[v]
        u = _cyc(v - 1, n)
        exps[v] = 1
        exps[u] = exps.get(u, 0) + e - 1
        offset -= Fraction(e - 1, k) * as_fraction(a[v - 1])
    raise ReductionOverflow(f"reduction of {m} did not terminate")


def reduce_any_order(m: FlagMonomial, a: Sequence, n: int, order) -> tuple[Plucker, Fraction]:
    """Same reduction with the split vertex chosen by ``order`` (for cross-checks)."""
    k = m.k
    exps = m.as_dict()
    offset = ZERO
    for _ in range(k * n + 1):
        heavy = [v for v, e in exps.items() if e >= 2]
        if not heavy:
            return Plucker(tuple(exps)), offset
        v = order(heavy)
        e = exps[v]
        u = _cyc(v - 1, n)
        exps[v] = 1
        exps[u] = exps.get(u, 0) + e - 1
        offset -= Fraction(e - 1, k) * as_fraction(a[v - 1])
    raise ReductionOverflow(f"reduction of {m} did not terminate")


def monomial_value(y: Mapping[Plucker, Fraction], m: FlagMonomial, a: Sequence, n: int) -> Fraction:
    if m.is_pure():
        return ZERO
    J, off = reduce_to_plucker(m, a, n)
    return y[J] + off


# --------------------------------------------------------------------------
# the distinguished lift


def distinguished_lift(y: Mapping[Plucker, Fraction], k: int, n: int,
                       T: Triangulation | None = None) -> TropPoint:
    """Chart point on a triangulation chart of Conf_n A whose boundary distances are
    multiples of omega_1 and whose pulled-back Plücker values are y."""
    T = T or Triangulation.fan(n)
    a = boundary_of(y, k, n)
    seed = confA_seed(k, n, T)
    vals = [monomial_value(y, m, a, n) for m in seed.labels]
    return TropPoint(seed, vals, chart_ref_confA(k, n, T))


def dual_section(y: Mapping[Plucker, Fraction], k: int, n: int,
                 T: Triangulation | None = None) -> TropPoint:
    """Experimental: the section with d(x_{i+1}, x_i) = a_i omega_1, computed as the
    distinguished lift after reversing the orientation of the polygon."""
    refl = lambda v: _cyc(2 - v, n)  # fixes vertex 1
    y_r = {Plucker(tuple(refl(j) for j in J.subset)): v for J, v in y.items()}
    T = T or Triangulation.fan(n)
    T_r = Triangulation(n, [tuple(refl(v) for v in t) for t in T.triangles])
    x_r = distinguished_lift(y_r, k, n, T_r)
    seed = confA_seed(k, n, T)
    back = {FlagMonomial(tuple((refl(v), e) for v, e in lab.exps)): c for lab, c in x_r.by_label().items()}
    return TropPoint.from_labels(seed, back, chart_ref_confA(k, n, T))


# --------------------------------------------------------------------------
# hive inequalities


def _lattice_value(values: Mapping[FlagMonomial, Fraction], tri, p) -> Fraction:
    lab = FlagMonomial(tuple((v, e) for v, e in zip(tri, p) if e))
    if lab.is_pure():
        return ZERO
    return values[lab]


def triangle_rhombi(k: int):
    """Interior unit edges of the size-k triangular lattice with the opposite
    vertices of their two adjacent unit triangles: (p, q, r, s), edge pq."""
    pts = {(a, b, k - a - b) for a in range(k + 1) for b in range(k + 1 - a)}
    out = []
    dirs = ((0, 1, -1), (1, 0, -1), (1, -1, 0))
    for p in sorted(pts):
        for d in dirs:
            q = tuple(x + y for x, y in zip(p, d))
            if q not in pts:
                continue
            # third vertices: p + e where e and d - e are both unit steps
            thirds = []
            for e in ((1, -1, 0), (-1, 1, 0), (0, 1, -1), (0, -1, 1), (1, 0, -1), (-1, 0, 1)):
                r = tuple(x + y for x, y in zip(p, e))
                if r in pts and r != q:
                    f = tuple(x - y for x, y in zip(q, r))
                    if sum(abs(c) for c in f) == 2:
                        thirds.append(r)
            if len(thirds) == 2:
                out.append((p, q, thirds[0], thirds[1]))
    return out


def hive_check(x: TropPoint | Mapping, k: int | None = None, n: int | None = None,
               T: Triangulation | None = None) -> ConeReport:
    """Rhombus inequalities in every triangle: obtuse pair >= acute pair."""
    if isinstance(x, TropPoint):
        values = x.by_label()
        if x.ref is not None:
            k = k or x.ref["k"]
            n = n or x.ref["n"]
            if T is None and x.ref.get("type") == "confA" and not x.ref.get("path"):
                T = Triangulation(x.ref["n"], [tuple(t) for t in x.ref["triangles"]])
    else:
        values = dict(x)
    if k is None:
        k = next(iter(values)).k
    if n is None:
        n = max(v for lab in values for v in lab.support)
    T = T or Triangulation.fan(n)
    rep = ConeReport()
    rhombi = triangle_rhombi(k)
    for tri in T.triangles:
        for p, q, r, s in rhombi:
            left = _lattice_value(values, tri, p) + _lattice_value(values, tri, q)
            right = _lattice_value(values, tri, r) + _lattice_value(values, tri, s)
            rep.add(("hive", tri, p, q), left, right)
    return rep


def random_hive_point(rng, k: int, n: int, T: Triangulation | None = None, lo: int = -3, hi: int = 3,
                      denom: int = 1, margin: int = 0) -> TropPoint:
    """Random chart point pushed into the hive cone along the H^n action.

    Acting by c*rho (rho = (k-1, ..., 1, 0)) at every vertex raises every rhombus
    slack by exactly c; c is the least even integer covering the deficit plus
    ``margin``, so integral points stay integral.
    """
    T = T or Triangulation.fan(n)
    x = random_trop_point(rng, confA_seed(k, n, T), chart_ref_confA(k, n, T), lo, hi, denom)
    deficit = max([-r[3] for r in hive_check(x, k, n, T).rows] + [ZERO]) + margin
    c = 2 * -(-deficit // 2)
    if c:
        x = act_H(x, {v: [c * (k - 1 - i) for i in range(k)] for v in range(1, n + 1)})
    return x


def sample_hive_face(rng, k: int, n: int, sides=None, T: Triangulation | None = None,
                     draws: int = 6, box: int = 20, a_max: int = 6) -> tuple[TropPoint, list]:
    """A point in the relative interior of the hive cone intersected with
    d(x_{v-1}, x_v) = a_v omega_1 for v in ``sides`` (all sides by default).

    The average of LP optima (scipy), one per rhombus slack plus ``draws`` random
    objectives, lies in the relative interior of the face; it is rounded to small
    denominators and then certified exactly; returns (point, a) with a_v = 0 off
    ``sides``. Raises RuntimeError if no certified point is found.
    """
    import numpy as np
    from scipy.optimize import linprog

    T = T or Triangulation.fan(n)
    sides = set(range(1, n + 1)) if sides is None else set(sides)
    seed = confA_seed(k, n, T)
    labs = list(seed.labels)
    idx = {m: i for i, m in enumerate(labs)}
    N = len(labs) + n

    def pos(tri, p):
        m = FlagMonomial(tuple((v, e) for v, e in zip(tri, p) if e))
        return None if m.is_pure() else idx[m]

    A_ub = []
    for tri in T.triangles:
        for p, q, r, s in triangle_rhombi(k):
            row = np.zeros(N)
            for pt, sg in ((p, -1), (q, -1), (r, 1), (s, 1)):
                i = pos(tri, pt)
                if i is not None:
                    row[i] += sg
            A_ub.append(row)
    A_eq = []
    for v in sides:
        u = _cyc(v - 1, n)
        for j in range(1, k):
            m = FlagMonomial.of({u: j, v: k - j})
            if m not in idx:
                raise ValueError(f"side {u}{v} is not an edge of the triangulation")
            row = np.zeros(N)
            row[idx[m]] = 1
            row[len(labs) + v - 1] = -j / k
            A_eq.append(row)
    bounds = [(-box, box)] * len(labs) + [((0, a_max) if v in sides else (0, 0)) for v in range(1, n + 1)]
    for _ in range(5):
        pts = []
        # one optimum per rhombus slack (so the average is strict wherever the face
        # allows it) plus a few random directions
        objectives = [row - np.array([rng.uniform(0, 1e-3) for _ in range(N)]) for row in A_ub]
        objectives += [np.array([rng.uniform(-1, 1) for _ in range(N)]) for _ in range(draws)]
        for c in objectives:
            res = linprog(c, A_ub=np.array(A_ub), b_ub=np.zeros(len(A_ub)),
                          A_eq=np.array(A_eq) if A_eq else None, b_eq=np.zeros(len(A_eq)) if A_eq else None,
                          bounds=bounds, method="highs")
            if res.success:
                pts.append([Fraction(x).limit_denominator(12 * k) for x in res.x])
        if not pts:
            continue
        avg = [sum(col, ZERO) / len(pts) for col in zip(*pts)]
        a = avg[len(labs):]
        x = TropPoint(seed, avg[:len(labs)], chart_ref_confA(k, n, T))
        vals = x.by_label()
        ok = hive_check(x, k, n, T).member and all(
            vals[FlagMonomial.of({_cyc(v - 1, n): j, v: k - j})] == a[v - 1] * j / k
            for v in sides for j in range(1, k))
        if ok:
            return x, a
    raise RuntimeError("could not certify a sampled hive point")


# --------------------------------------------------------------------------
# cone inequalities on tropical Plücker vectors


def cone_check(y: Mapping[Plucker, Fraction], k: int, n: int) -> ConeReport:
    """F_i + (k-1)/k a_{i+k} >= F^+_i for every i."""
    a = boundary_of(y, k, n)
    rep = ConeReport()
    for i in range(1, n + 1):
        F = y[frozen_interval(i, k, n)]
        Fp = y[frozen_plus(i, k, n)]
        rep.add(("cone", i), F + Fraction(k - 1, k) * a[_cyc(i + k, n) - 1], Fp)
    return rep


# --------------------------------------------------------------------------
# key equation instances


def all_monomials(k: int, n: int, max_support: int | None = None) -> list[FlagMonomial]:
    out = []
    for combo in combinations_with_replacement(range(1, n + 1), k):
        exps: dict = {}
        for v in combo:
            exps[v] = exps.get(v, 0) + 1
        if max_support is None or len(exps) <= max_support:
            out.append(FlagMonomial(tuple(exps.items())))
    return out


def keyeqn_instances(k: int, n: int, max_support: int | None = None):
    """(m, m', v, b): f(m) = f(m') + a_v * b / k, where m has v-1 and v in its
    support with exponents b and c, and m' moves all b units onto v."""
    out = []
    for m in all_monomials(k, n, max_support):
        for v in m.support:
            u = _cyc(v - 1, n)
            b = m.exp(u)
            if b == 0:
                continue
            exps = m.as_dict()
            del exps[u]
            exps[v] += b
            out.append((m, FlagMonomial(tuple(exps.items())), v, b))
    return out


def keyeqn_residuals(values: Mapping[FlagMonomial, Fraction], a: Sequence, instances) -> list:
    """(instance, residual) for instances whose residual is nonzero."""
    k = None
    bad = []
    for inst in instances:
        m, m2, v, b = inst
        k = m.k
        lhs = ZERO if m.is_pure() else values[m]
        rhs = (ZERO if m2.is_pure() else values[m2]) + Fraction(b, k) * as_fraction(a[v - 1])
        if lhs != rhs:
            bad.append((inst, lhs - rhs))
    return bad


def boundary_from_chart(x: TropPoint, k: int, n: int) -> list[Fraction]:
    """a_v = k * f(u^1 v^(k-1)), u = v-1: what the key equations force on the polygon sides."""
    vals = x.by_label()
    return [k * vals[FlagMonomial.of({_cyc(v - 1, n): 1, v: k - 1})] for v in range(1, n + 1)]


def keyeqn_check(x: TropPoint, a: Sequence | None = None, max_support: int | None = None) -> list:
    """Violated key-equation instances over all flag monomials, evaluated tropically
    from the chart of x. ``a`` defaults to boundary_from_chart(x)."""
    from .trop import _conf_kn, _triangulation_of, conf_evaluator, series_eval

    k, n = _conf_kn(x)
    a = boundary_from_chart(x, k, n) if a is None else [as_fraction(t) for t in a]
    inst = keyeqn_instances(k, n, max_support)
    wanted = sorted({m for i in inst for m in i[:2] if not m.is_pure()})
    ev = conf_evaluator(k, n, _triangulation_of(x))
    if all(ev.supports(m) for m in wanted):
        vals = ev.evaluate(x.coords, wanted)
    else:
        vals = series_eval(x, wanted)
    return keyeqn_residuals(vals, a, inst)


def all_keyeqn_ok(x: TropPoint, a: Sequence | None = None) -> bool:
    return not keyeqn_check(x, a)


# --------------------------------------------------------------------------
# lineality


def l_lamination(i: int, k: int, n: int) -> dict:
    """Plücker vector of l_i: sum over j in J with offset o = j - i mod n < k of (k-1-o)/k."""
    out = {}
    for J in combinations(range(1, n + 1), k):
        s = ZERO
        for j in J:
            o = (j - i) % n
            if o < k:
                s += Fraction(k - 1 - o, k)
        out[Plucker(J)] = s
    return out


def l_scaling(i: int, k: int, n: int) -> list[Fraction]:
    """The T^n element realizing l_i: the cyclic shift of (1/k)(k-1, ..., 1, 0, ..., 0)."""
    c = [ZERO] * n
    for o in range(k):
        c[_cyc(i + o, n) - 1] = Fraction(k - 1 - o, k)
    return c


def act_lineality(y: Mapping[Plucker, Fraction], coeffs: Sequence, k: int, n: int) -> dict:
    """y + sum_i c_i pi(l_i)."""
    total = [ZERO] * n
    for i, ci in enumerate(coeffs, start=1):
        ci = as_fraction(ci)
        if ci:
            for j, cj in enumerate(l_scaling(i, k, n)):
                total[j] += ci * cj
    return act_T(dict(y), total)


def lamination_lift(coeffs: Sequence, k: int, n: int, T: Triangulation | None = None) -> TropPoint:
    """sum_i c_i l_i on a triangulation chart."""
    T = T or Triangulation.fan(n)
    seed = confA_seed(k, n, T)
    vals = [ZERO] * len(seed)
    for i, ci in enumerate(coeffs, start=1):
        ci = as_fraction(ci)
        if ci:
            li = distinguished_lift(l_lamination(i, k, n), k, n, T)
            vals = [x + ci * c for x, c in zip(vals, li.coords)]
    return TropPoint(seed, vals, chart_ref_confA(k, n, T))


def _slack_vector(y, k, n) -> list[Fraction]:
    return [r[3] for r in cone_check(y, k, n).rows]


def lineality_representative(y: Mapping[Plucker, Fraction], k: int, n: int,
                             method: str = "uniform") -> list[Fraction]:
    """Coefficients c with act_lineality(y, c) in the cone.

    "uniform" uses c_i = C for the least C that works (every slack grows by
    C(k-1)); "lp" minimizes sum c_i over c >= 0 with scipy and certifies the
    rounded answer exactly, falling back to "uniform".
    """
    slack = _slack_vector(y, k, n)
    if method == "lp":
        c = _lp_representative(y, slack, k, n)
        if c is not None:
            return c
    deficit = max([-s for s in slack] + [ZERO])
    C = deficit / (k - 1)
    c = [C] * n
    if not cone_check(act_lineality(y, c, k, n), k, n).member:
        raise AssertionError("uniform lineality shift did not reach the cone")
    return c


def _lp_representative(y, slack, k, n):
    from scipy.optimize import linprog

    zero = {J: ZERO for J in y}
    # slack is affine in c: slack(c) = slack(0) + G c
    G = []
    for i in range(1, n + 1):
        e = [ZERO] * n
        e[i - 1] = Fraction(1)
        G.append(_slack_vector(act_lineality(zero, e, k, n), k, n))
    A_ub = [[-float(G[j][r]) for j in range(n)] for r in range(n)]
    b_ub = [float(s) for s in slack]
    res = linprog([1.0] * n, A_ub=A_ub, b_ub=b_ub, bounds=[(0, None)] * n, method="highs")
    if not res.success:
        return None
    c = [Fraction(v).limit_denominator(1000 * k) for v in res.x]
    if cone_check(act_lineality(y, c, k, n), k, n).member:
        return c
    return None


# --------------------------------------------------------------------------
# integral structure and weights


@dataclass
class IntegralityReport:
    a: list
    a_integral: bool
    a_nonnegative: bool
    plucker_integral: bool
    denominators: list

    @property
    def integral(self) -> bool:
        return self.a_integral and self.a_nonnegative

    def to_json(self):
        return {"a": [frac_json(x) for x in self.a], "a_integral": self.a_integral,
                "a_nonnegative": self.a_nonnegative, "plucker_integral": self.plucker_integral,
                "denominators": self.denominators, "integral": self.integral}


def integrality_check(y: Mapping[Plucker, Fraction], k: int, n: int) -> IntegralityReport:
    a = boundary_of(y, k, n)
    dens = sorted({v.denominator for v in y.values()})
    return IntegralityReport(a, all(x.denominator == 1 for x in a), all(x >= 0 for x in a),
                             dens == [1], dens)


def weight_report(y: Mapping[Plucker, Fraction], k: int, n: int) -> dict:
    """Multi-weight (a_1 w_1, ..., a_n w_1) and the total degree r = sum a_i."""
    a = boundary_of(y, k, n)
    if any(x.denominator != 1 for x in a):
        raise ValueError("boundary distances are not integral")
    return {"weights": [int(x) for x in a], "r": int(sum(a)),
            "trivial": all(x == 0 for x in a)}


def rw_normalize(y: Mapping[Plucker, Fraction], a: Sequence, k: int) -> dict:
    """Experimental: act by (1/k)(b_1, ..., b_n) with b_i = sum_{j<i} a_j."""
    a = [as_fraction(x) for x in a]
    b = [sum(a[:i], ZERO) / k for i in range(len(a))]
    return act_T(dict(y), b)


# --------------------------------------------------------------------------
# random Plücker vectors in and out of the cone


def plucker_json(y: Mapping[Plucker, Fraction]) -> dict:
    return {",".join(map(str, J.subset)): frac_json(v) for J, v in sorted(y.items())}


def plucker_from_json(data: Mapping) -> dict:
    return {Plucker(tuple(int(x) for x in key.split(","))): as_fraction(v) for key, v in data.items()}


def all_plucker_zero(k: int, n: int) -> dict:
    return {Plucker(J): ZERO for J in combinations(range(1, n + 1), k)}
