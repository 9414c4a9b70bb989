"""Tropical points on charts: chart changes, series lifts, the pushforward to the
Grassmannian cone, full Plücker vectors, and the H^n / T^n actions."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Mapping, Sequence

from .cluster import CompiledPath, PointInChart, Seed, mutate_A
from .labels import FlagMonomial, Plucker, label_from_json, pi_pullback
from .realize import flags_from_fan_chart, matrix_from_gr_chart
from .seeds import (Triangulation, confA_seed, f_eval, flip_sequence, grassmannian_seed,
                    pluecker_eval, quad_coords)
from .semifield import PosSeries, Trop, as_fraction, frac_json, monomial, neg_val


# --------------------------------------------------------------------------
# chart references


def chart_ref_gr(k: int, n: int) -> dict:
    return {"type": "gr", "k": k, "n": n}


def chart_ref_confA(k: int, n: int, T: Triangulation | None = None) -> dict:
    T = T or Triangulation.fan(n)
    return {"type": "confA", "k": k, "n": n, "triangles": [list(t) for t in T.triangles]}


def build_chart(ref: Mapping) -> Seed:
    if ref["type"] == "gr":
        seed = grassmannian_seed(ref["k"], ref["n"])
    elif ref["type"] == "confA":
        T = Triangulation(ref["n"], [tuple(t) for t in ref["triangles"]])
        seed = confA_seed(ref["k"], ref["n"], T)
    else:
        raise ValueError(f"unknown chart type {ref['type']!r}")
    for step in ref.get("path", ()):
        seed = seed.mutate(label_from_json(step))
    return seed


def ref_triangulation(ref: Mapping) -> Triangulation:
    return Triangulation(ref["n"], [tuple(t) for t in ref["triangles"]])


# --------------------------------------------------------------------------
# tropical points


@dataclass(frozen=True)
class TropPoint:
    """Rational coordinates on a chart (a seed plus a JSON-able reference to it)."""

    chart: Seed
    coords: tuple
    ref: dict | None = None

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(as_fraction(c) for c in self.coords))
        if len(self.coords) != len(self.chart):
            raise ValueError("tropical point is not total on its chart")

    @classmethod
    def from_labels(cls, chart: Seed, values: Mapping, ref=None) -> "TropPoint":
        return cls(chart, [values[lab] for lab in chart.labels], ref)

    def at(self, label) -> Fraction:
        return self.coords[self.chart.pos_of_label(label)]

    def by_label(self) -> dict:
        return dict(zip(self.chart.labels, self.coords))

    def with_coords(self, coords) -> "TropPoint":
        return TropPoint(self.chart, coords, self.ref)

    def __add__(self, other: "TropPoint") -> "TropPoint":
        if other.chart.labels != self.chart.labels:
            raise ValueError("points live on different charts")
        return self.with_coords([a + b for a, b in zip(self.coords, other.coords)])

    def to_json(self) -> dict:
        return {"chart": self.ref,
                "coords": {str(lab): frac_json(c) for lab, c in zip(self.chart.labels, self.coords)},
                "labels": [lab.to_json() for lab in self.chart.labels]}

    @staticmethod
    def from_json(data) -> "TropPoint":
        ref = data["chart"]
        chart = build_chart(ref)
        by_name = {str(lab): lab for lab in chart.labels}
        vals = {by_name[name]: as_fraction(v) for name, v in data["coords"].items()}
        return TropPoint.from_labels(chart, vals, ref)


def as_trop_point(pt: PointInChart) -> TropPoint:
    return TropPoint(pt.chart, [c.value for c in pt.coords])


def change_chart(p: TropPoint, path: Sequence) -> TropPoint:
    """Tropical A-mutation along ``path`` (ids of the chart)."""
    q = PointInChart(p.chart, [Trop(c) for c in p.coords])
    for k in path:
        q = mutate_A(q, k)
    ref = None
    if p.ref is not None:
        ref = dict(p.ref)
        ref["path"] = list(ref.get("path", [])) + [lab.to_json() for lab in path]
    return TropPoint(q.chart, [c.value for c in q.coords], ref)


def lift_to_series(p: TropPoint, rng: random.Random | None = None, max_coeff: int = 9) -> PointInChart:
    """Monomial lift c * t^{-x}; c = 1 unless an rng is given."""
    coords = []
    for x in p.coords:
        c = 1 if rng is None else Fraction(rng.randint(1, max_coeff), rng.randint(1, max_coeff))
        coords.append(monomial(c, -x))
    return PointInChart(p.chart, coords)


def tropicalize(pt: PointInChart, ref=None) -> TropPoint:
    return TropPoint(pt.chart, [neg_val(c) for c in pt.coords], ref)


# --------------------------------------------------------------------------
# Conf_n A: tropical evaluation of flag monomials through flips


class ConfEvaluator:
    """Tropical values of flag monomials with support <= 4 at points of a
    triangulation chart, computed by tropical mutation along certified flip paths.

    Every triangulation of the polygon is reached by a breadth-first tree of
    flips; monomials with support 4 appear midway through a quadrilateral flip.
    """

    def __init__(self, k: int, n: int, T: Triangulation | None = None):
        self.k, self.n = k, n
        self.T = T or Triangulation.fan(n)
        self.seed = confA_seed(k, n, self.T)
        root_lab = {lab: p for p, lab in enumerate(self.seed.labels)}
        # node -> (parent, CompiledPath in root positions, label->root position)
        self.nodes = {self.T: (None, None, root_lab)}
        # label -> (node, extra compiled steps from the node or None, position)
        self.where = {}
        for lab, p in root_lab.items():
            self.where[lab] = (self.T, None, p)
        queue = deque([self.T])
        while queue:
            cur = queue.popleft()
            labpos = self.nodes[cur][2]
            cur_seed = confA_seed(k, n, cur)
            for diag in cur.diagonals:
                nxt, path, relabel = flip_sequence(cur, diag, k)
                steps = self._compile(cur_seed, path, labpos)
                # labels appearing along the way (support-4 ones live only here)
                quad = cur.quadrilateral(diag)
                state = {m: quad_coords(m, quad) for m in path}
                for s, m in enumerate(path):
                    a, b, c, d = state[m]
                    state[m] = (a - 1, b + 1, c - 1, d + 1)
                    new = FlagMonomial(tuple((v, e) for v, e in zip(quad, state[m]) if e))
                    if new not in self.where:
                        self.where[new] = (cur, CompiledPath(steps.steps[: s + 1]), labpos[m])
                if nxt in self.nodes:
                    continue
                nlab = {relabel[m]: p for m, p in labpos.items()}
                self.nodes[nxt] = (cur, steps, nlab)
                for lab, p in nlab.items():
                    if lab not in self.where:
                        self.where[lab] = (nxt, None, p)
                queue.append(nxt)

    @staticmethod
    def _compile(seed: Seed, path, labpos) -> CompiledPath:
        cp = CompiledPath.build(seed, path)
        to_root = [labpos[lab] for lab in seed.labels]
        steps = [(to_root[p], [(to_root[q], b) for q, b in plus], [(to_root[q], b) for q, b in minus])
                 for p, plus, minus in cp.steps]
        return CompiledPath(steps)

    def _node_values(self, node, x, memo):
        if node in memo:
            return memo[node]
        parent, steps, _ = self.nodes[node]
        if parent is None:
            vals = list(x)
        else:
            vals = steps.run(self._node_values(parent, x, memo))
        memo[node] = vals
        return vals

    def supports(self, m: FlagMonomial) -> bool:
        return m.is_pure() or m in self.where

    def evaluate(self, x: Sequence[Fraction], targets, memo=None) -> dict:
        """Tropical values at the chart point with coordinates ``x`` (root chart order)."""
        memo = {} if memo is None else memo
        out = {}
        for m in targets:
            if m.is_pure():
                out[m] = Fraction(0)
                continue
            if m not in self.where:
                raise KeyError(f"{m} is not reachable by flips (support > 4)")
            node, extra, p = self.where[m]
            vals = self._node_values(node, x, memo)
            if extra is not None:
                vals = extra.run(vals)
            out[m] = vals[p]
        return out

    def all_labels(self) -> list:
        return sorted(self.where)


@lru_cache(maxsize=None)
def conf_evaluator(k: int, n: int, T: Triangulation | None = None) -> ConfEvaluator:
    return ConfEvaluator(k, n, T)


def _conf_kn(x: TropPoint):
    labs = x.chart.labels
    if not labs or not isinstance(labs[0], FlagMonomial):
        raise ValueError("expected a point on a Conf_n A chart")
    k = labs[0].k
    n = x.ref["n"] if x.ref else max(v for lab in labs for v in lab.support)
    return k, n


def _triangulation_of(x: TropPoint) -> Triangulation:
    if x.ref and x.ref.get("type") == "confA" and not x.ref.get("path"):
        return ref_triangulation(x.ref)
    k, n = _conf_kn(x)
    for T in (Triangulation.fan(n),):
        if confA_seed(k, n, T).labels == x.chart.labels:
            return T
    raise ValueError("cannot identify the triangulation of this chart; pass a reference")


def trop_eval(x: TropPoint, m: FlagMonomial) -> Fraction:
    """Tropical value of the function f_m at x (chart changes done internally)."""
    k, n = _conf_kn(x)
    ev = conf_evaluator(k, n, _triangulation_of(x))
    if ev.supports(m):
        return ev.evaluate(x.coords, [m])[m]
    return series_eval(x, [m])[m]


def series_eval(x: TropPoint, targets, rng=None) -> dict:
    """Tropical values via an exact monomial lift and reconstructed flags.

    Needs the chart to be a fan triangulation.
    """
    k, n = _conf_kn(x)
    T = _triangulation_of(x)
    base = _fan_base(T)
    lifted = lift_to_series(x, rng)
    C = flags_from_fan_chart(lifted.by_label(), k, n, base)
    return {m: neg_val(f_eval(C, m)) for m in targets}


def _fan_base(T: Triangulation) -> int:
    for b in range(1, T.n + 1):
        if Triangulation.fan(T.n, b) == T:
            return b
    raise ValueError("series evaluation needs a fan triangulation")


def pushforward_pi(x: TropPoint, full: bool = False):
    """pi^t: Plücker coordinate J gets the value of the pulled-back function.

    Returns a TropPoint on the Gr(k,n) rectangle chart, or with ``full`` a dict
    over all k-subsets.
    """
    k, n = _conf_kn(x)
    ev = conf_evaluator(k, n, _triangulation_of(x))
    if full:
        subsets = [Plucker(J) for J in combinations(range(1, n + 1), k)]
    else:
        subsets = list(grassmannian_seed(k, n).labels)
    wanted = [pi_pullback(J) for J in subsets]
    if all(ev.supports(m) for m in wanted):
        vals = ev.evaluate(x.coords, wanted)
    else:
        vals = series_eval(x, wanted)
    out = {J: vals[pi_pullback(J)] for J in subsets}
    if full:
        return out
    gr = grassmannian_seed(k, n)
    return TropPoint.from_labels(gr, out, chart_ref_gr(k, n))


# --------------------------------------------------------------------------
# Grassmannian: full Plücker vectors


def plucker_vector(y: TropPoint, rng_seed: int | None = None, retries: int = 3) -> dict:
    """All C(n,k) tropical Plücker coordinates of a point on the rectangle chart,
    through an exact monomial lift."""
    k = y.chart.labels[0].k
    n = y.ref["n"] if y.ref else max(max(lab.subset) for lab in y.chart.labels)
    rng = None if rng_seed is None else random.Random(rng_seed)
    for attempt in range(retries + 1):
        lifted = lift_to_series(y, rng)
        M = matrix_from_gr_chart(lifted.by_label(), k, n)
        try:
            return {Plucker(J): neg_val(pluecker_eval(M, J)) for J in combinations(range(1, n + 1), k)}
        except ArithmeticError:
            rng = random.Random(attempt if rng_seed is None else rng_seed + attempt + 1)
    raise ArithmeticError("vanishing Plücker coordinate persisted after re-randomizing the lift")


class GrEvaluator:
    """Mutation paths from the rectangle seed reaching every Plücker coordinate,
    found by search over three-term exchanges and certified numerically."""

    def __init__(self, k: int, n: int, rng_seed: int = 0):
        self.k, self.n = k, n
        self.seed = grassmannian_seed(k, n)
        rng = random.Random(rng_seed)
        from .seeds import random_positive_matrix

        mats = [random_positive_matrix(rng, k, n) for _ in range(2)]
        values = [{Plucker(J): pluecker_eval(M, J) for J in combinations(range(1, n + 1), k)} for M in mats]
        lookup = {}
        for J in values[0]:
            key = (values[0][J], values[1][J])
            if key in lookup:
                raise RuntimeError("Plücker values collide; choose another rng seed")
            lookup[key] = J
        self.paths = {J: [] for J in self.seed.labels}
        start = (self.seed, tuple(PointInChart(self.seed, [v[J] for J in self.seed.labels]) for v in values), ())
        seen = {frozenset(self.seed.labels)}
        queue = deque([start])
        total = len(values[0])
        while queue and len(self.paths) < total:
            seed, pts, path = queue.popleft()
            for idx in seed.mutable:
                new_pts = tuple(mutate_A(p, idx) for p in pts)
                pos = seed.pos(idx)
                key = tuple(p.coords[pos] for p in new_pts)
                J = lookup.get(key)
                if J is None:
                    continue
                labels = list(seed.labels)
                labels[pos] = J
                sig = frozenset(labels)
                if sig in seen:
                    continue
                seen.add(sig)
                nseed = new_pts[0].chart.with_labels(labels)
                npath = path + (idx,)
                if J not in self.paths:
                    self.paths[J] = list(npath)
                queue.append((nseed, tuple(PointInChart(nseed, p.coords) for p in new_pts), npath))
        if len(self.paths) < total:
            raise RuntimeError("not every Plücker coordinate was reached")
        self.compiled = {}
        for J, path in self.paths.items():
            cp = CompiledPath.build(self.seed, path)
            pos = self.seed.pos(path[-1]) if path else self.seed.pos_of_label(J)
            self.compiled[J] = (cp, pos)

    def evaluate(self, y: Sequence[Fraction]) -> dict:
        out = {}
        for J, (cp, pos) in self.compiled.items():
            out[J] = cp.run(y)[pos] if cp.steps else y[pos]
        return out


@lru_cache(maxsize=None)
def gr_evaluator(k: int, n: int) -> GrEvaluator:
    return GrEvaluator(k, n)


def plucker_vector_fast(y: TropPoint) -> dict:
    """Same values as plucker_vector, by tropical mutation along stored paths."""
    k = y.chart.labels[0].k
    n = y.ref["n"] if y.ref else max(max(lab.subset) for lab in y.chart.labels)
    return gr_evaluator(k, n).evaluate(y.coords)


# --------------------------------------------------------------------------
# torus actions


def omega_pair(j: int, lam: Sequence, k: int) -> Fraction:
    """omega_j . lambda, trace-adjusted: lambda_1 + ... + lambda_j - j * sum(lambda) / k."""
    lam = [as_fraction(x) for x in lam]
    return sum(lam[:j], Fraction(0)) - Fraction(j, k) * sum(lam, Fraction(0))


def act_H(x: TropPoint, lam: Mapping[int, Sequence]) -> TropPoint:
    """Coordinate f_m gains sum_v omega_{m(v)} . lambda_v."""
    k = x.chart.labels[0].k
    out = []
    for lab, c in zip(x.chart.labels, x.coords):
        out.append(c + sum((omega_pair(e, lam[v], k) for v, e in lab.exps if v in lam), Fraction(0)))
    return x.with_coords(out)


def psi(lam: Mapping[int, Sequence], k: int, n: int) -> list[Fraction]:
    """The scaling vector c_v = omega_1 . lambda_v."""
    return [omega_pair(1, lam[v], k) if v in lam else Fraction(0) for v in range(1, n + 1)]


def act_T(y, c: Sequence) -> object:
    """P_J gains sum_{i in J} c_i. Accepts a TropPoint on a Gr chart or a full dict."""
    c = [as_fraction(x) for x in c]
    if isinstance(y, TropPoint):
        return y.with_coords([v + sum((c[i - 1] for i in lab.subset), Fraction(0))
                              for lab, v in zip(y.chart.labels, y.coords)])
    return {J: v + sum((c[i - 1] for i in J.subset), Fraction(0)) for J, v in y.items()}


# --------------------------------------------------------------------------
# random points


def random_trop_point(rng: random.Random, chart: Seed, ref=None, lo=-3, hi=3, denom: int = 1) -> TropPoint:
    return TropPoint(chart, [Fraction(rng.randint(lo * denom, hi * denom), denom) for _ in chart.labels], ref)


def random_plucker_vector(rng: random.Random, k: int, n: int, lo=-4, hi=4, denom: int = 1) -> dict:
    """Positive tropical Plücker vector from a random rectangle-chart point."""
    gr = grassmannian_seed(k, n)
    y = random_trop_point(rng, gr, chart_ref_gr(k, n), lo, hi, denom)
    return plucker_vector_fast(y)
