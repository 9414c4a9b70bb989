"""Seeds, matrix mutation and mutation of A- and X-coordinates in any semifield.

Coordinates may be ``Fraction`` (positive rationals), ``Trop`` or
``GenSeries``/``PosSeries``; the exchange relations only use +, * and /, so one
implementation serves all of them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Hashable, Sequence

from .labels import Opaque, label_from_json
from .semifield import Trop, as_fraction, frac_json, one_like


class FrozenMutation(ValueError):
    pass


def mutate_matrix(B: Sequence[Sequence], k: int) -> list[list[Fraction]]:
    """Matrix mutation at position k (positions, not ids)."""
    n = len(B)
    out = [list(row) for row in B]
    col = [(i, B[i][k], B[i][k] > 0) for i in range(n) if i != k and B[i][k]]
    row = [(j, B[k][j], B[k][j] > 0) for j in range(n) if j != k and B[k][j]]
    for i, bik, si in col:
        step = abs(bik)
        for j, bkj, sj in row:
            if si == sj:
                out[i][j] = B[i][j] + step * bkj
    for i, bik, _ in col:
        out[i][k] = -bik
    for j, bkj, _ in row:
        out[k][j] = -bkj
    return out


@dataclass(frozen=True)
class Seed:
    """A labeled seed: index ids, frozen ids, exchange matrix, symmetrizer, labels.

    ``B`` is indexed by position in ``indices``; ``B[i][j] > 0`` means arrows j -> i.
    """

    indices: tuple
    frozen: frozenset
    B: tuple
    d: tuple = None
    labels: tuple = None

    def __post_init__(self):
        n = len(self.indices)
        object.__setattr__(self, "indices", tuple(self.indices))
        object.__setattr__(self, "frozen", frozenset(self.frozen))
        object.__setattr__(self, "B", tuple(tuple(as_fraction(x) for x in row) for row in self.B))
        if self.d is None:
            object.__setattr__(self, "d", (1,) * n)
        else:
            object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(Opaque(f"x{i}") for i in self.indices))
        else:
            object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.B) != n or any(len(r) != n for r in self.B) or len(self.d) != n or len(self.labels) != n:
            raise ValueError("inconsistent seed dimensions")
        if not self.frozen <= set(self.indices):
            raise ValueError("frozen ids must be indices")

    # lookups ---------------------------------------------------------------
    @cached_property
    def _pos(self) -> dict:
        return {idx: p for p, idx in enumerate(self.indices)}

    @cached_property
    def _label_pos(self) -> dict:
        return {lab: p for p, lab in enumerate(self.labels)}

    def pos(self, idx: Hashable) -> int:
        return self._pos[idx]

    def pos_of_label(self, label) -> int:
        return self._label_pos[label]

    def has_label(self, label) -> bool:
        return label in self._label_pos

    def b(self, i, j) -> Fraction:
        return self.B[self._pos[i]][self._pos[j]]

    def is_frozen(self, idx) -> bool:
        return idx in self.frozen

    @property
    def mutable(self) -> tuple:
        return tuple(i for i in self.indices if i not in self.frozen)

    def __len__(self):
        return len(self.indices)

    # checks ----------------------------------------------------------------
    def validate(self) -> None:
        n = len(self.indices)
        if len(set(self.labels)) != n:
            raise ValueError("labels are not distinct")
        if any(x <= 0 for x in self.d):
            raise ValueError("symmetrizer must be positive")
        for p in range(n):
            for q in range(n):
                b = self.B[p][q]
                if b * self.d[q] != -self.B[q][p] * self.d[p]:
                    raise ValueError(f"not skew-symmetrizable at ({p},{q})")
                both_frozen = self.indices[p] in self.frozen and self.indices[q] in self.frozen
                if not both_frozen and b.denominator != 1:
                    raise ValueError(f"non-integral entry at ({p},{q})")

    # mutation --------------------------------------------------------------
    def mutate(self, k: Hashable) -> "Seed":
        if k in self.frozen:
            raise FrozenMutation(f"cannot mutate at frozen index {k!r}")
        # seeds are immutable, so each neighbour is computed once
        cache = self.__dict__.setdefault("_mutations", {})
        if k not in cache:
            p = self._pos[k]
            labels = list(self.labels)
            labels[p] = Opaque(f"mu{k}({labels[p]})")
            cache[k] = self._trusted(tuple(map(tuple, mutate_matrix(self.B, p))), tuple(labels))
        return cache[k]

    def _trusted(self, B: tuple, labels: tuple) -> "Seed":
        # same indices and symmetrizer, entries already Fractions: skip the checks
        out = object.__new__(Seed)
        for name, val in (("indices", self.indices), ("frozen", self.frozen), ("B", B),
                          ("d", self.d), ("labels", labels)):
            object.__setattr__(out, name, val)
        if "_pos" in self.__dict__:
            out.__dict__["_pos"] = self._pos
        return out

    def with_labels(self, labels) -> "Seed":
        labels = tuple(labels)
        if len(labels) != len(self.indices):
            raise ValueError("wrong number of labels")
        return self._trusted(self.B, labels)

    def arrows(self):
        """Yield (source id, target id, multiplicity) for b_{target,source} > 0."""
        for p, i in enumerate(self.indices):
            for q, j in enumerate(self.indices):
                if self.B[p][q] > 0:
                    yield j, i, self.B[p][q]

    # i/o -------------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "indices": [_id_json(i) for i in self.indices],
            "frozen": [_id_json(i) for i in self.indices if i in self.frozen],
            "B": [[frac_json(x) for x in row] for row in self.B],
            "d": list(self.d),
            "labels": [lab.to_json() for lab in self.labels],
        }

    @staticmethod
    def from_json(data) -> "Seed":
        idx = [_id_from_json(i) for i in data["indices"]]
        frozen = [_id_from_json(i) for i in data["frozen"]]
        B = [[as_fraction(x) for x in row] for row in data["B"]]
        labels = [label_from_json(x) for x in data["labels"]] if data.get("labels") else None
        return Seed(idx, frozen, B, data.get("d"), labels)


def _id_json(i):
    if hasattr(i, "to_json"):
        return i.to_json()
    return list(i) if isinstance(i, tuple) else i


def _id_from_json(i):
    if isinstance(i, dict):
        return label_from_json(i)
    return tuple(i) if isinstance(i, list) else i


# backwards-friendly alias: every Seed here carries labels
LabeledSeed = Seed


@dataclass(frozen=True)
class PointInChart:
    """Coordinates on a seed. ``kind`` is "A" or "X"; absent X-coordinates are None."""

    chart: Seed
    coords: tuple
    kind: str = "A"

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if len(self.coords) != len(self.chart):
            raise ValueError("point is not total on its chart")
        if self.kind not in ("A", "X"):
            raise ValueError(self.kind)

    def __getitem__(self, idx):
        return self.coords[self.chart.pos(idx)]

    def at_label(self, label):
        return self.coords[self.chart.pos_of_label(label)]

    def by_label(self) -> dict:
        return dict(zip(self.chart.labels, self.coords))

    def map(self, fn) -> "PointInChart":
        return PointInChart(self.chart, [None if c is None else fn(c) for c in self.coords], self.kind)


def _pow(x, b: Fraction):
    if b.denominator == 1:
        return x ** int(b) if not isinstance(x, Trop) else x ** b
    return x ** b


def exchange_value(seed: Seed, coords: Sequence, p: int):
    """Right-hand side of the A-exchange relation at position p, before dividing by A_p."""
    one = one_like(coords[p])
    plus, minus = one, one
    for q, b in enumerate(seed.B[p]):
        if b > 0:
            plus = plus * _pow(coords[q], b)
        elif b < 0:
            minus = minus * _pow(coords[q], -b)
    return plus + minus


def mutate_A(pt: PointInChart, k: Hashable) -> PointInChart:
    seed = pt.chart
    if k in seed.frozen:
        raise FrozenMutation(f"cannot mutate at frozen index {k!r}")
    if pt.kind != "A":
        raise ValueError("mutate_A needs an A-point")
    p = seed.pos(k)
    coords = list(pt.coords)
    coords[p] = exchange_value(seed, coords, p) / coords[p]
    return PointInChart(seed.mutate(k), coords, "A")


def mutate_X(pt: PointInChart, k: Hashable) -> PointInChart:
    seed = pt.chart
    if k in seed.frozen:
        raise FrozenMutation(f"cannot mutate at frozen index {k!r}")
    if pt.kind != "X":
        raise ValueError("mutate_X needs an X-point")
    p = seed.pos(k)
    xk = pt.coords[p]
    if xk is None:
        raise ValueError("X-coordinate at the mutation vertex is absent")
    one_plus = one_like(xk) + xk
    coords = list(pt.coords)
    for i, xi in enumerate(pt.coords):
        if i == p or xi is None:
            continue
        b = seed.B[i][p]
        if b:
            coords[i] = xi * _pow(xk, max(b, Fraction(0))) * _pow(one_plus, -b)
    coords[p] = one_like(xk) / xk
    return PointInChart(seed.mutate(k), coords, "X")


def p_map(pt: PointInChart, rows: Sequence | None = None) -> PointInChart:
    """X_i = prod_j A_j^{b_ij}. Defaults to the unfrozen rows (frozen rows may be fractional)."""
    seed = pt.chart
    if rows is None:
        rows = seed.mutable
    want = {seed.pos(r) for r in rows}
    out = []
    for i in range(len(seed)):
        if i not in want:
            out.append(None)
            continue
        val = one_like(pt.coords[i])
        for j, b in enumerate(seed.B[i]):
            if b:
                if b.denominator != 1:
                    raise ValueError(f"row {seed.indices[i]!r} is not integral")
                val = val * _pow(pt.coords[j], b)
        out.append(val)
    return PointInChart(seed, out, "X")


def apply_path(pt: PointInChart, path: Sequence, mode: str | None = None) -> PointInChart:
    mode = mode or pt.kind
    step = mutate_A if mode == "A" else mutate_X
    for k in path:
        pt = step(pt, k)
    return pt


# --------------------------------------------------------------------------
# compiled tropical paths (fast repeated evaluation)


@dataclass
class CompiledPath:
    """A mutation path with the exchange rows frozen in, for fast tropical A-mutation.

    Each step is (position, [(pos, b) with b>0], [(pos, -b) with b<0]).
    """

    steps: list = field(default_factory=list)
    final: Seed | None = None

    @classmethod
    def build(cls, seed: Seed, path: Sequence) -> "CompiledPath":
        steps = []
        for k in path:
            p = seed.pos(k)
            row = seed.B[p]
            plus = [(q, b) for q, b in enumerate(row) if b > 0]
            minus = [(q, -b) for q, b in enumerate(row) if b < 0]
            steps.append((p, plus, minus))
            seed = seed.mutate(k)
        return cls(steps, seed)

    def run(self, values: list) -> list:
        """Tropical A-mutation of a list of Fractions (modified copy returned)."""
        v = list(values)
        for p, plus, minus in self.steps:
            a = sum((b * v[q] for q, b in plus), Fraction(0))
            c = sum((b * v[q] for q, b in minus), Fraction(0))
            v[p] = (a if a > c else c) - v[p]
        return v


# --------------------------------------------------------------------------
# random seeds


def random_seed(rng: random.Random, rank: int, n_frozen: int = 0, *, max_entry: int = 2,
                symmetrizable: bool = True) -> Seed:
    """Random skew-symmetrizable seed with ``rank`` mutable and ``n_frozen`` frozen ids."""
    n = rank + n_frozen
    d = [rng.choice((1, 2)) if symmetrizable else 1 for _ in range(n)]
    frozen = set(range(rank, n))
    B = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m = lcm(d[i], d[j])
            if i in frozen and j in frozen:
                s = Fraction(rng.randint(-2 * max_entry, 2 * max_entry) * m, 2)
            else:
                s = Fraction(rng.randint(-max_entry, max_entry) * m)
            # s_ij = b_ij d_j is skew-symmetric
            B[i][j] = s / d[j]
            B[j][i] = -s / d[i]
    return Seed(list(range(n)), frozen, B, d)
