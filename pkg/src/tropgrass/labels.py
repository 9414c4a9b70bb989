"""Semantic labels attached to quiver vertices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping


@dataclass(frozen=True, order=True)
class Plucker:
    """A k-subset J of [n], stored sorted."""

    subset: tuple[int, ...]

    def __post_init__(self):
        s = tuple(sorted(self.subset))
        if len(set(s)) != len(s):
            raise ValueError(f"repeated index in {self.subset}")
        object.__setattr__(self, "subset", s)

    @property
    def k(self) -> int:
        return len(self.subset)

    def __str__(self):
        return "P" + ",".join(map(str, self.subset))

    def to_json(self):
        return {"plucker": list(self.subset)}


@dataclass(frozen=True, order=True)
class FlagMonomial:
    """Vertex -> exponent assignment, e.g. {1: 2, 4: 1} is 1^2 4^1.

    Stored as a sorted tuple of (vertex, exponent) pairs with positive exponents.
    """

    exps: tuple[tuple[int, int], ...]

    def __post_init__(self):
        items = self.exps.items() if isinstance(self.exps, Mapping) else self.exps
        clean = tuple(sorted((int(v), int(e)) for v, e in items if e))
        if any(e < 0 for _, e in clean):
            raise ValueError("negative exponent")
        if len({v for v, _ in clean}) != len(clean):
            raise ValueError("repeated vertex")
        object.__setattr__(self, "exps", clean)

    @classmethod
    def of(cls, mapping: Mapping[int, int] | Iterable) -> "FlagMonomial":
        return cls(tuple(dict(mapping).items()))

    @property
    def k(self) -> int:
        return sum(e for _, e in self.exps)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.exps)

    def as_dict(self) -> dict[int, int]:
        return dict(self.exps)

    def exp(self, v: int) -> int:
        for w, e in self.exps:
            if w == v:
                return e
        return 0

    def is_pure(self) -> bool:
        return len(self.exps) == 1

    def __str__(self):
        return " ".join(f"{v}^{e}" for v, e in self.exps)

    def to_json(self):
        return {"flag": [[v, e] for v, e in self.exps]}


@dataclass(frozen=True, order=True)
class Opaque:
    name: str

    def __str__(self):
        return self.name

    def to_json(self):
        return {"opaque": self.name}


def label_from_json(data):
    if "plucker" in data:
        return Plucker(tuple(data["plucker"]))
    if "flag" in data:
        return FlagMonomial(tuple(tuple(x) for x in data["flag"]))
    if "opaque" in data:
        return Opaque(data["opaque"])
    raise ValueError(f"unknown label {data!r}")


def pi_pullback(J: Plucker) -> FlagMonomial:
    """The flag monomial with exponent one at each vertex of J."""
    return FlagMonomial(tuple((j, 1) for j in J.subset))
