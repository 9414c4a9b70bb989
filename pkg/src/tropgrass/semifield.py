"""Exact scalars: rationals, max-plus tropical numbers, and truncated
Laurent/Puiseux series over Q.

Series exponents are stored as Fractions, so the ramification grid is implicit:
it is the lcm of the exponent denominators and is unified automatically by
every binary operation.
"""

from __future__ import annotations

from fractions import Fraction
from math import inf, lcm
from typing import Iterable, Mapping

#: default number of grid units kept above the valuation for inexact results
REL_PREC = 24


class IndeterminateValuation(ArithmeticError):
    """Raised when the leading term of a series is not known."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    raise TypeError(f"cannot read {x!r} as a rational")


def frac_json(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


# --------------------------------------------------------------------------
# tropical numbers


class Trop:
    """Element of the semifield Q^t: plus is max, times is +, divide is -.

    ``Trop.BOTTOM`` marks an absent coordinate and refuses arithmetic.
    """

    __slots__ = ("value",)

    def __init__(self, value=0):
        if isinstance(value, Trop):
            value = value.value
        self.value = None if value is None else as_fraction(value)

    def _v(self) -> Fraction:
        if self.value is None:
            raise ValueError("tropical bottom element used in arithmetic")
        return self.value

    @staticmethod
    def _coerce(other) -> "Trop":
        return other if isinstance(other, Trop) else Trop(other)

    def __add__(self, other):
        return Trop(max(self._v(), Trop._coerce(other)._v()))

    __radd__ = __add__

    def __mul__(self, other):
        return Trop(self._v() + Trop._coerce(other)._v())

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Trop(self._v() - Trop._coerce(other)._v())

    def __rtruediv__(self, other):
        return Trop(Trop._coerce(other)._v() - self._v())

    def __pow__(self, n):
        return Trop(self._v() * as_fraction(n))

    def __eq__(self, other):
        if isinstance(other, Trop):
            return self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash(("trop", self.value))

    def __repr__(self):
        return "Trop(bottom)" if self.value is None else f"Trop({self.value})"


Trop.BOTTOM = Trop(None)


def trop_arith(op: str, x, y) -> Trop:
    x, y = Trop(x), Trop(y)
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")


# --------------------------------------------------------------------------
# series


class GenSeries:
    """A Laurent/Puiseux series in t, known below ``prec``.

    ``prec == inf`` means the series is an exact Laurent polynomial.
    Instances are immutable.
    """

    __slots__ = ("_terms", "prec")

    def __init__(self, terms: Mapping | Iterable = (), prec=inf):
        if isinstance(terms, Mapping):
            terms = terms.items()
        p = prec if prec == inf else as_fraction(prec)
        acc: dict[Fraction, Fraction] = {}
        for e, c in terms:
            e, c = as_fraction(e), as_fraction(c)
            if e < p:
                acc[e] = acc.get(e, 0) + c
        self._terms = tuple(sorted((e, c) for e, c in acc.items() if c != 0))
        self.prec = p

    @classmethod
    def _raw(cls, terms: dict, prec):
        # trusted constructor: terms already Fractions
        obj = GenSeries.__new__(GenSeries)
        obj._terms = tuple(sorted((e, c) for e, c in terms.items() if c != 0 and e < prec))
        obj.prec = prec
        return obj

    # constructors
    @classmethod
    def const(cls, c=1) -> "GenSeries":
        return cls({0: c})

    @classmethod
    def monomial(cls, c, e) -> "GenSeries":
        return cls({e: c})

    # basic data
    @property
    def terms(self) -> tuple:
        return self._terms

    def coeff(self, e) -> Fraction:
        e = as_fraction(e)
        if e >= self.prec:
            raise IndeterminateValuation(f"coefficient at {e} is beyond precision")
        for ee, c in self._terms:
            if ee == e:
                return c
        return Fraction(0)

    @property
    def is_exact(self) -> bool:
        return self.prec == inf

    def is_zero(self) -> bool:
        """True only for the exact zero series."""
        return not self._terms and self.prec == inf

    @property
    def ramification(self) -> int:
        r = 1
        for e, _ in self._terms:
            r = lcm(r, e.denominator)
        if self.prec != inf:
            r = lcm(r, self.prec.denominator)
        return r

    @property
    def valuation(self) -> Fraction:
        if not self._terms:
            raise IndeterminateValuation("no known nonzero term")
        return self._terms[0][0]

    @property
    def lead_coeff(self) -> Fraction:
        if not self._terms:
            raise IndeterminateValuation("no known nonzero term")
        return self._terms[0][1]

    def leading_term(self) -> "GenSeries":
        return GenSeries.monomial(self.lead_coeff, self.valuation)

    def _val_lb(self):
        return self._terms[0][0] if self._terms else self.prec

    def is_monomial(self) -> bool:
        return self.is_exact and len(self._terms) == 1

    # arithmetic ----------------------------------------------------------
    @staticmethod
    def _coerce(x) -> "GenSeries":
        if isinstance(x, GenSeries):
            return x
        if isinstance(x, (int, Fraction)):
            return GenSeries({0: x}) if x else GenSeries()
        return NotImplemented

    def _wrap(self, other, result: "GenSeries") -> "GenSeries":
        if isinstance(self, PosSeries) and isinstance(other, PosSeries):
            return PosSeries._from(result)
        return result

    def __add__(self, other):
        o = GenSeries._coerce(other)
        if o is NotImplemented:
            return o
        prec = min(self.prec, o.prec)
        acc = dict(self._terms)
        for e, c in o._terms:
            acc[e] = acc.get(e, 0) + c
        return self._wrap(o, GenSeries._raw(acc, prec))

    __radd__ = __add__

    def __neg__(self):
        return GenSeries._raw({e: -c for e, c in self._terms}, self.prec)

    def __sub__(self, other):
        o = GenSeries._coerce(other)
        if o is NotImplemented:
            return o
        return GenSeries.__add__(self, -o)

    def __rsub__(self, other):
        o = GenSeries._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = GenSeries._coerce(other)
        if o is NotImplemented:
            return o
        prec = min(self.prec + o._val_lb(), o.prec + self._val_lb())
        acc: dict = {}
        for e1, c1 in self._terms:
            for e2, c2 in o._terms:
                e = e1 + e2
                if e < prec:
                    acc[e] = acc.get(e, 0) + c1 * c2
        return self._wrap(o, GenSeries._raw(acc, prec))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GenSeries._coerce(other)
        if o is NotImplemented:
            return o
        if not o._terms:
            raise IndeterminateValuation("division by a series with unknown leading term")
        vy, cy = o._terms[0]
        if o.is_monomial():
            acc = {e - vy: c / cy for e, c in self._terms}
            return self._wrap(o, GenSeries._raw(acc, self.prec - vy))
        vx = self._val_lb()
        if vx == inf:  # exact zero
            return self._wrap(o, GenSeries())
        target = self.prec - vy
        target = min(target, o.prec - 2 * vy + vx)
        if target == inf:
            target = vx - vy + REL_PREC
        rem = dict(self._terms)
        quo: dict = {}
        while rem:
            er = min(rem)
            qe = er - vy
            if qe >= target:
                break
            qc = rem.pop(er) / cy
            quo[qe] = qc
            for e, c in o._terms[1:]:
                ee = e + qe
                v = rem.get(ee, 0) - qc * c
                if v:
                    rem[ee] = v
                else:
                    rem.pop(ee, None)
        prec = inf if (not rem and self.is_exact and o.is_exact) else target
        return self._wrap(o, GenSeries._raw(quo, prec))

    def __rtruediv__(self, other):
        o = GenSeries._coerce(other)
        if o is NotImplemented:
            return o
        res = o / self
        if isinstance(self, PosSeries) and isinstance(other, (int, Fraction)) and other > 0:
            return PosSeries._from(res)
        return res

    def __pow__(self, n):
        n = as_fraction(n)
        if n.denominator != 1:
            if self.is_monomial():
                (e, c), = self._terms
                if c == 1:
                    return self._wrap(self, GenSeries({e * n: 1}))
            raise ValueError("fractional powers only for monic monomials")
        n = int(n)
        if n < 0:
            return 1 / (self ** (-n))
        result = PosSeries.const(1) if isinstance(self, PosSeries) else GenSeries.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # comparison ------------------------------------------------------------
    def __eq__(self, other):
        o = GenSeries._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._terms == o._terms and self.prec == o.prec

    def __hash__(self):
        return hash((self._terms, self.prec))

    def agrees_with(self, other, upto=None) -> bool:
        """Equality of all coefficients below the common precision (or ``upto``)."""
        o = GenSeries._coerce(other)
        bound = min(self.prec, o.prec)
        if upto is not None:
            bound = min(bound, as_fraction(upto))
        a = [(e, c) for e, c in self._terms if e < bound]
        b = [(e, c) for e, c in o._terms if e < bound]
        return a == b

    def truncate(self, prec) -> "GenSeries":
        p = min(self.prec, as_fraction(prec))
        return self._wrap(self, GenSeries._raw(dict(self._terms), p))

    # i/o -------------------------------------------------------------------
    def __repr__(self):
        parts = []
        for e, c in self._terms:
            parts.append(f"{c}*t^({e})" if e else f"{c}")
        if self.prec != inf:
            parts.append(f"O(t^({self.prec}))")
        body = " + ".join(parts) if parts else "0"
        return f"{type(self).__name__}({body})"

    def to_json(self) -> dict:
        return {
            "terms": [[e.numerator, e.denominator, c.numerator, c.denominator] for e, c in self._terms],
            "precision": None if self.prec == inf else frac_json(self.prec),
            "positive": isinstance(self, PosSeries),
        }

    @staticmethod
    def from_json(data) -> "GenSeries":
        terms = [(Fraction(en, ed), Fraction(cn, cd)) for en, ed, cn, cd in data["terms"]]
        prec = inf if data.get("precision") is None else as_fraction(data["precision"])
        s = GenSeries(terms, prec)
        return PosSeries._from(s) if data.get("positive") else s


class PosSeries(GenSeries):
    """A series with a known leading term whose coefficient is positive."""

    __slots__ = ()

    def __init__(self, terms: Mapping | Iterable = (), prec=inf):
        super().__init__(terms, prec)
        self._check()

    def _check(self):
        if not self._terms:
            raise IndeterminateValuation("positive series needs a known leading term")
        if self._terms[0][1] <= 0:
            raise ValueError(f"leading coefficient {self._terms[0][1]} is not positive")

    @classmethod
    def _from(cls, s: GenSeries) -> "PosSeries":
        obj = PosSeries.__new__(PosSeries)
        obj._terms = s._terms
        obj.prec = s.prec
        obj._check()
        return obj


def neg_val(x) -> Fraction:
    """The tropicalization map: minus the valuation."""
    if isinstance(x, GenSeries):
        return -x.valuation
    if isinstance(x, (int, Fraction)):
        if x == 0:
            raise IndeterminateValuation("zero has no valuation")
        return Fraction(0)
    raise TypeError(type(x))


def series_arith(op: str, x: GenSeries, y: GenSeries) -> GenSeries:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")


def monomial(c, e) -> PosSeries | GenSeries:
    """c * t^e, positive when c > 0."""
    c = as_fraction(c)
    s = GenSeries.monomial(c, e)
    return PosSeries._from(s) if c > 0 else s


def one_like(v):
    """Multiplicative identity of the semifield that ``v`` lives in."""
    if isinstance(v, Trop):
        return Trop(0)
    if isinstance(v, PosSeries):
        return PosSeries.const(1)
    if isinstance(v, GenSeries):
        return GenSeries.const(1)
    return Fraction(1)
