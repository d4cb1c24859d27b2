"""Exact intervals, canonical class terms, and the strength relations.

Every decision in reference-class selection comes down to comparing interval
endpoints, so endpoints are :class:`fractions.Fraction` and never floats.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

Rational = Union[Fraction, int]


class TermError(ValueError):
    """A class term that cannot be put in canonical form."""


def as_fraction(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("interval endpoints must be exact; got float %r" % value)
    return Fraction(value)


def fmt_rational(value: Fraction) -> str:
    """Render as ``n/d`` (always with a denominator)."""
    return "%d/%d" % (value.numerator, value.denominator)


@dataclass(frozen=True, order=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = as_fraction(self.lo), as_fraction(self.hi)
        if not 0 <= lo <= hi <= 1:
            raise ValueError("invalid interval [%s, %s]" % (lo, hi))
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def vacuous(cls) -> "Interval":
        return cls(Fraction(0), Fraction(1))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, value) -> bool:
        return self.lo <= value <= self.hi

    def __str__(self):
        return "[%s, %s]" % (self.lo, self.hi)

    def as_pair(self) -> list[str]:
        return [fmt_rational(self.lo), fmt_rational(self.hi)]


class Strength(enum.Enum):
    A = "A"
    B = "B"
    EQUAL = "Equal"
    INCOMPARABLE = "Incomparable"


def nests_in(a: Interval, b: Interval) -> bool:
    """True when ``a`` lies inside ``b``, i.e. ``a`` is at least as strong."""
    return b.lo <= a.lo and a.hi <= b.hi


def disagrees(a: Interval, b: Interval) -> bool:
    return not nests_in(a, b) and not nests_in(b, a)


def stronger(a: Interval, b: Interval) -> Strength:
    if a == b:
        return Strength.EQUAL
    if nests_in(a, b):
        return Strength.A
    if nests_in(b, a):
        return Strength.B
    return Strength.INCOMPARABLE


# -- class terms -------------------------------------------------------------


class ClassTerm:
    """Base for the set-denoting terms. Subclasses are frozen dataclasses."""

    __slots__ = ()

    def names(self) -> frozenset[str]:
        raise NotImplementedError

    def render(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.render()

    def sort_key(self):
        return self.render()


@dataclass(frozen=True)
class Prim(ClassTerm):
    name: str

    def names(self):
        return frozenset((self.name,))

    def render(self):
        return self.name


@dataclass(frozen=True)
class Intersect(ClassTerm):
    parts: tuple[str, ...]

    def names(self):
        return frozenset(self.parts)

    def render(self):
        return "&".join(self.parts)


def _render_constituents(constituents, sep):
    return sep.join("&".join(c) for c in constituents)


@dataclass(frozen=True)
class Bracket(ClassTerm):
    """Combination class over disjoint constituents, target property implicit.

    ``[abc]`` is the joint class of ``a&b&c``; ``[abc,d]`` combines the joint
    statistic of ``a&b&c`` with that of ``d`` on agreement about the target.
    """

    constituents: tuple[tuple[str, ...], ...]

    def names(self):
        return frozenset(n for c in self.constituents for n in c)

    def render(self):
        return "[" + _render_constituents(self.constituents, ",") + "]"


@dataclass(frozen=True)
class Product(ClassTerm):
    """Cross-product class (the independence-style construction)."""

    constituents: tuple[tuple[str, ...], ...]

    def names(self):
        return frozenset(n for c in self.constituents for n in c)

    def render(self):
        return _render_constituents(self.constituents, "*")


def _canonical_constituents(constituents) -> tuple[tuple[str, ...], ...]:
    blocks = [tuple(sorted(set(c))) for c in constituents]
    if not blocks or any(not b for b in blocks):
        raise TermError("constituents must be non-empty")
    seen: set[str] = set()
    for b in blocks:
        if seen & set(b):
            raise TermError("overlapping constituents: %s" % sorted(seen & set(b)))
        seen |= set(b)
    return tuple(sorted(blocks))


def canonicalize(t: ClassTerm) -> ClassTerm:
    if isinstance(t, Prim):
        return t
    if isinstance(t, Intersect):
        parts = tuple(sorted(set(t.parts)))
        if not parts:
            raise TermError("empty intersection")
        return Prim(parts[0]) if len(parts) == 1 else Intersect(parts)
    if isinstance(t, Bracket):
        blocks = _canonical_constituents(t.constituents)
        if len(blocks) == 1:
            return canonicalize(Intersect(blocks[0]))
        return Bracket(blocks)
    if isinstance(t, Product):
        blocks = _canonical_constituents(t.constituents)
        if len(blocks) < 2:
            raise TermError("a product class needs at least two factors")
        return Product(blocks)
    raise TypeError("not a class term: %r" % (t,))


def intersect(*names: Union[str, ClassTerm]) -> ClassTerm:
    """Canonical intersection of names and/or Prim/Intersect terms."""
    flat: list[str] = []
    for n in names:
        if isinstance(n, str):
            flat.append(n)
        elif isinstance(n, (Prim, Intersect)):
            flat.extend(n.names())
        else:
            raise TermError("cannot intersect %s" % n)
    return canonicalize(Intersect(tuple(flat)))


def bracket(*constituents: Iterable[str]) -> ClassTerm:
    """Canonical bracket; ``bracket("HK")`` is the joint class ``H&K``.

    Strings are split into single-character names, matching the compact
    ``[abc,d]`` notation; pass lists for longer names.
    """
    return canonicalize(Bracket(tuple(tuple(c) for c in constituents)))


def product(*constituents: Iterable[str]) -> ClassTerm:
    return canonicalize(Product(tuple(tuple(c) for c in constituents)))


def as_constituents(t: ClassTerm) -> tuple[tuple[str, ...], ...]:
    """Bracket view of a term: a Prim/Intersect is a one-constituent bracket."""
    if isinstance(t, (Prim, Intersect)):
        return (tuple(sorted(t.names())),)
    if isinstance(t, (Bracket, Product)):
        return t.constituents
    raise TypeError("not a class term: %r" % (t,))


def is_simple(t: ClassTerm) -> bool:
    return isinstance(t, (Prim, Intersect))
