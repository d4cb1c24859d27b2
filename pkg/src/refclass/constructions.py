"""Statistics for constructed classes.

Two constructions combine evidence from classes ``H`` and ``K`` about the
same target ``V``:

* the product class ``H*K``, whose frequency in ``V×V`` is the product of the
  factor frequencies;
* the agreement class ``[H,K]`` (pairs that agree on membership in ``V``),
  whose frequency is ``g(p1, p2) = p1 p2 / (1 - p1 - p2 + 2 p1 p2)``.

``g`` is the odds product, ``odds(g) = odds(p1) * odds(p2)``, which extends it
to any number of factors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterator, Optional, Sequence

from refclass.core import (
    Bracket,
    ClassTerm,
    Interval,
    as_constituents,
    bracket,
    canonicalize,
    intersect,
)


class UndefinedCombination(ArithmeticError):
    """The factors are certain in opposite directions (some 1, some 0)."""


@dataclass(frozen=True)
class DerivedStat:
    cls: ClassTerm
    interval: Interval
    rule: str  # "ISX", "ISXB" or "BoundsLP"
    factors: tuple[tuple[ClassTerm, Interval], ...]


def g_combine(values: Sequence) -> Fraction:
    vals = [Fraction(v) for v in values]
    if not vals:
        raise ValueError("g_combine needs at least one value")
    if any(not 0 <= v <= 1 for v in vals):
        raise ValueError("values must lie in [0, 1]")
    if len(vals) == 1:
        return vals[0]
    yes = prod(vals)
    no = prod(1 - v for v in vals)
    if yes + no == 0:
        raise UndefinedCombination(
            "cannot combine certainties %s" % ", ".join(str(v) for v in vals))
    return yes / (yes + no)


def g_closed_form(x, y) -> Fraction:
    """Binary g as ``xy / (1 - x - y + 2xy)``; kept for cross-checking."""
    x, y = Fraction(x), Fraction(y)
    den = 1 - x - y + 2 * x * y
    if den == 0:
        raise UndefinedCombination("cannot combine certainties %s, %s" % (x, y))
    return x * y / den


def isx_stat(factors: Sequence[Interval]) -> Interval:
    if len(factors) < 2:
        raise ValueError("a product needs at least two factors")
    return Interval(prod(f.lo for f in factors), prod(f.hi for f in factors))


def isxb_stat(factors: Sequence[Interval]) -> Interval:
    if len(factors) < 2:
        raise ValueError("a combination needs at least two factors")
    return Interval(g_combine([f.lo for f in factors]), g_combine([f.hi for f in factors]))


def constituent_stats(b: ClassTerm, target: ClassTerm, kb) -> Optional[list]:
    """(class, interval) for each constituent's joint class, or None if any is unknown."""
    out = []
    for c in as_constituents(b):
        cls = intersect(*c)
        iv = kb.stat(cls, target)
        if iv is None:
            return None
        out.append((cls, iv))
    return out


def bracket_stat(b: ClassTerm, target: ClassTerm, kb, closure=None) -> Optional[Interval]:
    """Statistic of bracket ``b`` toward ``target``; None when unavailable.

    A one-constituent bracket is its joint class, so its statistic is whatever
    is asserted for that intersection.
    """
    factors = constituent_stats(b, target, kb)
    if factors is None:
        return None
    if len(factors) == 1:
        return factors[0][1]
    return isxb_stat([iv for _, iv in factors])


def bracket_reflects(a: ClassTerm, b: ClassTerm) -> bool:
    """Every constituent of ``b`` fits inside some constituent of ``a``."""
    blocks_a = [frozenset(c) for c in as_constituents(a)]
    return all(any(frozenset(cb) <= ca for ca in blocks_a) for cb in as_constituents(b))


def set_partitions(items: Sequence, max_blocks: Optional[int] = None) -> Iterator[list[list]]:
    """Set partitions of ``items`` in restricted-growth order."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest, max_blocks):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        if max_blocks is None or len(part) < max_blocks:
            yield [[first]] + part


def enumerate_brackets(names, max_blocks: Optional[int] = 2) -> list[ClassTerm]:
    """Peer brackets over ``names``: the joint class plus full-coverage splits.

    ``max_blocks=None`` enumerates every set partition (Bell-number many), which
    is only allowed for up to 8 names.
    """
    names = sorted(set(names))
    if not names:
        return []
    if max_blocks is None and len(names) > 8:
        raise ValueError("full bracket enumeration is limited to 8 names")
    if max_blocks is not None and max_blocks < 1:
        raise ValueError("max_blocks must be at least 1")
    found = {canonicalize(Bracket(tuple(tuple(b) for b in part)))
             for part in set_partitions(names, max_blocks)}
    return sorted(found, key=lambda t: (len(as_constituents(t)), t.sort_key()))


def reflected_brackets(a: ClassTerm) -> list[ClassTerm]:
    """All brackets over subsets of ``a``'s names that ``a`` reflects."""
    names = sorted(a.names())
    out = set()
    for k in range(1, len(names) + 1):
        for subset in itertools.combinations(names, k):
            for part in set_partitions(subset):
                t = bracket(*part)
                if bracket_reflects(a, t):
                    out.add(t)
    return sorted(out, key=ClassTerm.sort_key)
