"""Forward chaining over subset and membership assertions.

Every Prim/Intersect term denotes the intersection of its names, so the
supersets of a term are determined by one fixpoint over names: starting from
the term's own names, repeatedly add the names of ``t`` for every asserted
``s ⊆ t`` whose names are already covered. A term ``b`` is then a superset of
``a`` exactly when ``b``'s names lie inside that fixpoint. This single pass
covers the syntactic intersection rule, asserted edges, transitivity and
intersection introduction (``a ⊆ b`` and ``a ⊆ c`` give ``a ⊆ b&c``).
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable

from refclass.core import ClassTerm, Prim, intersect, is_simple
from refclass.kb import KnowledgeBase

DEFAULT_MAX_MEMBERSHIPS = 12


class Origin(enum.Enum):
    ASSERTED = "Asserted"
    SYNTACTIC = "Syntactic"
    TRANSITIVE = "Transitive"


class Provenance(enum.Enum):
    ASSERTED = "Asserted"
    SYNTACTIC = "Syntactic"
    CLOSURE = "Closure"


class ScaleError(ValueError):
    pass


class UnknownIndividual(KeyError):
    def __str__(self):
        return "query about undeclared individual %s" % self.args[0]


def _powerset_terms(names: Iterable[str]) -> list[ClassTerm]:
    names = sorted(names)
    out = []
    for k in range(1, len(names) + 1):
        out.extend(intersect(*combo) for combo in itertools.combinations(names, k))
    return out


@dataclass
class SubsetClosure:
    """Subset relation over Prim/Intersect terms, closed under the rules above.

    ``universe`` holds the terms the KB mentions plus the intersections of
    each individual's asserted memberships; :meth:`edges` enumerates the
    closure over it. :meth:`is_subset` also answers for terms outside the
    universe, using the same fixpoint.
    """

    universe: tuple[ClassTerm, ...]
    asserted: tuple[tuple[ClassTerm, ClassTerm], ...]
    _cache: dict = field(default_factory=dict, repr=False)

    def name_closure(self, names: frozenset) -> frozenset:
        hit = self._cache.get(names)
        if hit is not None:
            return hit
        reached = set(names)
        changed = True
        while changed:
            changed = False
            for sub, sup in self.asserted:
                if sub.names() <= reached and not sup.names() <= reached:
                    reached |= sup.names()
                    changed = True
        result = frozenset(reached)
        self._cache[names] = result
        return result

    def is_subset(self, a: ClassTerm, b: ClassTerm) -> bool:
        if a == b:
            return True
        if not (is_simple(a) and is_simple(b)):
            return False
        return b.names() <= self.name_closure(a.names())

    def origin(self, a: ClassTerm, b: ClassTerm):
        """Origin tag of the edge a ⊆ b, or None when there is no edge."""
        if not self.is_subset(a, b):
            return None
        if (a, b) in self.asserted:
            return Origin.ASSERTED
        if a == b or b.names() <= a.names():
            return Origin.SYNTACTIC
        return Origin.TRANSITIVE

    def supersets(self, a: ClassTerm) -> list[ClassTerm]:
        reach = self.name_closure(a.names())
        return [b for b in self.universe if b.names() <= reach]

    def edges(self) -> dict[tuple[ClassTerm, ClassTerm], Origin]:
        out = {}
        for a in self.universe:
            for b in self.supersets(a):
                out[(a, b)] = self.origin(a, b)
        return out

    def equivalence_groups(self) -> list[tuple[ClassTerm, ...]]:
        """Distinct universe terms that are mutual subsets, representative first."""
        groups: dict[frozenset, list] = {}
        for t in self.universe:
            groups.setdefault(self.name_closure(t.names()), []).append(t)
        out = [tuple(sorted(g, key=ClassTerm.sort_key)) for g in groups.values() if len(g) > 1]
        return sorted(out, key=lambda g: g[0].sort_key())


def membership_names(kb: KnowledgeBase, x: str) -> frozenset:
    if x not in kb.members:
        raise UnknownIndividual(x)
    return frozenset(n for t in kb.members[x] for n in t.names())


def build_closure(kb: KnowledgeBase, max_memberships: int = DEFAULT_MAX_MEMBERSHIPS) -> SubsetClosure:
    terms: dict[ClassTerm, None] = {}
    for name in sorted(kb.classes):
        terms[Prim(name)] = None
    for sub, sup in kb.subsets:
        terms[sub] = terms[sup] = None
    for ref, target in kb.stats:
        terms[ref] = terms[target] = None
    for x in kb.members:
        names = membership_names(kb, x)
        if len(names) > max_memberships:
            raise ScaleError("individual %s has %d membership classes; the cap is %d"
                             % (x, len(names), max_memberships))
        for t in kb.members[x]:
            terms[t] = None
        for t in _powerset_terms(names):
            terms[t] = None
    universe = tuple(sorted(terms, key=lambda t: (len(t.names()), t.sort_key())))
    return SubsetClosure(universe, tuple(kb.subsets))


def is_subset(a: ClassTerm, b: ClassTerm, c: SubsetClosure) -> bool:
    return c.is_subset(a, b)


def classes_of(x: str, kb: KnowledgeBase, c: SubsetClosure) -> dict[ClassTerm, Provenance]:
    """Every class ``x`` is known to belong to, with how it was found."""
    names = membership_names(kb, x)
    if not names:
        return {}
    asserted = set(kb.members[x])
    found: dict[ClassTerm, Provenance] = {}
    for t in _powerset_terms(names):
        found[t] = Provenance.ASSERTED if t in asserted else Provenance.SYNTACTIC
    reach = c.name_closure(names)
    for t in c.universe:
        if t not in found and t.names() <= reach:
            found[t] = Provenance.CLOSURE
    return dict(sorted(found.items(), key=lambda kv: (len(kv[0].names()), kv[0].sort_key())))
