"""Choosing the reference class: candidates, reflection, domination, selection.

``prob`` runs the whole procedure for a sentence: resolve it to membership
sentences ``x ∈ Z``, collect one inference structure per usable class of
``x``, and select the strongest structure that dominates everything it
disagrees with. When nothing qualifies the answer is the vacuous ``[0, 1]``.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from refclass import bounds as _bounds
from refclass.constructions import (
    UndefinedCombination,
    bracket_reflects,
    constituent_stats,
    enumerate_brackets,
    isx_stat,
    isxb_stat,
)
from refclass.core import (
    Bracket,
    ClassTerm,
    Interval,
    Product,
    as_constituents,
    disagrees,
    is_simple,
)
from refclass.kb import KnowledgeBase, Membership, Sentence, render_sentence
from refclass.sets import (
    DEFAULT_MAX_MEMBERSHIPS,
    SubsetClosure,
    UnknownIndividual,
    build_closure,
    classes_of,
    membership_names,
)


class UnresolvableQuery(LookupError):
    pass


class Provenance(enum.Enum):
    ASSERTED = "Asserted"
    ISX = "DerivedISX"
    ISXB = "DerivedISXB"
    BOUNDS = "DerivedBounds"


SUBSET_RULE = "SubsetRule"
BRACKET_RULE = "BracketRule"
CONSTRUCTION_RULE = "ConstructionRule"


@dataclass(frozen=True)
class Config:
    constructions: bool = True
    isx: bool = True
    bounds: bool = False
    max_bracket_blocks: Optional[int] = 2
    max_memberships: int = DEFAULT_MAX_MEMBERSHIPS


@dataclass(frozen=True)
class InferenceStructure:
    subject: str
    ref_class: ClassTerm
    target: ClassTerm
    interval: Interval
    provenance: Provenance = Provenance.ASSERTED
    factors: tuple = ()

    def __post_init__(self):
        if self.provenance is not Provenance.ASSERTED and not self.factors:
            raise ValueError("derived structures must record their factors")

    def label(self) -> str:
        return "<%s, %s, %s, %s>" % (self.subject, self.ref_class, self.target, self.interval)


@dataclass(frozen=True)
class CandidateSet:
    structures: tuple[InferenceStructure, ...]
    subject: str
    target: ClassTerm


# -- resolving the query ----------------------------------------------------


def target_memberships(t: Sentence, kb: KnowledgeBase):
    """Membership sentences equivalent to ``t``, plus the chain that found them."""
    graph: dict = {}
    for name, s in kb.equivalences:
        graph.setdefault(name, []).append(s)
        graph.setdefault(s, []).append(name)
    if isinstance(t, str) and t not in graph:
        raise UnresolvableQuery("undeclared sentence %s" % t)
    seen = {t}
    queue = deque([t])
    steps = []
    while queue:
        cur = queue.popleft()
        for nxt in graph.get(cur, ()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
                steps.append("%s <-> %s" % (render_sentence(cur), render_sentence(nxt)))
    pairs = sorted({(s.individual, s.term) for s in seen if isinstance(s, Membership)},
                   key=lambda p: (p[0], p[1].sort_key()))
    if not pairs:
        raise UnresolvableQuery("sentence %s is not equivalent to any membership sentence"
                                % render_sentence(t))
    return pairs, steps


# -- candidates ---------------------------------------------------------------


def collect_structures(x: str, Z: ClassTerm, kb: KnowledgeBase, closure: SubsetClosure,
                       config: Config = Config(), notes: Optional[list] = None) -> CandidateSet:
    notes = notes if notes is not None else []
    found: list[InferenceStructure] = []
    classes = classes_of(x, kb, closure)
    for Y in classes:
        iv = kb.stat(Y, Z)
        if iv is not None:
            found.append(InferenceStructure(x, Y, Z, iv))

    if config.constructions:
        for b in enumerate_brackets(membership_names(kb, x), config.max_bracket_blocks):
            if not isinstance(b, Bracket):
                continue
            factors = constituent_stats(b, Z, kb)
            if factors is None:
                continue
            factors = tuple(factors)
            ivs = [iv for _, iv in factors]
            try:
                found.append(InferenceStructure(x, b, Z, isxb_stat(ivs), Provenance.ISXB, factors))
            except UndefinedCombination as e:
                notes.append("no statistic for %s: %s" % (b, e))
            if config.isx:
                found.append(InferenceStructure(
                    x, Product(b.constituents), Z, isx_stat(ivs), Provenance.ISX, factors))

    if config.bounds:
        for Y in classes:
            if len(Y.names()) < 2 or kb.stat(Y, Z) is not None:
                continue
            names = Y.names() | Z.names()
            if len(names) > _bounds.MAX_NAMES:
                notes.append("no bounds for %s: %d names exceed the cap" % (Y, len(names)))
                continue
            system = _bounds.encode(kb, names)
            if not system.constraints:
                continue
            iv = _bounds.bound_conditional(system, Y, Z)
            used = tuple((ref, ivs) for (ref, tgt), ivs in kb.stats.items()
                         if ref.names() <= names and tgt.names() <= names)
            found.append(InferenceStructure(x, Y, Z, iv, Provenance.BOUNDS, used))
    return CandidateSet(tuple(found), x, Z)


# -- reflection and domination ----------------------------------------------


def _shape(t: ClassTerm) -> str:
    if is_simple(t):
        return "simple"
    return "product" if isinstance(t, Product) else "bracket"


def reflection_rule(a: InferenceStructure, b: InferenceStructure,
                    closure: SubsetClosure) -> Optional[str]:
    """Why ``a`` reflects ``b``, or None when it does not."""
    if a.subject != b.subject or a.target != b.target:
        return None
    ra, rb = a.ref_class, b.ref_class
    if ra == rb or (is_simple(ra) and is_simple(rb) and closure.is_subset(ra, rb)):
        return SUBSET_RULE
    if (a.provenance is Provenance.ISXB and b.provenance is Provenance.ISX
            and as_constituents(ra) == as_constituents(rb)):
        return CONSTRUCTION_RULE
    sa, sb = _shape(ra), _shape(rb)
    # products and agreement brackets are compared only through the rule above
    if {sa, sb} == {"product", "bracket"}:
        return None
    if (sa, sb) != ("simple", "simple") and bracket_reflects(ra, rb):
        return BRACKET_RULE
    return None


def reflects(a, b, closure) -> bool:
    return reflection_rule(a, b, closure) is not None


def dominates(a, b, closure) -> bool:
    return reflects(a, b, closure) and not reflects(b, a, closure)


class _Relations:
    """Memoised reflection over a fixed list of structures."""

    def __init__(self, structures, closure):
        self.structures = structures
        self.closure = closure
        self._rule: dict = {}

    def rule(self, i, j):
        key = (i, j)
        if key not in self._rule:
            self._rule[key] = reflection_rule(self.structures[i], self.structures[j], self.closure)
        return self._rule[key]

    def reflects(self, i, j):
        return self.rule(i, j) is not None

    def disagrees(self, i, j):
        return disagrees(self.structures[i].interval, self.structures[j].interval)


def _base_key(s: InferenceStructure):
    return (s.interval.width, -s.interval.lo, s.ref_class.sort_key(), s.subject,
            s.target.sort_key())


def strength_order(structures, closure, rel: Optional[_Relations] = None) -> list[int]:
    """Indices strongest first: narrower, then higher, then by class rendering.

    Among equal intervals a class that strictly reflects another goes first.
    """
    rel = rel or _Relations(structures, closure)
    order = sorted(range(len(structures)), key=lambda i: _base_key(structures[i]))
    out: list[int] = []
    k = 0
    while k < len(order):
        iv = structures[order[k]].interval
        group = [i for i in order[k:] if structures[i].interval == iv]
        k += len(group)
        while group:
            pick = next((m for m in group
                         if not any(r != m and rel.reflects(r, m) and not rel.reflects(m, r)
                                    for r in group)), group[0])
            out.append(pick)
            group.remove(pick)
    return out


@dataclass
class Iteration:
    selected: int
    deleted: list[int] = field(default_factory=list)
    failed: bool = False
    blocked_by: Optional[int] = None


def select(S, closure, deletions: bool = True, rel: Optional[_Relations] = None):
    """Strongest structure that dominates every structure disagreeing with it.

    Returns ``(index or None, iterations)``. Disagreeing structures that the
    current choice reflects are dropped from the queue as they are met.
    """
    structures = S.structures if isinstance(S, CandidateSet) else tuple(S)
    rel = rel or _Relations(structures, closure)
    choices = strength_order(structures, closure, rel)
    iterations: list[Iteration] = []
    while choices:
        best = choices.pop(0)
        it = Iteration(best)
        iterations.append(it)
        for j in range(len(structures)):
            if j == best or not rel.disagrees(best, j):
                continue
            if rel.reflects(best, j):
                if deletions and j in choices:
                    choices.remove(j)
                    it.deleted.append(j)
                if rel.reflects(j, best):
                    it.failed, it.blocked_by = True, j
                    break
            else:
                it.failed, it.blocked_by = True, j
                break
        if not it.failed:
            return best, iterations
    return None, iterations


# -- the whole query ---------------------------------------------------------


@dataclass
class Trace:
    query: str
    equivalences: list[str]
    pairs: list[tuple[str, ClassTerm]]
    candidates: list[InferenceStructure]
    disagreements: list[tuple[int, int]]
    reflections: list[tuple[int, int, str]]
    antisymmetry_violations: list[tuple[int, int]]
    iterations: list[Iteration]
    selected: Optional[int]
    prob: Interval
    notes: list[str] = field(default_factory=list)

    @property
    def outcome(self) -> str:
        return "Fallback" if self.selected is None else "Selected"

    def to_json(self) -> dict:
        return {
            "query": self.query,
            "equivalences": self.equivalences,
            "pairs": [[x, str(z)] for x, z in self.pairs],
            "candidates": [
                {"subject": s.subject, "class": str(s.ref_class), "target": str(s.target),
                 "interval": s.interval.as_pair(), "provenance": s.provenance.value,
                 "factors": [[str(c), iv.as_pair()] for c, iv in s.factors]}
                for s in self.candidates],
            "disagreements": [list(p) for p in self.disagreements],
            "reflections": [{"from": i, "to": j, "rule": r} for i, j, r in self.reflections],
            "antisymmetry_violations": [list(p) for p in self.antisymmetry_violations],
            "iterations": [
                {"selected": it.selected, "deleted": it.deleted, "failed": it.failed,
                 "blocked_by": it.blocked_by} for it in self.iterations],
            "outcome": self.outcome,
            "selected": self.selected,
            "notes": self.notes,
            "prob": self.prob.as_pair(),
        }

    def render(self) -> str:
        lines = ["query: %s" % self.query]
        for step in self.equivalences:
            lines.append("  equiv %s" % step)
        lines.append("resolved: " + ", ".join("%s in %s" % (x, z) for x, z in self.pairs))
        lines.append("candidates:")
        for i, s in enumerate(self.candidates):
            extra = ""
            if s.factors and s.provenance is not Provenance.BOUNDS:
                extra = " from " + ", ".join("%s %s" % (c, iv) for c, iv in s.factors)
            lines.append("  [%d] %s  %s%s" % (i, s.label(), s.provenance.value, extra))
        if not self.candidates:
            lines.append("  (none)")
        lines.append("disagreements: " + (", ".join(
            "[%d]/[%d]" % p for p in self.disagreements) or "none"))
        lines.append("reflections:")
        for i, j, rule in self.reflections:
            lines.append("  [%d] reflects [%d] (%s)" % (i, j, rule))
        for i, j in self.antisymmetry_violations:
            lines.append("  warning: [%d] and [%d] reflect each other" % (i, j))
        lines.append("iterations:")
        for n, it in enumerate(self.iterations, start=1):
            line = "  %d. try [%d]" % (n, it.selected)
            if it.deleted:
                line += "; delete %s" % ", ".join("[%d]" % d for d in it.deleted)
            if it.failed:
                line += "; fails against [%d]" % it.blocked_by
            else:
                line += "; dominates all disagreeing structures"
            lines.append(line)
        for note in self.notes:
            lines.append("note: %s" % note)
        if self.selected is None:
            lines.append("outcome: Fallback")
        else:
            lines.append("outcome: Selected [%d] %s" % (
                self.selected, self.candidates[self.selected].ref_class))
        lines.append("Prob = %s" % self.prob)
        return "\n".join(lines) + "\n"


def _check_query_classes(pairs, kb):
    for x, z in pairs:
        if x not in kb.members:
            raise UnresolvableQuery(str(UnknownIndividual(x)))
        missing = sorted(z.names() - kb.classes)
        if missing:
            raise UnresolvableQuery("undeclared class %s" % ", ".join(missing))


def prob(t: Sentence, kb: KnowledgeBase, config: Config = Config(),
         closure: Optional[SubsetClosure] = None):
    """Evidential probability of ``t``: ``(Interval, Trace)``."""
    pairs, steps = target_memberships(t, kb)
    _check_query_classes(pairs, kb)
    closure = closure or build_closure(kb, config.max_memberships)
    notes: list[str] = []
    pool: list[InferenceStructure] = []
    for x, z in pairs:
        pool.extend(collect_structures(x, z, kb, closure, config, notes).structures)

    rel = _Relations(pool, closure)
    n = len(pool)
    disagreements = [(i, j) for i in range(n) for j in range(i + 1, n) if rel.disagrees(i, j)]
    reflections = [(i, j, rel.rule(i, j)) for i in range(n) for j in range(n)
                   if i != j and rel.reflects(i, j)]
    violations = [(i, j) for i in range(n) for j in range(i + 1, n)
                  if pool[i].provenance is Provenance.ASSERTED
                  and pool[j].provenance is Provenance.ASSERTED
                  and rel.reflects(i, j) and rel.reflects(j, i)]
    chosen, iterations = select(pool, closure, rel=rel)
    answer = Interval.vacuous() if chosen is None else pool[chosen].interval
    trace = Trace(
        query=render_sentence(t), equivalences=steps, pairs=pairs, candidates=pool,
        disagreements=disagreements, reflections=reflections,
        antisymmetry_violations=violations, iterations=iterations, selected=chosen,
        prob=answer, notes=notes)
    return answer, trace
