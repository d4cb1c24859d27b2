"""Bounds on an unknown conditional frequency from known interval statistics.

The classes are modelled by a probability weight on each atom of the Boolean
algebra generated by at most six primitive names. A statistic
``%(Y, Z) in [p, q]`` becomes ``p*w(Y) <= w(Y&Z) <= q*w(Y)``, and the bound on
``%(A, B)`` is the range of ``w(A&B) / w(A)`` over the feasible weights.

The ratio is linear-fractional, so the Charnes-Cooper substitution
``y = w / w(A)``, ``s = 1 / w(A)`` turns each extremum into a linear program;
these are solved exactly with :mod:`refclass.simplex`.

Statistics presuppose a non-empty reference class: a system in which some
reference class is forced to weight 0 is reported as inconsistent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

import numpy as np

from refclass.core import ClassTerm, Interval, intersect
from refclass.simplex import OPTIMAL, linprog_exact

MAX_NAMES = 6


class BoundsScaleError(ValueError):
    pass


class InconsistentKB(ValueError):
    """The statistics force some reference class to be empty."""

    def __init__(self, message, labels=()):
        super().__init__(message)
        self.labels = tuple(labels)


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]  # coeffs . w <= 0
    label: str


@dataclass(frozen=True)
class AtomSystem:
    names: tuple[str, ...]
    constraints: tuple[Constraint, ...] = ()
    nonempty: tuple[ClassTerm, ...] = ()

    @property
    def n_atoms(self) -> int:
        return 1 << len(self.names)

    def mask(self, term: ClassTerm) -> list[int]:
        """0/1 indicator over atoms of the atoms lying inside ``term``."""
        missing = term.names() - set(self.names)
        if missing:
            raise ValueError("%s uses names outside the system: %s" % (term, sorted(missing)))
        bits = 0
        for k, name in enumerate(self.names):
            if name in term.names():
                bits |= 1 << k
        return [1 if (i & bits) == bits else 0 for i in range(self.n_atoms)]

    def with_stat(self, ref: ClassTerm, target: ClassTerm, iv: Interval) -> "AtomSystem":
        wy = self.mask(ref)
        wyz = self.mask(intersect(ref, target))
        label = "%%(%s, %s) = %s" % (ref, target, iv)
        lower = Constraint(tuple(iv.lo * a - b for a, b in zip(wy, wyz)), label + " (lower)")
        upper = Constraint(tuple(b - iv.hi * a for a, b in zip(wy, wyz)), label + " (upper)")
        nonempty = self.nonempty if ref in self.nonempty else self.nonempty + (ref,)
        return AtomSystem(self.names, self.constraints + (lower, upper), nonempty)


def encode(kb, names: Sequence[str]) -> AtomSystem:
    """Encode every statistic in ``kb`` expressible over ``names``."""
    names = tuple(sorted(set(names)))
    if len(names) > MAX_NAMES:
        raise BoundsScaleError("%d names exceed the bounds cap of %d" % (len(names), MAX_NAMES))
    system = AtomSystem(names)
    allowed = set(names)
    for (ref, target), iv in kb.stats.items():
        if ref.names() <= allowed and target.names() <= allowed:
            system = system.with_stat(ref, target, iv)
    return system


def _max_weight(constraints, n_atoms, mask) -> Fraction:
    res = linprog_exact(
        mask, A_ub=[c.coeffs for c in constraints], b_ub=[0] * len(constraints),
        A_eq=[[1] * n_atoms], b_eq=[1], maximize=True)
    assert res.status == OPTIMAL  # the simplex constraint alone is always feasible
    return res.value


def check_consistent(sys: AtomSystem) -> None:
    for ref in sys.nonempty:
        mask = sys.mask(ref)
        if _max_weight(sys.constraints, sys.n_atoms, mask) > 0:
            continue
        # deletion filter: shrink to a minimal set of constraints forcing w(ref) = 0
        core = list(sys.constraints)
        for c in list(core):
            trial = [d for d in core if d is not c]
            if _max_weight(trial, sys.n_atoms, mask) == 0:
                core = trial
        labels = sorted({c.label for c in core})
        raise InconsistentKB(
            "statistics force reference class %s to be empty: %s" % (ref, "; ".join(labels)),
            labels)


def bound_conditional(sys: AtomSystem, A: ClassTerm, B: ClassTerm) -> Interval:
    check_consistent(sys)
    wa = sys.mask(A)
    if _max_weight(sys.constraints, sys.n_atoms, wa) == 0:
        return Interval.vacuous()
    wab = sys.mask(intersect(A, B))
    n = sys.n_atoms
    # variables: y_0..y_{n-1}, s
    a_ub = [list(c.coeffs) + [0] for c in sys.constraints]
    a_eq = [[1] * n + [-1], list(wa) + [0]]
    objective = list(wab) + [0]
    ends = []
    for maximize in (False, True):
        res = linprog_exact(objective, a_ub, [0] * len(a_ub), a_eq, [0, 1], maximize=maximize)
        if res.status != OPTIMAL:
            raise RuntimeError("ratio program %s unexpectedly" % res.status)
        ends.append(res.value)
    return Interval(*ends)


def _compositions(parts: int, total: int) -> np.ndarray:
    """All non-negative integer vectors of length ``parts`` summing to ``total``."""
    table = [np.array([[s]], dtype=np.int32) for s in range(total + 1)]
    for _ in range(parts - 1):
        table = [
            np.concatenate([
                np.hstack([np.full((len(table[s - f]), 1), f, dtype=np.int32), table[s - f]])
                for f in range(s + 1)])
            for s in range(total + 1)]
    return table[total]


def grid_oracle(sys: AtomSystem, A: ClassTerm, B: ClassTerm, resolution: int,
                require_nonempty: bool = False) -> Optional[Interval]:
    """Brute-force range of the ratio over grid weights in steps of 1/resolution.

    Grid points must satisfy every linear constraint; with ``require_nonempty``
    they must also give positive weight to every reference class. Returns None
    (unavailable) when no such point has ``w(A) > 0``. Meant for testing
    systems of at most four names.
    """
    if len(sys.names) > 4:
        raise BoundsScaleError("grid oracle is limited to 4 names")
    rows = []
    for c in sys.constraints:
        scale = lcm(*(v.denominator for v in c.coeffs))
        rows.append([int(v * scale) for v in c.coeffs])
    positive = [sys.mask(ref) for ref in sys.nonempty] if require_nonempty else []
    wa_mask, wab_mask = sys.mask(A), sys.mask(intersect(A, B))
    # atoms that look alike to every constraint and to the ratio only matter
    # through their total weight, so enumerate totals per group instead
    columns = list(zip(*(rows + positive + [wa_mask, wab_mask]))) or [()] * sys.n_atoms
    groups = sorted(set(columns))
    index = [groups.index(col) for col in columns]

    def lumped(vec):
        out = [0] * len(groups)
        for atom, g in enumerate(index):
            out[g] = vec[atom]  # identical within a group by construction
        return np.array(out, dtype=np.int64)

    pts = _compositions(len(groups), resolution).astype(np.int64)
    ok = np.ones(len(pts), dtype=bool)
    for row in rows:
        ok &= pts @ lumped(row) <= 0
    for mask in positive:
        ok &= pts @ lumped(mask) > 0
    pts = pts[ok]
    wa = pts @ lumped(wa_mask)
    wab = pts @ lumped(wab_mask)
    live = wa > 0
    if not live.any():
        return None
    wa, wab = wa[live], wab[live]
    ratio = wab / wa
    lo, hi = int(np.argmin(ratio)), int(np.argmax(ratio))
    return Interval(Fraction(int(wab[lo]), int(wa[lo])), Fraction(int(wab[hi]), int(wa[hi])))
