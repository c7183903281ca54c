"""Rankings on jet variables, leaders, and autoreduced sequences.

A ranking is a total order on the jet variables x_i^(j) compatible with
derivation: u < v implies u' < v', and u < u'.  Two families are provided:

* elimination: compare variable priority first, then derivative order
  (every jet of a higher-priority variable beats every jet of a lower one);
* orderly: compare derivative order first, then variable priority.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .diffpoly import DerVar, DiffPoly


class ConstantPolyError(ValueError):
    """Constant polynomials have no leader."""


class RankKind(Enum):
    ORDERLY = "orderly"
    ELIMINATION = "elim"


class SeqRel(Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"
    INCOMPARABLE = "Incomparable"


@dataclass(frozen=True)
class Ranking:
    """kind plus a priority permutation: priority[i] is the rank weight of
    variable i, larger = greater in the ranking."""

    kind: RankKind
    priority: tuple

    def __post_init__(self):
        if sorted(self.priority) != list(range(len(self.priority))):
            raise ValueError("priority must be a permutation of 0..n-1")

    @staticmethod
    def elimination(n: int, greatest_to_least: Sequence[int] = None) -> "Ranking":
        return Ranking(RankKind.ELIMINATION, _priority_from(n, greatest_to_least))

    @staticmethod
    def orderly(n: int, greatest_to_least: Sequence[int] = None) -> "Ranking":
        return Ranking(RankKind.ORDERLY, _priority_from(n, greatest_to_least))

    def key(self, v: DerVar):
        """Sort key: v < w in the ranking iff key(v) < key(w)."""
        if self.kind is RankKind.ELIMINATION:
            return (self.priority[v.var], v.order)
        return (v.order, self.priority[v.var])

    def compare_vars(self, a: DerVar, b: DerVar) -> int:
        ka, kb = self.key(a), self.key(b)
        return -1 if ka < kb else (1 if ka > kb else 0)

    def max_var(self, vs):
        return max(vs, key=self.key)


def _priority_from(n: int, greatest_to_least) -> tuple:
    if greatest_to_least is None:
        greatest_to_least = list(range(n - 1, -1, -1))
    if sorted(greatest_to_least) != list(range(n)):
        raise ValueError("variable order must be a permutation of 0..n-1")
    prio = [0] * n
    for rank, var in enumerate(reversed(list(greatest_to_least))):
        prio[var] = rank
    return tuple(prio)


@dataclass(frozen=True)
class RankedPoly:
    """A nonconstant polynomial analyzed under a ranking: its leader (the
    greatest jet variable present), leader degree, separant dA/d(leader),
    and initial (coefficient of leader^degree)."""

    poly: DiffPoly
    ranking: Ranking
    leader: DerVar
    degree: int
    separant: DiffPoly
    initial: DiffPoly

    @property
    def leading_var(self) -> int:
        return self.leader.var

    def rank_key(self):
        """Rank = leader^degree, compared leader first then degree."""
        return (self.ranking.key(self.leader), self.degree)


def analyze(p: DiffPoly, ranking: Ranking) -> RankedPoly:
    vs = p.dervars()
    if not vs:
        raise ConstantPolyError("constant polynomial has no leader")
    if len(ranking.priority) != p.context.n:
        raise ValueError("ranking size does not match ring context")
    leader = ranking.max_var(vs)
    degree = p.degree_in(leader)
    return RankedPoly(
        poly=p,
        ranking=ranking,
        leader=leader,
        degree=degree,
        separant=p.partial(leader),
        initial=p.coeff_of_power(leader, degree),
    )


def is_reduced(b: DiffPoly, a: RankedPoly) -> bool:
    """b is reduced w.r.t. a: no proper derivative of a's leader occurs in
    b, and b's degree in the leader is below a's."""
    lv, lo = a.leader.var, a.leader.order
    for v in b.dervars():
        if v.var == lv and v.order > lo:
            return False
    return b.degree_in(a.leader) < a.degree


def is_autoreduced(seq: Sequence[DiffPoly], ranking: Ranking) -> bool:
    """Pairwise reduced in both directions, and each element after the
    first involves a jet variable absent from its predecessor."""
    ranked = []
    for p in seq:
        try:
            ranked.append(analyze(p, ranking))
        except ConstantPolyError:
            return False
    for i, ri in enumerate(ranked):
        for j, rj in enumerate(ranked):
            if i != j and not is_reduced(ri.poly, rj):
                return False
    for prev, cur in zip(seq, seq[1:]):
        if not (set(cur.dervars()) - set(prev.dervars())):
            return False
    return True


def seq_compare(a: Sequence[DiffPoly], b: Sequence[DiffPoly], ranking: Ranking) -> SeqRel:
    """Partial order on autoreduced sequences.

    The first rank difference along the common prefix decides; with an
    equal-rank common prefix the longer sequence is smaller; equal rank
    profiles of equal length are Equal only for literally equal sequences,
    otherwise Incomparable.
    """
    ra = [analyze(p, ranking).rank_key() for p in a]
    rb = [analyze(p, ranking).rank_key() for p in b]
    for ka, kb in zip(ra, rb):
        if ka < kb:
            return SeqRel.LESS
        if ka > kb:
            return SeqRel.GREATER
    if len(a) != len(b):
        # longer with equal rank prefix is lower
        return SeqRel.LESS if len(a) > len(b) else SeqRel.GREATER
    if list(a) == list(b):
        return SeqRel.EQUAL
    return SeqRel.INCOMPARABLE
