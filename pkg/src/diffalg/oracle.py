"""Brute-force truncated ideal membership with explicit witnesses.

Completely independent of the reduction machinery: the differential ideal
[g_1..g_r] is truncated to the finite-dimensional K-span of the products

    m * d^k(g_i),   k <= prolongation bound,  total degree <= degree bound,

with monomial multipliers m, and membership of f is decided by exact linear
algebra on coefficient vectors.  Member verdicts are re-verified as
polynomial identities before being returned, so they are sound; everything
else is reported as Inconclusive (deciding non-membership in a differential
ideal is not attempted), always with the bounds that were tried.

Multipliers only ever need jet variables that occur in f or in a kept
prolonged generator: substituting zero for any other jet maps a witness to a
witness, so restricting to that universe loses nothing.

When the coefficient field has zero derivation and every generator is
homogeneous in (total degree, total derivative weight), differentiation
shifts the weight by exactly one and preserves the degree, so the membership
question splits into small independent blocks -- this makes the high-power
examples instant.  Otherwise the search deepens iteratively through
(degree, prolongation) stages, skipping any stage whose candidate count
exceeds the matrix cap (reported in the diagnostic).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .diffpoly import Context, DiffPoly, Monomial
from .fields import FieldTag

MAX_CANDIDATES = 1500


@dataclass(frozen=True)
class TruncationBounds:
    """Finite truncation of an infinite search.

    jet_order: highest derivative order the query polynomial may use;
    prolongation_order: how often generators are differentiated;
    degree_bound: max total degree of candidate products;
    power_bound: highest exponent tried for radical membership.
    """

    jet_order: int = 4
    prolongation_order: int = 6
    degree_bound: int = 8
    power_bound: int = 6

    def __post_init__(self):
        for name in ("jet_order", "prolongation_order", "degree_bound", "power_bound"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    def describe(self) -> str:
        return (
            f"jets<={self.jet_order} prolong<={self.prolongation_order} "
            f"deg<={self.degree_bound} power<={self.power_bound}"
        )


class OracleVerdict(Enum):
    MEMBER = "Member"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class WitnessTerm:
    """One summand c * m * d^k(g_i) of a membership combination."""

    coeff: object  # FieldElement
    monomial: Monomial
    gen_index: int
    derive_order: int


@dataclass(frozen=True)
class MembershipWitness:
    """Outcome of a truncated membership query.

    Member carries the explicit combination f^power = sum of terms, already
    re-verified by polynomial arithmetic.  Inconclusive carries a diagnostic
    naming the bounds (and any cap skips) so the report is reproducible.
    """

    verdict: OracleVerdict
    bounds: TruncationBounds
    context: Optional[Context] = None
    power: int = 1
    combination: tuple = ()
    diagnostic: str = ""

    def is_member(self) -> bool:
        return self.verdict is OracleVerdict.MEMBER

    def to_text(self) -> str:
        if not self.is_member():
            return f"Inconclusive ({self.diagnostic}; bounds: {self.bounds.describe()})"
        names = self.context.names
        fld = self.context.field
        parts = []
        for t in self.combination:
            c = fld.text(t.coeff)
            m = t.monomial.text(names) if t.monomial.factors else ""
            g = f"g{t.gen_index + 1}"
            dk = g if t.derive_order == 0 else f"d^{t.derive_order}({g})"
            body = "*".join(x for x in (f"({c})", m, dk) if x)
            parts.append(body)
        head = "f" if self.power == 1 else f"f^{self.power}"
        return f"Member (e = {self.power}): {head} = " + " + ".join(parts)


def verify_witness(f: DiffPoly, gens: Sequence[DiffPoly], w: MembershipWitness) -> bool:
    """Re-check the combination identity by plain polynomial arithmetic."""
    if not w.is_member():
        return False
    ctx = f.context
    rhs = DiffPoly.zero(ctx)
    for t in w.combination:
        prod = gens[t.gen_index].derive(t.derive_order) * DiffPoly.from_terms(
            ctx, [(t.monomial, t.coeff)]
        )
        rhs = rhs + prod
    return rhs == f ** w.power


class _CapHit(Exception):
    pass


def _bigrade(p: DiffPoly) -> Optional[tuple]:
    """(degree, weight) when every monomial agrees, else None."""
    grades = {(m.degree(), m.weight()) for m in p.monomials()}
    return grades.pop() if len(grades) == 1 else None


def _kept_prolongations(gens, max_k: int, max_deg: int):
    """Nonzero d^k(g_i) with k <= max_k and degree <= max_deg."""
    kept = []
    for gi, g in enumerate(gens):
        h = g
        for k in range(max_k + 1):
            if k:
                h = h.derive()
            if not h.is_zero() and h.total_degree() <= max_deg:
                kept.append((gi, k, h))
    return kept


def _jet_universe(f: DiffPoly, kept) -> list:
    jets = set(f.dervars())
    for _, _, h in kept:
        jets.update(h.dervars())
    return sorted(jets)


def _monomials_upto(jets, max_deg: int, cap: int) -> list:
    """All monomials of total degree <= max_deg over the given jets."""
    out = [Monomial.make(())]
    stack = [(0, (), max_deg)]
    while stack:
        i, acc, left = stack.pop()
        for j in range(i, len(jets)):
            for e in range(1, left + 1):
                mono = acc + ((jets[j], e),)
                out.append(Monomial.make(mono))
                if len(out) > cap:
                    raise _CapHit
                if left - e > 0:
                    stack.append((j + 1, mono, left - e))
    return out


def _monomials_exact(jets, deg: int, weight: int, cap: int) -> list:
    """Monomials with the exact (degree, weight) bigrade over the jets."""
    out = []
    jets = sorted(jets, key=lambda v: (-v.order, v.var))
    suffix_max = [0] * (len(jets) + 1)
    for i in range(len(jets) - 1, -1, -1):
        suffix_max[i] = max(suffix_max[i + 1], jets[i].order)

    def rec(i, acc, dleft, wleft):
        if wleft < 0 or wleft > dleft * suffix_max[i]:
            return
        if dleft == 0:
            if wleft == 0:
                out.append(Monomial.make(acc))
                if len(out) > cap:
                    raise _CapHit
            return
        if i == len(jets):
            return
        v = jets[i]
        for e in range(dleft + 1):
            rec(i + 1, acc + ((v, e),) if e else acc, dleft - e, wleft - e * v.order)

    rec(0, (), deg, weight)
    return out


def _solve_span(f: DiffPoly, candidates) -> Optional[dict]:
    """Exact Gaussian elimination over the coefficient field: is f a linear
    combination of the candidate polynomials?  Returns {candidate key:
    coefficient} or None.  Vectors are sparse monomial -> coefficient maps;
    rows are normalized on their leading monomial as they enter the basis,
    and the combination is carried through every row operation."""
    basis = {}  # pivot monomial -> (vector, combo)

    def reduce(vec: dict, combo: dict):
        while vec:
            pivot = max(vec, key=Monomial.sort_key)
            row = basis.get(pivot)
            if row is None:
                return vec, combo, pivot
            rvec, rcombo = row
            c = vec[pivot]
            for m, x in rvec.items():
                cur = vec.get(m)
                nxt = (cur - c * x) if cur is not None else -c * x
                if nxt:
                    vec[m] = nxt
                else:
                    vec.pop(m, None)
            for k, x in rcombo.items():
                cur = combo.get(k)
                nxt = (cur - c * x) if cur is not None else -c * x
                if nxt:
                    combo[k] = nxt
                else:
                    combo.pop(k, None)
        return vec, combo, None

    for key, poly in candidates:
        vec = {m: c for m, c in poly.items()}
        vec, combo, pivot = reduce(vec, {key: poly.context.field.one})
        if pivot is None:
            continue
        lead = vec[pivot]
        vec = {m: c / lead for m, c in vec.items()}
        combo = {k: c / lead for k, c in combo.items()}
        basis[pivot] = (vec, combo)

    fvec = {m: c for m, c in f.items()}
    fvec, fcombo, pivot = reduce(fvec, {})
    if pivot is not None:
        return None
    # f reduced to zero: f = sum over basis contributions with OPPOSITE sign
    return {k: -c for k, c in fcombo.items()}


def _assemble(f: DiffPoly, gens, combo: dict, bounds, power: int) -> MembershipWitness:
    terms = tuple(
        WitnessTerm(coeff=c, monomial=m, gen_index=gi, derive_order=k)
        for (gi, k, m), c in sorted(
            combo.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2].sort_key())
        )
    )
    w = MembershipWitness(
        verdict=OracleVerdict.MEMBER,
        bounds=bounds,
        context=f.context,
        power=power,
        combination=terms,
    )
    if not verify_witness(f, gens, w):
        raise RuntimeError("internal error: witness failed re-verification")
    return w


def _member_homogeneous(f, gens, bounds, grades) -> Optional[MembershipWitness]:
    """Blockwise solve when all generators are bigrade-homogeneous over a
    field with zero derivation.  Returns None on a cap hit (caller reports);
    an empty or unsolvable block is a definite miss at these bounds."""
    kept = _kept_prolongations(gens, bounds.prolongation_order, bounds.degree_bound)
    universe = _jet_universe(f, kept)
    blocks: dict[tuple, list] = {}
    for m, c in f.items():
        blocks.setdefault((m.degree(), m.weight()), []).append((m, c))
    combo_all: dict = {}
    for (deg, weight), terms in sorted(blocks.items()):
        cands = []
        for gi, k, h in kept:
            hd, hw = grades[gi][0], grades[gi][1] + k
            if hd > deg or hw > weight:
                continue
            for m in _monomials_exact(universe, deg - hd, weight - hw, MAX_CANDIDATES):
                cands.append(((gi, k, m), h * DiffPoly.from_terms(f.context, [(m, f.context.field.one)])))
                if len(cands) > MAX_CANDIDATES:
                    raise _CapHit
        fblock = DiffPoly.from_terms(f.context, terms)
        combo = _solve_span(fblock, cands)
        if combo is None:
            return None
        for k, c in combo.items():
            combo_all[k] = combo_all.get(k, f.context.field.zero) + c
    return _assemble(f, gens, {k: c for k, c in combo_all.items() if c}, bounds, 1)


def _member_staged(f, gens, bounds) -> tuple:
    """Iterative deepening through (degree, prolongation) stages; returns
    (witness or None, number of stages skipped by the cap)."""
    skipped = 0
    fdeg = f.total_degree()
    for dd in range(fdeg, bounds.degree_bound + 1):
        for pp in range(bounds.prolongation_order + 1):
            kept = _kept_prolongations(gens, pp, dd)
            if not kept:
                continue
            universe = _jet_universe(f, kept)
            # candidate count is sum over kept h of C(|U| + dcap, dcap)
            try:
                upto_memo: dict[int, list] = {}
                cands = []
                for gi, k, h in kept:
                    dcap = dd - h.total_degree()
                    mons = upto_memo.get(dcap)
                    if mons is None:
                        mons = _monomials_upto(universe, dcap, MAX_CANDIDATES)
                        upto_memo[dcap] = mons
                    for m in mons:
                        cands.append(
                            (
                                (gi, k, m),
                                h * DiffPoly.from_terms(f.context, [(m, f.context.field.one)]),
                            )
                        )
                        if len(cands) > MAX_CANDIDATES:
                            raise _CapHit
            except _CapHit:
                skipped += 1
                continue
            combo = _solve_span(f, cands)
            if combo is not None:
                return _assemble(f, gens, combo, bounds, 1), skipped
    return None, skipped


def truncated_member(
    f: DiffPoly, gens: Sequence[DiffPoly], bounds: TruncationBounds = TruncationBounds()
) -> MembershipWitness:
    """Is f in the truncated span of the prolonged generators?

    Member answers come with an explicit, re-verified combination; anything
    else is Inconclusive (in particular a cap skip or a degree overflow,
    both named in the diagnostic).
    """
    gens = [g for g in gens]
    if not gens:
        raise ValueError("empty generator list")
    ctx = f.context
    for g in gens:
        if g.context != ctx:
            raise ValueError("mixed ring contexts")
        if g.is_zero():
            raise ValueError("zero generator")
    if f.is_zero():
        return MembershipWitness(
            verdict=OracleVerdict.MEMBER, bounds=bounds, context=ctx, power=1
        )
    if f.max_order() > bounds.jet_order:
        raise ValueError(
            f"query has derivative order {f.max_order()}, above the jet bound "
            f"{bounds.jet_order}"
        )
    if f.total_degree() > bounds.degree_bound:
        return MembershipWitness(
            verdict=OracleVerdict.INCONCLUSIVE,
            bounds=bounds,
            context=ctx,
            diagnostic=f"degree of query ({f.total_degree()}) exceeds the degree bound",
        )

    grades = [_bigrade(g) for g in gens]
    homogeneous = ctx.field.tag is FieldTag.RATIONALS and all(
        gr is not None for gr in grades
    )
    if homogeneous:
        try:
            w = _member_homogeneous(f, gens, bounds, grades)
        except _CapHit:
            return MembershipWitness(
                verdict=OracleVerdict.INCONCLUSIVE,
                bounds=bounds,
                context=ctx,
                diagnostic=f"candidate cap {MAX_CANDIDATES} exceeded in a graded block",
            )
        if w is not None:
            return w
        return MembershipWitness(
            verdict=OracleVerdict.INCONCLUSIVE,
            bounds=bounds,
            context=ctx,
            diagnostic="no combination exists at these bounds (graded search exhausted)",
        )

    w, skipped = _member_staged(f, gens, bounds)
    if w is not None:
        return w
    note = "search exhausted"
    if skipped:
        note += f"; {skipped} stage(s) skipped by the candidate cap {MAX_CANDIDATES}"
    return MembershipWitness(
        verdict=OracleVerdict.INCONCLUSIVE,
        bounds=bounds,
        context=ctx,
        diagnostic=note,
    )


def radical_member(
    f: DiffPoly, gens: Sequence[DiffPoly], bounds: TruncationBounds = TruncationBounds()
) -> MembershipWitness:
    """First power e <= power_bound with f^e in the truncated span."""
    last = None
    for e in range(1, bounds.power_bound + 1):
        fe = f ** e
        if fe.total_degree() > bounds.degree_bound:
            break
        w = truncated_member(fe, gens, bounds)
        if w.is_member():
            return MembershipWitness(
                verdict=OracleVerdict.MEMBER,
                bounds=bounds,
                context=f.context,
                power=e,
                combination=w.combination,
            )
        last = w
    diag = f"no power up to {bounds.power_bound} found"
    if last is not None and last.diagnostic:
        diag += f" (last: {last.diagnostic})"
    return MembershipWitness(
        verdict=OracleVerdict.INCONCLUSIVE,
        bounds=bounds,
        context=f.context,
        diagnostic=diag,
    )
