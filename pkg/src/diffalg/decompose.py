"""Characteristic-set components, bounded splitting, and the dimension check.

A component packages an autoreduced sequence A with the inequations
(separants, initials, side conditions) that present the saturated ideal
sat(A).  Membership in the saturated ideal is decided by Ritt reduction:
zero remainder.  The splitting decomposition explores a tree of equation
sets, branching on vanishing/nonvanishing of initials and separants and on
the factors visible in monomial equations, and emits a component whenever a
node's basic set reduces every other equation in the node to zero.  Budget
exhaustion is reported honestly through a completeness flag, never hidden.

The end-to-end check compares each finite-dimensional component's dimension
(the assignment maximum over the orders of its characteristic sequence)
against the same maximum for the input system.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .diffpoly import Convention, DiffPoly, GenericPoint, _NegInf
from .jacobi import JacobiResult, jacobi_assign, order_matrix
from .ranking import Ranking, analyze, is_autoreduced, is_reduced
from .reduction import StepLimitExceeded, Verdict, ritt_reduce_seq


@dataclass(frozen=True)
class CharSetComponent:
    """An autoreduced sequence plus its saturation inequations.

    Invariants enforced at construction: the sequence is autoreduced under
    the ranking (hence leading variables are pairwise distinct), and every
    inequation has nonzero Ritt remainder modulo the sequence.  Components
    are not certified prime unless an external source declared them so.
    """

    ranking: Ranking
    sequence: tuple  # tuple[DiffPoly, ...], ascending rank
    inequations: tuple = ()
    prime_verified: bool = False

    def __post_init__(self):
        if not self.sequence:
            raise ValueError("component needs a nonempty sequence")
        ctx = self.sequence[0].context
        for p in self.sequence + self.inequations:
            if p.context != ctx:
                raise ValueError("mixed ring contexts in component")
        if len(self.sequence) > 1 and not is_autoreduced(self.sequence, self.ranking):
            raise ValueError("component sequence is not autoreduced")
        if len(self.sequence) == 1:
            analyze(self.sequence[0], self.ranking)  # rejects constants
        for q in self.inequations:
            if ritt_reduce_seq(q, self.sequence, self.ranking).remainder.is_zero():
                raise ValueError(
                    f"inequation {q.to_text()} reduces to zero modulo the sequence"
                )

    @property
    def context(self):
        return self.sequence[0].context

    @property
    def finite_dimensional(self) -> bool:
        return len(self.sequence) == self.context.n

    def membership(self, f: DiffPoly) -> Verdict:
        """Zero remainder modulo the sequence; heuristic unless verified
        prime."""
        cert = ritt_reduce_seq(f, self.sequence, self.ranking)
        return Verdict(member=cert.remainder.is_zero(), heuristic=not self.prime_verified)

    def generic_point(self) -> GenericPoint:
        return GenericPoint(self)

    def to_text(self) -> str:
        seq = "; ".join(p.to_text() for p in self.sequence)
        ineq = "; ".join(q.to_text() for q in self.inequations) or "(none)"
        prime = "yes" if self.prime_verified else "no"
        return f"charset: {seq}\nineqs: {ineq}\nprime: {prime}"

    def __repr__(self) -> str:
        return f"CharSetComponent([{'; '.join(p.to_text() for p in self.sequence)}])"


def component_dimension(c: CharSetComponent) -> Optional[int]:
    """Dimension of a finite-dimensional component: the assignment maximum
    (MaxPlus) over the order matrix of its characteristic sequence.  Returns
    None when the sequence is shorter than the number of variables (the
    differential dimension is then infinite -- there is no number)."""
    if not c.finite_dimensional:
        return None
    m = order_matrix(list(c.sequence), Convention.MAX_PLUS)
    value = jacobi_assign(m).value
    assert isinstance(value, int)
    return value


def verify_component(c: CharSetComponent, us: Sequence[DiffPoly]) -> bool:
    """Every input reduces to zero modulo the sequence and every inequation
    reduces to nonzero (the latter holds by construction; re-checked)."""
    for u in us:
        if not ritt_reduce_seq(u, c.sequence, c.ranking).remainder.is_zero():
            return False
    for q in c.inequations:
        if ritt_reduce_seq(q, c.sequence, c.ranking).remainder.is_zero():
            return False
    return True


@dataclass(frozen=True)
class SplitBounds:
    """Budget for the splitting tree; exhaustion flips the completeness
    flag instead of raising."""

    max_components: int = 64
    max_steps: int = 10_000


@dataclass(frozen=True)
class DecompositionResult:
    components: tuple  # tuple[CharSetComponent, ...], canonically sorted
    complete: bool


def _norm(p: DiffPoly) -> DiffPoly:
    return p.monic()


def _node_key(node: frozenset) -> tuple:
    return tuple(sorted(p.to_text() for p in node))


def _basic_set(node: Sequence[DiffPoly], ranking: Ranking) -> list:
    """Greedy minimal autoreduced subset: scan by ascending rank (text as
    the final tie-break) and keep whatever stays reduced against everything
    already kept.  This realizes the minimal-sequence choice: any competing
    autoreduced subset compares greater or equal."""
    ranked = sorted(
        (analyze(p, ranking) for p in node),
        key=lambda rp: (rp.rank_key(), rp.poly.to_text()),
    )
    chosen = []
    for rp in ranked:
        if all(is_reduced(rp.poly, c) for c in chosen):
            chosen.append(rp)
    return chosen


def _sep_init_conditions(chosen, ranking: Ranking) -> list:
    """Distinct monic nonconstant separants and initials of a basic set, in
    canonical text order."""
    seen = {}
    for rp in chosen:
        for h in (rp.separant, rp.initial):
            if h.is_constant():
                continue
            hn = _norm(h)
            seen[hn.to_text()] = hn
    return [seen[k] for k in sorted(seen)]


def _monomial_fork(node: frozenset):
    """First (canonical order) single-monomial equation that is not already
    a bare jet variable: its zero set is the union over its variables."""
    for p in sorted(node, key=lambda q: q.to_text()):
        if p.term_count() != 1:
            continue
        m = p.leading_monomial()
        if not m.factors:
            continue  # constant; the dead check owns this
        if len(m.factors) == 1 and m.factors[0][1] == 1:
            continue  # already a bare variable
        return p, [v for v, _ in m.factors]
    return None


def _pure_power_fork(node: frozenset, ranking: Ranking):
    """First equation of the shape (initial) * leader^d with no tail: split
    into the leader branch and, if the initial is nonconstant, the initial
    branch."""
    for p in sorted(node, key=lambda q: q.to_text()):
        if p.is_constant() or p.term_count() == 1:
            continue  # monomial rule owns single terms
        rp = analyze(p, ranking)
        parts = p.by_powers_of(rp.leader)
        if set(parts) != {rp.degree}:
            continue
        if rp.degree >= 2 or not rp.initial.is_constant():
            return p, rp
    return None


def _var_poly(ctx, v) -> DiffPoly:
    from .diffpoly import Monomial

    return DiffPoly.from_terms(ctx, [(Monomial.of(v), ctx.field.one)])


def split_decompose(
    us: Sequence[DiffPoly],
    ranking: Ranking,
    bounds: SplitBounds = SplitBounds(),
) -> DecompositionResult:
    """Bounded splitting decomposition.

    Breadth-first over nodes (finite sets of monic equations).  Each node is
    either killed (a nonzero constant appeared), forked (monomial or
    tail-free power shape), tightened (some equation has a nonzero remainder
    modulo the node's basic set -- the remainder, an exact element of the
    ideal by its certificate, joins the node), or emitted (everything
    reduces to zero: the basic set becomes a component whose inequations are
    its separants and initials, and one vanishing branch is queued per
    inequation).  Every emitted component passes verify_component against
    the inputs; the completeness flag reports whether the whole tree was
    explored within bounds.
    """
    if not us:
        raise ValueError("empty system")
    ctx = us[0].context
    for u in us:
        if u.context != ctx:
            raise ValueError("mixed ring contexts")
        if u.is_zero():
            raise ValueError("zero polynomial in the input system")
    if len(ranking.priority) != ctx.n:
        raise ValueError("ranking does not match the context")

    if any(u.is_constant() for u in us):
        # a nonzero constant equation has no solutions at all
        return DecompositionResult(components=(), complete=True)
    start = frozenset(_norm(u) for u in us)

    queue = [start]
    seen = set()
    found: dict[tuple, CharSetComponent] = {}
    steps = 0
    complete = True

    while queue:
        node = queue.pop(0)
        key = _node_key(node)
        if key in seen:
            continue
        seen.add(key)
        steps += 1
        if steps > bounds.max_steps:
            complete = False
            break

        if any(p.is_constant() for p in node):
            continue  # nonzero constant in the ideal: no solutions here

        fork = _monomial_fork(node)
        if fork is not None:
            p, dervars = fork
            for v in dervars:
                child = frozenset((node - {p}) | {_var_poly(ctx, v)})
                queue.append(child)
            continue

        fork = _pure_power_fork(node, ranking)
        if fork is not None:
            p, rp = fork
            rest = node - {p}
            queue.append(frozenset(rest | {_var_poly(ctx, rp.leader)}))
            if not rp.initial.is_constant():
                queue.append(frozenset(rest | {_norm(rp.initial)}))
            continue

        chosen = _basic_set(node, ranking)
        seq = tuple(rp.poly for rp in chosen)
        others = [p for p in node if p not in set(seq)]
        try:
            remainders = [
                ritt_reduce_seq(p, seq, ranking).remainder for p in others
            ]
        except StepLimitExceeded:
            complete = False
            continue
        new = {
            _norm(r) for r in remainders if not r.is_zero()
        } - set(node)
        if any(not r.is_zero() for r in remainders):
            if new:
                queue.append(frozenset(node | new))
            # else: remainders only reproduce existing equations; the node
            # cannot stabilize and its solutions are not accounted for
            else:
                complete = False
            continue

        conditions = _sep_init_conditions(chosen, ranking)
        live = [
            h
            for h in conditions
            if not ritt_reduce_seq(h, seq, ranking).remainder.is_zero()
        ]
        if len(live) == len(conditions):
            comp = CharSetComponent(
                ranking=ranking,
                sequence=seq,
                inequations=tuple(live),
                prime_verified=False,
            )
            ckey = (
                tuple(p.to_text() for p in comp.sequence),
                tuple(q.to_text() for q in comp.inequations),
            )
            if ckey not in found:
                if len(found) >= bounds.max_components:
                    complete = False
                    break
                found[ckey] = comp
        # a condition that reduces to zero makes the nonvanishing locus
        # empty: no main component, but the vanishing branches still cover
        for h in conditions:
            if h not in node:
                queue.append(frozenset(node | {h}))

    if queue:
        complete = False

    ordered = sorted(
        found.values(),
        key=lambda c: (
            len(c.sequence),
            tuple(p.to_text() for p in c.sequence),
            tuple(q.to_text() for q in c.inequations),
        ),
    )
    return DecompositionResult(components=tuple(ordered), complete=complete)


class JbcVerdict(Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class ComponentRecord:
    """Everything the report needs about one component."""

    component: CharSetComponent
    dimension: Optional[int]  # None = infinite
    memberships: tuple  # tuple[Verdict, ...], one per input equation
    certificates: tuple  # tuple[ReductionCertificate, ...], same order
    verified: bool  # all inputs reduce to zero, all inequations nonzero
    dim_le_jacobi: Optional[bool]
    equality: Optional[bool]  # dimension == weak Jacobi value


@dataclass(frozen=True)
class JbcReport:
    """Outcome of the dimension-bound check for one system."""

    names: tuple
    field_tag: str
    weak: JacobiResult
    strong: JacobiResult
    records: tuple  # tuple[ComponentRecord, ...]
    complete: bool
    verdict: JbcVerdict
    heuristic: bool

    def to_text(self) -> str:
        out = []
        out.append(
            f"system: {len(self.records[0].memberships) if self.records else '?'} "
            f"equations over {', '.join(self.names)}  [field {self.field_tag}]"
        )
        out.append(_jacobi_line("jacobi weak (maxplus)", self.weak))
        out.append(_jacobi_line("jacobi strong (minusinf)", self.strong))
        out.append(
            f"decomposition: {len(self.records)} component(s) "
            f"({'complete' if self.complete else 'INCOMPLETE'})"
        )
        cert_lines = []
        cert_id = 0
        for k, rec in enumerate(self.records, start=1):
            c = rec.component
            out.append(f"component {k}:")
            out.append(f"  charset: {'; '.join(p.to_text() for p in c.sequence)}")
            out.append(
                "  ineqs: " + ("; ".join(q.to_text() for q in c.inequations) or "(none)")
            )
            out.append(f"  prime: {'yes' if c.prime_verified else 'no'}")
            out.append(
                "  dimension: "
                + ("infinite" if rec.dimension is None else str(rec.dimension))
            )
            mems = []
            for i, (v, cert) in enumerate(zip(rec.memberships, rec.certificates), start=1):
                cert_id += 1
                tag = "member" if v.member else "NOT member"
                if v.heuristic:
                    tag += " (heuristic)"
                mems.append(f"eq{i} -> {tag} [cert-{cert_id}]")
                cert_lines.append(
                    f"  cert-{cert_id}: multiplier = {cert.multiplier.to_text()}; "
                    f"remainder = {cert.remainder.to_text()}"
                )
            out.append("  membership: " + "; ".join(mems))
            if rec.dimension is None:
                out.append("  dim <= J: not applicable (infinite dimension)")
            else:
                line = f"  dim <= J: {'yes' if rec.dim_le_jacobi else 'NO'}"
                if rec.equality:
                    line += " (equality)"
                out.append(line)
        out.append(f"verdict: {self.verdict.value}" + (" (heuristic)" if self.heuristic else ""))
        if cert_lines:
            out.append("certificates:")
            out.extend(cert_lines)
        return "\n".join(out)

    def to_json(self) -> str:
        def jv(x):
            return "-inf" if isinstance(x, _NegInf) else x

        data = {
            "system": {
                "variables": list(self.names),
                "field": self.field_tag,
                "jacobi_weak": jv(self.weak.value),
                "jacobi_weak_witness": list(self.weak.witness) if self.weak.witness else None,
                "jacobi_strong": jv(self.strong.value),
                "jacobi_strong_witness": list(self.strong.witness)
                if self.strong.witness
                else None,
            },
            "complete": self.complete,
            "components": [
                {
                    "charset": [p.to_text() for p in rec.component.sequence],
                    "ineqs": [q.to_text() for q in rec.component.inequations],
                    "prime": rec.component.prime_verified,
                    "dimension": "infinite" if rec.dimension is None else rec.dimension,
                    "memberships": [
                        {"member": v.member, "heuristic": v.heuristic}
                        for v in rec.memberships
                    ],
                    "verified": rec.verified,
                    "dim_le_jacobi": rec.dim_le_jacobi,
                    "equality": rec.equality,
                }
                for rec in self.records
            ],
            "verdict": self.verdict.value,
            "heuristic": self.heuristic,
        }
        return json.dumps(data, indent=2, sort_keys=True)


def _jacobi_line(label: str, r: JacobiResult) -> str:
    if isinstance(r.value, _NegInf):
        return f"{label}: -inf  (no admissible assignment)"
    return f"{label}: {r.value}  witness sigma = {r.witness}"


def jbc_check(
    us: Sequence[DiffPoly],
    ranking: Ranking,
    components: Optional[Sequence[CharSetComponent]] = None,
    bounds: SplitBounds = SplitBounds(),
) -> JbcReport:
    """Check that every finite-dimensional component of the system's zero
    set has dimension at most the system's assignment maximum (MaxPlus).

    Components come from split_decompose unless an externally computed
    decomposition is supplied (then its completeness is taken as declared,
    but each component is still re-verified against the inputs).  The
    overall verdict is the conjunction over finite-dimensional components;
    an unverified component or an incomplete decomposition downgrades a
    passing verdict to INCONCLUSIVE.
    """
    if not us:
        raise ValueError("empty system")
    ctx = us[0].context
    if len(us) != ctx.n:
        raise ValueError(
            f"need a square system: {len(us)} equations over {ctx.n} variables"
        )
    weak = jacobi_assign(order_matrix(us, Convention.MAX_PLUS))
    strong = jacobi_assign(order_matrix(us, Convention.MINUS_INFINITY))
    assert isinstance(weak.value, int)

    if components is None:
        dec = split_decompose(us, ranking, bounds)
        comps, complete = dec.components, dec.complete
    else:
        comps, complete = tuple(components), True

    records = []
    for c in comps:
        certs = tuple(ritt_reduce_seq(u, c.sequence, c.ranking) for u in us)
        mems = tuple(
            Verdict(member=cert.remainder.is_zero(), heuristic=not c.prime_verified)
            for cert in certs
        )
        ineqs_ok = all(
            not ritt_reduce_seq(q, c.sequence, c.ranking).remainder.is_zero()
            for q in c.inequations
        )
        verified = ineqs_ok and all(v.member for v in mems)
        dim = component_dimension(c)
        dim_le = None if dim is None else dim <= weak.value
        eq = None if dim is None else dim == weak.value
        records.append(
            ComponentRecord(
                component=c,
                dimension=dim,
                memberships=mems,
                certificates=certs,
                verified=verified,
                dim_le_jacobi=dim_le,
                equality=eq,
            )
        )

    failed = any(
        rec.verified and rec.dimension is not None and not rec.dim_le_jacobi
        for rec in records
    )
    unverified = any(not rec.verified for rec in records)
    if failed:
        verdict = JbcVerdict.FAILS
    elif not complete or unverified:
        verdict = JbcVerdict.INCONCLUSIVE
    else:
        verdict = JbcVerdict.HOLDS
    heuristic = any(v.heuristic for rec in records for v in rec.memberships)

    return JbcReport(
        names=ctx.names,
        field_tag=ctx.field.tag.value,
        weak=weak,
        strong=strong,
        records=tuple(records),
        complete=complete,
        verdict=verdict,
        heuristic=heuristic,
    )
