"""Linearization of differential polynomials.

The tangent of u at a point is the first-order term of u(point + eps*y):
sum over jet variables v of (du/dv at the point) * y_v, where the y_v are
fresh tangent variables.  Tangent variables live in an extended ring context
with twice the variables (index offset n), so ordinary polynomial machinery
applies to linearized objects unchanged, including the derivation: deriving
and linearizing commute.

Three evaluation modes:
  * symbolic -- coefficients stay polynomials in the original jets;
  * concrete point -- coefficients become field elements;
  * generic point of a component -- only the support pattern survives
    (coefficient kept iff the partial has nonzero remainder modulo the
    component), which is exactly what order counting needs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diffpoly import (
    NEG_INF,
    ConcretePoint,
    Context,
    Convention,
    DerVar,
    DiffPoly,
    GenericPoint,
    Monomial,
)
from .jacobi import JacobiResult, OrderMatrix, jacobi_assign

TANGENT_PREFIX = "d"


class PointNotOnZeroSetError(ValueError):
    """The point is required to be a zero of the polynomial and is not."""


def extended_context(ctx: Context) -> Context:
    """The 2n-variable context: original names, then one tangent name per
    variable (prefixed), over the same field."""
    tangent = tuple(TANGENT_PREFIX + nm for nm in ctx.names)
    clash = set(tangent) & set(ctx.names)
    if clash:
        raise ValueError(f"tangent names collide with variables: {sorted(clash)}")
    return Context(names=ctx.names + tangent, field=ctx.field)


def tangent_dervar(n: int, v: DerVar) -> DerVar:
    """The tangent jet matching an original jet, in the extended context."""
    return DerVar(v.var + n, v.order)


@dataclass(frozen=True)
class LinearizedPoly:
    """A polynomial in the extended context, homogeneous of degree one in the
    tangent block (or zero).  `specialized` marks coefficients already
    evaluated at a point; `heuristic` marks support decided modulo a
    component that is not verified prime."""

    poly: DiffPoly
    base_n: int
    specialized: bool = False
    heuristic: bool = False

    def __post_init__(self):
        n = self.base_n
        for m in self.poly.monomials():
            tdeg = sum(e for v, e in m.factors if v.var >= n)
            if tdeg != 1:
                raise ValueError("linearized polynomial must be linear in tangent variables")

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def tangent_order(self, var_index: int, convention: Convention):
        """Order in the tangent variable of one original variable."""
        if not (0 <= var_index < self.base_n):
            raise ValueError(f"variable index {var_index} outside base context")
        return self.poly.order_of(self.base_n + var_index, convention)

    def to_text(self) -> str:
        return self.poly.to_text()

    def __repr__(self) -> str:
        return f"LinearizedPoly({self.to_text()})"


def _tangent_term(ext: Context, n: int, v: DerVar) -> DiffPoly:
    return DiffPoly.from_terms(ext, [(Monomial.of(tangent_dervar(n, v)), ext.field.one)])


def linearize_sym(u: DiffPoly) -> LinearizedPoly:
    """Symbolic tangent: sum over jets v present in u of du/dv * y_v."""
    ctx = u.context
    ext = extended_context(ctx)
    acc = DiffPoly.zero(ext)
    for v in u.dervars():
        acc = acc + u.partial(v).embed(ext) * _tangent_term(ext, ctx.n, v)
    return LinearizedPoly(poly=acc, base_n=ctx.n)


def _require_zero_at(u: DiffPoly, pt) -> bool:
    """Enforce u(pt) = 0; returns True when the check was only heuristic."""
    val = u.eval_at(pt)
    if isinstance(pt, ConcretePoint):
        if val:
            raise PointNotOnZeroSetError(
                f"point is not a zero: value {u.context.field.text(val)}"
            )
        return False
    if not val.is_zero:
        raise PointNotOnZeroSetError("polynomial has nonzero remainder at the generic point")
    return val.heuristic


def linearize_at(u: DiffPoly, pt, require_zero: bool = True) -> LinearizedPoly:
    """Tangent at a point.

    Concrete points give field-element coefficients.  Generic points give
    the support pattern: coefficient 1 on y_v exactly when du/dv does not
    vanish on the component (an indicator, not residue-field arithmetic).
    The point must be a zero of u unless require_zero is dropped (useful for
    identities that hold off the zero set).
    """
    ctx = u.context
    ext = extended_context(ctx)
    heuristic = _require_zero_at(u, pt) if require_zero else False
    acc = DiffPoly.zero(ext)
    if isinstance(pt, ConcretePoint):
        if pt.context != ctx:
            raise ValueError("point context mismatch")
        for v in u.dervars():
            c = u.partial(v).eval_at(pt)
            if c:
                acc = acc + _tangent_term(ext, ctx.n, v).scale(c)
        return LinearizedPoly(poly=acc, base_n=ctx.n, specialized=True, heuristic=heuristic)
    if isinstance(pt, GenericPoint):
        for v in u.dervars():
            zt = u.partial(v).eval_at(pt)
            heuristic = heuristic or zt.heuristic
            if not zt.is_zero:
                acc = acc + _tangent_term(ext, ctx.n, v)
        return LinearizedPoly(poly=acc, base_n=ctx.n, specialized=True, heuristic=heuristic)
    raise TypeError(f"not a differential point: {type(pt).__name__}")


def linearized_system(us, pt, require_zero: bool = True) -> list:
    """Componentwise tangents at a common point (generators of the
    linearized ideal)."""
    if not us:
        raise ValueError("empty system")
    ctx = us[0].context
    for u in us:
        if u.context != ctx:
            raise ValueError("mixed ring contexts")
    return [linearize_at(u, pt, require_zero=require_zero) for u in us]


def linearized_order(
    u: DiffPoly,
    pt,
    var_index: int,
    convention: Convention = Convention.MAX_PLUS,
    require_zero: bool = True,
):
    """Largest r such that du/d(x_j^(r)) does not vanish at the point;
    absent values follow the convention (0 under MaxPlus, -inf otherwise)."""
    ctx = u.context
    if not (0 <= var_index < ctx.n):
        raise ValueError(f"variable index {var_index} outside context")
    if require_zero:
        _require_zero_at(u, pt)
    orders = sorted(
        {v.order for v in u.dervars() if v.var == var_index}, reverse=True
    )
    for r in orders:
        val = u.partial(DerVar(var_index, r)).eval_at(pt)
        nonzero = bool(val) if isinstance(pt, ConcretePoint) else not val.is_zero
        if nonzero:
            return r
    return 0 if convention is Convention.MAX_PLUS else NEG_INF


def linearized_order_matrix(
    us, pt, convention: Convention = Convention.MAX_PLUS, require_zero: bool = True
) -> OrderMatrix:
    """Order matrix of the linearized system (tangent orders at the point)."""
    if not us:
        raise ValueError("empty system")
    ctx = us[0].context
    for u in us:
        if u.context != ctx:
            raise ValueError("mixed ring contexts")
        if require_zero:
            _require_zero_at(u, pt)
    if len(us) != ctx.n:
        raise ValueError(
            f"need a square system: {len(us)} equations over {ctx.n} variables"
        )
    rows = tuple(
        tuple(
            linearized_order(u, pt, j, convention, require_zero=False)
            for j in range(ctx.n)
        )
        for u in us
    )
    return OrderMatrix(entries=rows, convention=convention)


def jacobi_after_linearization(
    us, pt, convention: Convention = Convention.MAX_PLUS
) -> JacobiResult:
    """Jacobi number of the system linearized at a common zero."""
    return jacobi_assign(linearized_order_matrix(us, pt, convention))


def tangent_rename_check(u: DiffPoly) -> bool:
    """Does linearizing commute with the derivation on this input?  (It
    always should; this is the executable form of the statement.)"""
    lhs = linearize_sym(u.derive()).poly
    rhs = linearize_sym(u).poly.derive()
    return lhs == rhs


class _Dual:
    """Coefficient pair (value, linear part) for evaluation modulo eps^2;
    the linear part maps tangent jets to field elements."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field, a, b):
        self.field = field
        self.a = a
        self.b = b  # dict[DerVar, FieldElement], no zero values

    def mul(self, other: "_Dual") -> "_Dual":
        fld = self.field
        b: dict = {}
        for k, v in self.b.items():
            w = other.a * v
            if w:
                b[k] = w
        for k, v in other.b.items():
            w = self.a * v
            if not w:
                continue
            cur = b.get(k)
            w = w if cur is None else cur + w
            if w:
                b[k] = w
            elif cur is not None:
                del b[k]
        return _Dual(fld, self.a * other.a, b)

    def add(self, other: "_Dual") -> "_Dual":
        b = dict(self.b)
        for k, v in other.b.items():
            cur = b.get(k)
            v = v if cur is None else cur + v
            if v:
                b[k] = v
            elif cur is not None:
                del b[k]
        return _Dual(self.field, self.a + other.a, b)

    def scale(self, c) -> "_Dual":
        if not c:
            return _Dual(self.field, self.field.zero, {})
        return _Dual(self.field, c * self.a, {k: c * v for k, v in self.b.items()})


def first_order_expansion(u: DiffPoly, pt: ConcretePoint):
    """Evaluate u at (point + eps*y) modulo eps^2 by dual-number arithmetic.

    Returns (value at the point, the eps coefficient as a LinearizedPoly).
    This recomputes the tangent without using partial derivatives, so it
    serves as an independent check of linearize_at.
    """
    ctx = u.context
    if not isinstance(pt, ConcretePoint) or pt.context != ctx:
        raise ValueError("first_order_expansion needs a concrete point of the same context")
    fld = ctx.field
    ext = extended_context(ctx)
    total = _Dual(fld, fld.zero, {})
    for m, c in u.items():
        term = _Dual(fld, fld.one, {})
        for v, e in m.factors:
            base = _Dual(fld, pt.value(v), {tangent_dervar(ctx.n, v): fld.one})
            for _ in range(e):
                term = term.mul(base)
        total = total.add(term.scale(c))
    lin = DiffPoly.from_terms(
        ext, ((Monomial.of(yv), cv) for yv, cv in total.b.items())
    )
    return total.a, LinearizedPoly(poly=lin, base_n=ctx.n, specialized=True)
