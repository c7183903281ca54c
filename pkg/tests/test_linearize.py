"""Linearization: formal tangents, tangents at points, and how the Jacobi
number behaves under both."""

from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from diffalg import (
    ConcretePoint,
    Context,
    Convention,
    NEG_INF,
    PointNotOnZeroSetError,
    QQ,
    Ranking,
    first_order_expansion,
    jacobi_after_linearization,
    jacobi_number,
    linearize_at,
    linearize_sym,
    linearized_order,
    linearized_order_matrix,
    tangent_rename_check,
)
from diffalg.linearize import extended_context
from diffalg.sysfile import parse_poly

from conftest import contexts, diffpolys, small_fractions

XY = Context(("x", "y"), QQ)
EXT = extended_context(XY)


def P(src, ctx=XY):
    return parse_poly(src, ctx)


def origin(ctx):
    return ConcretePoint(ctx, {j: ctx.field.zero for j in range(ctx.n)})


class TestSymbolic:
    def test_flagship(self):
        assert linearize_sym(P("x'' + y")).poly == P("dx'' + dy", EXT)
        assert linearize_sym(P("x'^2 + y")).poly == P("2*x'*dx' + dy", EXT)

    def test_square_has_cross_term(self):
        assert linearize_sym(P("x*y")).poly == P("y*dx + x*dy", EXT)

    def test_constant_linearizes_to_zero(self):
        assert linearize_sym(P("5")).is_zero()

    @given(st.data())
    @settings(max_examples=80)
    def test_linear_in_the_argument(self, data):
        ctx = data.draw(contexts(max_vars=2))
        a = data.draw(diffpolys(ctx, max_terms=3))
        b = data.draw(diffpolys(ctx, max_terms=3))
        lhs = linearize_sym(a + b).poly
        rhs = linearize_sym(a).poly + linearize_sym(b).poly
        assert lhs == rhs

    @given(st.data())
    @settings(max_examples=80)
    def test_commutes_with_derivation(self, data):
        ctx = data.draw(contexts(max_vars=2))
        u = data.draw(diffpolys(ctx, max_terms=3))
        assert tangent_rename_check(u)

    def test_tangent_degree_is_exactly_one(self):
        lp = linearize_sym(P("x'^3*y + x"))
        for m in lp.poly.monomials():
            assert sum(e for v, e in m.factors if v.var >= 2) == 1


class TestAtConcretePoints:
    def test_single_square_at_origin(self):
        ctx = Context(("x",), QQ)
        lp = linearize_at(P("x^2", ctx), origin(ctx))
        assert lp.is_zero()
        assert lp.specialized

    def test_cusp_system_at_origin(self):
        us = [P("y^2 - x^3"), P("x'")]
        pt = origin(XY)
        l1, l2 = (linearize_at(u, pt) for u in us)
        assert l1.is_zero()
        assert l2.poly == P("dx'", EXT)

    def test_point_must_lie_on_zero_set(self):
        pt = ConcretePoint.from_names(XY, {"x": Fraction(1), "y": Fraction(2)})
        with pytest.raises(PointNotOnZeroSetError):
            linearize_at(P("y^2 - x^3"), pt)
        # the check can be waived explicitly
        lp = linearize_at(P("y^2 - x^3"), pt, require_zero=False)
        assert lp.poly == P("-3*dx + 4*dy", EXT)

    @given(st.data())
    @settings(max_examples=60, deadline=None)
    def test_tangent_order_never_exceeds_original(self, data):
        ctx = data.draw(contexts(max_vars=2))
        u = data.draw(diffpolys(ctx, max_terms=3).filter(lambda q: not q.is_zero()))
        pt = ConcretePoint(
            ctx, {j: data.draw(small_fractions()) for j in range(ctx.n)}
        )
        for j in range(ctx.n):
            got = linearized_order(u, pt, j, Convention.MINUS_INFINITY, require_zero=False)
            orig = u.order_of(j, Convention.MINUS_INFINITY)
            assert got <= orig if orig is not NEG_INF else got is NEG_INF


class TestOrderMatrices:
    def test_cusp_matrix_minusinf(self):
        us = [P("y^2 - x^3"), P("x'")]
        m = linearized_order_matrix(us, origin(XY), Convention.MINUS_INFINITY)
        assert m.entries == ((NEG_INF, NEG_INF), (1, NEG_INF))
        assert jacobi_after_linearization(us, origin(XY), Convention.MINUS_INFINITY).value is NEG_INF

    def test_strict_drop_against_original(self):
        us = [P("y^2 - x^3"), P("x'")]
        strong_lin = jacobi_after_linearization(us, origin(XY), Convention.MINUS_INFINITY).value
        weak_orig = jacobi_number(us).value
        assert strong_lin is NEG_INF and weak_orig == 1

    def test_requires_square(self):
        with pytest.raises(ValueError):
            linearized_order_matrix([P("x + y")], origin(XY))


class TestFirstOrderExpansion:
    def test_agrees_with_eval_and_tangent(self):
        u = P("x'^2 + y")
        pt = ConcretePoint.from_names(XY, {"x": Fraction(1), "y": Fraction(-2)})
        value, tangent = first_order_expansion(u, pt)
        assert value == u.eval_at(pt)
        assert tangent.poly == linearize_at(u, pt, require_zero=False).poly

    @given(st.data())
    @settings(max_examples=80, deadline=None)
    def test_dual_numbers_match_partial_evaluations(self, data):
        ctx = data.draw(contexts(max_vars=2))
        u = data.draw(diffpolys(ctx, max_terms=3, max_degree=3))
        pt = ConcretePoint(
            ctx, {j: data.draw(small_fractions()) for j in range(ctx.n)}
        )
        value, tangent = first_order_expansion(u, pt)
        assert value == u.eval_at(pt)
        assert tangent.poly == linearize_at(u, pt, require_zero=False).poly


class TestGenericPoints:
    def test_support_pattern_on_component(self):
        from diffalg import CharSetComponent

        rk = Ranking.elimination(2, [0, 1])
        comp = CharSetComponent(rk, (P("y"), P("x'")), ())
        gp = comp.generic_point()
        # d/dy' of y'^2+4y^3 is 2y', which vanishes on the component
        lp = linearize_at(P("y'^2 + 4*y^3"), gp)
        assert lp.is_zero()
        # in y^2 + x'' the y-partial 2y dies on the component, the x''-partial
        # is the constant 1 and survives: support is the bare indicator dx''
        lp2 = linearize_at(P("y^2 + x''"), gp)
        assert lp2.poly == P("dx''", EXT)
        assert lp2.heuristic  # the component was never certified prime

    def test_generic_point_respects_require_zero(self):
        from diffalg import CharSetComponent

        rk = Ranking.elimination(2, [0, 1])
        comp = CharSetComponent(rk, (P("y"), P("x'")), ())
        gp = comp.generic_point()
        with pytest.raises(PointNotOnZeroSetError):
            linearize_at(P("y + 1"), gp)
