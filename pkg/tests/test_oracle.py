"""The truncated ideal-membership oracle: exact span solving over prolonged
generators, honest Inconclusive answers, and radical search."""

import pytest

from diffalg import (
    Context,
    DiffPoly,
    MembershipWitness,
    OracleVerdict,
    QQ,
    QT,
    TruncationBounds,
    radical_member,
    truncated_member,
    verify_witness,
)
from diffalg.sysfile import parse_poly

X1 = Context(("x",), QQ)
XY = Context(("x", "y"), QQ)


def P(src, ctx=X1):
    return parse_poly(src, ctx)


class TestBounds:
    def test_defaults(self):
        b = TruncationBounds()
        assert (b.jet_order, b.prolongation_order, b.degree_bound, b.power_bound) == (4, 6, 8, 6)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            TruncationBounds(jet_order=-1)

    def test_describe_names_every_bound(self):
        text = TruncationBounds(1, 2, 3, 4).describe()
        for probe in ("jets<=1", "prolong<=2", "deg<=3", "power<=4"):
            assert probe in text


class TestMembers:
    def test_cube_of_first_derivative(self):
        f, g = P("x'^3"), P("x^2")
        w = truncated_member(f, [g], TruncationBounds(2, 3, 6, 6))
        assert w.is_member()
        assert verify_witness(f, [g], w)
        # the classical two-term combination: jets stay within order 2
        assert all(t.monomial.max_order() <= 2 for t in w.combination)

    def test_derivative_of_generator_is_member(self):
        f, g = P("2*x*x'"), P("x^2")
        w = truncated_member(f, [g], TruncationBounds(1, 1, 2, 1))
        assert w.is_member() and verify_witness(f, [g], w)

    def test_zero_is_trivially_member(self):
        w = truncated_member(DiffPoly.zero(X1), [P("x^2")], TruncationBounds())
        assert w.is_member()
        assert w.combination == ()

    def test_witness_text_shows_combination(self):
        f, g = P("x'^3"), P("x^2")
        w = truncated_member(f, [g], TruncationBounds(2, 3, 6, 6))
        text = w.to_text()
        assert text.startswith("Member (e = 1): f = ")
        assert "d^" in text

    def test_multiple_generators(self):
        ctx = XY
        gens = [parse_poly("y^2 - x^3", ctx), parse_poly("x'", ctx)]
        f = parse_poly("2*y*y' - 3*x^2*x'", ctx)  # = d(g1)
        w = truncated_member(f, gens, TruncationBounds(1, 1, 3, 1))
        assert w.is_member() and verify_witness(f, gens, w)


class TestInconclusive:
    def test_generator_root_is_out_of_reach(self):
        w = truncated_member(P("x"), [P("x^2")], TruncationBounds())
        assert w.verdict is OracleVerdict.INCONCLUSIVE
        assert "no combination exists" in w.diagnostic
        assert "jets<=4" in w.to_text()

    def test_unit_is_out_of_reach(self):
        w = truncated_member(P("1"), [P("x")], TruncationBounds())
        assert w.verdict is OracleVerdict.INCONCLUSIVE

    def test_degree_bound_overflow_is_reported(self):
        w = truncated_member(P("x^5"), [P("x^2")], TruncationBounds(0, 0, 3, 1))
        assert w.verdict is OracleVerdict.INCONCLUSIVE
        assert "degree" in w.diagnostic

    def test_query_beyond_jet_bound_is_an_error(self):
        with pytest.raises(ValueError):
            truncated_member(P("x^(5)"), [P("x^2")], TruncationBounds(jet_order=4))

    def test_every_inconclusive_names_the_bounds(self):
        for f, gens in ((P("x"), [P("x^2")]), (P("1"), [P("x")])):
            w = truncated_member(f, gens, TruncationBounds())
            assert "bounds:" in w.to_text()


class TestMonotonicity:
    def test_member_stays_member_under_larger_bounds(self):
        f, g = P("x'^3"), P("x^2")
        small = TruncationBounds(2, 3, 6, 6)
        big = TruncationBounds(3, 5, 8, 6)
        assert truncated_member(f, [g], small).is_member()
        assert truncated_member(f, [g], big).is_member()


class TestVerifyWitness:
    def test_rejects_tampered_combination(self):
        f, g = P("x'^3"), P("x^2")
        w = truncated_member(f, [g], TruncationBounds(2, 3, 6, 6))
        tampered = MembershipWitness(
            verdict=w.verdict,
            bounds=w.bounds,
            context=w.context,
            power=w.power,
            combination=w.combination[:-1],
            diagnostic=w.diagnostic,
        )
        assert not verify_witness(f, [g], tampered)

    def test_rejects_inconclusive(self):
        w = truncated_member(P("x"), [P("x^2")], TruncationBounds())
        assert not verify_witness(P("x"), [P("x^2")], w)


class TestRadical:
    def test_exponent_three_for_cusp_tangent(self):
        gens = [parse_poly("y^2 - x^3", XY), parse_poly("x'", XY)]
        f = parse_poly("y'", XY)
        w = radical_member(f, gens, TruncationBounds())
        assert w.is_member()
        assert w.power == 3
        assert verify_witness(f, gens, w)

    def test_exponent_one_short_circuits(self):
        f, g = P("x'^3"), P("x^2")
        w = radical_member(f, [g], TruncationBounds(2, 3, 6, 6))
        assert w.is_member() and w.power == 1

    def test_power_bound_zero_gives_inconclusive(self):
        w = radical_member(P("x"), [P("x^2")], TruncationBounds(power_bound=0))
        assert w.verdict is OracleVerdict.INCONCLUSIVE


class TestQtCoefficients:
    def test_member_with_t_in_the_combination(self):
        ctx = Context(("x",), QT)
        g = parse_poly("x'", ctx)
        f = parse_poly("t*x'' + x'", ctx)  # = d(t * x') = t*x'' + x'
        w = truncated_member(f, [g], TruncationBounds(2, 2, 2, 1))
        assert w.is_member()
        assert verify_witness(f, [g], w)
