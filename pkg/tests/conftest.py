"""Shared hypothesis strategies for differential polynomials."""

from fractions import Fraction

import hypothesis.strategies as st

from diffalg import Context, DerVar, DiffPoly, Monomial, QQ, QT, Ranking

NAMES = ("x", "y", "z")


@st.composite
def small_fractions(draw, max_num=9, max_den=4):
    num = draw(st.integers(min_value=-max_num, max_value=max_num))
    den = draw(st.integers(min_value=1, max_value=max_den))
    return Fraction(num, den)


@st.composite
def contexts(draw, max_vars=3, fields=(QQ,)):
    n = draw(st.integers(min_value=1, max_value=max_vars))
    field = draw(st.sampled_from(fields))
    return Context(NAMES[:n], field)


@st.composite
def dervars(draw, ctx, max_order=3):
    var = draw(st.integers(min_value=0, max_value=ctx.n - 1))
    order = draw(st.integers(min_value=0, max_value=max_order))
    return DerVar(var, order)


@st.composite
def monomials(draw, ctx, max_order=3, max_degree=3, max_factors=2):
    k = draw(st.integers(min_value=0, max_value=max_factors))
    factors = {}
    budget = max_degree
    for _ in range(k):
        if budget <= 0:
            break
        v = draw(dervars(ctx, max_order))
        e = draw(st.integers(min_value=1, max_value=budget))
        factors[v] = min(factors.get(v, 0) + e, max_degree)
        budget -= e
    return Monomial.make(factors.items())


@st.composite
def diffpolys(draw, ctx=None, max_order=3, max_degree=3, max_terms=4):
    """Small sparse polynomials; zero comes up naturally when all drawn
    coefficients cancel, and is also injected explicitly now and then."""
    if ctx is None:
        ctx = draw(contexts())
    if draw(st.integers(min_value=0, max_value=19)) == 0:
        return DiffPoly.zero(ctx)
    terms = draw(
        st.lists(
            st.tuples(monomials(ctx, max_order, max_degree), small_fractions()),
            min_size=1,
            max_size=max_terms,
        )
    )
    return DiffPoly.from_terms(ctx, [(m, ctx.field.from_fraction(c)) for m, c in terms])


@st.composite
def rankings(draw, ctx):
    order = draw(st.permutations(list(range(ctx.n))))
    if draw(st.booleans()):
        return Ranking.elimination(ctx.n, order)
    return Ranking.orderly(ctx.n, order)
