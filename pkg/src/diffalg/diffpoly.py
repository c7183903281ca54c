"""Differential polynomials: sparse exact arithmetic over Q or Q(t).

A differential polynomial lives in K{x_1,...,x_n}: a commutative polynomial
ring in the jet variables x_i^(j) (DerVar(i, j)) with the derivation
mapping x_i^(j) to x_i^(j+1) and acting on coefficients by the field
derivation.  Representation is a map from monomials to nonzero field
elements; monomial keys store their factors sorted by (var index, der
order), so equality and hashing are structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Union

from .fields import Field, FieldElement, FieldTag

# Safety cap on derivative orders created by derive(); prevents runaway
# prolongation loops from allocating unbounded jet towers.
DEFAULT_ORDER_CAP = 64


class OrderCapExceeded(Exception):
    """derive() would create a jet variable above the configured order cap."""


class Convention(Enum):
    """Order convention for variables that do not occur.

    MAX_PLUS: ord is max over occurring derivative orders, with max of the
    empty set defined as 0.  MINUS_INFINITY: absent variables (and the zero
    polynomial) get -infinity.
    """

    MAX_PLUS = "maxplus"
    MINUS_INFINITY = "minusinf"


class _NegInf:
    """The -infinity sentinel: absorbing for +, smaller than every int."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return not isinstance(other, _NegInf)

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return isinstance(other, _NegInf)

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __repr__(self):
        return "-inf"


NEG_INF = _NegInf()
OrderValue = Union[int, _NegInf]


class DerVar(NamedTuple):
    """The jet variable x_{var}^{(order)}; var is a 0-based index."""

    var: int
    order: int

    def derived(self) -> "DerVar":
        return DerVar(self.var, self.order + 1)


@dataclass(frozen=True)
class Monomial:
    """A power product of jet variables; factors sorted by (var, order)."""

    factors: tuple  # tuple[tuple[DerVar, int], ...], exponents >= 1

    @staticmethod
    def make(items: Iterable) -> "Monomial":
        acc: dict[DerVar, int] = {}
        for v, e in items:
            if e:
                acc[v] = acc.get(v, 0) + e
        for v, e in acc.items():
            if e < 0:
                raise ValueError(f"negative exponent for {v}")
        return Monomial(tuple(sorted((v, e) for v, e in acc.items() if e)))

    @staticmethod
    def of(v: DerVar, e: int = 1) -> "Monomial":
        return MON_ONE if e == 0 else Monomial(((v, e),))

    def degree(self) -> int:
        return sum(e for _, e in self.factors)

    def weight(self) -> int:
        """Total derivative weight: sum of order * exponent."""
        return sum(v.order * e for v, e in self.factors)

    def degree_in(self, v: DerVar) -> int:
        for w, e in self.factors:
            if w == v:
                return e
        return 0

    def dervars(self) -> tuple:
        return tuple(v for v, _ in self.factors)

    def max_order(self) -> int:
        return max((v.order for v, _ in self.factors), default=0)

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not self.factors:
            return other
        if not other.factors:
            return self
        return Monomial.make(self.factors + other.factors)

    def __pow__(self, k: int) -> "Monomial":
        if k < 0:
            raise ValueError("negative monomial power")
        if k == 0:
            return MON_ONE
        return Monomial(tuple((v, e * k) for v, e in self.factors))

    def without(self, v: DerVar) -> "Monomial":
        return Monomial(tuple((w, e) for w, e in self.factors if w != v))

    def sort_key(self):
        return (self.degree(), self.factors)

    def text(self, names) -> str:
        if not self.factors:
            return "1"
        return "*".join(
            _dervar_text(v, names) + (f"^{e}" if e > 1 else "") for v, e in self.factors
        )


MON_ONE = Monomial(())


def _dervar_text(v: DerVar, names) -> str:
    base = names[v.var]
    if v.order == 0:
        return base
    if v.order <= 3:
        return base + "'" * v.order
    return f"{base}^({v.order})"


@dataclass(frozen=True)
class Context:
    """Ring context: named variables and the coefficient field."""

    names: tuple
    field: Field

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        if not self.names:
            raise ValueError("a differential ring needs at least one variable")
        for nm in self.names:
            if not nm.isidentifier():
                raise ValueError(f"bad variable name {nm!r}")
        if self.field.tag is FieldTag.RATIONAL_FUNCTIONS_T and "t" in self.names:
            raise ValueError("variable name 't' collides with the field parameter of Q(t)")

    @property
    def n(self) -> int:
        return len(self.names)

    def var_index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def check_dervar(self, v: DerVar):
        if not (0 <= v.var < self.n) or v.order < 0:
            raise ValueError(f"jet variable {v} outside context")


def _check_same_context(a: "DiffPoly", b: "DiffPoly"):
    if a.context != b.context:
        raise ValueError("mixed ring contexts")


class DiffPoly:
    """A differential polynomial; immutable by convention."""

    __slots__ = ("context", "_terms", "_hash")

    def __init__(self, context: Context, terms: dict):
        self.context = context
        self._terms = terms
        self._hash = None

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(ctx: Context) -> "DiffPoly":
        return DiffPoly(ctx, {})

    @staticmethod
    def const(ctx: Context, c) -> "DiffPoly":
        c = ctx.field.check(c)
        return DiffPoly(ctx, {MON_ONE: c} if c else {})

    @staticmethod
    def one(ctx: Context) -> "DiffPoly":
        return DiffPoly.const(ctx, ctx.field.one)

    @staticmethod
    def var(ctx: Context, var: int, order: int = 0) -> "DiffPoly":
        v = DerVar(var, order)
        ctx.check_dervar(v)
        return DiffPoly(ctx, {Monomial.of(v): ctx.field.one})

    @staticmethod
    def from_terms(ctx: Context, items: Iterable) -> "DiffPoly":
        acc: dict[Monomial, FieldElement] = {}
        fld = ctx.field
        for m, c in items:
            fld.check(c)
            for v in m.dervars():
                ctx.check_dervar(v)
            cur = acc.get(m)
            c = c if cur is None else cur + c
            if c:
                acc[m] = c
            elif cur is not None:
                del acc[m]
        return DiffPoly(ctx, acc)

    # -- basic views -----------------------------------------------------------

    def items(self):
        return self._terms.items()

    def monomials(self):
        return self._terms.keys()

    def coeff(self, m: Monomial) -> FieldElement:
        return self._terms.get(m, self.context.field.zero)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and MON_ONE in self._terms)

    def constant_value(self) -> FieldElement:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self._terms.get(MON_ONE, self.context.field.zero)

    def term_count(self) -> int:
        return len(self._terms)

    def total_degree(self) -> int:
        """Max monomial degree; 0 for the zero polynomial."""
        return max((m.degree() for m in self._terms), default=0)

    def degree_in(self, v: DerVar) -> int:
        return max((m.degree_in(v) for m in self._terms), default=0)

    def dervars(self) -> tuple:
        """All jet variables present, sorted by (var, order)."""
        seen = set()
        for m in self._terms:
            seen.update(m.dervars())
        return tuple(sorted(seen))

    def base_vars(self) -> tuple:
        return tuple(sorted({v.var for v in self.dervars()}))

    def max_order(self) -> int:
        return max((m.max_order() for m in self._terms), default=0)

    # -- equality --------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DiffPoly)
            and self.context == other.context
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.context, frozenset(self._terms.items())))
        return self._hash

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other: "DiffPoly") -> "DiffPoly":
        _check_same_context(self, other)
        acc = dict(self._terms)
        for m, c in other._terms.items():
            cur = acc.get(m)
            c = c if cur is None else cur + c
            if c:
                acc[m] = c
            elif cur is not None:
                del acc[m]
        return DiffPoly(self.context, acc)

    def __neg__(self) -> "DiffPoly":
        return DiffPoly(self.context, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "DiffPoly") -> "DiffPoly":
        return self + (-other)

    def __mul__(self, other: "DiffPoly") -> "DiffPoly":
        _check_same_context(self, other)
        if not self._terms or not other._terms:
            return DiffPoly.zero(self.context)
        acc: dict[Monomial, FieldElement] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                c = c1 * c2
                cur = acc.get(m)
                c = c if cur is None else cur + c
                if c:
                    acc[m] = c
                elif cur is not None:
                    del acc[m]
        return DiffPoly(self.context, acc)

    def __pow__(self, k: int) -> "DiffPoly":
        if k < 0:
            raise ValueError("negative polynomial power")
        out = DiffPoly.one(self.context)
        base = self
        while k:
            if k & 1:
                out = out * base
            base_needed = k >> 1
            if base_needed:
                base = base * base
            k = base_needed
        return out

    def scale(self, c: FieldElement) -> "DiffPoly":
        c = self.context.field.check(c)
        if not c:
            return DiffPoly.zero(self.context)
        return DiffPoly(self.context, {m: cc * c for m, cc in self._terms.items()})

    # -- differential structure -----------------------------------------------

    def derive(self, times: int = 1, cap: int = DEFAULT_ORDER_CAP) -> "DiffPoly":
        """Apply the ring derivation `times` times (Leibniz on monomials,
        field derivation on coefficients)."""
        if times < 0:
            raise ValueError("negative derivation count")
        p = self
        for _ in range(times):
            p = p._derive_once(cap)
        return p

    def _derive_once(self, cap: int) -> "DiffPoly":
        fld = self.context.field
        acc: dict[Monomial, FieldElement] = {}

        def put(m, c):
            if not c:
                return
            cur = acc.get(m)
            c = c if cur is None else cur + c
            if c:
                acc[m] = c
            elif cur is not None:
                del acc[m]

        for m, c in self._terms.items():
            dc = fld.derive(c)
            if dc:
                put(m, dc)
            for v, e in m.factors:
                if v.order + 1 > cap:
                    raise OrderCapExceeded(
                        f"derivation would create order {v.order + 1} > cap {cap}"
                    )
                newm = Monomial.make(m.without(v).factors + ((v, e - 1), (v.derived(), 1)))
                put(newm, c * fld.from_fraction(e))
        return DiffPoly(self.context, acc)

    def partial(self, v: DerVar) -> "DiffPoly":
        """Formal partial derivative with respect to one jet variable."""
        self.context.check_dervar(v)
        fld = self.context.field
        acc: dict[Monomial, FieldElement] = {}
        for m, c in self._terms.items():
            e = m.degree_in(v)
            if not e:
                continue
            newm = Monomial.make(m.without(v).factors + ((v, e - 1),))
            c2 = c * fld.from_fraction(e)
            cur = acc.get(newm)
            c2 = c2 if cur is None else cur + c2
            if c2:
                acc[newm] = c2
            elif cur is not None:
                del acc[newm]
        return DiffPoly(self.context, acc)

    def order_of(self, var: int, convention: Convention) -> OrderValue:
        """Order of this polynomial with respect to variable `var`.

        MAX_PLUS: max derivative order of occurrences, 0 if absent (and 0
        for the zero polynomial).  MINUS_INFINITY: -inf when absent.
        """
        if not (0 <= var < self.context.n):
            raise ValueError(f"variable index {var} outside context")
        best: Optional[int] = None
        for m in self._terms:
            for v, _ in m.factors:
                if v.var == var and (best is None or v.order > best):
                    best = v.order
        if best is not None:
            return best
        return 0 if convention is Convention.MAX_PLUS else NEG_INF

    # -- decomposition in one jet variable --------------------------------------

    def by_powers_of(self, v: DerVar) -> dict:
        """Write the polynomial as sum_k coeff_k * v^k; coefficients do not
        involve v."""
        out: dict[int, dict] = {}
        for m, c in self._terms.items():
            e = m.degree_in(v)
            out.setdefault(e, {})[m.without(v)] = c
        return {e: DiffPoly(self.context, d) for e, d in out.items()}

    def coeff_of_power(self, v: DerVar, k: int) -> "DiffPoly":
        acc = {}
        for m, c in self._terms.items():
            if m.degree_in(v) == k:
                acc[m.without(v)] = c
        return DiffPoly(self.context, acc)

    # -- evaluation ---------------------------------------------------------------

    def eval_at(self, point):
        """Evaluate at a differential point.

        Concrete points give a field element; generic points give a
        ZeroTest verdict (zero/nonzero modulo the point's component, with a
        heuristic flag when the component is not verified prime).
        """
        if isinstance(point, ConcretePoint):
            if point.context != self.context:
                raise ValueError("point context mismatch")
            fld = self.context.field
            total = fld.zero
            for m, c in self._terms.items():
                val = c
                for v, e in m.factors:
                    pv = point.value(v)
                    if not pv:
                        val = fld.zero
                        break
                    val = val * pv ** e if isinstance(pv, Fraction) else val * _rf_pow(pv, e)
                total = total + val
            return total
        if isinstance(point, GenericPoint):
            verdict = point.component.membership(self)
            return ZeroTest(is_zero=verdict.member, heuristic=verdict.heuristic)
        raise TypeError(f"not a differential point: {type(point).__name__}")

    # -- structure transport ---------------------------------------------------

    def map_dervars(self, fn, new_ctx: Context) -> "DiffPoly":
        """Rename jet variables via fn: DerVar -> DerVar into another context
        over the same field."""
        if new_ctx.field != self.context.field:
            raise ValueError("cannot transport between different fields")
        return DiffPoly.from_terms(
            new_ctx,
            (
                (Monomial.make(tuple((fn(v), e) for v, e in m.factors)), c)
                for m, c in self._terms.items()
            ),
        )

    def embed(self, new_ctx: Context) -> "DiffPoly":
        """Reinterpret in a context with more variables (indices unchanged)."""
        return self.map_dervars(lambda v: v, new_ctx)

    # -- normalization ------------------------------------------------------------

    def leading_monomial(self) -> Monomial:
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self._terms, key=Monomial.sort_key)

    def monic(self) -> "DiffPoly":
        """Divide by the leading coefficient (canonical monomial order)."""
        if not self._terms:
            return self
        lead = self._terms[self.leading_monomial()]
        one = self.context.field.one
        if lead == one:
            return self
        return DiffPoly(self.context, {m: c / lead for m, c in self._terms.items()})

    # -- text ------------------------------------------------------------------

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        names = self.context.names
        fld = self.context.field
        parts = []
        for m in sorted(self._terms, key=Monomial.sort_key, reverse=True):
            c = self._terms[m]
            sign, body = _coeff_term_text(fld, c, m, names)
            if not parts:
                parts.append(body if sign >= 0 else "-" + body)
            else:
                parts.append((" + " if sign >= 0 else " - ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"DiffPoly({self.to_text()})"


def _rf_pow(a, e: int):
    out = a
    for _ in range(e - 1):
        out = out * a
    return out


def _coeff_term_text(fld: Field, c, m: Monomial, names) -> tuple:
    """Return (sign, body) for one term; sign is +1/-1 and body has no sign."""
    from .fields import RatFunc

    mono = None if m is MON_ONE or not m.factors else m.text(names)
    if isinstance(c, Fraction):
        sign = 1 if c >= 0 else -1
        c = abs(c)
        ctext = fld.text(c)
        if mono is None:
            return sign, ctext
        if c == 1:
            return sign, mono
        return sign, f"{ctext}*{mono}"
    assert isinstance(c, RatFunc)
    nterms = sum(1 for x in c.num if x)
    if c.den == (Fraction(1),) and nterms == 1:
        # single term a*t^k: extract sign, render inline
        k = len(c.num) - 1
        a = c.num[-1]
        sign = 1 if a >= 0 else -1
        a = abs(a)
        if k == 0:
            ctext = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
            if mono is None:
                return sign, ctext
            if a == 1:
                return sign, mono
            return sign, f"{ctext}*{mono}"
        tpart = "t" if k == 1 else f"t^{k}"
        if a != 1:
            tpart = f"{a.numerator if a.denominator == 1 else f'{a.numerator}/{a.denominator}'}*{tpart}"
        return sign, tpart if mono is None else f"{tpart}*{mono}"
    body = f"({c.text()})"
    return 1, body if mono is None else f"{body}*{mono}"


# ---------------------------------------------------------------------------
# differential points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroTest:
    """Zero/nonzero verdict from evaluation at a generic point."""

    is_zero: bool
    heuristic: bool


class ConcretePoint:
    """A concrete differential point: a value for each variable; values of
    jets are obtained by the field derivation (so over Q every point is a
    constant solution)."""

    __slots__ = ("context", "_values", "_cache")

    def __init__(self, context: Context, values: dict):
        if set(values) != set(range(context.n)):
            raise ValueError("point must assign a value to every variable")
        self.context = context
        self._values = {k: context.field.check(v) for k, v in values.items()}
        self._cache: dict[DerVar, FieldElement] = {}

    @staticmethod
    def from_names(ctx: Context, named: dict) -> "ConcretePoint":
        return ConcretePoint(ctx, {ctx.var_index(k): v for k, v in named.items()})

    def value(self, v: DerVar) -> FieldElement:
        self.context.check_dervar(v)
        if v.order == 0:
            return self._values[v.var]
        got = self._cache.get(v)
        if got is None:
            got = self.context.field.derive(self.value(DerVar(v.var, v.order - 1)))
            self._cache[v] = got
        return got

    def __repr__(self) -> str:
        fld = self.context.field
        vals = ", ".join(
            f"{self.context.names[i]}={fld.text(self._values[i])}" for i in range(self.context.n)
        )
        return f"ConcretePoint({vals})"


@dataclass(frozen=True)
class GenericPoint:
    """The generic point of a characteristic-set component: evaluation only
    answers zero/nonzero, via Ritt reduction modulo the component."""

    component: object  # CharSetComponent; duck-typed to avoid an import cycle

    def __repr__(self) -> str:
        return f"GenericPoint({self.component!r})"
