"""Text formats: the expression grammar, system files, and component files.

The expression grammar covers differential polynomials as humans write them:

    x'' + y, x'^2 + y, 2*y*x' - y', x^(4) - t*x, (x' + y)^2 / 3

* primes mark derivatives up to order three; beyond that write ``x^(4)``;
* ``^`` followed by a parenthesised integer is a derivative marker, ``^``
  followed by a bare integer is a power;
* division is only by (nonzero) constants, so everything stays polynomial;
* over Q(t) the name ``t`` denotes the field parameter, not a variable.

A *system file* declares the field, the variables, a ranking, named
equations, and optionally named points and component blocks:

    field: Q
    vars: x, y
    ranking: elim x > y
    eq u1 = x'' + y
    eq u2 = x'^2 + y
    point p0: x = 0, y = 0

A *component file* is a sequence of blank-line-separated blocks:

    ranking: elim x > y
    charset: y^3 + 1/4*y'^2; y*x' - 1/2*y'
    ineqs: y; y'
    prime: no

``format_system`` / ``format_components`` invert the parsers, so tool output
can be fed back in unchanged.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .decompose import CharSetComponent
from .diffpoly import ConcretePoint, Context, DerVar, DiffPoly
from .fields import Field, FieldTag, QQ, QT
from .ranking import Ranking, RankKind


class ParseError(ValueError):
    """An expression (or expression fragment) failed to parse."""

    def __init__(self, message: str, pos: int = None):
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)
        self.pos = pos


class SysFileError(ValueError):
    """A system or component file is malformed."""


# ---------------------------------------------------------------------------
# tokenizer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<primes>'+)
  | (?P<op>[-+*/^(),>=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # "number" | "name" | "primes" | "op" | "end"
    text: str
    pos: int


def _tokenize(src: str) -> list:
    toks = []
    i = 0
    while i < len(src):
        m = _TOKEN_RE.match(src, i)
        if m is None:
            raise ParseError(f"unexpected character {src[i]!r}", i)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), i))
        i = m.end()
    toks.append(_Tok("end", "", len(src)))
    return toks


# ---------------------------------------------------------------------------
# expression parser (recursive descent)
# ---------------------------------------------------------------------------


class _ExprParser:
    """expr := term (('+'|'-') term)*
    term := factor (('*'|'/') factor)*
    factor := '-' factor | atom
    atom := NUMBER | NAME jets? power? | '(' expr ')' power?
    """

    def __init__(self, src: str, ctx: Context):
        self.src = src
        self.ctx = ctx
        self.toks = _tokenize(src)
        self.i = 0

    # -- token helpers ------------------------------------------------------

    def _peek(self) -> _Tok:
        return self.toks[self.i]

    def _next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def _accept_op(self, *ops: str) -> Optional[str]:
        t = self._peek()
        if t.kind == "op" and t.text in ops:
            self.i += 1
            return t.text
        return None

    def _expect_op(self, op: str) -> _Tok:
        t = self._next()
        if t.kind != "op" or t.text != op:
            raise ParseError(f"expected {op!r}, found {t.text or 'end of input'!r}", t.pos)
        return t

    def _expect_int(self) -> int:
        t = self._next()
        if t.kind != "number":
            raise ParseError(f"expected an integer, found {t.text or 'end of input'!r}", t.pos)
        return int(t.text)

    # -- grammar --------------------------------------------------------------

    def parse(self) -> DiffPoly:
        p = self._expr()
        t = self._peek()
        if t.kind != "end":
            raise ParseError(f"unexpected trailing {t.text!r}", t.pos)
        return p

    def _expr(self) -> DiffPoly:
        p = self._term()
        while True:
            op = self._accept_op("+", "-")
            if op is None:
                return p
            q = self._term()
            p = p + q if op == "+" else p - q

    def _term(self) -> DiffPoly:
        p = self._factor()
        while True:
            at = self._peek().pos
            op = self._accept_op("*", "/")
            if op is None:
                return p
            q = self._factor()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant():
                    raise ParseError("division is only allowed by constants", at)
                c = q.constant_value()
                if self.ctx.field.is_zero(c):
                    raise ParseError("division by zero", at)
                p = p.scale(self.ctx.field.div(self.ctx.field.one, c))

    def _factor(self) -> DiffPoly:
        if self._accept_op("-"):
            return DiffPoly.zero(self.ctx) - self._factor()
        return self._atom()

    def _power_suffix(self, p: DiffPoly) -> DiffPoly:
        """An optional ``^ INT`` (plain integer only — ``^(k)`` is a
        derivative marker handled at the atom level)."""
        save = self.i
        if self._accept_op("^"):
            if self._peek().kind == "number":
                e = self._expect_int()
                return p ** e
            self.i = save  # not a power; let the caller's context complain
        return p

    def _atom(self) -> DiffPoly:
        t = self._next()
        if t.kind == "number":
            return DiffPoly.const(self.ctx, self.ctx.field.from_fraction(Fraction(int(t.text))))
        if t.kind == "op" and t.text == "(":
            p = self._expr()
            self._expect_op(")")
            return self._power_suffix(p)
        if t.kind == "name":
            return self._name_atom(t)
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos)

    def _name_atom(self, t: _Tok) -> DiffPoly:
        name = t.text
        if name == "t" and self.ctx.field.tag is FieldTag.RATIONAL_FUNCTIONS_T:
            nxt = self._peek()
            if nxt.kind == "primes":
                raise ParseError("t is a field element of Q(t); it takes no primes", nxt.pos)
            return self._power_suffix(DiffPoly.const(self.ctx, self.ctx.field.t()))
        try:
            var = self.ctx.var_index(name)
        except KeyError:
            raise ParseError(f"unknown variable {name!r}", t.pos) from None

        order = 0
        nxt = self._peek()
        if nxt.kind == "primes":
            self._next()
            if len(nxt.text) > 3:
                raise ParseError(
                    f"at most three primes; write {name}^({len(nxt.text)}) instead", nxt.pos
                )
            order = len(nxt.text)
        elif nxt.kind == "op" and nxt.text == "^":
            # ``x^(4)`` is the order-4 derivative; ``x^2`` is a power and is
            # handled by the shared power suffix below.
            save = self.i
            self._next()
            if self._accept_op("("):
                order = self._expect_int()
                self._expect_op(")")
            else:
                self.i = save
        p = DiffPoly.var(self.ctx, var, order)
        return self._power_suffix(p)


def parse_poly(src: str, ctx: Context) -> DiffPoly:
    """Parse one differential polynomial in the variables of ``ctx``."""
    return _ExprParser(src, ctx).parse()


def parse_constant(src: str, field: Field):
    """Parse a constant expression (e.g. ``-3/4`` or ``t^2 + 1``) into a
    field element."""
    scratch = Context(("__scratch",), field)
    p = _ExprParser(src, scratch).parse()
    if not p.is_constant():
        raise ParseError(f"expected a constant, got {p.to_text()!r}")
    return p.constant_value()


# ---------------------------------------------------------------------------
# rankings
# ---------------------------------------------------------------------------


def parse_ranking(src: str, ctx: Context) -> Ranking:
    """Parse ``elim x > y`` / ``orderly y > x``.  The chain must mention every
    variable exactly once, greatest first."""
    toks = _tokenize(src)
    if toks[0].kind != "name" or toks[0].text not in ("elim", "elimination", "orderly"):
        raise ParseError("ranking must start with 'elim' or 'orderly'", toks[0].pos)
    kind = toks[0].text
    chain = []
    i = 1
    while toks[i].kind != "end":
        t = toks[i]
        if t.kind != "name":
            raise ParseError(f"expected a variable name, found {t.text!r}", t.pos)
        chain.append(t.text)
        i += 1
        if toks[i].kind == "op" and toks[i].text == ">":
            i += 1
        elif toks[i].kind != "end":
            raise ParseError(f"expected '>', found {toks[i].text!r}", toks[i].pos)
    if sorted(chain) != sorted(ctx.names):
        raise ParseError(
            f"ranking chain must list every variable exactly once; "
            f"got {chain!r} for variables {list(ctx.names)!r}"
        )
    order = [ctx.var_index(nm) for nm in chain]
    if kind == "orderly":
        return Ranking.orderly(ctx.n, order)
    return Ranking.elimination(ctx.n, order)


def format_ranking(ranking: Ranking, ctx: Context) -> str:
    greatest_first = sorted(range(ctx.n), key=lambda v: -ranking.priority[v])
    chain = " > ".join(ctx.names[v] for v in greatest_first)
    word = "elim" if ranking.kind is RankKind.ELIMINATION else "orderly"
    return f"{word} {chain}"


# ---------------------------------------------------------------------------
# system files
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SystemFile:
    """A parsed system file: context, ranking, named equations, named points,
    and any component blocks that followed the declarations."""

    context: Context
    ranking: Ranking
    equations: tuple  # of (name, DiffPoly)
    points: tuple = ()  # of (name, ConcretePoint)
    components: tuple = ()  # of CharSetComponent

    @property
    def system(self) -> tuple:
        return tuple(p for _, p in self.equations)

    def equation(self, name: str) -> DiffPoly:
        for nm, p in self.equations:
            if nm == name:
                return p
        raise KeyError(f"no equation named {name!r}")

    def point(self, name: str) -> ConcretePoint:
        for nm, pt in self.points:
            if nm == name:
                return pt
        raise KeyError(f"no point named {name!r}")


def _strip_comment(line: str) -> str:
    # '#' starts a comment anywhere outside an expression's tokens; none of
    # the grammar's tokens contain '#', so a plain split is safe.
    return line.split("#", 1)[0].rstrip()


def _parse_field(text: str) -> Field:
    text = text.strip()
    if text == "Q":
        return QQ
    if text.replace(" ", "") == "Q(t)":
        return QT
    raise SysFileError(f"unknown field {text!r}; expected 'Q' or 'Q(t)'")


def _parse_assignments(text: str, ctx: Context, lineno: int) -> ConcretePoint:
    named = {}
    for piece in text.split(","):
        if "=" not in piece:
            raise SysFileError(f"line {lineno}: bad assignment {piece.strip()!r}")
        nm, val = piece.split("=", 1)
        nm = nm.strip()
        try:
            named[nm] = parse_constant(val.strip(), ctx.field)
        except ParseError as exc:
            raise SysFileError(f"line {lineno}: {exc}") from None
    try:
        return ConcretePoint.from_names(ctx, named)
    except (KeyError, ValueError) as exc:
        raise SysFileError(f"line {lineno}: {exc}") from None


def parse_system(text: str) -> SystemFile:
    """Parse a system file.  ``field:`` and ``vars:`` must precede everything
    that needs them; equations must appear before component blocks."""
    field: Optional[Field] = None
    ctx: Optional[Context] = None
    ranking: Optional[Ranking] = None
    equations: list = []
    points: list = []
    component_lines: list = []  # (lineno, line) tail, parsed afterwards

    lines = text.splitlines()
    i = 0
    while i < len(lines):
        lineno = i + 1
        line = _strip_comment(lines[i]).strip()
        i += 1
        if not line:
            continue

        key, _, rest = line.partition(":")
        key_word = key.strip().lower()

        if key_word == "field" and _ == ":":
            if field is not None:
                raise SysFileError(f"line {lineno}: duplicate 'field:' line")
            field = _parse_field(rest)
            continue
        if key_word == "vars" and _ == ":":
            if ctx is not None:
                raise SysFileError(f"line {lineno}: duplicate 'vars:' line")
            if field is None:
                raise SysFileError(f"line {lineno}: 'field:' must come before 'vars:'")
            names = tuple(nm.strip() for nm in rest.split(",") if nm.strip())
            try:
                ctx = Context(names, field)
            except ValueError as exc:
                raise SysFileError(f"line {lineno}: {exc}") from None
            continue
        if key_word == "ranking" and _ == ":":
            if ctx is None:
                raise SysFileError(f"line {lineno}: 'vars:' must come before 'ranking:'")
            if ranking is not None:
                if equations:  # a component block may open with its own ranking
                    component_lines = lines[i - 1 :]
                    break
                raise SysFileError(f"line {lineno}: duplicate 'ranking:' line")
            try:
                ranking = parse_ranking(rest.strip(), ctx)
            except ParseError as exc:
                raise SysFileError(f"line {lineno}: {exc}") from None
            continue

        if line.startswith("eq ") or line.startswith("eq\t"):
            if ctx is None:
                raise SysFileError(f"line {lineno}: 'vars:' must come before equations")
            head, eq, src = line[3:].partition("=")
            name = head.strip()
            if not eq or not name:
                raise SysFileError(f"line {lineno}: expected 'eq NAME = EXPRESSION'")
            if not name.isidentifier():
                raise SysFileError(f"line {lineno}: bad equation name {name!r}")
            if any(nm == name for nm, _p in equations):
                raise SysFileError(f"line {lineno}: duplicate equation name {name!r}")
            try:
                p = parse_poly(src.strip(), ctx)
            except ParseError as exc:
                raise SysFileError(f"line {lineno}: {exc}") from None
            if p.is_zero():
                raise SysFileError(f"line {lineno}: equation {name!r} is identically zero")
            equations.append((name, p))
            continue

        if line.startswith("point ") or line.startswith("point\t"):
            if ctx is None:
                raise SysFileError(f"line {lineno}: 'vars:' must come before points")
            head, colon, rest2 = line[6:].partition(":")
            name = head.strip()
            if not colon or not name.isidentifier():
                raise SysFileError(f"line {lineno}: expected 'point NAME: x = c, ...'")
            if any(nm == name for nm, _p in points):
                raise SysFileError(f"line {lineno}: duplicate point name {name!r}")
            points.append((name, _parse_assignments(rest2, ctx, lineno)))
            continue

        if key_word in ("charset", "ineqs", "prime") and _ == ":":
            # start of component blocks: hand the remaining lines over
            component_lines = lines[i - 1 :]
            break

        raise SysFileError(f"line {lineno}: cannot understand {line!r}")

    if field is None:
        raise SysFileError("missing 'field:' line")
    if ctx is None:
        raise SysFileError("missing 'vars:' line")
    if ranking is None:
        raise SysFileError("missing 'ranking:' line")
    if not equations:
        raise SysFileError("a system file needs at least one 'eq' line")

    components: tuple = ()
    if component_lines:
        components = parse_components("\n".join(component_lines), ctx, ranking)

    return SystemFile(ctx, ranking, tuple(equations), tuple(points), components)


def format_system(sf: SystemFile) -> str:
    ctx = sf.context
    out = [
        f"field: {ctx.field.tag.value}",
        f"vars: {', '.join(ctx.names)}",
        f"ranking: {format_ranking(sf.ranking, ctx)}",
    ]
    for name, p in sf.equations:
        out.append(f"eq {name} = {p.to_text()}")
    fld = ctx.field
    for name, pt in sf.points:
        vals = ", ".join(
            f"{ctx.names[j]} = {fld.text(pt.value(DerVar(j, 0)))}" for j in range(ctx.n)
        )
        out.append(f"point {name}: {vals}")
    text = "\n".join(out) + "\n"
    if sf.components:
        text += "\n" + format_components(sf.components, ctx)
    return text


# ---------------------------------------------------------------------------
# component files
# ---------------------------------------------------------------------------


def _parse_poly_list(text: str, ctx: Context, lineno: int) -> tuple:
    text = text.strip()
    if not text or text == "(none)":
        return ()
    polys = []
    for piece in text.split(";"):
        piece = piece.strip()
        if not piece:
            continue
        try:
            polys.append(parse_poly(piece, ctx))
        except ParseError as exc:
            raise SysFileError(f"line {lineno}: {exc}") from None
    return tuple(polys)


def parse_components(
    text: str, ctx: Context, default_ranking: Optional[Ranking] = None
) -> tuple:
    """Parse a component file: blank-line-separated blocks of
    ``ranking:`` (optional), ``charset:``, ``ineqs:`` (optional), and
    ``prime:`` (optional, default ``no``) lines."""
    blocks: list = [[]]
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            if blocks[-1]:
                blocks.append([])
            continue
        blocks[-1].append((lineno, line))
    if not blocks[-1]:
        blocks.pop()

    components = []
    for block in blocks:
        ranking = default_ranking
        charset = None
        ineqs: tuple = ()
        prime = False
        for lineno, line in block:
            key, colon, rest = line.partition(":")
            if not colon:
                raise SysFileError(f"line {lineno}: expected 'key: value', got {line!r}")
            key = key.strip().lower()
            if key == "ranking":
                try:
                    ranking = parse_ranking(rest.strip(), ctx)
                except ParseError as exc:
                    raise SysFileError(f"line {lineno}: {exc}") from None
            elif key == "charset":
                charset = _parse_poly_list(rest, ctx, lineno)
                if not charset:
                    raise SysFileError(f"line {lineno}: empty charset")
            elif key == "ineqs":
                ineqs = _parse_poly_list(rest, ctx, lineno)
            elif key == "prime":
                word = rest.strip().lower()
                if word not in ("yes", "no"):
                    raise SysFileError(f"line {lineno}: prime must be 'yes' or 'no'")
                prime = word == "yes"
            else:
                raise SysFileError(f"line {lineno}: unknown component key {key!r}")
        if charset is None:
            first = block[0][0]
            raise SysFileError(f"block at line {first}: missing 'charset:' line")
        if ranking is None:
            first = block[0][0]
            raise SysFileError(f"block at line {first}: no ranking given and no default")
        try:
            components.append(
                CharSetComponent(ranking, charset, ineqs, prime_verified=prime)
            )
        except ValueError as exc:
            first = block[0][0]
            raise SysFileError(f"block at line {first}: {exc}") from None
    return tuple(components)


def format_components(components: Sequence[CharSetComponent], ctx: Context) -> str:
    blocks = []
    for c in components:
        lines = [f"ranking: {format_ranking(c.ranking, ctx)}"]
        lines.append("charset: " + "; ".join(p.to_text() for p in c.sequence))
        lines.append("ineqs: " + ("; ".join(q.to_text() for q in c.inequations) or "(none)"))
        lines.append(f"prime: {'yes' if c.prime_verified else 'no'}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
