"""Order matrices and Jacobi numbers.

For a square system u_1..u_n in variables x_1..x_n, the order matrix holds
a[i][j] = order of u_i in x_j, and the Jacobi number is the maximum over
permutations sigma of sum_i a[sigma(i)][i] -- a maximum-weight assignment of
equations to variables scored by orders.  Two conventions differ on absent
variables: MaxPlus scores them 0, MinusInfinity makes them forbidden edges.

Absent entries are a genuine sentinel (never a large negative stand-in), so
the assignment solve cannot produce overflow artifacts; the solver's value is
re-summed from the exact integer entries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .diffpoly import Convention, DiffPoly, NEG_INF, _NegInf

BRUTE_LIMIT = 9


@dataclass(frozen=True)
class OrderMatrix:
    """Square matrix of orders, rows indexed by equations and columns by
    variables, tagged with the convention that produced it."""

    entries: tuple  # tuple[tuple[int | NEG_INF, ...], ...]
    convention: Convention

    def __post_init__(self):
        n = len(self.entries)
        if n == 0:
            raise ValueError("empty order matrix")
        for row in self.entries:
            if len(row) != n:
                raise ValueError("order matrix must be square")
            for e in row:
                if isinstance(e, _NegInf):
                    if self.convention is Convention.MAX_PLUS:
                        raise ValueError("MaxPlus entries must be nonnegative integers")
                elif isinstance(e, int):
                    if e < 0:
                        raise ValueError("orders are nonnegative")
                else:
                    raise ValueError(f"bad order entry {e!r}")

    @property
    def n(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int):
        return self.entries[i][j]

    def to_text(self) -> str:
        cells = [[("-inf" if isinstance(e, _NegInf) else str(e)) for e in row] for row in self.entries]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[" + "  ".join(c.rjust(width) for c in row) + "]" for row in cells)


def order_matrix(us: Sequence[DiffPoly], convention: Convention = Convention.MAX_PLUS) -> OrderMatrix:
    """Order matrix of a square system: entry (i, j) is the order of the
    i-th equation in the j-th variable of the shared context."""
    if not us:
        raise ValueError("empty system")
    ctx = us[0].context
    for u in us:
        if u.context != ctx:
            raise ValueError("mixed ring contexts")
    if len(us) != len(ctx.names):
        raise ValueError(
            f"need a square system: {len(us)} equations over {len(ctx.names)} variables"
        )
    rows = tuple(
        tuple(u.order_of(j, convention) for j in range(ctx.n)) for u in us
    )
    return OrderMatrix(entries=rows, convention=convention)


@dataclass(frozen=True)
class JacobiResult:
    """Value of the assignment maximum and one witness permutation sigma
    (variable index -> equation index); no witness when the value is -inf."""

    value: object  # int | NEG_INF
    witness: Optional[tuple] = None

    def __post_init__(self):
        if isinstance(self.value, _NegInf):
            if self.witness is not None:
                raise ValueError("no witness exists for value -inf")
        elif self.witness is None:
            raise ValueError("finite value requires a witness")


def _score(m: OrderMatrix, sigma: Sequence[int]):
    total = 0
    for i, row in enumerate(sigma):
        e = m.entries[row][i]
        if isinstance(e, _NegInf):
            return NEG_INF
        total += e
    return total


def jacobi_brute(m: OrderMatrix) -> JacobiResult:
    """Exact maximum by enumerating all permutations (n <= 9); ties go to
    the lexicographically smallest witness."""
    n = m.n
    if n > BRUTE_LIMIT:
        raise ValueError(f"n={n} exceeds brute-force limit {BRUTE_LIMIT}; use jacobi_assign")
    best = NEG_INF
    best_sigma = None
    for sigma in itertools.permutations(range(n)):
        s = _score(m, sigma)
        if isinstance(s, _NegInf):
            continue
        if best_sigma is None or s > best:
            best = s
            best_sigma = sigma
    if best_sigma is None:
        return JacobiResult(NEG_INF, None)
    return JacobiResult(best, best_sigma)


def _assign_max(m: OrderMatrix, cols: Sequence[int], rows: Sequence[int]):
    """Maximum assignment value of the submatrix on the given variable
    columns and equation rows, or the -inf sentinel when infeasible."""
    if not cols:
        return 0
    c = np.zeros((len(cols), len(rows)))
    for a, i in enumerate(cols):
        for b, j in enumerate(rows):
            e = m.entries[j][i]
            c[a, b] = -np.inf if isinstance(e, _NegInf) else float(e)
    try:
        r_ind, c_ind = linear_sum_assignment(c, maximize=True)
    except ValueError:
        return NEG_INF
    total = 0
    for a, b in zip(r_ind, c_ind):
        e = m.entries[rows[b]][cols[a]]
        if isinstance(e, _NegInf):
            return NEG_INF
        total += e
    return total


def jacobi_assign(m: OrderMatrix) -> JacobiResult:
    """Same contract as jacobi_brute via a linear assignment solve.  The
    witness is made lexicographically smallest by fixing one column at a
    time and re-solving the remainder."""
    n = m.n
    value = _assign_max(m, tuple(range(n)), tuple(range(n)))
    if isinstance(value, _NegInf):
        return JacobiResult(NEG_INF, None)
    sigma = []
    used: set[int] = set()
    prefix = 0
    for i in range(n):
        rest_cols = tuple(range(i + 1, n))
        for j in range(n):
            if j in used:
                continue
            e = m.entries[j][i]
            if isinstance(e, _NegInf):
                continue
            rest_rows = tuple(r for r in range(n) if r not in used and r != j)
            tail = _assign_max(m, rest_cols, rest_rows)
            if not isinstance(tail, _NegInf) and prefix + e + tail == value:
                sigma.append(j)
                used.add(j)
                prefix += e
                break
        else:
            raise AssertionError("assignment witness reconstruction failed")
    return JacobiResult(value, tuple(sigma))


def ritt_bound(m: OrderMatrix) -> int:
    """Sum over variables of the highest order any equation reaches in that
    variable.  Only meaningful under MaxPlus."""
    if m.convention is not Convention.MAX_PLUS:
        raise ValueError("ritt_bound is defined for MaxPlus order matrices")
    return sum(max(m.entries[i][j] for i in range(m.n)) for j in range(m.n))


def jacobi_number(us: Sequence[DiffPoly], convention: Convention = Convention.MAX_PLUS) -> JacobiResult:
    """Jacobi number of a square system, solver-backed."""
    return jacobi_assign(order_matrix(us, convention))
