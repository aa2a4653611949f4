"""Exact two-phase tableau simplex over the rationals with Bland's rule.

Bland's rule (smallest eligible index enters, smallest basic index leaves on
ratio ties) guarantees termination without cycling, which matters because
the linear programs solved here are highly degenerate.

The tableau is fraction free: every row is an integer equation, and
multiplying an equation by a positive integer does not change it, so pivots
use cross multiplication followed by division by the row content. A basic
variable therefore has some positive coefficient in its row, not 1.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: tuple = None
    value: Fraction = None


def _content(row):
    g = 0
    for v in row:
        if v:
            g = gcd(g, v)
            if g == 1:
                break
    return g


def _normalize(row):
    g = _content(row)
    if g > 1:
        return [v // g for v in row]
    return row


def _eliminate(row, pivot_row, c):
    """``row`` with column ``c`` cleared, keeping positive multiples of ``row``."""
    f = row[c]
    if not f:
        return row
    p = pivot_row[c]
    return _normalize([a * p - f * b for a, b in zip(row, pivot_row)])


class _Tableau:
    def __init__(self, rows, basis, obj):
        self.rows = rows      # each row: coefficients..., rhs
        self.basis = basis
        self.obj = obj        # k*z + sum obj_j x_j = obj_rhs, last entry is k
        # obj layout: coefficients..., rhs, k

    def pivot(self, r, c):
        row = self.rows[r]
        if row[c] < 0:
            row = [-v for v in row]
        row = _normalize(row)
        self.rows[r] = row
        for i in range(len(self.rows)):
            if i != r:
                self.rows[i] = _eliminate(self.rows[i], row, c)
        f = self.obj[c]
        if f:
            p = row[c]
            ob = self.obj
            new = [a * p - f * b for a, b in zip(ob[:-1], row)] + [ob[-1] * p]
            self.obj = _normalize(new)
        self.basis[r] = c

    def run(self, allowed):
        """Maximise; returns ``False`` if unbounded."""
        ncols = len(self.rows[0]) - 1 if self.rows else 0
        while True:
            basic = set(self.basis)
            enter = next((j for j in range(ncols)
                          if allowed[j] and j not in basic and self.obj[j] < 0), None)
            if enter is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                if row[enter] > 0:
                    ratio = Fraction(row[-1], row[enter])
                    if best is None or ratio < best[0] or (ratio == best[0] and self.basis[i] < self.basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return False
            self.pivot(best[1], enter)

    def value(self):
        return Fraction(self.obj[-2], self.obj[-1])


def _objective(cost, rows, basis, ncols):
    """Objective row ``z - cost.x = 0`` with the basic columns eliminated."""
    obj = [-v for v in cost] + [0, 1]
    for row, b in zip(rows, basis):
        f = obj[b]
        if f:
            p = row[b]
            obj = _normalize([a * p - f * v for a, v in zip(obj[:-1], row)] + [obj[-1] * p])
    return obj


def solve_lp(a, b, c):
    """Maximise ``c.x`` subject to ``a x = b``, ``x >= 0``."""
    m = len(a)
    n = len(c)
    rows = []
    for i, (row, rhs) in enumerate(zip(a, b)):
        vals = [Fraction(v) for v in row] + [Fraction(rhs)]
        den = lcm(*(v.denominator for v in vals))
        ints = [int(v * den) for v in vals]
        if ints[-1] < 0:
            ints = [-v for v in ints]
        art = [int(k == i) for k in range(m)]
        rows.append(_normalize(ints[:-1] + art + ints[-1:]))
    basis = [n + i for i in range(m)]
    phase1 = [0] * n + [-1] * m
    tab = _Tableau(rows, basis, _objective(phase1, rows, basis, n + m))
    tab.run([True] * (n + m))
    if tab.value() != 0:
        return LPResult("infeasible")
    # drive remaining artificial variables out of the basis
    i = 0
    while i < len(tab.rows):
        if tab.basis[i] >= n:
            col = next((j for j in range(n) if tab.rows[i][j] != 0), None)
            if col is None:
                del tab.rows[i]
                del tab.basis[i]
                continue
            tab.pivot(i, col)
        i += 1
    cf = [Fraction(v) for v in c]
    den = lcm(*(v.denominator for v in cf)) if cf else 1
    cost = [int(v * den) for v in cf] + [0] * m
    tab.obj = _objective(cost, tab.rows, tab.basis, n + m)
    if not tab.run([True] * n + [False] * m):
        return LPResult("unbounded")
    x = [Fraction(0)] * n
    for row, bv in zip(tab.rows, tab.basis):
        x[bv] = Fraction(row[-1], row[bv])
    return LPResult("optimal", tuple(x), sum(ci * xi for ci, xi in zip(cf, x)))


def feasible_nonnegative(a, b):
    """Whether ``a x = b`` has a solution with ``x >= 0``."""
    if not a:
        return not any(b)
    return solve_lp(a, b, [0] * len(a[0])).status == "optimal"
