"""Independent reference computations used to check the package.

Nothing here imports the package's algorithms: short vectors come from a
box search, extreme rays from corank-one subsystems, isometries from
exhaustive column products, and determinants/inverses from a separate
fraction Gaussian elimination.
"""

from fractions import Fraction
from itertools import combinations, product
from math import gcd, isqrt

import numpy as np


def frac_matrix(m):
    return [[Fraction(v) for v in row] for row in m]


def det(m):
    a = frac_matrix(m)
    n = len(a)
    sign = 1
    out = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        out *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return sign * out


def inverse(m):
    n = len(m)
    a = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(frac_matrix(m))]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def qval(m, x):
    return sum(Fraction(m[i][j]) * x[i] * x[j] for i in range(len(x)) for j in range(len(x)))


def _box(m, c):
    """Coordinate bounds ``|x_i| <= sqrt(c * (Q^-1)_ii)`` rounded up."""
    inv = inverse(m)
    out = []
    for i in range(len(m)):
        t = Fraction(c) * inv[i][i]
        out.append(isqrt(t.numerator // t.denominator) + 1)
    return out


def short_vectors(m, c):
    """All nonzero ``x`` with ``x^t M x <= c``, first nonzero coordinate positive."""
    bounds = _box(m, c)
    den = 1
    for row in m:
        for v in row:
            den = den * Fraction(v).denominator // gcd(den, Fraction(v).denominator)
    ints = np.array([[int(Fraction(v) * den) for v in row] for row in m], dtype=object)
    grids = [range(-b, b + 1) for b in bounds]
    xs = np.array(list(product(*grids)), dtype=object)
    vals = np.einsum("ni,ij,nj->n", xs, ints, xs)
    limit = Fraction(c) * den
    out = []
    for x, v in zip(xs, vals):
        if v <= limit and any(x):
            t = tuple(int(a) for a in x)
            first = next(a for a in t if a)
            if first > 0:
                out.append(t)
    return sorted(out)


def arithmetic_minimum(m):
    bound = min(Fraction(m[i][i]) for i in range(len(m)))
    vecs = short_vectors(m, bound)
    lam = min(qval(m, x) for x in vecs)
    return lam, sorted(x for x in vecs if qval(m, x) == lam)


def _kernel_vector(rows, n):
    """Generalised cross product of ``n - 1`` rows (signed maximal minors)."""
    out = []
    for k in range(n):
        minor = [[r[j] for j in range(n) if j != k] for r in rows]
        out.append((-1) ** k * det(minor))
    return out


def _primitive(v):
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def extreme_rays(rows, n):
    """Extreme rays of the pointed cone ``{y : rows y >= 0}`` by corank-one subsystems."""
    rays = set()
    for sub in combinations(range(len(rows)), n - 1):
        k = _kernel_vector([rows[i] for i in sub], n)
        if not any(k):
            continue
        for sign in (1, -1):
            y = [sign * v for v in k]
            if all(sum(a * b for a, b in zip(r, y)) >= 0 for r in rows):
                rays.add(_primitive(y))
    return sorted(rays)


def isometries(q1, q2):
    """Every integer ``U`` with ``U^t Q1 U = Q2`` (exhaustive over short columns)."""
    d = len(q1)
    cols = []
    for j in range(d):
        target = Fraction(q2[j][j])
        vs = short_vectors(q1, target)
        vs = vs + [tuple(-a for a in v) for v in vs]
        cols.append([v for v in vs if qval(q1, v) == target])
    out = []
    for choice in product(*cols):
        u = [[choice[j][i] for j in range(d)] for i in range(d)]
        ok = all(sum(Fraction(q1[a][b]) * u[a][i] * u[b][j] for a in range(d) for b in range(d))
                 == Fraction(q2[i][j]) for i in range(d) for j in range(d))
        if ok and abs(det(u)) == 1:
            out.append(tuple(tuple(r) for r in u))
    return sorted(out)


def rho_by_scan(q, r, lam, u):
    """``min (lam - Q[v]) / R[v]`` over short vectors of ``Q + uR`` with ``R[v] < 0``."""
    d = len(q)
    qu = [[Fraction(q[i][j]) + u * Fraction(r[i][j]) for j in range(d)] for i in range(d)]
    cands = []
    for v in short_vectors(qu, lam):
        rv = qval(r, v)
        if rv < 0:
            cands.append((lam - qval(q, v)) / rv)
    return min(cands)


def lp_vertex_optimum(a, b, c):
    """Optimum of ``max c.x, a x = b, x >= 0`` by enumerating basic solutions."""
    m, n = len(a), len(c)
    best = None
    for cols in combinations(range(n), m):
        sub = [[a[i][j] for j in cols] for i in range(m)]
        if det(sub) == 0:
            continue
        inv = inverse(sub)
        xb = [sum(inv[i][k] * b[k] for k in range(m)) for i in range(m)]
        if any(v < 0 for v in xb):
            continue
        val = sum(Fraction(c[j]) * xb[k] for k, j in enumerate(cols))
        if best is None or val > best:
            best = val
    return best
