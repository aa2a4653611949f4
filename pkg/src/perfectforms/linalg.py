"""Exact dense linear algebra over Q on plain Python lists.

Matrices are lists of rows. Entries may be ``int`` or ``Fraction``; results
use ``Fraction`` wherever a division happens and ``int`` otherwise.
"""

from fractions import Fraction
from math import gcd, lcm


def rref(rows, ncols=None):
    """Reduced row echelon form. Returns ``(R, pivots)``; zero rows dropped."""
    m = [[Fraction(v) for v in row] for row in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows, ncols=None):
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols):
    """Basis of ``{y : rows @ y = 0}`` as primitive integer vectors."""
    if not rows:
        return [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(primitive(v))
    return basis


def primitive(v):
    """Scale a rational vector by a positive factor to a primitive int vector."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def primitive_int(v):
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in v:
        g = gcd(g, x)
        if g == 1:
            return tuple(v)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def bareiss_minors(m):
    """Leading principal minors of a square integer matrix.

    Fraction-free Gaussian elimination without pivoting; the k-th pivot of the
    Bareiss recurrence equals the k-th leading principal minor. Elimination
    stops at the first zero minor and the remaining minors are reported as
    ``None``.
    """
    a = [list(row) for row in m]
    n = len(a)
    minors = []
    prev = 1
    for k in range(n):
        piv = a[k][k]
        minors.append(piv)
        if piv == 0:
            minors.extend([None] * (n - k - 1))
            return minors
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * piv - a[i][k] * a[k][j]) // prev
        prev = piv
    return minors


def det_int(m):
    """Exact determinant of an integer matrix (Bareiss with row pivoting)."""
    a = [list(row) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if p is None:
                return 0
            a[k], a[p] = a[p], a[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * piv - a[i][k] * a[k][j]) // prev
        prev = piv
    return sign * a[n - 1][n - 1]


def det(m):
    """Exact determinant of a rational matrix."""
    den = 1
    for row in m:
        for x in row:
            den = lcm(den, Fraction(x).denominator)
    ints = [[int(Fraction(x) * den) for x in row] for row in m]
    return Fraction(det_int(ints), den ** len(m))


def inverse(m):
    """Exact inverse; raises ``ZeroDivisionError`` when singular."""
    n = len(m)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def solve(rows, rhs):
    """One solution of ``rows @ y = rhs`` or ``None`` when inconsistent."""
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    y = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        y[p] = row[ncols]
    return y


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def kron(a, b):
    return [[a[i][j] * b[k][l] for j in range(len(a[0])) for l in range(len(b[0]))]
            for i in range(len(a)) for k in range(len(b))]


def charpoly_int(m):
    """Characteristic polynomial coefficients of an integer matrix.

    Returns ``c`` with ``det(tI - m) = sum(c[k] * t**(n-k))``, ``c[0] = 1``.
    Faddeev-LeVerrier; every division is exact for integer input.
    """
    n = len(m)
    c = [1] + [0] * n
    mk = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I
        prod = matmul(m, mk) if k > 1 else [[0] * n for _ in range(n)]
        for i in range(n):
            prod[i][i] += c[k - 1]
        mk = prod
        am = matmul(m, mk)
        tr = sum(am[i][i] for i in range(n))
        assert tr % k == 0
        c[k] = -tr // k
    return c
